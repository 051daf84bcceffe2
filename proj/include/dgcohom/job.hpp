#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "dgcohom/errors.hpp"
#include "dgcohom/scalar.hpp"

namespace dgcohom {

/// Syntax or validation error in a job file, with 1-based position.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what), line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_, column_;
};

struct JobValue {
  using List = std::vector<JobValue>;
  std::variant<long, bool, std::string, List> v;
  int line = 0, column = 0;

  bool is_int() const { return std::holds_alternative<long>(v); }
  bool is_bool() const { return std::holds_alternative<bool>(v); }
  bool is_string() const { return std::holds_alternative<std::string>(v); }
  bool is_list() const { return std::holds_alternative<List>(v); }
  long as_int() const;
  bool as_bool() const;
  const std::string& as_string() const;
  const List& as_list() const;
  std::vector<std::string> as_strings() const;
  std::vector<int> as_ints() const;
};

struct RingSpec {
  std::string name;
  std::vector<std::string> vars;
  std::vector<int> weights;
  std::vector<std::string> relations;
  std::string order = "grevlex";
  bool filtration = false;
  int line = 0;
};

struct MorphismSpec {
  std::string name, source, target;
  std::vector<std::string> images;
  int line = 0;
};

struct ModuleSpec {
  std::string name, ring;
  std::vector<int> generators;
  std::vector<std::vector<std::string>> relations;
  int shift = 0;
  int line = 0;
};

struct TaskSpec {
  std::string kind;
  std::map<std::string, JobValue> params;
  int line = 0;

  bool has(const std::string& key) const { return params.count(key) > 0; }
  const JobValue& at(const std::string& key) const;
  long get_int(const std::string& key, long fallback) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
};

struct JobSpec {
  FieldSpec field;
  std::string field_text = "Q";
  std::uint64_t seed = 0;
  std::vector<RingSpec> rings;
  std::vector<MorphismSpec> morphisms;
  std::vector<ModuleSpec> modules;
  TaskSpec task;

  const RingSpec& ring(const std::string& name) const;
  const MorphismSpec& morphism(const std::string& name) const;
  const ModuleSpec& module(const std::string& name) const;
};

const std::vector<std::string>& task_kinds();

/// Parses and validates a job; throws ParseError, or CharacteristicGuard when
/// the field cannot support the task.
JobSpec parse_job(const std::string& text);

}  // namespace dgcohom
