#include "dgcohom/job.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "dgcohom/poly.hpp"
#include "dgcohom/quotient_ring.hpp"

namespace dgcohom {

namespace {

[[noreturn]] void fail(const std::string& what, const JobValue& at) { throw ParseError(what, at.line, at.column); }

class Cursor {
 public:
  explicit Cursor(const std::string& text) : s_(text) {}

  bool done() const { return i_ >= s_.size(); }
  char peek() const { return done() ? '\0' : s_[i_]; }
  int line() const { return line_; }
  int column() const { return col_; }
  char get() {
    char c = s_[i_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }
  [[noreturn]] void error(const std::string& what) const { throw ParseError(what, line_, col_); }

  /// Skips blanks and comments; newlines too when `lines` is set.
  void skip(bool lines) {
    while (!done()) {
      char c = peek();
      if (c == '#') {
        while (!done() && peek() != '\n') get();
      } else if (c == ' ' || c == '\t' || c == '\r' || (lines && c == '\n')) {
        get();
      } else {
        break;
      }
    }
  }

  std::string identifier() {
    std::string out;
    if (!(std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_')) error("expected a name");
    while (!done() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-')) out += get();
    return out;
  }

  JobValue value() {
    JobValue v;
    v.line = line_;
    v.column = col_;
    char c = peek();
    if (c == '"') {
      get();
      std::string out;
      while (true) {
        if (done() || peek() == '\n') error("unterminated string");
        char d = get();
        if (d == '"') break;
        if (d == '\\') {
          if (done()) error("unterminated string");
          char e = get();
          if (e != '"' && e != '\\') error("unknown escape");
          d = e;
        }
        out += d;
      }
      v.v = out;
    } else if (c == '[') {
      get();
      JobValue::List items;
      skip(true);
      if (peek() == ']') {
        get();
      } else {
        while (true) {
          skip(true);
          items.push_back(value());
          skip(true);
          if (peek() == ',') {
            get();
            continue;
          }
          if (peek() == ']') {
            get();
            break;
          }
          error("expected ',' or ']'");
        }
      }
      v.v = std::move(items);
    } else if (c == '-' || c == '+' || std::isdigit(static_cast<unsigned char>(c))) {
      std::string digits;
      if (c == '-' || c == '+') digits += get();
      if (!std::isdigit(static_cast<unsigned char>(peek()))) error("expected a digit");
      while (std::isdigit(static_cast<unsigned char>(peek()))) digits += get();
      if (digits.size() > 18) error("integer too large");
      v.v = std::stol(digits);
    } else if (std::isalpha(static_cast<unsigned char>(c))) {
      std::string word = identifier();
      if (word == "true") v.v = true;
      else if (word == "false") v.v = false;
      else throw ParseError("unquoted value '" + word + "'", v.line, v.column);
    } else {
      error("expected a value");
    }
    return v;
  }

 private:
  const std::string& s_;
  std::size_t i_ = 0;
  int line_ = 1, col_ = 1;
};

struct Entry {
  std::string key;
  JobValue value;
  int line, column;
};

struct Section {
  std::string kind, name;
  int line, column;
  std::vector<Entry> entries;
};

std::vector<Section> tokenize(const std::string& text) {
  Cursor c(text);
  std::vector<Section> out;
  while (true) {
    c.skip(true);
    if (c.done()) break;
    int line = c.line(), col = c.column();
    if (c.peek() == '[') {
      c.get();
      c.skip(false);
      Section s{c.identifier(), "", line, col, {}};
      c.skip(false);
      if (c.peek() != ']') s.name = c.identifier();
      c.skip(false);
      if (c.peek() != ']') c.error("expected ']'");
      c.get();
      out.push_back(std::move(s));
    } else {
      if (out.empty()) c.error("entry outside any section");
      std::string key = c.identifier();
      c.skip(false);
      if (c.peek() != '=') c.error("expected '='");
      c.get();
      c.skip(false);
      JobValue v = c.value();
      out.back().entries.push_back({key, std::move(v), line, col});
    }
    c.skip(false);
    if (!c.done() && c.peek() != '\n') c.error("unexpected text after entry");
  }
  return out;
}

bool valid_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char ch) { return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_'; });
}

FieldSpec parse_field(const JobValue& v) {
  const std::string& s = v.as_string();
  if (s == "Q") return FieldSpec::rationals();
  if (s.rfind("Fp:", 0) == 0) {
    std::string digits = s.substr(3);
    if (digits.empty() || digits.size() > 9 || !std::all_of(digits.begin(), digits.end(), ::isdigit))
      fail("field must be \"Q\" or \"Fp:<prime>\"", v);
    unsigned long p = std::stoul(digits);
    if (!is_prime(p)) fail("field characteristic " + digits + " is not prime", v);
    return FieldSpec::prime(static_cast<std::uint32_t>(p));
  }
  fail("field must be \"Q\" or \"Fp:<prime>\"", v);
}

void check_keys(const Section& s, const std::set<std::string>& allowed) {
  std::set<std::string> seen;
  for (const auto& e : s.entries) {
    if (!allowed.count(e.key)) throw ParseError("unknown key '" + e.key + "' in [" + s.kind + "]", e.line, e.column);
    if (!seen.insert(e.key).second) throw ParseError("duplicate key '" + e.key + "'", e.line, e.column);
  }
}

const Entry* find(const Section& s, const std::string& key) {
  for (const auto& e : s.entries)
    if (e.key == key) return &e;
  return nullptr;
}

const JobValue& require(const Section& s, const std::string& key) {
  const Entry* e = find(s, key);
  if (!e) throw ParseError("[" + s.kind + (s.name.empty() ? "" : " " + s.name) + "] needs '" + key + "'", s.line, s.column);
  return e->value;
}

RingPtr ring_of(const RingSpec& r, const FieldSpec& field) {
  std::vector<Variable> vars;
  for (std::size_t i = 0; i < r.vars.size(); ++i)
    vars.push_back({r.vars[i], 0, r.weights.empty() ? 1 : r.weights[i]});
  return PolyRing::make(field, vars, r.order == "lex" ? MonomialOrder::Lex : MonomialOrder::Grevlex);
}

void check_poly(const std::string& text, const RingPtr& ring, const JobValue& at) {
  try {
    parse_poly(text, ring);
  } catch (const Error& e) {
    fail(std::string("bad polynomial: ") + e.what(), at);
  }
}

}  // namespace

long JobValue::as_int() const {
  if (!is_int()) fail("expected an integer", *this);
  return std::get<long>(v);
}
bool JobValue::as_bool() const {
  if (!is_bool()) fail("expected true or false", *this);
  return std::get<bool>(v);
}
const std::string& JobValue::as_string() const {
  if (!is_string()) fail("expected a quoted string", *this);
  return std::get<std::string>(v);
}
const JobValue::List& JobValue::as_list() const {
  if (!is_list()) fail("expected a list", *this);
  return std::get<List>(v);
}
std::vector<std::string> JobValue::as_strings() const {
  std::vector<std::string> out;
  for (const auto& x : as_list()) out.push_back(x.as_string());
  return out;
}
std::vector<int> JobValue::as_ints() const {
  std::vector<int> out;
  for (const auto& x : as_list()) {
    long n = x.as_int();
    if (n < -1000000 || n > 1000000) fail("integer out of range", x);
    out.push_back(static_cast<int>(n));
  }
  return out;
}

const JobValue& TaskSpec::at(const std::string& key) const {
  auto it = params.find(key);
  if (it == params.end()) throw ParseError("[task] needs '" + key + "'", line, 1);
  return it->second;
}
long TaskSpec::get_int(const std::string& key, long fallback) const { return has(key) ? at(key).as_int() : fallback; }
std::string TaskSpec::get_string(const std::string& key, const std::string& fallback) const {
  return has(key) ? at(key).as_string() : fallback;
}

const RingSpec& JobSpec::ring(const std::string& name) const {
  for (const auto& r : rings)
    if (r.name == name) return r;
  throw StructuralError("unknown ring " + name);
}
const MorphismSpec& JobSpec::morphism(const std::string& name) const {
  for (const auto& m : morphisms)
    if (m.name == name) return m;
  throw StructuralError("unknown morphism " + name);
}
const ModuleSpec& JobSpec::module(const std::string& name) const {
  for (const auto& m : modules)
    if (m.name == name) return m;
  throw StructuralError("unknown module " + name);
}

const std::vector<std::string>& task_kinds() {
  static const std::vector<std::string> kinds{"resolve",      "hochschild-cohomology", "hochschild-homology",
                                              "yoneda-table", "eisenbud-shamash",      "transversality",
                                              "cech",         "glued-hochschild",      "bar-oracle-compare"};
  return kinds;
}

JobSpec parse_job(const std::string& text) {
  JobSpec job;
  auto sections = tokenize(text);
  bool have_base = false, have_task = false;
  std::set<std::string> names;
  std::map<std::string, RingPtr> rings;

  for (const auto& s : sections) {
    if (s.kind == "base" || s.kind == "task") {
      if (!s.name.empty()) throw ParseError("[" + s.kind + "] takes no name", s.line, s.column);
    } else if (s.kind == "ring" || s.kind == "morphism" || s.kind == "module") {
      if (!valid_identifier(s.name)) throw ParseError("[" + s.kind + "] needs a name", s.line, s.column);
      if (!names.insert(s.name).second) throw ParseError("duplicate name '" + s.name + "'", s.line, s.column);
    } else {
      throw ParseError("unknown section [" + s.kind + "]", s.line, s.column);
    }
  }

  for (const auto& s : sections) {
    if (s.kind != "base") continue;
    if (have_base) throw ParseError("more than one [base]", s.line, s.column);
    have_base = true;
    check_keys(s, {"field", "seed"});
    if (auto* e = find(s, "field")) {
      job.field = parse_field(e->value);
      job.field_text = e->value.as_string();
    }
    if (auto* e = find(s, "seed")) {
      long n = e->value.as_int();
      if (n < 0) fail("seed must be non-negative", e->value);
      job.seed = static_cast<std::uint64_t>(n);
    }
  }

  for (const auto& s : sections) {
    if (s.kind != "ring") continue;
    check_keys(s, {"vars", "weights", "relations", "order", "filtration"});
    RingSpec r;
    r.name = s.name;
    r.line = s.line;
    const JobValue& vars = require(s, "vars");
    r.vars = vars.as_strings();
    std::set<std::string> seen;
    for (std::size_t i = 0; i < r.vars.size(); ++i) {
      const auto& item = vars.as_list()[i];
      if (!valid_identifier(r.vars[i])) fail("bad variable name '" + r.vars[i] + "'", item);
      if (!seen.insert(r.vars[i]).second) fail("duplicate variable '" + r.vars[i] + "'", item);
    }
    if (auto* e = find(s, "weights")) {
      r.weights = e->value.as_ints();
      if (r.weights.size() != r.vars.size()) fail("one weight per variable required", e->value);
      for (int w : r.weights)
        if (w <= 0) fail("weights must be positive", e->value);
    }
    if (auto* e = find(s, "order")) {
      r.order = e->value.as_string();
      if (r.order != "grevlex" && r.order != "lex") fail("order must be \"grevlex\" or \"lex\"", e->value);
    }
    if (auto* e = find(s, "filtration")) r.filtration = e->value.as_bool();
    RingPtr ring = ring_of(r, job.field);
    if (auto* e = find(s, "relations")) {
      r.relations = e->value.as_strings();
      for (std::size_t i = 0; i < r.relations.size(); ++i) check_poly(r.relations[i], ring, e->value.as_list()[i]);
    }
    rings[r.name] = ring;
    job.rings.push_back(std::move(r));
  }

  auto ring_ref = [&](const JobValue& v) -> const RingSpec& {
    const std::string& n = v.as_string();
    for (const auto& r : job.rings)
      if (r.name == n) return r;
    fail("unknown ring '" + n + "'", v);
  };

  for (const auto& s : sections) {
    if (s.kind != "morphism") continue;
    check_keys(s, {"source", "target", "images"});
    MorphismSpec m;
    m.name = s.name;
    m.line = s.line;
    const RingSpec& src = ring_ref(require(s, "source"));
    const RingSpec& tgt = ring_ref(require(s, "target"));
    m.source = src.name;
    m.target = tgt.name;
    const JobValue& images = require(s, "images");
    m.images = images.as_strings();
    if (m.images.size() != src.vars.size()) fail("one image per source variable required", images);
    for (std::size_t i = 0; i < m.images.size(); ++i) check_poly(m.images[i], rings[tgt.name], images.as_list()[i]);
    job.morphisms.push_back(std::move(m));
  }

  for (const auto& s : sections) {
    if (s.kind != "module") continue;
    check_keys(s, {"ring", "generators", "relations", "shift"});
    ModuleSpec m;
    m.name = s.name;
    m.line = s.line;
    m.ring = ring_ref(require(s, "ring")).name;
    m.generators = require(s, "generators").as_ints();
    if (m.generators.empty()) fail("a module needs at least one generator", require(s, "generators"));
    if (auto* e = find(s, "relations")) {
      for (const auto& row : e->value.as_list()) {
        auto polys = row.as_strings();
        if (polys.size() != m.generators.size()) fail("each relation needs one entry per generator", row);
        for (std::size_t i = 0; i < polys.size(); ++i) check_poly(polys[i], rings[m.ring], row.as_list()[i]);
        m.relations.push_back(std::move(polys));
      }
    }
    if (auto* e = find(s, "shift")) m.shift = static_cast<int>(e->value.as_int());
    job.modules.push_back(std::move(m));
  }

  for (const auto& s : sections) {
    if (s.kind != "task") continue;
    if (have_task) throw ParseError("more than one [task]", s.line, s.column);
    have_task = true;
    job.task.line = s.line;
    const JobValue& kind = require(s, "kind");
    job.task.kind = kind.as_string();
    const auto& kinds = task_kinds();
    if (std::find(kinds.begin(), kinds.end(), job.task.kind) == kinds.end())
      fail("unknown task kind '" + job.task.kind + "'", kind);
    check_keys(s, {"kind", "morphism", "module", "ring", "charts", "space", "n_max", "r_cap", "q_cap", "i_max",
                   "hom_bound", "internal_bound", "laurent_window", "length", "f", "f0", "f1", "phi", "twists",
                   "frames", "samples"});
    for (const auto& e : s.entries) {
      if (e.key == "kind") continue;
      job.task.params[e.key] = e.value;
    }
  }
  if (!have_task) throw ParseError("missing [task] section", 1, 1);

  TaskSpec& t = job.task;
  for (const char* key : {"n_max", "r_cap", "q_cap", "i_max", "hom_bound", "internal_bound", "laurent_window", "length"})
    if (t.has(key) && t.at(key).as_int() <= 0) fail(std::string(key) + " must be positive", t.at(key));
  if (t.has("samples") && t.at("samples").as_int() < 0) fail("samples must be non-negative", t.at("samples"));
  if (t.has("morphism")) {
    const std::string& n = t.at("morphism").as_string();
    if (std::none_of(job.morphisms.begin(), job.morphisms.end(), [&](const auto& m) { return m.name == n; }))
      fail("unknown morphism '" + n + "'", t.at("morphism"));
  }
  if (t.has("module")) {
    const std::string& n = t.at("module").as_string();
    auto it = std::find_if(job.modules.begin(), job.modules.end(), [&](const auto& m) { return m.name == n; });
    if (it == job.modules.end()) fail("unknown module '" + n + "'", t.at("module"));
    if (t.has("morphism") && it->ring != job.morphism(t.at("morphism").as_string()).target)
      fail("module must live over the target of the morphism", t.at("module"));
  }
  if (t.has("ring")) ring_ref(t.at("ring"));
  if (t.has("charts"))
    for (const auto& c : t.at("charts").as_list())
      if (std::none_of(job.morphisms.begin(), job.morphisms.end(), [&](const auto& m) { return m.name == c.as_string(); }))
        fail("unknown morphism '" + c.as_string() + "'", c);

  const std::string& k = t.kind;
  bool needs_morphism = k == "resolve" || k == "hochschild-cohomology" || k == "hochschild-homology" ||
                        k == "yoneda-table" || k == "transversality" || k == "bar-oracle-compare";
  if (needs_morphism) t.at("morphism");
  if (k == "eisenbud-shamash") {
    t.at("ring");
    t.at("f");
    const RingPtr& lam = rings[t.at("ring").as_string()];
    check_poly(t.at("f").as_string(), lam, t.at("f"));
    auto f0 = t.at("f0").as_ints();
    auto f1 = t.at("f1").as_ints();
    const auto& phi = t.at("phi").as_list();
    if (phi.size() != f1.size()) fail("phi needs one column per F1 generator", t.at("phi"));
    for (const auto& col : phi) {
      auto polys = col.as_strings();
      if (polys.size() != f0.size()) fail("each phi column needs one entry per F0 generator", col);
      for (std::size_t i = 0; i < polys.size(); ++i) check_poly(polys[i], lam, col.as_list()[i]);
    }
  }
  if (k == "cech" || (k == "glued-hochschild" && !t.has("charts"))) {
    std::string space = t.get_string("space", "");
    if (space != "P1" && space != "P1xP1")
      fail("space must be \"P1\" or \"P1xP1\"", t.has("space") ? t.at("space") : JobValue{0L, t.line, 1});
  }
  if (k == "glued-hochschild" && t.has("charts") && t.at("charts").as_list().empty())
    fail("charts must not be empty", t.at("charts"));

  bool odd_generators = k == "hochschild-cohomology" || k == "hochschild-homology" || k == "yoneda-table" ||
                        k == "bar-oracle-compare" || (k == "glued-hochschild");
  if (odd_generators && job.field.characteristic() == 2)
    throw CharacteristicGuard("task " + k + " needs odd Koszul generators, unavailable in characteristic 2");
  return job;
}

}  // namespace dgcohom
