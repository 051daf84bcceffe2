#pragma once

#include <cstdint>
#include <optional>

#include "json.hpp"

#include "dgcohom/job.hpp"

namespace dgcohom {

struct RunOptions {
  bool emit_matrices = false;
  bool window_check = false;
  bool timing = false;
  std::optional<std::uint64_t> seed;
};

struct RunResult {
  nlohmann::ordered_json document;
  /// 0 ok, 1 when an oracle comparison disagrees.
  int exit_code = 0;
};

/// Runs a validated job. Engine errors propagate as exceptions.
RunResult run_job(const JobSpec& job, const RunOptions& options = {});

/// Maps an exception from parsing or running to the process exit code.
int exit_code_for(const std::exception& e);

inline constexpr const char* kResultFormat = "dgcohom-result/1";

}  // namespace dgcohom
