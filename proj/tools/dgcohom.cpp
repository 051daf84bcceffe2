#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "dgcohom/runner.hpp"

namespace {

int emit(const nlohmann::ordered_json& doc, const std::string& out) {
  std::string text = doc.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) {
    std::cerr << "cannot write " << out << "\n";
    return 1;
  }
  f << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hochschild invariants of graded algebras from job files"};
  std::string job_path, out_path;
  dgcohom::RunOptions options;
  std::uint64_t seed = 0;
  app.add_option("--job", job_path, "job file")->required();
  app.add_option("--out", out_path, "write the result document here instead of stdout");
  app.add_flag("--emit-matrices", options.emit_matrices, "include matrices in the result");
  auto* seed_opt = app.add_option("--seed", seed, "seed for sampled checks (overrides [base] seed)");
  app.add_flag("--window-check", options.window_check, "re-run with enlarged bounds and compare");
  app.add_flag("--timing", options.timing, "record wall-clock time in the result");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  if (*seed_opt) options.seed = seed;

  std::ifstream in(job_path, std::ios::binary);
  if (!in) {
    std::cerr << "cannot read " << job_path << "\n";
    return 2;
  }
  std::stringstream buf;
  buf << in.rdbuf();

  try {
    dgcohom::JobSpec job = dgcohom::parse_job(buf.str());
    dgcohom::RunResult r = dgcohom::run_job(job, options);
    if (emit(r.document, out_path) != 0) return 1;
    return r.exit_code;
  } catch (const std::exception& e) {
    int code = dgcohom::exit_code_for(e);
    std::cerr << job_path << ": " << e.what() << "\n";
    nlohmann::ordered_json doc;
    doc["format"] = dgcohom::kResultFormat;
    doc["error"] = {{"message", e.what()}, {"exit_code", code}};
    emit(doc, out_path);
    return code;
  }
}
