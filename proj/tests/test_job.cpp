#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "dgcohom/runner.hpp"

using namespace dgcohom;

namespace {

const char* kDual = R"(# dual numbers
[base]
field = "Q"
seed = 3

[ring K]
vars = []

[ring D]
vars = ["x"]
relations = ["x^2"]

[morphism f]
source = "K"
target = "D"
images = []

[task]
kind = "hochschild-cohomology"
morphism = "f"
n_max = 3
)";

std::string with_field(const std::string& field) {
  std::string s = kDual;
  s.replace(s.find("\"Q\""), 3, "\"" + field + "\"");
  return s;
}

int code_of(const std::string& text) {
  try {
    run_job(parse_job(text));
    return 0;
  } catch (const std::exception& e) {
    return exit_code_for(e);
  }
}

ParseError parse_error_of(const std::string& text) {
  try {
    parse_job(text);
  } catch (const ParseError& e) {
    return e;
  }
  ADD_FAILURE() << "no parse error";
  return ParseError("none", 0, 0);
}

}  // namespace

TEST(JobParser, MinimalJob) {
  auto job = parse_job("[task]\nkind = \"cech\"\nspace = \"P1\"\ntwists = [0]\n");
  EXPECT_EQ(job.task.kind, "cech");
  EXPECT_TRUE(job.field.is_rational());
  EXPECT_EQ(job.task.at("twists").as_ints(), std::vector<int>{0});
}

TEST(JobParser, FullJob) {
  auto job = parse_job(kDual);
  EXPECT_EQ(job.seed, 3u);
  ASSERT_EQ(job.rings.size(), 2u);
  EXPECT_EQ(job.ring("D").relations, std::vector<std::string>{"x^2"});
  EXPECT_EQ(job.morphism("f").target, "D");
  EXPECT_EQ(job.task.get_int("n_max", 0), 3);
  EXPECT_EQ(job.task.get_int("r_cap", 12), 12);
}

TEST(JobParser, ListsSpanLinesAndNest) {
  auto job = parse_job(
      "[ring L]\nvars = [\"x\",\n  \"y\"]\n[module M]\nring = \"L\"\ngenerators = [0]\n"
      "relations = [[\"x\"], [\"y\"]]\n[ring K]\nvars = []\n[morphism f]\nsource = \"K\"\ntarget = \"L\"\n"
      "images = []\n[task]\nkind = \"resolve\"\nmorphism = \"f\"\nmodule = \"M\"\n");
  EXPECT_EQ(job.ring("L").vars.size(), 2u);
  EXPECT_EQ(job.module("M").relations.size(), 2u);
}

TEST(JobParser, ErrorsCarryPositions) {
  auto e = parse_error_of("[task]\nkind = \"nonsense\"\n");
  EXPECT_EQ(e.line(), 2);
  EXPECT_EQ(e.column(), 8);
  auto bad_poly = parse_error_of(
      "[ring L]\nvars = [\"x\"]\nrelations = [\"x^^2\"]\n[task]\nkind = \"resolve\"\nring = \"L\"\n");
  EXPECT_EQ(bad_poly.line(), 3);
  auto unknown = parse_error_of("[task]\nkind = \"cech\"\nspace = \"P1\"\nfrobnicate = 1\n");
  EXPECT_EQ(unknown.line(), 4);
  EXPECT_EQ(parse_error_of("[base]\nfield = \"Q\"\n").line(), 1);
  EXPECT_EQ(parse_error_of(std::string(kDual) + "morphism = \"g\"\n").line(), 22);
}

TEST(JobParser, UnresolvedNames) {
  std::string s = kDual;
  s.replace(s.find("morphism = \"f\""), 14, "morphism = \"g\"");
  EXPECT_THROW(parse_job(s), ParseError);
}

TEST(JobParser, FieldValidation) {
  EXPECT_THROW(parse_job(with_field("Fp:4")), ParseError);
  EXPECT_THROW(parse_job(with_field("R")), ParseError);
  EXPECT_THROW(parse_job(with_field("Fp:2")), CharacteristicGuard);
  EXPECT_NO_THROW(parse_job(with_field("Fp:5")));
}

TEST(Runner, ExitCodes) {
  EXPECT_EQ(code_of(kDual), 0);
  EXPECT_EQ(code_of("[task]\nkind = \"nonsense\"\n"), 2);
  EXPECT_EQ(code_of(with_field("Fp:4")), 2);
  EXPECT_EQ(code_of(with_field("Fp:2")), 4);
  EXPECT_EQ(code_of(with_field("Fp:3")), 4);
  std::string tight = kDual;
  tight += "hom_bound = 1\n";
  EXPECT_EQ(code_of(tight), 3);
}

TEST(Runner, DocumentShapeAndDeterminism) {
  auto job = parse_job(kDual);
  auto a = run_job(job);
  auto b = run_job(job);
  EXPECT_EQ(a.document.dump(), b.document.dump());
  EXPECT_EQ(a.document["format"], kResultFormat);
  EXPECT_FALSE(a.document.contains("timing_seconds"));
  auto& totals = a.document["result"]["totals"];
  std::vector<int> dims;
  for (auto& t : totals) {
    EXPECT_TRUE(t.contains("window"));
    dims.push_back(t["dim"].get<int>());
  }
  EXPECT_EQ(dims, (std::vector<int>{2, 1, 1, 1}));
  RunOptions timed;
  timed.timing = true;
  EXPECT_TRUE(run_job(job, timed).document.contains("timing_seconds"));
}

TEST(Runner, WindowCheckAgrees) {
  RunOptions opt;
  opt.window_check = true;
  auto r = run_job(parse_job(kDual), opt);
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_TRUE(r.document["result"]["window_check"]["agree"].get<bool>());
}

TEST(Runner, BarOracleCompare) {
  std::string s = kDual;
  s.replace(s.find("hochschild-cohomology"), 21, "bar-oracle-compare");
  auto r = run_job(parse_job(s));
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_TRUE(r.document["result"]["agree"].get<bool>());
}

TEST(Runner, CechTask) {
  auto r = run_job(parse_job("[task]\nkind = \"cech\"\nspace = \"P1\"\ntwists = [-3, 2]\nlaurent_window = 6\n"));
  auto& bundles = r.document["result"]["bundles"];
  ASSERT_EQ(bundles.size(), 2u);
  EXPECT_EQ(bundles[0]["h"], nlohmann::ordered_json::parse("[0, 2]"));
  EXPECT_EQ(bundles[1]["h"], nlohmann::ordered_json::parse("[3, 0]"));
}
