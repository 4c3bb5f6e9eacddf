#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "cga/experiments.hpp"

using namespace cga;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("cgalab_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunRecord record(int k, std::uint64_t iterations, bool hit, std::uint64_t cap = 100) {
  RunRecord r;
  r.params.n = 10;
  r.params.mu = 15;
  r.params.cap = cap;
  r.kind = "jump";
  r.k = k;
  r.hit_optimum = hit;
  r.iterations = iterations;
  r.evaluations = 2 * iterations;
  return r;
}

}  // namespace

TEST_CASE("mu rules") {
  CHECK(resolve_mu("25", 10) == 25);
  CHECK_THROWS_WITH_AS(resolve_mu("13", 10), doctest::Contains("nearest valid mu is 15"),
                       std::invalid_argument);
  CHECK(resolve_mu("2*n", 10) == 20);
  CHECK(resolve_mu("nearest_valid(13)", 10) == 15);
  const int hint = static_cast<int>(std::ceil(std::sqrt(100.0) * std::log(100.0)));
  CHECK(resolve_mu("auto", 100) == nearest_valid_mu(100, hint));
  CHECK(resolve_mu("nearest_valid(sqrt(n)*ln(n))", 100) == resolve_mu("auto", 100));
  CHECK(resolve_mu("nearest_valid(4*log2(n))", 16) == nearest_valid_mu(16, 16));
  CHECK_THROWS_AS(resolve_mu("n", 13), std::invalid_argument);
  CHECK_THROWS_AS(resolve_mu("banana", 10), std::invalid_argument);
  CHECK_THROWS_AS(resolve_mu("-4", 10), std::invalid_argument);
  CHECK(resolve_mu("nearest_valid(7)", 10, BoundaryMode::Free) == 10);
  CHECK_THROWS_WITH_AS(resolve_mu("15", 10, BoundaryMode::Free), doctest::Contains("even"),
                       std::invalid_argument);
}

TEST_CASE("k lists and config validation") {
  CHECK(parse_int_list("4,8, 12") == std::vector<int>{4, 8, 12});
  CHECK_THROWS_AS(parse_int_list("4,x"), std::invalid_argument);
  ExperimentConfig cfg;
  cfg.n = 10;
  CHECK_THROWS_WITH_AS(validate(cfg), doctest::Contains("k"), std::invalid_argument);
  cfg.ks = {3};
  CHECK_NOTHROW(validate(cfg));
  cfg.ks = {11};
  CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
  cfg.ks = {3};
  cfg.replicates = 0;
  CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
  cfg.replicates = 1;
  cfg.objective = "onemax";
  cfg.ks.clear();
  CHECK_NOTHROW(validate(cfg));
  CHECK(output_format_from_string("json") == OutputFormat::Json);
  CHECK_THROWS_AS(output_format_from_string("xml"), std::invalid_argument);
}

TEST_CASE("summary medians and censoring") {
  const std::vector<RunRecord> odd = {record(3, 7, true), record(3, 3, true), record(3, 5, true)};
  auto rows = summarize(odd);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].median_iterations == 5);
  CHECK(rows[0].median_evaluations == 10);
  CHECK(rows[0].hits == 3);
  CHECK_FALSE(rows[0].censored_flag);

  const std::vector<RunRecord> even = {record(3, 9, true), record(3, 3, true), record(3, 7, true),
                                       record(3, 5, true)};
  CHECK(summarize(even)[0].median_iterations == 5);

  const std::vector<RunRecord> capped = {record(4, 100, false), record(4, 100, false)};
  rows = summarize(capped);
  CHECK(rows[0].censored == 2);
  CHECK(rows[0].censored_flag);
  CHECK(rows[0].median_iterations == 100);

  const std::vector<RunRecord> mixed = {record(5, 10, true), record(3, 1, true)};
  rows = summarize(mixed);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].k == 3);
  CHECK(rows[1].k == 5);
  CHECK_THROWS(summarize(std::vector<RunRecord>{}));
}

TEST_CASE("sweep is deterministic and round-trips through CSV") {
  ExperimentConfig cfg;
  cfg.experiment_id = "t";
  cfg.n = 10;
  cfg.ks = {3, 2, 3};
  cfg.mu_rule = "15";
  cfg.replicates = 6;
  cfg.cap = 200000;
  cfg.seed = 3;
  const auto a = sweep(cfg);
  const auto b = sweep(cfg);
  CHECK(a.mu == 15);
  CHECK(a.raw_csv == b.raw_csv);
  CHECK(a.summary_csv == b.summary_csv);
  REQUIRE(a.records.size() == 12);
  CHECK(a.records.front().k == 2);
  CHECK(a.records.back().k == 3);
  CHECK(a.raw_path.empty());

  std::istringstream in(a.raw_csv);
  const auto rows = parse_raw_csv(in);
  REQUIRE(rows.size() == a.records.size());
  std::vector<RunRecord> parsed;
  for (const auto& r : rows) {
    CHECK(r.experiment_id == "t");
    parsed.push_back(r.record);
  }
  CHECK(summarize(parsed) == a.summary);
  CHECK(write_summary_csv(summarize(parsed)) == a.summary_csv);

  // Common random numbers: replicate r of each group uses the same stream.
  cfg.threads = 3;
  CHECK(sweep(cfg).raw_csv == a.raw_csv);

  std::istringstream bad("not,a,header\n");
  CHECK_THROWS_AS(parse_raw_csv(bad), std::runtime_error);
}

TEST_CASE("onemax sweep ignores k") {
  ExperimentConfig cfg;
  cfg.objective = "onemax";
  cfg.n = 12;
  cfg.replicates = 3;
  cfg.cap = 100000;
  const auto r = sweep(cfg);
  REQUIRE(r.summary.size() == 1);
  CHECK(r.summary[0].k == 0);
  CHECK(r.summary[0].hits == 3);
}

TEST_CASE("output paths and files") {
  const auto dir = scratch_dir("out");
  ::setenv(kOutputDirEnv, dir.c_str(), 1);
  CHECK(resolve_output_path("runs.csv") == dir / "runs.csv");
  CHECK(resolve_output_path("/abs/runs.csv") == fs::path("/abs/runs.csv"));
  CHECK(summary_path_for("a/runs.csv") == fs::path("a/runs.summary.csv"));

  ExperimentConfig cfg;
  cfg.n = 10;
  cfg.ks = {2};
  cfg.mu_rule = "15";
  cfg.replicates = 2;
  cfg.cap = 100000;
  cfg.out = "runs.csv";
  const auto r = sweep(cfg);
  ::unsetenv(kOutputDirEnv);
  CHECK(r.raw_path == dir / "runs.csv");
  CHECK(r.summary_path == dir / "runs.summary.csv");
  CHECK(slurp(r.raw_path) == r.raw_csv);
  CHECK(slurp(r.summary_path) == r.summary_csv);
  CHECK(resolve_output_path("runs.csv") == fs::path("runs.csv"));

  write_text_file(dir / "nested" / "x.csv", "x");
  CHECK(slurp(dir / "nested" / "x.csv") == "x");
  CHECK_THROWS_WITH_AS(write_text_file(dir / "runs.csv" / "x.csv", "x"),
                       doctest::Contains("runs.csv"), std::runtime_error);
  fs::remove_all(dir);
}
