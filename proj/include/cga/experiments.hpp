#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cga/engine.hpp"
#include "cga/frequency.hpp"
#include "cga/records.hpp"

namespace cga {

enum class OutputFormat { Csv, Json };
OutputFormat output_format_from_string(const std::string& s);

/// Environment variable naming the directory for relative output paths.
inline constexpr const char* kOutputDirEnv = "CGALAB_OUTPUT_DIR";

struct ExperimentConfig {
  std::string experiment_id = "sweep";
  std::string objective = "jump";  // "jump" or "onemax"
  int n = 0;
  std::vector<int> ks;             // ignored for onemax
  std::string mu_rule = "auto";
  BoundaryMode boundary_mode = BoundaryMode::Bounded;
  std::uint64_t replicates = 1;
  std::uint64_t cap = 1'000'000;
  std::uint64_t seed = 1;
  double c = 0.05;
  std::string out;                 // raw CSV path; empty: nothing written
  OutputFormat format = OutputFormat::Csv;
  std::uint64_t stride = 0;
  unsigned threads = 1;
};

/// Resolves a mu rule for dimension n. Accepted forms: an integer, "auto"
/// (= nearest_valid(ceil(sqrt(n)*ln(n)))), "nearest_valid(expr)", or a bare
/// expr, where expr is a '*'-separated product of numbers, n, sqrt(n), ln(n),
/// log2(n). Non-integral products are rounded up. A bare integer or expr must
/// itself be well behaved. Throws std::invalid_argument otherwise.
int resolve_mu(const std::string& rule, int n, BoundaryMode mode = BoundaryMode::Bounded);

/// Parses "4,8,12" into integers; throws std::invalid_argument on junk.
std::vector<int> parse_int_list(const std::string& s);

/// Throws std::invalid_argument when the config is unusable.
void validate(const ExperimentConfig& cfg);

/// Relative paths are placed under $CGALAB_OUTPUT_DIR when it is set.
std::filesystem::path resolve_output_path(const std::string& path);

/// Writes `content`; throws std::runtime_error naming the path on failure.
void write_text_file(const std::filesystem::path& path, const std::string& content);

/// "runs.csv" -> "runs.summary.csv".
std::filesystem::path summary_path_for(const std::filesystem::path& raw);

struct SweepResult {
  int mu = 0;
  std::vector<RunRecord> records;  // sorted by (k, replicate)
  std::vector<SummaryRow> summary;
  std::string raw_csv;
  std::string summary_csv;
  std::filesystem::path raw_path, summary_path;  // empty when nothing was written
};

/// Runs every (k, replicate) of the config. All groups share the master seed;
/// replicate r of every group uses stream r.
SweepResult sweep(const ExperimentConfig& cfg);

}  // namespace cga
