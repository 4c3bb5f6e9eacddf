#pragma once

#include <cstdint>
#include <istream>
#include <span>
#include <string>
#include <vector>

#include "cga/engine.hpp"

namespace cga {

/// Raw run CSV: one row per run, header mandatory.
inline const std::vector<std::string> kRawColumns = {
    "experiment_id", "kind", "n", "k", "mu", "seed", "replicate", "cap",
    "iterations", "evaluations", "hit_optimum", "premature_convergence"};

/// Trace CSV, one row per recorded iteration.
inline const std::vector<std::string> kTraceColumns = {"t", "D_t", "lower_count", "upper_count",
                                                       "best_fitness"};

std::string csv_header(const std::vector<std::string>& columns);
std::string raw_csv_row(const std::string& experiment_id, const RunRecord& r);
std::string write_raw_csv(const std::string& experiment_id, std::span<const RunRecord> records);
std::string write_trace_csv(const RunRecord& r);

struct RawRow {
  std::string experiment_id;
  RunRecord record;
};

/// Parses a raw CSV produced by write_raw_csv(). Throws std::runtime_error on
/// a malformed header or row (message names the line).
std::vector<RawRow> parse_raw_csv(std::istream& in);

/// Aggregate over one (n, k, mu) group. Runs that did not hit the optimum are
/// censored and contribute `cap` as a lower bound on their runtime.
struct SummaryRow {
  std::string kind;
  int n = 0;
  int k = 0;
  int mu = 0;
  std::uint64_t replicates = 0;
  std::uint64_t hits = 0;
  std::uint64_t censored = 0;
  std::int64_t median_iterations = 0;  // lower median
  double mean_iterations = 0.0;
  std::int64_t min_iterations = 0;
  std::int64_t max_iterations = 0;
  std::int64_t median_evaluations = 0;
  bool censored_flag = false;

  friend bool operator==(const SummaryRow&, const SummaryRow&) = default;
};

inline const std::vector<std::string> kSummaryColumns = {
    "kind", "n", "k", "mu", "replicates", "hits", "censored", "median_iterations",
    "mean_iterations", "min_iterations", "max_iterations", "median_evaluations", "censored_flag"};

/// Grouped, order-insensitive aggregation sorted by (n, k, mu). Throws on empty input.
std::vector<SummaryRow> summarize(std::span<const RunRecord> records);
std::string write_summary_csv(std::span<const SummaryRow> rows);

/// Shortest decimal representation that round-trips.
std::string format_double(double v);

}  // namespace cga
