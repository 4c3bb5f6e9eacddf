#include "cga/records.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "cga/statistics.hpp"

namespace cga {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

std::string csv_header(const std::vector<std::string>& columns) {
  std::string out;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out += ',';
    out += columns[i];
  }
  return out + '\n';
}

std::string raw_csv_row(const std::string& experiment_id, const RunRecord& r) {
  std::ostringstream os;
  os << experiment_id << ',' << r.kind << ',' << r.params.n << ',' << r.k << ',' << r.params.mu
     << ',' << r.params.seed << ',' << r.params.replicate << ',' << r.params.cap << ','
     << r.iterations << ',' << r.evaluations << ',' << (r.hit_optimum ? 1 : 0) << ','
     << (r.premature_convergence ? 1 : 0) << '\n';
  return os.str();
}

std::string write_raw_csv(const std::string& experiment_id, std::span<const RunRecord> records) {
  std::string out = csv_header(kRawColumns);
  for (const auto& r : records) out += raw_csv_row(experiment_id, r);
  return out;
}

std::string write_trace_csv(const RunRecord& r) {
  std::string out = csv_header(kTraceColumns);
  for (const auto& row : r.trace) {
    out += std::to_string(row.t) + ',' + format_double(row.distance.to_double()) + ',' +
           std::to_string(row.lower_count) + ',' + std::to_string(row.upper_count) + ',' +
           std::to_string(row.best_fitness) + '\n';
  }
  return out;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

template <typename T>
T parse_number(const std::string& s, std::size_t line_no) {
  T v{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw std::runtime_error("raw CSV line " + std::to_string(line_no) + ": bad number '" + s + "'");
  return v;
}

bool parse_flag(const std::string& s, std::size_t line_no) {
  if (s == "1") return true;
  if (s == "0") return false;
  throw std::runtime_error("raw CSV line " + std::to_string(line_no) + ": bad flag '" + s + "'");
}

}  // namespace

std::vector<RawRow> parse_raw_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("raw CSV: missing header");
  if (line + '\n' != csv_header(kRawColumns))
    throw std::runtime_error("raw CSV: unexpected header '" + line + "'");
  std::vector<RawRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != kRawColumns.size())
      throw std::runtime_error("raw CSV line " + std::to_string(line_no) + ": expected " +
                               std::to_string(kRawColumns.size()) + " columns");
    RawRow row;
    row.experiment_id = cells[0];
    RunRecord& r = row.record;
    r.kind = cells[1];
    r.params.n = parse_number<int>(cells[2], line_no);
    r.k = parse_number<int>(cells[3], line_no);
    r.params.mu = parse_number<int>(cells[4], line_no);
    r.params.seed = parse_number<std::uint64_t>(cells[5], line_no);
    r.params.replicate = parse_number<std::uint64_t>(cells[6], line_no);
    r.params.cap = parse_number<std::uint64_t>(cells[7], line_no);
    r.iterations = parse_number<std::uint64_t>(cells[8], line_no);
    r.evaluations = parse_number<std::uint64_t>(cells[9], line_no);
    r.hit_optimum = parse_flag(cells[10], line_no);
    r.premature_convergence = parse_flag(cells[11], line_no);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<SummaryRow> summarize(std::span<const RunRecord> records) {
  if (records.empty()) throw std::invalid_argument("summarize: no records");
  using Key = std::tuple<int, int, int, std::string>;
  std::map<Key, std::vector<const RunRecord*>> groups;
  for (const auto& r : records) groups[{r.params.n, r.k, r.params.mu, r.kind}].push_back(&r);

  std::vector<SummaryRow> out;
  for (const auto& [key, members] : groups) {
    SummaryRow row;
    row.n = std::get<0>(key);
    row.k = std::get<1>(key);
    row.mu = std::get<2>(key);
    row.kind = std::get<3>(key);
    row.replicates = members.size();
    std::vector<std::int64_t> runtimes;
    runtimes.reserve(members.size());
    // Sum in a canonical order so the mean does not depend on input order.
    for (const auto* r : members) {
      const auto effective =
          static_cast<std::int64_t>(r->hit_optimum ? r->iterations : r->params.cap);
      runtimes.push_back(effective);
      if (r->hit_optimum)
        ++row.hits;
      else
        ++row.censored;
    }
    std::sort(runtimes.begin(), runtimes.end());
    CompensatedSum total;
    for (auto v : runtimes) total.add(static_cast<double>(v));
    row.mean_iterations = total.value() / static_cast<double>(runtimes.size());
    row.min_iterations = runtimes.front();
    row.max_iterations = runtimes.back();
    row.median_iterations = lower_median(runtimes);
    row.median_evaluations = 2 * row.median_iterations;
    row.censored_flag = row.censored > 0;
    out.push_back(row);
  }
  return out;
}

std::string write_summary_csv(std::span<const SummaryRow> rows) {
  std::string out = csv_header(kSummaryColumns);
  for (const auto& r : rows) {
    out += r.kind + ',' + std::to_string(r.n) + ',' + std::to_string(r.k) + ',' +
           std::to_string(r.mu) + ',' + std::to_string(r.replicates) + ',' +
           std::to_string(r.hits) + ',' + std::to_string(r.censored) + ',' +
           std::to_string(r.median_iterations) + ',' + format_double(r.mean_iterations) + ',' +
           std::to_string(r.min_iterations) + ',' + std::to_string(r.max_iterations) + ',' +
           std::to_string(r.median_evaluations) + ',' + (r.censored_flag ? "1" : "0") + '\n';
  }
  return out;
}

}  // namespace cga
