#include "cga/experiments.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "cga/objective.hpp"

namespace cga {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

bool is_integer(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

double eval_factor(const std::string& raw, int n) {
  const std::string f = trim(raw);
  const double dn = n;
  if (f == "n") return dn;
  if (f == "sqrt(n)") return std::sqrt(dn);
  if (f == "ln(n)" || f == "log(n)") return std::log(dn);
  if (f == "log2(n)") return std::log2(dn);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(f, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != f.size() || !(v > 0.0))
    throw std::invalid_argument("mu rule: cannot evaluate '" + f + "'");
  return v;
}

int eval_product(const std::string& expr, int n) {
  double v = 1.0;
  std::stringstream ss(expr);
  std::string factor;
  bool any = false;
  while (std::getline(ss, factor, '*')) {
    v *= eval_factor(factor, n);
    any = true;
  }
  if (!any) throw std::invalid_argument("mu rule: empty expression");
  // Tolerate floating noise on integral products such as 2*n.
  const double r = std::round(v);
  const double c = std::abs(v - r) < 1e-9 ? r : std::ceil(v);
  if (c < 1 || c > 1e8) throw std::invalid_argument("mu rule: value out of range");
  return static_cast<int>(c);
}

void require_valid(int n, int mu, BoundaryMode mode) {
  if (!check_well_behaved(n, mu))
    throw std::invalid_argument("mu=" + std::to_string(mu) + " is not well behaved for n=" +
                                std::to_string(n) + "; nearest valid mu is " +
                                std::to_string(nearest_valid_mu(n, mu)));
  if (mode == BoundaryMode::Free && mu % 2 != 0)
    throw std::invalid_argument("free boundary mode requires an even mu, got " +
                                std::to_string(mu));
}

int nearest_for_mode(int n, int hint, BoundaryMode mode) {
  int mu = nearest_valid_mu(n, hint);
  while (mode == BoundaryMode::Free && mu % 2 != 0) mu = nearest_valid_mu(n, mu + 1);
  return mu;
}

}  // namespace

OutputFormat output_format_from_string(const std::string& s) {
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json") return OutputFormat::Json;
  throw std::invalid_argument("unknown format '" + s + "' (expected csv or json)");
}

int resolve_mu(const std::string& rule_in, int n, BoundaryMode mode) {
  if (n < 4) throw std::invalid_argument("mu rule: n must be >= 4");
  const std::string rule = trim(rule_in);
  if (rule.empty()) throw std::invalid_argument("mu rule: empty");
  if (rule == "auto") return resolve_mu("nearest_valid(sqrt(n)*ln(n))", n, mode);
  const std::string prefix = "nearest_valid(";
  if (rule.rfind(prefix, 0) == 0) {
    if (rule.back() != ')') throw std::invalid_argument("mu rule: missing ')' in '" + rule + "'");
    const std::string inner = rule.substr(prefix.size(), rule.size() - prefix.size() - 1);
    return nearest_for_mode(n, eval_product(inner, n), mode);
  }
  int mu = 0;
  if (is_integer(rule)) {
    if (rule.size() > 9) throw std::invalid_argument("mu rule: value out of range");
    mu = std::stoi(rule);
    if (mu < 1) throw std::invalid_argument("mu must be >= 1");
  } else {
    mu = eval_product(rule, n);
  }
  require_valid(n, mu, mode);
  return mu;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string t = trim(item);
    if (!is_integer(t) || t.size() > 9) throw std::invalid_argument("bad integer '" + t + "' in list");
    out.push_back(std::stoi(t));
  }
  return out;
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.experiment_id.empty()) throw std::invalid_argument("experiment_id must be nonempty");
  if (cfg.objective != "jump" && cfg.objective != "onemax")
    throw std::invalid_argument("objective must be jump or onemax, got '" + cfg.objective + "'");
  if (cfg.n < 4) throw std::invalid_argument("n must be >= 4");
  if (cfg.objective == "jump") {
    if (cfg.ks.empty()) throw std::invalid_argument("k list must be nonempty");
    for (int k : cfg.ks)
      if (k < 1 || k > cfg.n)
        throw std::invalid_argument("k=" + std::to_string(k) + " outside [1, n]");
  }
  if (cfg.replicates < 1) throw std::invalid_argument("replicates must be >= 1");
  if (cfg.cap < 1) throw std::invalid_argument("cap must be >= 1");
  if (!(cfg.c > 0.0 && cfg.c <= 1.0)) throw std::invalid_argument("c must lie in (0, 1]");
  (void)resolve_mu(cfg.mu_rule, cfg.n, cfg.boundary_mode);
}

std::filesystem::path resolve_output_path(const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_relative()) {
    if (const char* dir = std::getenv(kOutputDirEnv); dir != nullptr && *dir != '\0')
      return std::filesystem::path(dir) / p;
  }
  return p;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << content;
  out.close();
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

std::filesystem::path summary_path_for(const std::filesystem::path& raw) {
  std::filesystem::path s = raw;
  s.replace_extension();
  s += ".summary.csv";
  return s;
}

SweepResult sweep(const ExperimentConfig& cfg) {
  validate(cfg);
  SweepResult res;
  res.mu = resolve_mu(cfg.mu_rule, cfg.n, cfg.boundary_mode);
  std::vector<int> ks = cfg.objective == "onemax" ? std::vector<int>{0} : cfg.ks;
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  for (int k : ks) {
    RunParams p;
    p.n = cfg.n;
    p.mu = res.mu;
    p.boundary_mode = cfg.boundary_mode;
    p.cap = cfg.cap;
    p.seed = cfg.seed;
    p.trace_stride = cfg.stride;
    const auto obj = make_objective(cfg.objective, cfg.n, k);
    auto recs = run_many(p, *obj, cfg.replicates, cfg.threads);
    res.records.insert(res.records.end(), recs.begin(), recs.end());
  }
  res.summary = summarize(res.records);
  res.raw_csv = write_raw_csv(cfg.experiment_id, res.records);
  res.summary_csv = write_summary_csv(res.summary);
  if (!cfg.out.empty()) {
    res.raw_path = resolve_output_path(cfg.out);
    res.summary_path = summary_path_for(res.raw_path);
    write_text_file(res.raw_path, res.raw_csv);
    write_text_file(res.summary_path, res.summary_csv);
  }
  return res;
}

}  // namespace cga
