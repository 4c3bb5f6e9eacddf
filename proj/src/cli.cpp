#include "cga/cli.hpp"

#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "cga/engine.hpp"
#include "cga/experiments.hpp"
#include "cga/objective.hpp"
#include "cga/oracles.hpp"
#include "cga/potentials.hpp"
#include "cga/records.hpp"
#include "cga/verifiers.hpp"

namespace cga {

namespace {

struct Flags {
  std::optional<int> n;
  std::string k;
  std::string mu = "auto";
  bool mu_given = false;
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> replicates;
  std::optional<std::uint64_t> cap;
  std::optional<double> c;
  std::string profile = "both";
  std::string out;
  std::string format = "csv";
  std::string boundary_mode = "bounded";
  std::uint64_t stride = 0;
  unsigned threads = 1;
  std::uint64_t replicate = 0;
  std::string objective;
  std::string distances;
  bool exact = false;
  std::string claim_id;
  std::string oracle;
  std::optional<double> p;
  std::optional<int> ell;
  std::optional<int> norm;
  std::string indices;
  std::string start = "fstart";
};

Rational parse_rational(const std::string& s) {
  const auto slash = s.find('/');
  try {
    std::size_t used = 0;
    if (slash == std::string::npos) {
      const long long v = std::stoll(s, &used);
      if (used != s.size()) throw std::invalid_argument("");
      return Rational(v);
    }
    const long long a = std::stoll(s.substr(0, slash), &used);
    if (used != slash) throw std::invalid_argument("");
    const std::string rest = s.substr(slash + 1);
    const long long b = std::stoll(rest, &used);
    if (used != rest.size() || b == 0) throw std::invalid_argument("");
    return Rational(a, b);
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot parse '" + s + "' as an integer or fraction a/b");
  }
}

std::vector<Rational> parse_rational_list(const std::string& s) {
  std::vector<Rational> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_rational(item));
  if (out.empty()) throw std::invalid_argument("--D needs at least one distance");
  return out;
}

int require_n(const Flags& f) {
  if (!f.n) throw std::invalid_argument("--n is required");
  return *f.n;
}

int single_k(const Flags& f) {
  const auto ks = parse_int_list(f.k);
  if (ks.size() != 1) throw std::invalid_argument("--k must be a single integer here");
  return ks.front();
}

/// Objective from --objective / --k: jump when k is given, onemax otherwise.
std::unique_ptr<Objective> objective_of(const Flags& f, int n) {
  std::string kind = f.objective;
  if (kind.empty()) kind = f.k.empty() ? "onemax" : "jump";
  if (kind == "jump" && f.k.empty()) throw std::invalid_argument("--k is required for jump");
  return make_objective(kind, n, kind == "jump" ? single_k(f) : 0);
}

FrequencyVector vector_of(const Flags& f, int n, int mu, BoundaryMode mode) {
  const GridSpec spec(n, mu);
  if (f.indices.empty()) return FrequencyVector::uniform(spec, mode);
  return FrequencyVector::from_indices(spec, mode, parse_int_list(f.indices));
}

void emit_distribution(const DiscreteDistribution& d, const Flags& f, std::ostream& out) {
  if (output_format_from_string(f.format) == OutputFormat::Json) {
    nlohmann::json rows = nlohmann::json::array();
    for (int v = d.min_value(); v <= d.max_value(); ++v)
      rows.push_back({{"value", v}, {"probability", d.prob(v)}});
    out << nlohmann::json{{"oracle", f.oracle}, {"law", rows}}.dump(2) << '\n';
    return;
  }
  std::ostringstream csv;
  csv << "value,probability\n";
  for (int v = d.min_value(); v <= d.max_value(); ++v)
    csv << v << ',' << format_double(d.prob(v)) << '\n';
  if (!f.out.empty()) {
    write_text_file(resolve_output_path(f.out), csv.str());
  } else {
    out << csv.str();
  }
}

int cmd_run(const Flags& f, std::ostream& out) {
  const int n = require_n(f);
  const auto mode = boundary_mode_from_string(f.boundary_mode);
  RunParams p;
  p.n = n;
  p.mu = resolve_mu(f.mu, n, mode);
  p.boundary_mode = mode;
  p.cap = f.cap.value_or(10'000'000);
  p.seed = f.seed;
  p.replicate = f.replicate;
  p.trace_stride = f.stride;
  if (p.cap < 1) throw std::invalid_argument("--cap must be >= 1");
  const auto obj = objective_of(f, n);
  const RunRecord r = run(p, *obj);
  if (f.stride > 0) {
    const auto path = resolve_output_path(f.out.empty() ? "trace.csv" : f.out);
    write_text_file(path, write_trace_csv(r));
  }
  if (output_format_from_string(f.format) == OutputFormat::Json) {
    out << nlohmann::json{{"kind", r.kind},
                          {"n", n},
                          {"k", r.k},
                          {"mu", p.mu},
                          {"boundary_mode", to_string(mode)},
                          {"seed", p.seed},
                          {"replicate", p.replicate},
                          {"cap", p.cap},
                          {"iterations", r.iterations},
                          {"evaluations", r.evaluations},
                          {"hit_optimum", r.hit_optimum},
                          {"premature_convergence", r.premature_convergence}}
               .dump(2)
        << '\n';
  } else {
    out << csv_header(kRawColumns) << raw_csv_row("run", r);
  }
  return 0;
}

int cmd_scale(const Flags& f, std::ostream& out) {
  ExperimentConfig cfg;
  cfg.experiment_id = "scale";
  cfg.n = require_n(f);
  cfg.objective = f.objective.empty() ? "jump" : f.objective;
  if (cfg.objective == "jump") cfg.ks = parse_int_list(f.k);
  cfg.mu_rule = f.mu;
  cfg.boundary_mode = boundary_mode_from_string(f.boundary_mode);
  cfg.replicates = f.replicates.value_or(10);
  cfg.cap = f.cap.value_or(10'000'000);
  cfg.seed = f.seed;
  cfg.out = f.out.empty() ? "runs.csv" : f.out;
  cfg.format = output_format_from_string(f.format);
  cfg.threads = f.threads;
  const auto res = sweep(cfg);
  if (cfg.format == OutputFormat::Json) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& s : res.summary)
      rows.push_back({{"kind", s.kind},
                      {"n", s.n},
                      {"k", s.k},
                      {"mu", s.mu},
                      {"replicates", s.replicates},
                      {"hits", s.hits},
                      {"censored", s.censored},
                      {"median_iterations", s.median_iterations},
                      {"mean_iterations", s.mean_iterations},
                      {"min_iterations", s.min_iterations},
                      {"max_iterations", s.max_iterations},
                      {"median_evaluations", s.median_evaluations},
                      {"censored_flag", s.censored_flag}});
    out << nlohmann::json{{"raw", res.raw_path.string()},
                          {"summary", res.summary_path.string()},
                          {"groups", rows}}
               .dump(2)
        << '\n';
  } else {
    out << res.summary_csv;
  }
  return 0;
}

int cmd_drift(const Flags& f, std::ostream& out) {
  const int n = require_n(f);
  if (f.k.empty()) throw std::invalid_argument("--k is required");
  const int k = single_k(f);
  const int mu = f.mu_given ? resolve_mu(f.mu, n) : nearest_valid_mu(n, 300);
  if (f.distances.empty()) throw std::invalid_argument("--D is required (e.g. --D 6,8,10)");
  const auto distances = parse_rational_list(f.distances);
  std::vector<StateProfile> profiles;
  if (f.profile == "both")
    profiles = {StateProfile::Balanced, StateProfile::BoundaryMix};
  else
    profiles = {state_profile_from_string(f.profile)};
  const PotentialParams params(k, f.c.value_or(PotentialParams::kDefaultC));
  const Jump obj(n, k);
  const GridSpec spec(n, mu);
  const std::uint64_t replicates = f.replicates.value_or(100'000);
  std::ostringstream csv;
  csv << "n,mu,k,c,profile,D_target,D,Y,replicates,mean,std_error,exact\n";
  nlohmann::json rows = nlohmann::json::array();
  std::uint64_t probe = 0;
  for (const auto& d : distances)
    for (auto prof : profiles) {
      const auto state = construct_state(spec, d, prof);
      const auto e = f.exact ? exact_drift(state, obj, params, to_string(prof))
                             : estimate_drift(state, obj, params, replicates,
                                              derive_key(f.seed, probe, 8), to_string(prof));
      ++probe;
      const double y = potential_Y(state, params);
      csv << n << ',' << mu << ',' << k << ',' << format_double(params.c()) << ',' << e.profile
          << ',' << d.str() << ',' << e.distance.str() << ',' << format_double(y) << ','
          << e.replicates << ',' << format_double(e.mean) << ',' << format_double(e.std_error)
          << ',' << (e.exact ? 1 : 0) << '\n';
      rows.push_back({{"profile", e.profile},
                      {"D_target", d.str()},
                      {"D", e.distance.str()},
                      {"Y", y},
                      {"replicates", e.replicates},
                      {"mean", e.mean},
                      {"std_error", e.std_error},
                      {"exact", e.exact}});
    }
  if (!f.out.empty()) write_text_file(resolve_output_path(f.out), csv.str());
  if (output_format_from_string(f.format) == OutputFormat::Json)
    out << nlohmann::json{{"n", n}, {"mu", mu}, {"k", k}, {"c", params.c()},
                          {"y_max", params.y_max()}, {"probes", rows}}
               .dump(2)
        << '\n';
  else
    out << csv.str();
  return 0;
}

int cmd_verify(const Flags& f, std::ostream& out) {
  VerifyOptions opt;
  opt.n = f.n;
  if (!f.k.empty()) opt.k = single_k(f);
  if (f.mu_given) {
    if (!f.n && f.claim_id != "L1" && f.claim_id != "sleepy")
      throw std::invalid_argument("--mu needs --n for this claim");
    opt.mu = resolve_mu(f.mu, f.n.value_or(f.claim_id == "L1" ? 60 : 256));
  }
  opt.replicates = f.replicates;
  opt.cap = f.cap;
  opt.c = f.c;
  opt.seed = f.seed;
  opt.threads = f.threads;
  const auto rep = run_verifier(f.claim_id, opt);
  if (!f.out.empty() && !rep.raw_csv.empty())
    write_text_file(resolve_output_path(f.out), rep.raw_csv);
  out << to_json(rep).dump(2) << '\n';
  return rep.passed || rep.inconclusive ? 0 : 1;
}

int cmd_oracle(const Flags& f, std::ostream& out) {
  const std::string& name = f.oracle;
  if (name == "binomial") {
    if (!f.p) throw std::invalid_argument("--p is required");
    emit_distribution(binomial(require_n(f), *f.p), f, out);
  } else if (name == "boundary-flip") {
    if (!f.ell) throw std::invalid_argument("--ell is required");
    emit_distribution(boundary_flip_law(*f.ell, require_n(f)), f, out);
  } else if (name == "poisson-binomial" || name == "step-norm" || name == "step-net-change" ||
             name == "step-flip") {
    const int n = require_n(f);
    const auto mode = boundary_mode_from_string(f.boundary_mode);
    const auto vec = vector_of(f, n, resolve_mu(f.mu, n, mode), mode);
    if (name == "poisson-binomial") {
      emit_distribution(poisson_binomial(vec), f, out);
    } else {
      const auto obj = objective_of(f, n);
      const StepDistribution dist(vec, *obj);
      if (name == "step-norm") emit_distribution(dist.norm_law(), f, out);
      else if (name == "step-flip") emit_distribution(dist.flip_law(), f, out);
      else emit_distribution(dist.net_change_law(), f, out);
    }
  } else if (name == "ea-step") {
    const int n = require_n(f);
    if (!f.norm) throw std::invalid_argument("--norm is required");
    emit_distribution(ea_step_distance_law(*f.norm, *objective_of(f, n)), f, out);
  } else if (name == "counterexample-delta") {
    const int n = require_n(f);
    const int mu = f.mu_given ? resolve_mu(f.mu, n) : n;
    CounterexampleStart start;
    if (f.start == "fstart") start = CounterexampleStart::FStart;
    else if (f.start == "gstart") start = CounterexampleStart::GStart;
    else throw std::invalid_argument("--start must be fstart or gstart");
    const auto vec = counterexample_start_vector(start, n, mu);
    const auto p = vec.probabilities();
    emit_distribution(counterexample_delta_law(std::span<const double>(p).subspan(1)), f, out);
  } else {
    std::string known;
    for (const auto& o : oracle_names()) known += (known.empty() ? "" : ", ") + o;
    throw std::invalid_argument("unknown oracle '" + name + "' (known: " + known + ")");
  }
  return 0;
}

}  // namespace

const std::vector<std::string>& oracle_names() {
  static const std::vector<std::string> names = {
      "binomial",  "boundary-flip", "poisson-binomial",    "step-norm",
      "step-flip", "step-net-change", "ea-step", "counterexample-delta"};
  return names;
}

int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"cGA simulation and verification lab", "cgalab"};
  app.require_subcommand(1);
  Flags f;
  app.add_option("--n", f.n, "problem size");
  app.add_option("--k", f.k, "jump size, or a comma list for scale");
  auto* mu_opt = app.add_option("--mu", f.mu, "integer, auto, or nearest_valid(expr)");
  app.add_option("--seed", f.seed, "master seed");
  app.add_option("--replicates", f.replicates, "replicate count");
  app.add_option("--cap", f.cap, "iteration cap");
  app.add_option("--c", f.c, "potential constant c in (0, 1]");
  app.add_option("--profile", f.profile, "balanced, boundary-mix or both");
  app.add_option("--out", f.out, "output path (relative paths honour " + std::string(kOutputDirEnv) + ")");
  app.add_option("--format", f.format, "csv or json");
  app.add_option("--boundary-mode", f.boundary_mode, "bounded or free");
  app.add_option("--stride", f.stride, "trace decimation stride (0: no trace)");
  app.add_option("--threads", f.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--replicate", f.replicate, "replicate id for run");
  app.add_option("--objective", f.objective, "onemax or jump");

  auto* run_cmd = app.add_subcommand("run", "single cGA run")->fallthrough();
  auto* scale_cmd = app.add_subcommand("scale", "runtime sweep over k")->fallthrough();
  auto* drift_cmd = app.add_subcommand("drift", "drift probes of the potential Y")->fallthrough();
  drift_cmd->add_option("--D", f.distances, "comma list of target distances (a or a/b)");
  drift_cmd->add_flag("--exact", f.exact, "exhaustive enumeration instead of Monte Carlo");
  auto* verify_cmd = app.add_subcommand("verify", "run one claim verifier")->fallthrough();
  verify_cmd->add_option("claim_id", f.claim_id, "claim id")->required();
  auto* oracle_cmd = app.add_subcommand("oracle", "dump an exact distribution")->fallthrough();
  oracle_cmd->add_option("name", f.oracle, "oracle name")->required();
  oracle_cmd->add_option("--p", f.p, "success probability (binomial)");
  oracle_cmd->add_option("--ell", f.ell, "boundary count (boundary-flip)");
  oracle_cmd->add_option("--norm", f.norm, "parent ||x||_1 (ea-step)");
  oracle_cmd->add_option("--indices", f.indices, "comma list of grid indices");
  oracle_cmd->add_option("--start", f.start, "fstart or gstart (counterexample-delta)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  f.mu_given = mu_opt->count() > 0;

  try {
    if (*run_cmd) return cmd_run(f, out);
    if (*scale_cmd) return cmd_scale(f, out);
    if (*drift_cmd) return cmd_drift(f, out);
    if (*verify_cmd) return cmd_verify(f, out);
    if (*oracle_cmd) return cmd_oracle(f, out);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return cli_run(args, std::cout, std::cerr);
}

}  // namespace cga
