#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cga/frequency.hpp"
#include "cga/potentials.hpp"
#include "cga/rational.hpp"

namespace cga {

enum class VerificationMode { Exact, Statistical };

/// Outcome of one executable check.
struct VerificationReport {
  std::string claim_id;
  VerificationMode mode = VerificationMode::Exact;
  bool passed = false;
  bool inconclusive = false;
  double statistic = 0.0;
  double threshold = 0.0;
  nlohmann::json details = nlohmann::json::object();
  std::uint64_t seed = 0;
  std::uint64_t replicates = 0;
  double std_error = 0.0;
  int attempts = 1;
  /// Per-replicate (or per-probe) raw outcomes; byte-identical under a fixed seed.
  std::string raw_csv;
};

nlohmann::json to_json(const VerificationReport& r);

/// The twelve claim ids, in canonical order.
const std::vector<std::string>& claim_ids();

/// Runs `attempt(seed)`; if it fails (and is not inconclusive) re-runs once
/// with a derived seed and returns the second outcome.
VerificationReport with_retry(const std::function<VerificationReport(std::uint64_t)>& attempt,
                              std::uint64_t seed);

/// Seed used for the second attempt of with_retry().
std::uint64_t retry_seed(std::uint64_t seed);

// --- L2 -----------------------------------------------------------------

struct BinomialGrid {
  int n_max = 20;
  std::vector<double> ps = {0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40, 0.45, 0.50,
                            0.55, 0.60, 0.65, 0.70, 0.75, 0.80, 0.85, 0.90, 0.95};
};
VerificationReport verify_binomial_bound(const BinomialGrid& grid = {});

// --- L3 -----------------------------------------------------------------

struct ConcentrationGrid {
  std::vector<Rational> upper_deviations = {Rational(0), Rational(1, 4), Rational(1, 2),
                                            Rational(1), Rational(2), Rational(4)};
  std::vector<Rational> lower_deviations = {Rational(0), Rational(1, 4), Rational(1, 2),
                                            Rational(3, 4), Rational(1)};
};

inline constexpr std::uint64_t kConcentrationSeed = 0x5eed0003;

/// `random_count` random grid vectors with n in [4..n_max] plus boundary-heavy adversarial ones.
std::vector<FrequencyVector> concentration_vectors(std::uint64_t seed, int random_count = 500,
                                                   int n_max = 30);
VerificationReport verify_sampling_concentration(const std::vector<FrequencyVector>& vectors,
                                                 const ConcentrationGrid& grid = {});

// --- L4 -----------------------------------------------------------------

struct BoundaryFlipConfig {
  int n_max = 8;                  // exact |M| law for all n in [4..n_max], ell in [0..n]
  std::uint64_t steps = 100'000;  // simulated steps for the pathwise chain
};
VerificationReport verify_boundary_flips(const BoundaryFlipConfig& cfg, std::uint64_t seed);

// --- L5 -----------------------------------------------------------------

struct DifferenceBoundConfig {
  int n_max = 14;
  int sample_count = 1000;
  std::uint64_t vector_seed = 0x5eed0005;
};
VerificationReport verify_difference_bound(const DifferenceBoundConfig& cfg = {});

// --- L1 -----------------------------------------------------------------

struct TrivialBoundConfig {
  int n = 60;
  int mu = 4020;  // smallest well-behaved mu >= 4000 for n = 60
  std::uint64_t iterations = 1000;
  std::uint64_t replicates = 100;
  int jump_k = 5;
};
VerificationReport verify_trivial_lower_bound(const TrivialBoundConfig& cfg, std::uint64_t seed);

// --- sleepy -------------------------------------------------------------

struct SleepyConfig {
  int n = 256;
  int mu = 256;
  std::uint64_t replicates = 1000;
};
/// T = floor(log2(n) / 2).
int sleepy_horizon(int n);
VerificationReport verify_sleepy_bits(const SleepyConfig& cfg, std::uint64_t seed);

// --- opt-bound ----------------------------------------------------------

struct OptimumBoundConfig {
  int n = 50;
  int count = 10'000;
  std::uint64_t vector_seed = 0x5eed0007;
};
VerificationReport verify_optimum_sampling_bound(const OptimumBoundConfig& cfg = {});

// --- T1-drift -----------------------------------------------------------

struct DriftProbe {
  int n = 0;
  int mu = 0;
  int k = 0;
  Rational distance;
  StateProfile profile = StateProfile::Balanced;
};

struct DriftBoundConfig {
  int n = 200;
  int mu = 0;  // 0: nearest_valid_mu(n, 300)
  int k = 20;
  double c = PotentialParams::kDefaultC;
  std::vector<Rational> distances = {6, 8, 10, 14, 16, 18};
  std::vector<StateProfile> profiles = {StateProfile::Balanced, StateProfile::BoundaryMix};
  std::uint64_t replicates = 100'000;
  /// Small states where the Monte Carlo estimator is compared with enumeration.
  std::vector<DriftProbe> cross_checks = {
      {12, 24, 8, Rational(3), StateProfile::Balanced},
      {12, 24, 8, Rational(3), StateProfile::BoundaryMix},
      {12, 24, 8, Rational(5), StateProfile::BoundaryMix},
      {8, 8, 4, Rational(2), StateProfile::Balanced},
      {8, 8, 4, Rational(2), StateProfile::BoundaryMix},
  };
};
VerificationReport verify_drift_bound(const DriftBoundConfig& cfg, std::uint64_t seed);

// --- T1-scaling ---------------------------------------------------------

struct ScalingConfig {
  int n = 60;
  int mu = 0;  // 0: nearest_valid_mu(n, ceil(sqrt(n) ln n))
  std::vector<int> ks = {4, 8, 12, 16};
  std::uint64_t replicates = 50;
  std::uint64_t cap = 10'000'000;
  unsigned threads = 0;
};
VerificationReport verify_runtime_scaling(const ScalingConfig& cfg, std::uint64_t seed);

// --- CE-drift -----------------------------------------------------------

struct CounterexampleDriftConfig {
  int n = 400;
  int k = 50;
  int mu = 400;
  std::uint64_t replicates = 100'000;
};
VerificationReport verify_counterexample_drift(const CounterexampleDriftConfig& cfg,
                                               std::uint64_t seed);

// --- CE-freq ------------------------------------------------------------

/// mu = n for every entry.
VerificationReport verify_counterexample_frequency(const std::vector<int>& ns = {10, 20, 40, 80,
                                                                                 160});

// --- L6 -----------------------------------------------------------------

VerificationReport verify_ea_domination(int n_max = 10);

// --- engine cross-validation -------------------------------------------

struct EngineConsistencyConfig {
  int n_max = 10;
  std::uint64_t steps = 1'000'000;
  double p_threshold = 1e-6;
};
VerificationReport verify_engine_consistency(const EngineConsistencyConfig& cfg,
                                             std::uint64_t seed);

/// Options shared by the `verify` CLI subcommand; unset fields keep defaults.
struct VerifyOptions {
  std::optional<int> n, k, mu;
  std::optional<std::uint64_t> replicates, cap;
  std::optional<double> c;
  std::uint64_t seed = 1;
  unsigned threads = 0;
};

/// Dispatches a claim id (one of claim_ids() or "engine-xval").
/// Throws std::invalid_argument for unknown ids.
VerificationReport run_verifier(const std::string& claim_id, const VerifyOptions& opt);

}  // namespace cga
