#include "cga/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cga/engine.hpp"
#include "cga/oracles.hpp"
#include "cga/statistics.hpp"

namespace cga {

PotentialParams::PotentialParams(int k, double c) : k_(k), c_(c) {
  if (k < 1) throw std::invalid_argument("PotentialParams: k must be >= 1");
  if (!(c > 0.0 && c <= 1.0)) throw std::invalid_argument("PotentialParams: c must lie in (0, 1]");
}

double PotentialParams::y_max() const { return std::exp(c_ * k_ / 4.0); }

Rational distance_D(const FrequencyVector& f) { return f.distance(); }

double potential_Y_of_distance(const Rational& distance, const PotentialParams& p) {
  // min{k/2 - D, k/4} is evaluated exactly; only exp() is floating point.
  const Rational half_gap = Rational(p.k(), 2) - distance;
  const Rational quarter(p.k(), 4);
  return std::exp(p.c() * std::min(half_gap, quarter).to_double());
}

double potential_Y(const FrequencyVector& f, const PotentialParams& p) {
  return potential_Y_of_distance(f.distance(), p);
}

std::string to_string(StateProfile profile) {
  return profile == StateProfile::Balanced ? "balanced" : "boundary-mix";
}

StateProfile state_profile_from_string(const std::string& s) {
  if (s == "balanced") return StateProfile::Balanced;
  if (s == "boundary-mix" || s == "boundarymix") return StateProfile::BoundaryMix;
  throw std::invalid_argument("unknown state profile '" + s + "' (expected balanced|boundary-mix)");
}

namespace {

// Largest grid index whose value is <= v (v a frequency), clamped to [0, n_mu].
std::int64_t floor_index(const GridSpec& spec, const Rational& v) {
  // idx = (v - 1/n) * mu
  const Rational scaled = (v - Rational(1, spec.n())) * Rational(spec.mu());
  std::int64_t idx = scaled.num() / scaled.den();
  if (scaled.num() < 0 && scaled.num() % scaled.den() != 0) --idx;
  return std::clamp<std::int64_t>(idx, 0, spec.n_mu());
}

// Nearest grid index to v.
std::int64_t nearest_index(const GridSpec& spec, const Rational& v) {
  const Rational scaled = (v - Rational(1, spec.n())) * Rational(spec.mu()) + Rational(1, 2);
  std::int64_t idx = scaled.num() / scaled.den();
  if (scaled.num() < 0 && scaled.num() % scaled.den() != 0) --idx;
  return std::clamp<std::int64_t>(idx, 0, spec.n_mu());
}

}  // namespace

FrequencyVector construct_state(const GridSpec& spec, const Rational& target,
                                StateProfile profile) {
  if (!spec.well_behaved())
    throw std::invalid_argument("construct_state: grid not well behaved");
  const int n = spec.n();
  if (target < Rational(1) || target > Rational(n - 1))
    throw std::invalid_argument("construct_state: target D=" + target.str() +
                                " outside the reachable range [1, " + std::to_string(n - 1) + "]");
  const Rational low(1, n);
  const Rational step(1, spec.mu());
  const Rational sum = Rational(n) - target;  // required ||f||_1

  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  if (profile == StateProfile::Balanced) {
    // Every coordinate at level b, m of them one step higher.
    const std::int64_t b = floor_index(spec, sum / Rational(n));
    const Rational base_sum = Rational(n) * (low + Rational(b) * step);
    const Rational extra = (sum - base_sum) / step + Rational(1, 2);
    std::int64_t m = extra.num() / extra.den();
    m = std::clamp<std::int64_t>(m, 0, b < spec.n_mu() ? n : 0);
    for (int i = 0; i < n; ++i)
      idx[static_cast<std::size_t>(i)] = static_cast<int>(b + (i < m ? 1 : 0));
  } else {
    // ell coordinates at 1/n, the rest at 1 - 1/n, then lower one coordinate
    // to 1/2 and one more to an intermediate level to absorb the remainder.
    const Rational high = Rational(1) - low;
    const Rational span = high - low;
    const Rational ell_q = (target - low * Rational(n)) / span;
    int ell = static_cast<int>(ell_q.num() / ell_q.den());
    ell = std::clamp(ell, 0, n);
    for (int i = 0; i < n; ++i)
      idx[static_cast<std::size_t>(i)] = i < ell ? 0 : spec.n_mu();
    Rational remainder = target - (Rational(ell) * high + Rational(n - ell) * low);
    const Rational to_half = high - Rational(1, 2);
    int next = ell;
    while (next + 1 < n && remainder >= to_half) {
      idx[static_cast<std::size_t>(next)] = spec.n_mu() / 2;
      remainder -= to_half;
      ++next;
    }
    if (next < n && remainder > Rational(0))
      idx[static_cast<std::size_t>(next)] = static_cast<int>(nearest_index(spec, high - remainder));
  }
  return FrequencyVector::from_indices(spec, BoundaryMode::Bounded, std::move(idx));
}

DriftEstimate estimate_drift(const FrequencyVector& f, const Objective& obj,
                             const PotentialParams& p, std::uint64_t replicates,
                             std::uint64_t seed, const std::string& profile) {
  if (replicates < 1) throw std::invalid_argument("estimate_drift: replicates must be >= 1");
  const double y0 = potential_Y(f, p);
  Stepper stepper(f, obj);
  RunningStats stats;
  FrequencyVector next = f;
  for (std::uint64_t r = 0; r < replicates; ++r) {
    CounterRng rng(seed, 0, r);
    next = f;
    stepper.advance(next, rng);
    stats.add(potential_Y(next, p) - y0);
  }
  return {f.size(), f.spec().mu(), p.k(),  p.c(),        f.distance(), profile,
          replicates, false,        stats.mean(), stats.std_error()};
}

DriftEstimate exact_drift(const FrequencyVector& f, const Objective& obj, const PotentialParams& p,
                          const std::string& profile) {
  const StepDistribution dist(f, obj);
  const auto net = dist.net_change_law();
  const Rational d0 = f.distance();
  const double y0 = potential_Y_of_distance(d0, p);
  CompensatedSum mean;
  for (int v = net.min_value(); v <= net.max_value(); ++v) {
    const double pr = net.prob(v);
    if (pr == 0.0) continue;
    const Rational d1 = d0 - Rational(v, f.spec().mu());
    mean.add(pr * (potential_Y_of_distance(d1, p) - y0));
  }
  return {f.size(), f.spec().mu(), p.k(), p.c(), d0, profile, 0, true, mean.value(), 0.0};
}

}  // namespace cga
