#pragma once

#include <cstdint>
#include <string>

#include "cga/frequency.hpp"
#include "cga/objective.hpp"
#include "cga/rational.hpp"

namespace cga {

/// Rescaling parameters of Y = exp(c * min{k/2 - D, k/4}).
class PotentialParams {
 public:
  static constexpr double kDefaultC = 0.05;

  /// Throws unless k >= 1 and 0 < c <= 1.
  explicit PotentialParams(int k, double c = kDefaultC);

  [[nodiscard]] int k() const { return k_; }
  [[nodiscard]] double c() const { return c_; }
  [[nodiscard]] double y_max() const;

 private:
  int k_;
  double c_;
};

/// D(f) = n - ||f||_1, exact.
Rational distance_D(const FrequencyVector& f);

/// Y as a function of the frequency distance.
double potential_Y_of_distance(const Rational& distance, const PotentialParams& p);
double potential_Y(const FrequencyVector& f, const PotentialParams& p);

enum class StateProfile {
  Balanced,     // all frequencies on two adjacent grid levels
  BoundaryMix,  // as many frequencies at 1/n as the target allows
};

std::string to_string(StateProfile profile);
StateProfile state_profile_from_string(const std::string& s);

/// A Bounded-mode vector with |D(f) - target| <= 1/mu. Throws
/// std::invalid_argument if the grid is not well behaved or the target lies
/// outside the reachable range [1, n-1].
FrequencyVector construct_state(const GridSpec& spec, const Rational& target, StateProfile profile);

struct DriftEstimate {
  int n = 0;
  int mu = 0;
  int k = 0;
  double c = 0.0;
  Rational distance;  // D(f) of the probed state
  std::string profile;
  std::uint64_t replicates = 0;
  bool exact = false;
  double mean = 0.0;
  double std_error = 0.0;
};

/// Monte Carlo estimate of E[Y(f_{t+1}) - Y(f_t)] over independent single
/// steps from f (stream (seed, 0, i) for step i). Unconditioned: callers
/// filter states with Y(f) = y_max themselves.
DriftEstimate estimate_drift(const FrequencyVector& f, const Objective& obj,
                             const PotentialParams& p, std::uint64_t replicates,
                             std::uint64_t seed, const std::string& profile = "");

/// Exact drift via exhaustive enumeration of the step (n <= 12).
DriftEstimate exact_drift(const FrequencyVector& f, const Objective& obj, const PotentialParams& p,
                          const std::string& profile = "");

}  // namespace cga
