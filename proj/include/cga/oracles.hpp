#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "cga/frequency.hpp"
#include "cga/objective.hpp"

namespace cga {

/// Exact probability vector over the integer support
/// [offset, offset + size). Probabilities are clamped at zero.
class DiscreteDistribution {
 public:
  DiscreteDistribution() = default;
  DiscreteDistribution(int offset, std::vector<double> probabilities);
  static DiscreteDistribution point_mass(int value);

  [[nodiscard]] int offset() const { return offset_; }
  [[nodiscard]] int min_value() const { return offset_; }
  [[nodiscard]] int max_value() const { return offset_ + static_cast<int>(p_.size()) - 1; }
  [[nodiscard]] std::span<const double> probabilities() const { return p_; }
  [[nodiscard]] double prob(int value) const;
  [[nodiscard]] double total() const;
  [[nodiscard]] double mean() const;
  /// Pr[X >= value].
  [[nodiscard]] double tail_ge(int value) const;
  /// Pr[X <= value].
  [[nodiscard]] double tail_le(int value) const;

 private:
  int offset_ = 0;
  std::vector<double> p_;
};

/// sup over all values of |a - b| summed / 2.
double total_variation(const DiscreteDistribution& a, const DiscreteDistribution& b);

/// Largest violation of a ⪰ b, i.e. max_h (Pr[b >= h] - Pr[a >= h]); <= 0 means a dominates b.
double dominance_violation(const DiscreteDistribution& a, const DiscreteDistribution& b);

/// Law of the sum of independent Bernoulli(p_i), by iterated convolution.
DiscreteDistribution poisson_binomial(std::span<const double> p);
DiscreteDistribution poisson_binomial(const FrequencyVector& f);
DiscreteDistribution binomial(int n, double p);

/// Law of X - Y for independent X ~ a, Y ~ b.
DiscreteDistribution difference(const DiscreteDistribution& a, const DiscreteDistribution& b);

/// Pr[Bin(n, p) >= k], by direct summation.
double binomial_tail(int n, double p, int k);
/// C(n, k) p^k.
double binomial_tail_bound(int n, double p, int k);
double binomial_coefficient(int n, int k);

/// Pr[||x1||_1 != ||x2||_1] for independent x1, x2 ~ Sample(f).
double pr_norms_differ(std::span<const double> f);

struct OptimumSampling {
  double probability = 0.0;  // prod_i f_i
  double bound = 0.0;        // exp(-D(f))
};
OptimumSampling optimum_sampling_probability(const FrequencyVector& f);

/// Bin(ell, 2(1/n)(1-1/n)): the number of lower-boundary positions where two samples differ.
DiscreteDistribution boundary_flip_law(int ell, int n);

/// Exact law of one cGA iteration from f, by enumerating all 4^n sample pairs.
class StepDistribution {
 public:
  static constexpr int kMaxDimension = 12;

  StepDistribution(const FrequencyVector& f, const Objective& obj);

  [[nodiscard]] const FrequencyVector& start() const { return start_; }
  /// Successor probabilities indexed by the base-3 code of the index changes
  /// (digit i is delta_i + 1).
  [[nodiscard]] std::span<const double> successor_probabilities() const { return successor_; }
  [[nodiscard]] std::uint64_t code_of(const FrequencyVector& next) const;
  [[nodiscard]] FrequencyVector successor(std::uint64_t code) const;
  [[nodiscard]] std::vector<std::pair<FrequencyVector, double>> successors() const;

  /// Law of ||x1||_1 (equivalently ||x2||_1).
  [[nodiscard]] const DiscreteDistribution& norm_law() const { return norm_law_; }
  /// Law of |M| for the lower boundary set.
  [[nodiscard]] const DiscreteDistribution& flip_law() const { return flip_law_; }
  /// Law of the upper-boundary analogue of |M|.
  [[nodiscard]] const DiscreteDistribution& upper_flip_law() const { return upper_flip_law_; }
  /// Law of mu * (||f_{t+1}||_1 - ||f_t||_1), i.e. net grid-index change.
  [[nodiscard]] DiscreteDistribution net_change_law() const;
  /// Pr[successor equals start].
  [[nodiscard]] double stay_probability() const;
  /// Pr[x1 == x2].
  [[nodiscard]] double identical_samples_probability() const { return identical_; }

 private:
  FrequencyVector start_;
  std::vector<double> successor_;
  DiscreteDistribution norm_law_, flip_law_, upper_flip_law_;
  double identical_ = 0.0;
};

inline StepDistribution exact_step_distribution(const FrequencyVector& f, const Objective& obj) {
  return {f, obj};
}

/// Law of mu * (||f_{t+1}||_1 - ||f_t||_1) by a dynamic program over
/// coordinates tracking (||x1||, ||x2||, change if x1 wins, change if x2 wins).
/// Independent of StepDistribution; `obj` must be norm based.
DiscreteDistribution net_change_law_by_coordinates(const FrequencyVector& f, const Objective& obj);

/// Law of H(x', 1^n) after one (1+1) EA iteration (standard bit mutation with
/// rate 1/n, offspring accepted iff not worse) from a parent with `norm1` ones.
/// `obj` must be norm based with n <= 12.
DiscreteDistribution ea_step_distance_law(int norm1, const Objective& obj);

/// Law of ||x1_rest||_1 - ||x2_rest||_1 for two independent samples of f_rest.
DiscreteDistribution counterexample_delta_law(std::span<const double> f_rest);

enum class CounterexampleStart {
  FStart,  // (1/2, 1/n, ..., 1/n)
  GStart,  // (1/2, ..., 1/2)
};

FrequencyVector counterexample_start_vector(CounterexampleStart start, int n, int mu);

/// Pr[f'_1 = 1/2 + 1/mu] after one cGA iteration on onemax from the given start.
double counterexample_freq_probability(CounterexampleStart start, int n, int mu);

}  // namespace cga
