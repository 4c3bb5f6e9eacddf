#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "cga/random.hpp"
#include "cga/rational.hpp"

namespace cga {

enum class BoundaryMode { Bounded, Free };

std::string to_string(BoundaryMode mode);
BoundaryMode boundary_mode_from_string(const std::string& s);

/// True iff (1 - 2/n) * mu is an even integer, i.e. every reachable
/// frequency lies on {1/n + i/mu} and 1/2 is one of them.
bool check_well_behaved(int n, int mu);

/// Smallest mu >= mu_hint that is well behaved for n.
int nearest_valid_mu(int n, int mu_hint);

/// Dimension and hypothetical population size of a frequency grid.
class GridSpec {
 public:
  GridSpec(int n, int mu);

  [[nodiscard]] int n() const { return n_; }
  [[nodiscard]] int mu() const { return mu_; }
  [[nodiscard]] bool well_behaved() const { return check_well_behaved(n_, mu_); }
  /// (1 - 2/n) * mu; only meaningful when well behaved.
  [[nodiscard]] int n_mu() const { return (n_ - 2) * mu_ / n_; }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  int n_;
  int mu_;
};

/// A sampled search point.
class BitString {
 public:
  BitString() = default;
  explicit BitString(int n) : bits_(static_cast<std::size_t>(n), 0) {}
  explicit BitString(std::vector<std::uint8_t> bits);
  /// Parses a string such as "10110".
  static BitString parse(const std::string& s);
  static BitString ones(int n);

  [[nodiscard]] int size() const { return static_cast<int>(bits_.size()); }
  [[nodiscard]] int norm1() const;
  [[nodiscard]] std::uint8_t operator[](int i) const { return bits_[static_cast<std::size_t>(i)]; }
  void set(int i, bool value) { bits_[static_cast<std::size_t>(i)] = value ? 1 : 0; }
  [[nodiscard]] std::span<const std::uint8_t> bits() const { return bits_; }
  [[nodiscard]] std::span<std::uint8_t> mutable_bits() { return bits_; }
  [[nodiscard]] std::string str() const;

  friend bool operator==(const BitString&, const BitString&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

int hamming_distance(const BitString& a, const BitString& b);

/// The cGA's frequency vector, stored exactly as integer grid indices.
///
/// Bounded mode: f_i = 1/n + idx_i/mu with idx_i in [0..n_mu].
/// Free mode:    f_i = idx_i/mu with idx_i in [0..mu] (so 1/2 is idx mu/2).
class FrequencyVector {
 public:
  /// All frequencies 1/2. Throws std::invalid_argument if the grid does not
  /// contain 1/2 (Bounded: not well behaved; Free: mu odd).
  static FrequencyVector uniform(const GridSpec& spec, BoundaryMode mode);
  static FrequencyVector from_indices(const GridSpec& spec, BoundaryMode mode,
                                      std::vector<int> indices);

  [[nodiscard]] const GridSpec& spec() const { return spec_; }
  [[nodiscard]] BoundaryMode mode() const { return mode_; }
  [[nodiscard]] int size() const { return spec_.n(); }
  [[nodiscard]] int index(int i) const { return idx_[static_cast<std::size_t>(i)]; }
  [[nodiscard]] std::span<const int> indices() const { return idx_; }

  /// Grid index of the lowest and highest admissible frequency.
  [[nodiscard]] int lower_index() const { return 0; }
  [[nodiscard]] int upper_index() const;
  [[nodiscard]] bool at_lower(int i) const { return index(i) == lower_index(); }
  [[nodiscard]] bool at_upper(int i) const { return index(i) == upper_index(); }

  /// Common denominator of all grid values (n*mu bounded, mu free).
  [[nodiscard]] std::int64_t denominator() const;
  /// Numerator of the grid value for index `idx` over denominator().
  [[nodiscard]] std::int64_t numerator_of(int idx) const;
  [[nodiscard]] Rational value_of(int idx) const { return {numerator_of(idx), denominator()}; }
  [[nodiscard]] Rational value(int i) const { return value_of(index(i)); }
  [[nodiscard]] double probability(int i) const { return value(i).to_double(); }
  [[nodiscard]] std::vector<double> probabilities() const;

  /// ||f||_1, exact.
  [[nodiscard]] Rational norm1() const;
  /// n - ||f||_1, exact.
  [[nodiscard]] Rational distance() const;

  /// Applies f' = f + (y1 - y2)/mu in place, clamping to the grid in Bounded
  /// mode. Clamped coordinates are appended to the optional outputs.
  void apply_update(const BitString& y1, const BitString& y2,
                    std::vector<int>* clamped_low = nullptr,
                    std::vector<int>* clamped_high = nullptr);

  friend bool operator==(const FrequencyVector&, const FrequencyVector&) = default;

 private:
  FrequencyVector(const GridSpec& spec, BoundaryMode mode, std::vector<int> idx);

  GridSpec spec_;
  BoundaryMode mode_;
  std::vector<int> idx_;
};

/// Component-wise cap max{lower, min{r, upper}}.
template <typename T>
constexpr T minmax_clamp(const T& lower, const T& r, const T& upper) {
  return r < lower ? lower : (upper < r ? upper : r);
}

/// Per-grid-index 64-bit acceptance thresholds for Bernoulli sampling.
/// A bit with index idx is 1 iff a uniform 64-bit draw is below threshold(idx)
/// (or the frequency is exactly 1). Bias from 1/2^64 truncation is ignored.
class SamplingTable {
 public:
  SamplingTable(const GridSpec& spec, BoundaryMode mode);
  explicit SamplingTable(const FrequencyVector& f) : SamplingTable(f.spec(), f.mode()) {}

  [[nodiscard]] bool draw(int idx, std::uint64_t u) const {
    return u < threshold_[static_cast<std::size_t>(idx)] || idx == certain_index_;
  }

 private:
  std::vector<std::uint64_t> threshold_;
  int certain_index_ = -1;
};

/// Samples x ~ Sample(f) into `out` (resized as needed).
void sample_into(const FrequencyVector& f, const SamplingTable& table, CounterRng& rng,
                 BitString& out);
BitString sample(const FrequencyVector& f, CounterRng& rng);

struct UpdateResult {
  FrequencyVector next;
  std::vector<int> clamped_low;
  std::vector<int> clamped_high;
};

/// f_next = minmax(1/n, f + (y1 - y2)/mu, 1 - 1/n) (no capping in Free mode).
UpdateResult update(const FrequencyVector& f, const BitString& y1, const BitString& y2);

nlohmann::json to_json(const FrequencyVector& f);
FrequencyVector frequency_vector_from_json(const nlohmann::json& j);

}  // namespace cga
