#pragma once

#include <cstdint>
#include <limits>

namespace cga {

/// SplitMix64 output function: a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derives a stream key from (master_seed, replicate_id, stream_id).
constexpr std::uint64_t derive_key(std::uint64_t master_seed, std::uint64_t replicate_id,
                                   std::uint64_t stream_id) {
  std::uint64_t k = mix64(master_seed + 0x9e3779b97f4a7c15ULL);
  k = mix64(k ^ (replicate_id * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL));
  k = mix64(k ^ (stream_id * 0xaef17502108ef2d9ULL + 0x632be59bd9b4e019ULL));
  return k;
}

/// Counter-based generator: the i-th output is mix64(key + (i+1) * gamma).
///
/// Each (master_seed, replicate_id, stream_id) triple names an independent
/// stream, so results do not depend on the order in which streams are consumed.
/// Satisfies UniformRandomBitGenerator.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t master_seed, std::uint64_t replicate_id = 0,
                      std::uint64_t stream_id = 0)
      : key_(derive_key(master_seed, replicate_id, stream_id)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    ++counter_;
    return mix64(key_ + counter_ * kGamma);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>((*this)()) * bound) >> 64);
  }

  /// A child stream, independent of this one and of its other children.
  [[nodiscard]] CounterRng split(std::uint64_t stream_id) const {
    CounterRng child(0);
    child.key_ = mix64(key_ ^ mix64(stream_id + 0x2545f4914f6cdd1dULL));
    return child;
  }

  [[nodiscard]] std::uint64_t counter() const { return counter_; }

 private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace cga
