#include <doctest.h>

#include <array>
#include <set>

#include "cga/frequency.hpp"
#include "cga/statistics.hpp"
#include "support/reference.hpp"

using namespace cga;

TEST_CASE("well-behaved predicate") {
  CHECK(check_well_behaved(10, 25));
  CHECK_FALSE(check_well_behaved(10, 13));
  CHECK(check_well_behaved(6, 9));
  CHECK(check_well_behaved(4, 4));
  CHECK_FALSE(check_well_behaved(4, 2));  // (1/2)*2 = 1 is odd
}

TEST_CASE("nearest valid mu scans upward") {
  CHECK(nearest_valid_mu(10, 13) == 15);
  CHECK(nearest_valid_mu(10, 25) == 25);
  CHECK(nearest_valid_mu(100, 461) == 500);
  CHECK(nearest_valid_mu(60, 32) == 60);
  CHECK_THROWS_AS(nearest_valid_mu(3, 5), std::invalid_argument);
  // Linear scan oracle over a range of inputs.
  for (int n = 4; n <= 30; ++n)
    for (int hint = 1; hint <= 40; ++hint) {
      int mu = hint;
      while ((n - 2) * mu % n != 0 || ((n - 2) * mu / n) % 2 != 0) ++mu;
      CHECK(nearest_valid_mu(n, hint) == mu);
    }
}

TEST_CASE("uniform construction") {
  const auto f = FrequencyVector::uniform(GridSpec(4, 4), BoundaryMode::Bounded);
  for (int i = 0; i < 4; ++i) {
    CHECK(f.index(i) == 1);
    CHECK(f.value(i) == Rational(1, 2));
  }
  const auto g = FrequencyVector::uniform(GridSpec(10, 25), BoundaryMode::Bounded);
  CHECK(g.distance() == Rational(5));
  CHECK_THROWS_WITH_AS(FrequencyVector::uniform(GridSpec(10, 13), BoundaryMode::Bounded),
                       doctest::Contains("nearest valid mu is 15"), std::invalid_argument);
  const auto h = FrequencyVector::uniform(GridSpec(10, 10), BoundaryMode::Free);
  CHECK(h.value(3) == Rational(1, 2));
  CHECK_THROWS_AS(FrequencyVector::uniform(GridSpec(10, 5), BoundaryMode::Free), std::invalid_argument);
  CHECK_THROWS_AS(GridSpec(3, 4), std::invalid_argument);
  CHECK_THROWS_AS(GridSpec(4, 0), std::invalid_argument);
}

TEST_CASE("from_indices validates range") {
  const GridSpec spec(10, 25);
  CHECK_THROWS_AS(FrequencyVector::from_indices(spec, BoundaryMode::Bounded, std::vector<int>(10, 21)),
                  std::invalid_argument);
  CHECK_THROWS_AS(FrequencyVector::from_indices(spec, BoundaryMode::Bounded, std::vector<int>(9, 0)),
                  std::invalid_argument);
  const auto f = FrequencyVector::from_indices(spec, BoundaryMode::Bounded, std::vector<int>(10, 20));
  CHECK(f.value(0) == Rational(9, 10));
  CHECK(f.at_upper(0));
}

TEST_CASE("minmax clamp") {
  CHECK(minmax_clamp(0.1, 0.05, 0.9) == 0.1);
  CHECK(minmax_clamp(0.1, 0.5, 0.9) == 0.5);
  CHECK(minmax_clamp(0.1, 0.95, 0.9) == 0.9);
  CHECK(minmax_clamp(Rational(1, 10), Rational(-1, 3), Rational(9, 10)) == Rational(1, 10));
}

TEST_CASE("update rule and clamping") {
  const GridSpec spec(10, 25);
  auto f = FrequencyVector::uniform(spec, BoundaryMode::Bounded);
  auto y1 = BitString::parse("1000000000");
  auto y2 = BitString::parse("0000000000");
  auto r = update(f, y1, y2);
  CHECK(r.next.value(0) == Rational(1, 2) + Rational(1, 25));
  CHECK(r.clamped_low.empty());

  std::vector<int> idx(10, 10);
  idx[0] = 0;
  f = FrequencyVector::from_indices(spec, BoundaryMode::Bounded, idx);
  r = update(f, BitString::parse("0000000000"), BitString::parse("1000000000"));
  CHECK(r.next.value(0) == Rational(1, 10));
  CHECK(r.clamped_low == std::vector<int>{0});
  CHECK(r.clamped_high.empty());

  const auto same = BitString::parse("1011001110");
  r = update(f, same, same);
  CHECK(r.next == f);
  CHECK(r.clamped_low.empty());
  CHECK(r.clamped_high.empty());
}

TEST_CASE("free mode update leaves the grid interval") {
  const GridSpec spec(4, 4);
  const auto f = FrequencyVector::from_indices(spec, BoundaryMode::Free, {1, 2, 3, 4});
  const auto r = update(f, BitString::parse("0000"), BitString::parse("1111"));
  CHECK(r.next.value(0) == Rational(0));
  CHECK(r.next.value(3) == Rational(3, 4));
  CHECK(r.clamped_low.empty());
}

TEST_CASE("grid closure over all short update sequences") {
  // Every per-coordinate move pattern, applied for four steps from the uniform vector.
  int configurations = 0;
  for (int n = 4; n <= 6; ++n)
    for (int mu = 1; mu <= 8; ++mu) {
      if (!check_well_behaved(n, mu)) continue;
      ++configurations;
      const GridSpec spec(n, mu);
      const Rational lo(1, n), hi = Rational(1) - Rational(1, n);
      const auto start = FrequencyVector::uniform(spec, BoundaryMode::Bounded);
      std::set<std::vector<int>> frontier = {{start.indices().begin(), start.indices().end()}};
      int patterns = 1;
      for (int i = 0; i < n; ++i) patterns *= 3;
      std::uint64_t failures = 0;
      for (int depth = 0; depth < 4; ++depth) {
        std::set<std::vector<int>> next;
        for (const auto& v : frontier) {
          const auto f = FrequencyVector::from_indices(spec, BoundaryMode::Bounded, v);
          for (int pat = 0; pat < patterns; ++pat) {
            BitString y1(n), y2(n);
            for (int i = 0, c = pat; i < n; ++i, c /= 3) {
              y1.set(i, c % 3 == 2);
              y2.set(i, c % 3 == 0);
            }
            const auto r = update(f, y1, y2);
            for (int i = 0; i < n; ++i) {
              const Rational value = r.next.value(i);
              const Rational steps = (value - lo) * Rational(mu);
              if (value < lo || hi < value || steps.den() != 1 ||
                  std::abs(r.next.index(i) - f.index(i)) > 1)
                ++failures;
            }
            next.insert({r.next.indices().begin(), r.next.indices().end()});
          }
        }
        frontier = std::move(next);
      }
      CHECK(failures == 0);
    }
  CHECK(configurations > 0);
}

TEST_CASE("exact norm and distance") {
  const GridSpec spec(10, 25);
  std::vector<int> idx(10);
  for (int i = 0; i < 10; ++i) idx[static_cast<std::size_t>(i)] = i < 5 ? 0 : 20;
  const auto f = FrequencyVector::from_indices(spec, BoundaryMode::Bounded, idx);
  CHECK(f.distance() == Rational(5));
  Rational sum;
  for (int i = 0; i < 10; ++i) sum += f.value(i);
  CHECK(f.norm1() == sum);
}

TEST_CASE("sampling two fair bits is uniform") {
  const auto f = FrequencyVector::from_indices(GridSpec(4, 4), BoundaryMode::Bounded, {1, 1, 1, 1});
  const SamplingTable table(f);
  CounterRng rng(11);
  std::array<std::uint64_t, 4> counts{};
  BitString x(4);
  for (int r = 0; r < 1'000'000; ++r) {
    sample_into(f, table, rng, x);
    ++counts[static_cast<std::size_t>(x[0] + 2 * x[1])];
  }
  const std::array<double, 4> probs = {0.25, 0.25, 0.25, 0.25};
  CHECK(chi_square_test(counts, probs).p_value >= 1e-6);
}

TEST_CASE("sampling marginals follow the frequencies") {
  const GridSpec spec(10, 25);
  std::vector<int> idx = {0, 20, 10, 5, 15, 1, 19, 10, 3, 12};
  const auto f = FrequencyVector::from_indices(spec, BoundaryMode::Bounded, idx);
  const SamplingTable table(f);
  CounterRng rng(5, 1, 2);
  std::vector<RunningStats> stats(10);
  BitString x(10);
  for (int r = 0; r < 1'000'000; ++r) {
    sample_into(f, table, rng, x);
    for (int i = 0; i < 10; ++i) stats[static_cast<std::size_t>(i)].add(x[i]);
  }
  for (int i = 0; i < 10; ++i) {
    const double p = f.probability(i);
    const double se = std::sqrt(p * (1 - p) / 1e6);
    CHECK(std::abs(stats[static_cast<std::size_t>(i)].mean() - p) <= 5 * se);
  }
  CHECK(std::abs(stats[0].mean() - 0.1) <= 3 * std::sqrt(0.09 / 1e6));
}

TEST_CASE("free-mode frequencies 0 and 1 are deterministic") {
  const auto f = FrequencyVector::from_indices(GridSpec(4, 4), BoundaryMode::Free, {0, 4, 2, 2});
  CounterRng rng(3);
  for (int r = 0; r < 1000; ++r) {
    const auto x = sample(f, rng);
    CHECK(x[0] == 0);
    CHECK(x[1] == 1);
  }
}

TEST_CASE("json round trip") {
  const auto f = FrequencyVector::from_indices(GridSpec(6, 9), BoundaryMode::Bounded, {0, 1, 2, 3, 4, 6});
  const auto j = to_json(f);
  CHECK(j.at("n") == 6);
  CHECK(j.at("mu") == 9);
  CHECK(j.at("boundary_mode") == "bounded");
  CHECK(frequency_vector_from_json(j) == f);
}

TEST_CASE("bit strings") {
  const auto x = BitString::parse("10110");
  CHECK(x.norm1() == 3);
  CHECK(x.str() == "10110");
  CHECK(hamming_distance(x, BitString::parse("00111")) == 2);
  CHECK_THROWS_AS(BitString::parse("10a"), std::invalid_argument);
}
