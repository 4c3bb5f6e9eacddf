#include <doctest.h>

#include "cga/objective.hpp"
#include "support/reference.hpp"

using namespace cga;

namespace {

BitString with_norm(int n, int ones) {
  BitString x(n);
  for (int i = 0; i < ones; ++i) x.set(i, true);
  return x;
}

}  // namespace

TEST_CASE("onemax counts ones") {
  CHECK(onemax(BitString::parse("10110")) == 3);
  CHECK(onemax(BitString::parse("00000")) == 0);
  CHECK(onemax(BitString::parse("11111")) == 5);
}

TEST_CASE("jump branches") {
  CHECK(jump(with_norm(10, 10), 3) == 13);
  CHECK(jump(with_norm(10, 8), 3) == 2);
  CHECK(jump(with_norm(10, 5), 3) == 8);
  CHECK(jump(with_norm(10, 7), 3) == 10);
  CHECK_THROWS_AS(Jump(10, 0), std::invalid_argument);
  CHECK_THROWS_AS(Jump(10, 11), std::invalid_argument);
  CHECK_THROWS_AS(jump(with_norm(4, 1), 5), std::invalid_argument);
}

TEST_CASE("gap membership") {
  CHECK(in_gap(with_norm(10, 9), 3));
  CHECK_FALSE(in_gap(with_norm(10, 7), 3));
  CHECK_FALSE(in_gap(with_norm(10, 10), 3));
  for (int ones = 0; ones <= 10; ++ones) CHECK_FALSE(in_gap(with_norm(10, ones), 1));
}

TEST_CASE("optimum detection") {
  CHECK(is_optimum(BitString::parse("11111")));
  CHECK_FALSE(is_optimum(BitString::parse("01111")));
  CHECK_FALSE(is_optimum(BitString::parse("00000")));
  const Jump j(5, 2);
  CHECK(j.is_optimum(BitString::parse("11111")));
  CHECK(j.optimum() == BitString::ones(5));
}

TEST_CASE("jump invariants, exhaustive over all n <= 16 and k") {
  // Fitness depends on ||x||_1 only, so every norm class is covered by one string;
  // the reference implementation is checked on full strings for small n.
  for (int n = 1; n <= 16; ++n)
    for (int k = 1; k <= n; ++k) {
      const Jump j(n, k);
      const Fitness top = j.evaluate(BitString::ones(n));
      CHECK(top == n + k);
      int failures = 0;
      for (int ones = 0; ones < n; ++ones) {
        const auto x = with_norm(n, ones);
        if (j.evaluate(x) >= top) ++failures;
        if (in_gap(x, k) && j.evaluate(x) != n - ones) ++failures;
        if (in_gap(x, k) && ones + 1 < n && j.evaluate(with_norm(n, ones + 1)) >= j.evaluate(x))
          ++failures;
        if (k == 1 && j.evaluate(x) != onemax(x) + 1) ++failures;
      }
      CHECK(failures == 0);
    }
  for (int n = 1; n <= 10; ++n)
    for (int k = 1; k <= n; ++k)
      for (std::uint32_t c = 0; c < (1U << n); ++c) {
        const auto bits = ref::bits_of(c, n);
        BitString x(n);
        for (int i = 0; i < n; ++i) x.set(i, bits[static_cast<std::size_t>(i)]);
        REQUIRE(jump(x, k) == ref::jump(bits, k));
      }
}

TEST_CASE("truth table objective") {
  std::vector<Fitness> table(8, 0);
  table[5] = 7;  // x = 101
  const TruthTable t(3, table);
  CHECK(t.optimum() == BitString::parse("101"));
  CHECK(t.evaluate(BitString::parse("101")) == 7);
  CHECK_FALSE(t.norm_based());
  table[6] = 7;
  CHECK_THROWS_AS(TruthTable(3, table), std::invalid_argument);
  CHECK_THROWS_AS(TruthTable(3, std::vector<Fitness>(7, 0)), std::invalid_argument);
}

TEST_CASE("objective serialization") {
  const Jump j(10, 3);
  CHECK(j.to_json() == nlohmann::json{{"kind", "jump"}, {"n", 10}, {"k", 3}});
  const auto back = objective_from_json(j.to_json());
  CHECK(back->kind() == ObjectiveKind::Jump);
  CHECK(back->jump_size() == 3);
  const auto om = objective_from_json({{"kind", "onemax"}, {"n", 7}});
  CHECK(om->dimension() == 7);
  CHECK(om->kind_name() == "onemax");
  CHECK_THROWS_AS(make_objective("leadingones", 5, 0), std::invalid_argument);
}
