#include <doctest.h>

#include <map>
#include <set>

#include "cga/engine.hpp"
#include "cga/statistics.hpp"
#include "support/reference.hpp"

using namespace cga;

namespace {

std::vector<int> bits(const BitString& x) {
  std::vector<int> v(static_cast<std::size_t>(x.size()));
  for (int i = 0; i < x.size(); ++i) v[static_cast<std::size_t>(i)] = x[i];
  return v;
}

std::vector<Rational> values(const FrequencyVector& f) {
  std::vector<Rational> v;
  for (int i = 0; i < f.size(); ++i) v.push_back(f.value(i));
  return v;
}

RunParams params(int n, int mu, std::uint64_t cap, std::uint64_t seed) {
  RunParams p;
  p.n = n;
  p.mu = mu;
  p.cap = cap;
  p.seed = seed;
  return p;
}

}  // namespace

TEST_CASE("rank_pair puts the winner first and keeps x1 on ties") {
  const OneMax om(4);
  const auto a = BitString::parse("1100");
  const auto b = BitString::parse("0111");
  const auto c = BitString::parse("0011");
  CHECK(&rank_pair(a, b, om).first == &b);
  CHECK(&rank_pair(b, a, om).first == &b);
  CHECK(&rank_pair(a, c, om).first == &a);
  CHECK(&rank_pair(c, a, om).first == &c);
}

TEST_CASE("single update from the uniform vector") {
  const GridSpec spec(4, 4);
  const auto f = FrequencyVector::uniform(spec, BoundaryMode::Bounded);
  const OneMax om(4);
  const auto x1 = BitString::parse("1111");
  const auto x2 = BitString::parse("0111");
  const auto [y1, y2] = rank_pair(x2, x1, om);
  const auto r = update(f, y1, y2);
  CHECK(r.next.value(0) == Rational(3, 4));
  for (int i = 1; i < 4; ++i) CHECK(r.next.value(i) == Rational(1, 2));
  const auto expected =
      ref::update(values(f), bits(x2), bits(x1), ref::onemax, 4, true);
  CHECK(values(r.next) == expected);
}

TEST_CASE("step agrees with the reference update on random draws") {
  const GridSpec spec(8, 16);
  const Jump obj(8, 3);
  const auto fit = [](const std::vector<int>& x) { return ref::jump(x, 3); };
  CounterRng state_rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<int> idx(8);
    for (auto& v : idx) v = static_cast<int>(state_rng.below(static_cast<std::uint64_t>(spec.n_mu()) + 1));
    const auto f = FrequencyVector::from_indices(spec, BoundaryMode::Bounded, idx);
    CounterRng rng(5, static_cast<std::uint64_t>(trial));
    const auto r = step(f, obj, rng);
    const auto expected = ref::update(values(f), bits(r.info.x1), bits(r.info.x2), fit, 16, true);
    CHECK(values(r.next) == expected);
    CHECK(r.info.delta_norm == r.next.norm1() - f.norm1());
    CHECK(r.info.fitness1 == obj.evaluate(r.info.x1));
    CHECK(r.info.winner_is_x1 == (r.info.fitness1 >= r.info.fitness2));
    // |delta| <= H(x1, x2) / mu
    const Rational h(hamming_distance(r.info.x1, r.info.x2), 16);
    CHECK(r.info.delta_norm <= h);
    CHECK(-r.info.delta_norm <= h);
    for (int i : r.info.flip_set) CHECK(f.at_lower(i));
  }
}

TEST_CASE("empirical successor law matches enumeration") {
  const GridSpec spec(4, 8);
  const auto f = FrequencyVector::from_indices(spec, BoundaryMode::Bounded, {0, 1, 3, 4});
  const OneMax om(4);
  const auto law = ref::successor_law(values(f), ref::onemax, 8, true);
  std::map<std::vector<Rational>, std::size_t> cell;
  std::vector<double> probs;
  for (const auto& [v, p] : law) {
    cell[v] = probs.size();
    probs.push_back(p);
  }
  std::vector<std::uint64_t> counts(probs.size(), 0);
  Stepper stepper(f, om);
  const int draws = 200000;
  for (int s = 0; s < draws; ++s) {
    CounterRng rng(11, static_cast<std::uint64_t>(s));
    auto g = f;
    stepper.advance(g, rng);
    const auto it = cell.find(values(g));
    REQUIRE(it != cell.end());
    ++counts[it->second];
  }
  CHECK(chi_square_test(counts, probs).p_value >= 1e-6);
}

TEST_CASE("run is deterministic and replicate streams differ") {
  const OneMax om(12);
  const auto p = params(12, 24, 100000, 42);
  CHECK(run(p, om) == run(p, om));
  const auto serial = run_many(p, om, 40, 1);
  const auto threaded = run_many(p, om, 40, 4);
  CHECK(serial == threaded);
  std::set<std::uint64_t> iters;
  for (std::size_t r = 0; r < serial.size(); ++r) {
    CHECK(serial[r].params.replicate == r);
    CHECK(serial[r].evaluations == 2 * serial[r].iterations);
    iters.insert(serial[r].iterations);
  }
  CHECK(iters.size() > 10);
  std::set<std::uint64_t> keys;
  for (std::uint64_t r = 0; r < 1000; ++r) keys.insert(derive_key(42, r, 0));
  CHECK(keys.size() == 1000);
}

TEST_CASE("jump with k = 1 behaves exactly like onemax") {
  const OneMax om(16);
  const Jump j1(16, 1);
  const auto p = params(16, 16, 1000000, 9);
  const auto a = run_many(p, om, 20);
  const auto b = run_many(p, j1, 20);
  for (std::size_t r = 0; r < a.size(); ++r) {
    CHECK(a[r].iterations == b[r].iterations);
    CHECK(a[r].hit_optimum == b[r].hit_optimum);
  }
}

TEST_CASE("small onemax instances always finish") {
  const OneMax om(4);
  for (const auto& rec : run_many(params(4, 4, 1000000, 3), om, 100)) {
    CHECK(rec.hit_optimum);
    CHECK_FALSE(rec.premature_convergence);
    CHECK(rec.iterations <= 1000000);
  }
}

TEST_CASE("hit iteration is the first iteration that samples the optimum") {
  const GridSpec spec(6, 6);
  const Jump obj(6, 2);
  const auto p = params(6, 6, 100000, 21);
  for (std::uint64_t r = 0; r < 30; ++r) {
    auto q = p;
    q.replicate = r;
    const auto rec = run(q, obj);
    REQUIRE(rec.hit_optimum);
    auto f = FrequencyVector::uniform(spec, BoundaryMode::Bounded);
    CounterRng rng(21, r, 0);
    std::uint64_t first = 0;
    for (std::uint64_t t = 1; t <= q.cap && first == 0; ++t) {
      const auto s = step(f, obj, rng);
      if (is_optimum(s.info.x1) || is_optimum(s.info.x2)) first = t;
      f = s.next;
    }
    CHECK(rec.iterations == first);
  }
}

TEST_CASE("a single iteration rarely samples the optimum") {
  const OneMax om(20);
  const auto recs = run_many(params(20, 20, 1, 8), om, 100000);
  int hits = 0;
  for (const auto& rec : recs) {
    hits += rec.hit_optimum;
    CHECK(rec.iterations == 1);
  }
  // Expected 1e5 * (2 * 2^-20 - 2^-40) ~ 0.19 hits; Poisson upper tail beyond 4 is < 1e-5.
  CHECK(hits <= 4);
}

TEST_CASE("large jumps are not solved within a small budget") {
  const Jump obj(60, 10);
  for (const auto& rec : run_many(params(60, 60, 10000, 4), obj, 20)) {
    CHECK_FALSE(rec.hit_optimum);
    CHECK(rec.iterations == 10000);
  }
}

TEST_CASE("lower boundary flips dominate the clamped net loss") {
  const GridSpec spec(10, 5);
  const Jump obj(10, 3);
  std::vector<int> idx(10);
  for (int i = 0; i < 10; ++i) idx[static_cast<std::size_t>(i)] = i % 2 ? spec.n_mu() : 0;
  auto f = FrequencyVector::from_indices(spec, BoundaryMode::Bounded, idx);
  CounterRng rng(31);
  Stepper stepper(f, obj);
  for (int t = 0; t < 5000; ++t) {
    StepInfo info;
    const auto before = f;
    stepper.advance(f, rng, &info);
    int lower_change = 0;
    for (int i : info.lower_set) lower_change += f.index(i) - before.index(i);
    CHECK(lower_change >= 0);
    CHECK(lower_change <= static_cast<int>(info.flip_set.size()));
    for (int i : info.clamped_low) CHECK(before.at_lower(i));
    for (int i : info.clamped_high) CHECK(before.at_upper(i));
  }
}

TEST_CASE("free mode reports premature convergence") {
  const OneMax om(8);
  RunParams p = params(8, 2, 100000, 6);
  p.boundary_mode = BoundaryMode::Free;
  int premature = 0;
  for (const auto& rec : run_many(p, om, 200)) {
    CHECK(rec.hit_optimum != rec.premature_convergence);
    premature += rec.premature_convergence;
  }
  CHECK(premature > 0);
  CHECK_THROWS_AS(run(params(8, 3, 10, 1), om), std::invalid_argument);
  RunParams odd = p;
  odd.mu = 3;
  CHECK_THROWS_AS(run(odd, om), std::invalid_argument);
}

TEST_CASE("trace respects the stride and ends at the last iteration") {
  const Jump obj(30, 6);
  RunParams p = params(30, 30, 1005, 2);
  p.trace_stride = 100;
  const auto rec = run(p, obj);
  REQUIRE_FALSE(rec.hit_optimum);
  REQUIRE(rec.trace.size() == 11);
  for (std::size_t i = 0; i < 10; ++i) CHECK(rec.trace[i].t == 100 * (i + 1));
  CHECK(rec.trace.back().t == 1005);
  for (const auto& row : rec.trace) {
    CHECK(row.distance >= Rational(0));
    CHECK(row.lower_count + row.upper_count <= 30);
    CHECK(row.best_fitness >= 0);
  }
  CHECK_THROWS_AS(run(params(30, 30, 0, 1), obj), std::invalid_argument);
}
