#include "support/reference.hpp"

#include <cmath>

namespace ref {

std::vector<int> bits_of(std::uint32_t code, int n) {
  std::vector<int> x(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = (code >> i) & 1U;
  return x;
}

namespace {

double prob_of(const std::vector<double>& p, std::uint32_t code) {
  double pr = 1.0;
  for (std::size_t i = 0; i < p.size(); ++i) pr *= (code >> i) & 1U ? p[i] : 1.0 - p[i];
  return pr;
}

}  // namespace

Law norm_law(const std::vector<double>& p) {
  Law law;
  const int n = static_cast<int>(p.size());
  for (std::uint32_t c = 0; c < (1U << n); ++c) law[__builtin_popcount(c)] += prob_of(p, c);
  return law;
}

std::uint64_t choose(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::vector<std::uint64_t> row(static_cast<std::size_t>(n) + 1, 0);
  row[0] = 1;
  for (int i = 1; i <= n; ++i)
    for (int j = i; j >= 1; --j) row[static_cast<std::size_t>(j)] += row[static_cast<std::size_t>(j) - 1];
  return row[static_cast<std::size_t>(k)];
}

double binomial_tail(int n, double p, int k) {
  double s = 0.0;
  for (int j = std::max(k, 0); j <= n; ++j)
    s += static_cast<double>(choose(n, j)) * std::pow(p, j) * std::pow(1 - p, n - j);
  return s;
}

Law norm_difference_law(const std::vector<double>& p) {
  Law law;
  const int m = static_cast<int>(p.size());
  for (std::uint32_t a = 0; a < (1U << m); ++a)
    for (std::uint32_t b = 0; b < (1U << m); ++b)
      law[__builtin_popcount(a) - __builtin_popcount(b)] += prob_of(p, a) * prob_of(p, b);
  return law;
}

double norms_differ(const std::vector<double>& p) {
  double same = 0.0;
  for (const auto& [v, pr] : norm_difference_law(p))
    if (v == 0) same += pr;
  return 1.0 - same;
}

std::int64_t onemax(const std::vector<int>& x) {
  std::int64_t s = 0;
  for (int b : x) s += b;
  return s;
}

std::int64_t jump(const std::vector<int>& x, int k) {
  const std::int64_t n = static_cast<std::int64_t>(x.size());
  const std::int64_t ones = onemax(x);
  return (ones <= n - k || ones == n) ? k + ones : n - ones;
}

std::vector<cga::Rational> update(const std::vector<cga::Rational>& f, const std::vector<int>& x1,
                                  const std::vector<int>& x2, const Fitness& fit, int mu,
                                  bool bounded) {
  const bool first = fit(x1) >= fit(x2);
  const auto& y1 = first ? x1 : x2;
  const auto& y2 = first ? x2 : x1;
  const auto n = static_cast<std::int64_t>(f.size());
  const cga::Rational lo(1, n), hi = cga::Rational(1) - cga::Rational(1, n);
  std::vector<cga::Rational> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    cga::Rational v = f[i] + cga::Rational(y1[i] - y2[i], mu);
    if (bounded) {
      if (v < lo) v = lo;
      if (hi < v) v = hi;
    }
    out[i] = v;
  }
  return out;
}

std::map<std::vector<cga::Rational>, double> successor_law(const std::vector<cga::Rational>& f,
                                                           const Fitness& fit, int mu,
                                                           bool bounded) {
  std::vector<double> p;
  for (const auto& v : f) p.push_back(v.to_double());
  const int n = static_cast<int>(f.size());
  std::map<std::vector<cga::Rational>, double> law;
  for (std::uint32_t a = 0; a < (1U << n); ++a)
    for (std::uint32_t b = 0; b < (1U << n); ++b) {
      const double pr = prob_of(p, a) * prob_of(p, b);
      if (pr == 0.0) continue;
      law[update(f, bits_of(a, n), bits_of(b, n), fit, mu, bounded)] += pr;
    }
  return law;
}

Law ea_distance_law(const std::vector<int>& parent, const Fitness& fit) {
  const int n = static_cast<int>(parent.size());
  const double q = 1.0 / n;
  Law law;
  const auto parent_fit = fit(parent);
  for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
    std::vector<int> child = parent;
    int flips = 0;
    for (int i = 0; i < n; ++i)
      if ((mask >> i) & 1U) {
        child[static_cast<std::size_t>(i)] ^= 1;
        ++flips;
      }
    const double pr = std::pow(q, flips) * std::pow(1 - q, n - flips);
    const auto& kept = fit(child) >= parent_fit ? child : parent;
    law[n - static_cast<int>(onemax(kept))] += pr;
  }
  return law;
}

}  // namespace ref
