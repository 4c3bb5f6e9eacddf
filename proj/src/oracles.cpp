#include "cga/oracles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "cga/statistics.hpp"

namespace cga {

DiscreteDistribution::DiscreteDistribution(int offset, std::vector<double> probabilities)
    : offset_(offset), p_(std::move(probabilities)) {
  for (auto& v : p_)
    if (!(v > 0.0)) v = 0.0;
}

DiscreteDistribution DiscreteDistribution::point_mass(int value) { return {value, {1.0}}; }

double DiscreteDistribution::prob(int value) const {
  const int i = value - offset_;
  if (i < 0 || i >= static_cast<int>(p_.size())) return 0.0;
  return p_[static_cast<std::size_t>(i)];
}

double DiscreteDistribution::total() const {
  CompensatedSum s;
  for (double v : p_) s.add(v);
  return s.value();
}

double DiscreteDistribution::mean() const {
  CompensatedSum s;
  for (std::size_t i = 0; i < p_.size(); ++i) s.add(p_[i] * (offset_ + static_cast<int>(i)));
  return s.value();
}

double DiscreteDistribution::tail_ge(int value) const {
  CompensatedSum s;
  for (int v = std::max(value, min_value()); v <= max_value(); ++v) s.add(prob(v));
  return s.value();
}

double DiscreteDistribution::tail_le(int value) const {
  CompensatedSum s;
  for (int v = min_value(); v <= std::min(value, max_value()); ++v) s.add(prob(v));
  return s.value();
}

double total_variation(const DiscreteDistribution& a, const DiscreteDistribution& b) {
  const int lo = std::min(a.min_value(), b.min_value());
  const int hi = std::max(a.max_value(), b.max_value());
  CompensatedSum s;
  for (int v = lo; v <= hi; ++v) s.add(std::abs(a.prob(v) - b.prob(v)));
  return s.value() / 2.0;
}

double dominance_violation(const DiscreteDistribution& a, const DiscreteDistribution& b) {
  const int lo = std::min(a.min_value(), b.min_value());
  const int hi = std::max(a.max_value(), b.max_value());
  double worst = -1.0;
  for (int h = lo; h <= hi + 1; ++h) worst = std::max(worst, b.tail_ge(h) - a.tail_ge(h));
  return worst;
}

DiscreteDistribution poisson_binomial(std::span<const double> p) {
  std::vector<double> q(p.size() + 1, 0.0);
  q[0] = 1.0;
  std::size_t len = 1;
  for (double pi : p) {
    if (pi < 0.0 || pi > 1.0) throw std::invalid_argument("poisson_binomial: p outside [0,1]");
    for (std::size_t s = len; s > 0; --s) q[s] = q[s] * (1.0 - pi) + q[s - 1] * pi;
    q[0] *= 1.0 - pi;
    ++len;
  }
  for (auto& v : q)
    if (v < 1e-300) v = std::max(v, 0.0);
  return {0, std::move(q)};
}

DiscreteDistribution poisson_binomial(const FrequencyVector& f) {
  const auto p = f.probabilities();
  return poisson_binomial(std::span<const double>(p));
}

double binomial_coefficient(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  long double c = 1.0L;
  for (int i = 1; i <= k; ++i) c = c * static_cast<long double>(n - k + i) / i;
  // Exact integers below 2^53; the running quotient can drift by rounding.
  return static_cast<double>(c < 9.0e15L ? std::round(c) : c);
}

DiscreteDistribution binomial(int n, double p) {
  if (n < 0) throw std::invalid_argument("binomial: n must be >= 0");
  std::vector<double> q(static_cast<std::size_t>(n) + 1);
  for (int j = 0; j <= n; ++j)
    q[static_cast<std::size_t>(j)] =
        binomial_coefficient(n, j) * std::pow(p, j) * std::pow(1.0 - p, n - j);
  return {0, std::move(q)};
}

DiscreteDistribution difference(const DiscreteDistribution& a, const DiscreteDistribution& b) {
  const auto pa = a.probabilities();
  const auto pb = b.probabilities();
  const int offset = a.min_value() - b.max_value();
  std::vector<CompensatedSum> acc(pa.size() + pb.size() - 1);
  // value = (a.min + i) - (b.min + j) = offset + i + (|b| - 1 - j)
  for (std::size_t i = 0; i < pa.size(); ++i)
    for (std::size_t j = 0; j < pb.size(); ++j) acc[i + (pb.size() - 1 - j)].add(pa[i] * pb[j]);
  std::vector<double> out(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) out[i] = acc[i].value();
  return {offset, std::move(out)};
}

double binomial_tail(int n, double p, int k) {
  if (k <= 0) return 1.0;
  if (k > n) return 0.0;
  CompensatedSum s;
  for (int j = k; j <= n; ++j)
    s.add(binomial_coefficient(n, j) * std::pow(p, j) * std::pow(1.0 - p, n - j));
  return s.value();
}

double binomial_tail_bound(int n, double p, int k) {
  return binomial_coefficient(n, k) * std::pow(p, k);
}

double pr_norms_differ(std::span<const double> f) {
  const auto q = poisson_binomial(f);
  CompensatedSum same;
  for (double v : q.probabilities()) same.add(v * v);
  return 1.0 - same.value();
}

OptimumSampling optimum_sampling_probability(const FrequencyVector& f) {
  double product = 1.0;
  for (int i = 0; i < f.size(); ++i) product *= f.probability(i);
  return {product, std::exp(-f.distance().to_double())};
}

DiscreteDistribution boundary_flip_law(int ell, int n) {
  if (n < 1 || ell < 0 || ell > n)
    throw std::invalid_argument("boundary_flip_law: need 0 <= ell <= n");
  const double inv = 1.0 / n;
  return binomial(ell, 2.0 * inv * (1.0 - inv));
}

namespace {

std::uint64_t pow3(int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) r *= 3;
  return r;
}

DiscreteDistribution from_sums(int offset, const std::vector<CompensatedSum>& acc) {
  std::vector<double> p(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) p[i] = acc[i].value();
  return {offset, std::move(p)};
}

}  // namespace

StepDistribution::StepDistribution(const FrequencyVector& f, const Objective& obj) : start_(f) {
  const int n = f.size();
  if (n > kMaxDimension)
    throw std::invalid_argument("exact_step_distribution: n=" + std::to_string(n) +
                                " exceeds the enumeration limit of " +
                                std::to_string(kMaxDimension));
  if (obj.dimension() != n)
    throw std::invalid_argument("exact_step_distribution: objective dimension mismatch");

  const std::uint32_t points = 1U << n;
  std::vector<double> prob(points);
  std::vector<Fitness> fit(points);
  std::vector<int> norm(points);
  const auto p = f.probabilities();
  BitString x(n);
  for (std::uint32_t code = 0; code < points; ++code) {
    double pr = 1.0;
    for (int i = 0; i < n; ++i) {
      const bool bit = (code >> i) & 1U;
      x.set(i, bit);
      pr *= bit ? p[static_cast<std::size_t>(i)] : 1.0 - p[static_cast<std::size_t>(i)];
    }
    prob[code] = pr;
    fit[code] = obj.evaluate(x);
    norm[code] = std::popcount(code);
  }

  std::uint32_t low_mask = 0, high_mask = 0;
  for (int i = 0; i < n; ++i) {
    if (f.at_lower(i)) low_mask |= 1U << i;
    if (f.at_upper(i)) high_mask |= 1U << i;
  }
  std::vector<std::uint64_t> weight(points, 0);  // sum of 3^i over set bits
  for (std::uint32_t m = 1; m < points; ++m) {
    const int low = std::countr_zero(m);
    weight[m] = weight[m & (m - 1)] + pow3(low);
  }
  const std::uint64_t base = weight[points - 1];  // every digit 1: no change

  successor_.assign(pow3(n), 0.0);
  std::vector<double> comp(successor_.size(), 0.0);
  std::vector<CompensatedSum> norm_acc(static_cast<std::size_t>(n) + 1);
  std::vector<CompensatedSum> flip_acc(static_cast<std::size_t>(std::popcount(low_mask)) + 1);
  std::vector<CompensatedSum> upper_acc(static_cast<std::size_t>(std::popcount(high_mask)) + 1);
  CompensatedSum identical;

  for (std::uint32_t a = 0; a < points; ++a) {
    norm_acc[static_cast<std::size_t>(norm[a])].add(prob[a]);
    for (std::uint32_t b = 0; b < points; ++b) {
      const double pr = prob[a] * prob[b];
      if (pr == 0.0) continue;
      const bool a_wins = fit[a] >= fit[b];
      const std::uint32_t y1 = a_wins ? a : b;
      const std::uint32_t y2 = a_wins ? b : a;
      const std::uint32_t up = y1 & ~y2 & ~high_mask;
      const std::uint32_t down = ~y1 & y2 & ~low_mask & (points - 1);
      const std::uint64_t cell = base + weight[up] - weight[down];
      // Neumaier step on (successor_[cell], comp[cell]).
      double& s = successor_[cell];
      const double t = s + pr;
      comp[cell] += std::abs(s) >= pr ? (s - t) + pr : (pr - t) + s;
      s = t;
      const std::uint32_t diff = a ^ b;
      flip_acc[static_cast<std::size_t>(std::popcount(diff & low_mask))].add(pr);
      upper_acc[static_cast<std::size_t>(std::popcount(diff & high_mask))].add(pr);
      if (diff == 0) identical.add(pr);
    }
  }
  for (std::size_t i = 0; i < successor_.size(); ++i) successor_[i] += comp[i];
  norm_law_ = from_sums(0, norm_acc);
  flip_law_ = from_sums(0, flip_acc);
  upper_flip_law_ = from_sums(0, upper_acc);
  identical_ = identical.value();
}

std::uint64_t StepDistribution::code_of(const FrequencyVector& next) const {
  if (next.size() != start_.size()) throw std::invalid_argument("code_of: dimension mismatch");
  std::uint64_t code = 0;
  std::uint64_t scale = 1;
  for (int i = 0; i < start_.size(); ++i) {
    const int delta = next.index(i) - start_.index(i);
    if (delta < -1 || delta > 1) throw std::invalid_argument("code_of: not a one-step successor");
    code += static_cast<std::uint64_t>(delta + 1) * scale;
    scale *= 3;
  }
  return code;
}

FrequencyVector StepDistribution::successor(std::uint64_t code) const {
  std::vector<int> idx(start_.indices().begin(), start_.indices().end());
  for (auto& v : idx) {
    v += static_cast<int>(code % 3) - 1;
    code /= 3;
  }
  return FrequencyVector::from_indices(start_.spec(), start_.mode(), std::move(idx));
}

std::vector<std::pair<FrequencyVector, double>> StepDistribution::successors() const {
  std::vector<std::pair<FrequencyVector, double>> out;
  for (std::uint64_t c = 0; c < successor_.size(); ++c)
    if (successor_[c] > 0.0) out.emplace_back(successor(c), successor_[c]);
  return out;
}

DiscreteDistribution StepDistribution::net_change_law() const {
  const int n = start_.size();
  std::vector<CompensatedSum> acc(2 * static_cast<std::size_t>(n) + 1);
  for (std::uint64_t c = 0; c < successor_.size(); ++c) {
    if (successor_[c] == 0.0) continue;
    int net = 0;
    std::uint64_t code = c;
    for (int i = 0; i < n; ++i, code /= 3) net += static_cast<int>(code % 3) - 1;
    acc[static_cast<std::size_t>(net + n)].add(successor_[c]);
  }
  return from_sums(-n, acc);
}

double StepDistribution::stay_probability() const {
  std::uint64_t base = 0, scale = 1;
  for (int i = 0; i < start_.size(); ++i, scale *= 3) base += scale;
  return successor_[base];
}

DiscreteDistribution net_change_law_by_coordinates(const FrequencyVector& f,
                                                   const Objective& obj) {
  if (!obj.norm_based())
    throw std::invalid_argument("net_change_law_by_coordinates: objective must be norm based");
  const int n = f.size();
  if (n > 40) throw std::invalid_argument("net_change_law_by_coordinates: n exceeds 40");
  const std::size_t side = static_cast<std::size_t>(n) + 1;
  const std::size_t span = 2 * static_cast<std::size_t>(n) + 1;
  const auto at = [&](int s1, int s2, int u, int v) {
    return ((static_cast<std::size_t>(s1) * side + static_cast<std::size_t>(s2)) * span +
            static_cast<std::size_t>(u + n)) * span + static_cast<std::size_t>(v + n);
  };
  std::vector<double> cur(side * side * span * span, 0.0), nxt(cur.size());
  cur[at(0, 0, 0, 0)] = 1.0;
  for (int i = 0; i < n; ++i) {
    std::fill(nxt.begin(), nxt.end(), 0.0);
    const double p = f.probability(i);
    const int up = f.at_upper(i) ? 0 : 1;
    const int down = f.at_lower(i) ? 0 : -1;
    for (int s1 = 0; s1 <= i; ++s1)
      for (int s2 = 0; s2 <= i; ++s2)
        for (int u = -i; u <= i; ++u)
          for (int v = -i; v <= i; ++v) {
            const double w = cur[at(s1, s2, u, v)];
            if (w == 0.0) continue;
            nxt[at(s1, s2, u, v)] += w * (1 - p) * (1 - p);
            nxt[at(s1 + 1, s2 + 1, u, v)] += w * p * p;
            // x1_i = 1, x2_i = 0: moves up if x1 wins, down if x2 wins.
            nxt[at(s1 + 1, s2, u + up, v + down)] += w * p * (1 - p);
            nxt[at(s1, s2 + 1, u + down, v + up)] += w * (1 - p) * p;
          }
    std::swap(cur, nxt);
  }
  std::vector<CompensatedSum> acc(span);
  for (int s1 = 0; s1 <= n; ++s1)
    for (int s2 = 0; s2 <= n; ++s2) {
      const bool x1_wins = obj.fitness_of_norm(s1) >= obj.fitness_of_norm(s2);
      for (int u = -n; u <= n; ++u)
        for (int v = -n; v <= n; ++v) {
          const double w = cur[at(s1, s2, u, v)];
          if (w != 0.0) acc[static_cast<std::size_t>((x1_wins ? u : v) + n)].add(w);
        }
    }
  return from_sums(-n, acc);
}

DiscreteDistribution ea_step_distance_law(int norm1, const Objective& obj) {
  const int n = obj.dimension();
  if (n > StepDistribution::kMaxDimension)
    throw std::invalid_argument("ea_step_distance_law: n exceeds 12");
  if (!obj.norm_based())
    throw std::invalid_argument("ea_step_distance_law: objective must depend on ||x||_1 only");
  if (norm1 < 0 || norm1 > n) throw std::invalid_argument("ea_step_distance_law: bad parent norm");
  const double q = 1.0 / n;
  const Fitness parent = obj.fitness_of_norm(norm1);
  std::vector<CompensatedSum> acc(static_cast<std::size_t>(n) + 1);
  for (int a = 0; a <= norm1; ++a) {
    const double pa = binomial_coefficient(norm1, a) * std::pow(q, a) * std::pow(1 - q, norm1 - a);
    for (int b = 0; b <= n - norm1; ++b) {
      const double pb =
          binomial_coefficient(n - norm1, b) * std::pow(q, b) * std::pow(1 - q, n - norm1 - b);
      const int child = norm1 - a + b;
      const int kept = obj.fitness_of_norm(child) >= parent ? child : norm1;
      acc[static_cast<std::size_t>(n - kept)].add(pa * pb);
    }
  }
  return from_sums(0, acc);
}

DiscreteDistribution counterexample_delta_law(std::span<const double> f_rest) {
  const auto q = poisson_binomial(f_rest);
  return difference(q, q);
}

FrequencyVector counterexample_start_vector(CounterexampleStart start, int n, int mu) {
  if (n % 2 != 0) throw std::invalid_argument("counterexample: n must be even");
  const GridSpec spec(n, mu);
  if (!spec.well_behaved())
    throw std::invalid_argument("counterexample: mu=" + std::to_string(mu) +
                                " is not well behaved for n=" + std::to_string(n));
  const int half = spec.n_mu() / 2;
  std::vector<int> idx(static_cast<std::size_t>(n), start == CounterexampleStart::GStart ? half : 0);
  idx[0] = half;
  if (half + 1 > spec.n_mu())
    throw std::invalid_argument("counterexample: 1/2 + 1/mu exceeds the upper boundary");
  return FrequencyVector::from_indices(spec, BoundaryMode::Bounded, std::move(idx));
}

double counterexample_freq_probability(CounterexampleStart start, int n, int mu) {
  const FrequencyVector f = counterexample_start_vector(start, n, mu);
  const auto p = f.probabilities();
  const auto delta = counterexample_delta_law(std::span<const double>(p).subspan(1));
  const double f1 = p[0];
  // x1_1 = 1, x2_1 = 0: the 1-bit wins iff 1 + S1 >= S2, i.e. delta >= -1.
  // x1_1 = 0, x2_1 = 1: x2 wins (and carries the 1-bit) iff S1 < 1 + S2, i.e. delta <= 0.
  return f1 * (1.0 - f1) * (delta.tail_ge(-1) + delta.tail_le(0));
}

}  // namespace cga
