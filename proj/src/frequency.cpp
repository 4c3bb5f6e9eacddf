#include "cga/frequency.hpp"

#include <algorithm>
#include <stdexcept>

namespace cga {

std::string to_string(BoundaryMode mode) {
  return mode == BoundaryMode::Bounded ? "bounded" : "free";
}

BoundaryMode boundary_mode_from_string(const std::string& s) {
  if (s == "bounded") return BoundaryMode::Bounded;
  if (s == "free") return BoundaryMode::Free;
  throw std::invalid_argument("unknown boundary mode '" + s + "' (expected bounded|free)");
}

bool check_well_behaved(int n, int mu) {
  if (n < 4 || mu < 1) return false;
  const std::int64_t scaled = static_cast<std::int64_t>(n - 2) * mu;
  if (scaled % n != 0) return false;
  return (scaled / n) % 2 == 0;
}

int nearest_valid_mu(int n, int mu_hint) {
  if (n < 4) throw std::invalid_argument("nearest_valid_mu: n must be >= 4");
  if (mu_hint < 1) throw std::invalid_argument("nearest_valid_mu: mu_hint must be >= 1");
  const std::int64_t limit = 10LL * mu_hint * n;
  for (std::int64_t mu = mu_hint; mu <= limit; ++mu)
    if (check_well_behaved(n, static_cast<int>(mu))) return static_cast<int>(mu);
  throw std::domain_error("nearest_valid_mu: no well-behaved mu up to " + std::to_string(limit) +
                          " for n=" + std::to_string(n));
}

GridSpec::GridSpec(int n, int mu) : n_(n), mu_(mu) {
  if (n < 4) throw std::invalid_argument("GridSpec: n must be >= 4, got " + std::to_string(n));
  if (mu < 1) throw std::invalid_argument("GridSpec: mu must be >= 1, got " + std::to_string(mu));
}

BitString::BitString(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (auto& b : bits_)
    if (b > 1) throw std::invalid_argument("BitString: bits must be 0 or 1");
}

BitString BitString::parse(const std::string& s) {
  std::vector<std::uint8_t> bits;
  bits.reserve(s.size());
  for (char c : s) {
    if (c != '0' && c != '1') throw std::invalid_argument("BitString::parse: bad character");
    bits.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return BitString(std::move(bits));
}

BitString BitString::ones(int n) {
  return BitString(std::vector<std::uint8_t>(static_cast<std::size_t>(n), 1));
}

int BitString::norm1() const {
  int s = 0;
  for (auto b : bits_) s += b;
  return s;
}

std::string BitString::str() const {
  std::string s;
  s.reserve(bits_.size());
  for (auto b : bits_) s.push_back(static_cast<char>('0' + b));
  return s;
}

int hamming_distance(const BitString& a, const BitString& b) {
  if (a.size() != b.size()) throw std::invalid_argument("hamming_distance: size mismatch");
  int d = 0;
  for (int i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

FrequencyVector::FrequencyVector(const GridSpec& spec, BoundaryMode mode, std::vector<int> idx)
    : spec_(spec), mode_(mode), idx_(std::move(idx)) {
  if (mode_ == BoundaryMode::Bounded && !spec_.well_behaved())
    throw std::invalid_argument(
        "frequency grid not well behaved: (1-2/n)*mu must be an even integer (n=" +
        std::to_string(spec_.n()) + ", mu=" + std::to_string(spec_.mu()) +
        "); nearest valid mu is " + std::to_string(nearest_valid_mu(spec_.n(), spec_.mu())));
  if (mode_ == BoundaryMode::Free && spec_.mu() % 2 != 0)
    throw std::invalid_argument("free-mode frequency grid requires even mu, got " +
                                std::to_string(spec_.mu()));
  if (static_cast<int>(idx_.size()) != spec_.n())
    throw std::invalid_argument("FrequencyVector: expected " + std::to_string(spec_.n()) +
                                " indices, got " + std::to_string(idx_.size()));
  const int top = upper_index();
  for (int v : idx_)
    if (v < 0 || v > top)
      throw std::invalid_argument("FrequencyVector: grid index " + std::to_string(v) +
                                  " outside [0.." + std::to_string(top) + "]");
}

FrequencyVector FrequencyVector::uniform(const GridSpec& spec, BoundaryMode mode) {
  const int half = mode == BoundaryMode::Bounded ? spec.n_mu() / 2 : spec.mu() / 2;
  return FrequencyVector(spec, mode, std::vector<int>(static_cast<std::size_t>(spec.n()), half));
}

FrequencyVector FrequencyVector::from_indices(const GridSpec& spec, BoundaryMode mode,
                                              std::vector<int> indices) {
  return FrequencyVector(spec, mode, std::move(indices));
}

int FrequencyVector::upper_index() const {
  return mode_ == BoundaryMode::Bounded ? spec_.n_mu() : spec_.mu();
}

std::int64_t FrequencyVector::denominator() const {
  return mode_ == BoundaryMode::Bounded ? static_cast<std::int64_t>(spec_.n()) * spec_.mu()
                                        : spec_.mu();
}

std::int64_t FrequencyVector::numerator_of(int idx) const {
  return mode_ == BoundaryMode::Bounded
             ? spec_.mu() + static_cast<std::int64_t>(idx) * spec_.n()
             : idx;
}

std::vector<double> FrequencyVector::probabilities() const {
  std::vector<double> p(idx_.size());
  for (int i = 0; i < size(); ++i) p[static_cast<std::size_t>(i)] = probability(i);
  return p;
}

Rational FrequencyVector::norm1() const {
  std::int64_t total = 0;
  for (int v : idx_) total += numerator_of(v);
  return {total, denominator()};
}

Rational FrequencyVector::distance() const { return Rational(spec_.n()) - norm1(); }

void FrequencyVector::apply_update(const BitString& y1, const BitString& y2,
                                   std::vector<int>* clamped_low,
                                   std::vector<int>* clamped_high) {
  if (y1.size() != size() || y2.size() != size())
    throw std::invalid_argument("apply_update: sample dimension mismatch");
  const int top = upper_index();
  for (int i = 0; i < size(); ++i) {
    const int step = static_cast<int>(y1[i]) - static_cast<int>(y2[i]);
    if (step == 0) continue;
    int& v = idx_[static_cast<std::size_t>(i)];
    const int prelim = v + step;
    if (prelim < 0) {
      // Only reachable in Bounded mode: Free-mode frequencies at 0 never differ.
      if (clamped_low) clamped_low->push_back(i);
    } else if (prelim > top) {
      if (clamped_high) clamped_high->push_back(i);
    } else {
      v = prelim;
    }
  }
}

SamplingTable::SamplingTable(const GridSpec& spec, BoundaryMode mode) {
  const FrequencyVector probe = FrequencyVector::uniform(spec, mode);
  const int top = probe.upper_index();
  const auto den = static_cast<unsigned __int128>(probe.denominator());
  threshold_.resize(static_cast<std::size_t>(top) + 1);
  for (int idx = 0; idx <= top; ++idx) {
    const auto num = static_cast<unsigned __int128>(probe.numerator_of(idx));
    if (num >= den) {
      threshold_[static_cast<std::size_t>(idx)] = 0;
      certain_index_ = idx;
    } else {
      threshold_[static_cast<std::size_t>(idx)] =
          static_cast<std::uint64_t>((num << 64) / den);
    }
  }
}

void sample_into(const FrequencyVector& f, const SamplingTable& table, CounterRng& rng,
                 BitString& out) {
  const int n = f.size();
  if (out.size() != n) out = BitString(n);
  auto bits = out.mutable_bits();
  const auto idx = f.indices();
  for (int i = 0; i < n; ++i)
    bits[static_cast<std::size_t>(i)] = table.draw(idx[static_cast<std::size_t>(i)], rng()) ? 1 : 0;
}

BitString sample(const FrequencyVector& f, CounterRng& rng) {
  const SamplingTable table(f);
  BitString x(f.size());
  sample_into(f, table, rng, x);
  return x;
}

UpdateResult update(const FrequencyVector& f, const BitString& y1, const BitString& y2) {
  UpdateResult r{f, {}, {}};
  r.next.apply_update(y1, y2, &r.clamped_low, &r.clamped_high);
  return r;
}

nlohmann::json to_json(const FrequencyVector& f) {
  return {{"n", f.spec().n()},
          {"mu", f.spec().mu()},
          {"boundary_mode", to_string(f.mode())},
          {"indices", std::vector<int>(f.indices().begin(), f.indices().end())}};
}

FrequencyVector frequency_vector_from_json(const nlohmann::json& j) {
  const GridSpec spec(j.at("n").get<int>(), j.at("mu").get<int>());
  return FrequencyVector::from_indices(spec,
                                       boundary_mode_from_string(j.at("boundary_mode").get<std::string>()),
                                       j.at("indices").get<std::vector<int>>());
}

}  // namespace cga
