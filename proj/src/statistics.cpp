#include "cga/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

namespace cga {

double chi_square_pvalue(double statistic, double dof) {
  if (dof <= 0) return 1.0;
  if (statistic <= 0) return 1.0;
  return boost::math::gamma_q(dof / 2.0, statistic / 2.0);
}

ChiSquareResult chi_square_test(std::span<const std::uint64_t> observed,
                                std::span<const double> probabilities, double min_expected) {
  if (observed.size() != probabilities.size())
    throw std::invalid_argument("chi_square_test: size mismatch");
  std::uint64_t total = 0;
  for (auto o : observed) total += o;
  const auto n = static_cast<double>(total);

  ChiSquareResult r;
  double pooled_expected = 0.0;
  double pooled_observed = 0.0;
  int cells = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = probabilities[i] * n;
    const auto o = static_cast<double>(observed[i]);
    if (e < min_expected) {
      pooled_expected += e;
      pooled_observed += o;
      continue;
    }
    r.statistic += (o - e) * (o - e) / e;
    ++cells;
  }
  if (pooled_expected > 0.0) {
    r.statistic += (pooled_observed - pooled_expected) * (pooled_observed - pooled_expected) /
                   pooled_expected;
    ++cells;
  } else if (pooled_observed > 0.0) {
    // Observations in cells of probability zero: impossible under the model.
    r.statistic = std::numeric_limits<double>::infinity();
  }
  r.dof = std::max(cells - 1, 0);
  r.p_value = std::isinf(r.statistic) ? 0.0 : chi_square_pvalue(r.statistic, r.dof);
  return r;
}

std::int64_t lower_median(std::vector<std::int64_t> values) {
  if (values.empty()) throw std::invalid_argument("lower_median: empty input");
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>((values.size() - 1) / 2);
  std::nth_element(values.begin(), mid, values.end());
  return *mid;
}

}  // namespace cga
