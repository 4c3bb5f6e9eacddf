#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace cga {

/// Streaming mean/variance (Welford), mergeable across partitions.
class RunningStats {
 public:
  void add(double x) {
    ++count_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
  }

  void merge(const RunningStats& o) {
    if (o.count_ == 0) return;
    if (count_ == 0) {
      *this = o;
      return;
    }
    const double total = static_cast<double>(count_ + o.count_);
    const double delta = o.mean_ - mean_;
    mean_ += delta * static_cast<double>(o.count_) / total;
    m2_ += o.m2_ + delta * delta * static_cast<double>(count_) * static_cast<double>(o.count_) / total;
    count_ += o.count_;
  }

  [[nodiscard]] std::uint64_t count() const { return count_; }
  [[nodiscard]] double mean() const { return mean_; }
  [[nodiscard]] double variance() const {
    return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0;
  }
  [[nodiscard]] double std_error() const {
    return count_ > 0 ? std::sqrt(variance() / static_cast<double>(count_)) : 0.0;
  }

 private:
  std::uint64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// Neumaier-compensated sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  [[nodiscard]] double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Upper tail of the chi-square distribution.
double chi_square_pvalue(double statistic, double dof);

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

/// Pearson goodness-of-fit test of observed counts against probabilities.
/// Cells with expected count below `min_expected` are pooled into one cell.
ChiSquareResult chi_square_test(std::span<const std::uint64_t> observed,
                                std::span<const double> probabilities,
                                double min_expected = 5.0);

/// Lower median (element at index (size-1)/2 after sorting).
std::int64_t lower_median(std::vector<std::int64_t> values);

}  // namespace cga
