#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "pdim/errors.hpp"

namespace pdim {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Interval {
  double low = 0.0;
  double high = 0.0;

  bool contains(double x) const noexcept { return low <= x && x <= high; }
  double width() const noexcept { return high - low; }
};

// Two-sided standard normal quantile for the given confidence level.
inline double normal_z(double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) throw UsageError("confidence must lie in (0,1)");
  boost::math::normal_distribution<double> nd;
  return boost::math::quantile(nd, 0.5 + confidence / 2.0);
}

// Wilson score interval for a binomial proportion.
inline Interval wilson_interval(std::size_t successes, std::size_t trials, double confidence = 0.95) {
  if (trials == 0) return {0.0, 1.0};
  const double z = normal_z(confidence);
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

inline MeanEstimate mean_and_error(std::span<const double> xs) {
  if (xs.empty()) return {};
  const double n = static_cast<double>(xs.size());
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / n;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double var = xs.size() > 1 ? ss / (n - 1.0) : 0.0;
  return {mean, std::sqrt(var / n)};
}

// Neumaier-compensated sum; `error_bound` tracks the accumulated rounding
// magnitude so callers can report it.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
    abs_ += std::abs(x);
    ++count_;
  }
  double value() const noexcept { return sum_ + comp_; }
  // Standard bound for compensated summation: (2u + n u^2) * sum |x_i|.
  double error_bound() const noexcept {
    constexpr double u = 0x1.0p-53;
    return (2.0 * u + static_cast<double>(count_) * u * u) * abs_;
  }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
  double abs_ = 0.0;
  std::size_t count_ = 0;
};

// Ordinary least squares y = a + b x. Residuals are y - fit.
struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
  std::vector<double> residuals;

  double rms_residual() const {
    if (residuals.empty()) return 0.0;
    double ss = 0.0;
    for (double r : residuals) ss += r * r;
    return std::sqrt(ss / static_cast<double>(residuals.size()));
  }
};

inline LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw UsageError("least_squares needs >= 2 paired points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw UsageError("least_squares needs distinct abscissae");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.residuals.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) fit.residuals.push_back(y[i] - (fit.intercept + fit.slope * x[i]));
  return fit;
}

}  // namespace pdim
