#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace sdde {

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  double std_dev = 0.0;
  std::size_t n = 0;
};

/// Sample mean with std_error = sample standard deviation / sqrt(n).
MeanEstimate mean_estimate(std::span<const double> samples);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_std_error = 0.0;
  std::size_t n = 0;
  /// Two-sided 95% half-width for the slope (Student t, n - 2 dof).
  double slope_ci95() const;
};

/// Ordinary least squares y = intercept + slope * x. Needs at least two distinct x.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

/// Two-sided Student-t quantile at 97.5% for the given degrees of freedom.
double student_t975(std::size_t dof);

/// One-sample Kolmogorov-Smirnov statistic sup |F_n - F|.
double ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf);

/// Asymptotic Kolmogorov p-value for statistic d with n samples.
double ks_pvalue(double d, std::size_t n);

double normal_cdf(double x);

}  // namespace sdde
