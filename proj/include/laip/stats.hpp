#pragma once

#include <span>

namespace laip {

struct SampleSummary {
  double mean = 0.0;
  /// Unbiased (n - 1) variance; 0 when n < 2.
  double variance = 0.0;
  std::size_t n = 0;
};

SampleSummary summarize(std::span<const double> sample);

/// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double incomplete_beta(double a, double b, double x);

/// Two-tailed p-value of Student's t with `df` degrees of freedom.
double student_t_two_tailed(double t, double df);

struct WelchResult {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;
  /// Both samples have zero variance; t is 0 or +/-infinity and df is NaN.
  bool degenerate = false;
};

/// Welch's unequal-variance two-sample t-test, two-tailed. Both samples
/// need at least two observations (ValidationError otherwise).
WelchResult welch_t_test(std::span<const double> a, std::span<const double> b);

}  // namespace laip
