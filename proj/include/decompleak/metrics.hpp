#pragma once

#include <cstddef>
#include <optional>
#include <span>

namespace decompleak {

struct MetricsReport {
    double mse = 0.0;
    double mae = 0.0;
    double mape = 0.0;         // percent
    std::optional<double> r2;  // empty when the truth is constant
    std::size_t n = 0;
};

/// MAPE uses max(|y|, mape_floor) as its denominator.
MetricsReport compute_metrics(std::span<const double> truth, std::span<const double> pred,
                              double mape_floor = 1e-8);

struct TTestResult {
    double t = 0.0;
    double p = 1.0;
    double df = 0.0;
};

/// Welch's unequal-variance two-sided t-test.
TTestResult welch_t_test(std::span<const double> a, std::span<const double> b);

/// Regularised incomplete beta function I_x(a, b).
double regularized_incomplete_beta(double a, double b, double x);

/// Two-sided tail probability P(|T| >= |t|) for Student's t with `df` degrees of freedom.
double student_t_two_sided(double t, double df);

double mean(std::span<const double> v);
/// Sample standard deviation (n-1 denominator); 0 for fewer than two values.
double sample_std(std::span<const double> v);

} // namespace decompleak
