#ifndef SHOOT_METRICS_HPP
#define SHOOT_METRICS_HPP

#include "shoot/numeric.hpp"

namespace shoot {

/// Coefficient of determination 1 - SSres/SStot. Throws UndefinedMetricError for constant y_true.
double r_squared(const Vector& y_true, const Vector& y_pred);

/// Mean squared error.
double mse(const Vector& y_true, const Vector& y_pred);

enum class Sidedness { TwoSided, OneSidedGreater };

struct TTestResult {
    double t = 0.0;
    double p = 1.0;
    double df = 0.0;
};

/// Paired t-test on a - b. OneSidedGreater tests the alternative mean(a - b) > 0.
TTestResult paired_t_test(const Vector& a, const Vector& b, Sidedness sidedness = Sidedness::TwoSided);

/// Student t cumulative distribution function.
double student_t_cdf(double t, double df);

/// P(|T| >= |t|) for T ~ t(df).
double student_t_two_sided_p(double t, double df);

}  // namespace shoot

#endif  // SHOOT_METRICS_HPP
