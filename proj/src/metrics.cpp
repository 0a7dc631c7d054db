#include "shoot/metrics.hpp"

#include <cmath>
#include <string>

#include <boost/math/distributions/students_t.hpp>

#include "shoot/error.hpp"

namespace shoot {

namespace {

void require_same_length(const Vector& a, const Vector& b, Eigen::Index min_len, const char* what) {
    if (a.size() != b.size())
        throw DataError(std::string(what) + ": length mismatch (" + std::to_string(a.size()) + " vs " +
                        std::to_string(b.size()) + ")");
    if (a.size() < min_len) throw DataError(std::string(what) + ": needs at least " + std::to_string(min_len) + " values");
}

}  // namespace

double r_squared(const Vector& y_true, const Vector& y_pred) {
    require_same_length(y_true, y_pred, 2, "r_squared");
    const double mean = y_true.mean();
    const double ss_tot = (y_true.array() - mean).square().sum();
    if (!(ss_tot > 0.0)) throw UndefinedMetricError("r_squared: y_true is constant");
    const double ss_res = (y_true - y_pred).squaredNorm();
    return 1.0 - ss_res / ss_tot;
}

double mse(const Vector& y_true, const Vector& y_pred) {
    require_same_length(y_true, y_pred, 1, "mse");
    return (y_true - y_pred).squaredNorm() / static_cast<double>(y_true.size());
}

double student_t_cdf(double t, double df) {
    if (!(df > 0.0)) throw NumericalError("student_t_cdf: df must be positive");
    if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
    const boost::math::students_t dist(df);
    return boost::math::cdf(dist, t);
}

double student_t_two_sided_p(double t, double df) {
    if (!(df > 0.0)) throw NumericalError("student_t_two_sided_p: df must be positive");
    if (std::isinf(t)) return 0.0;
    const boost::math::students_t dist(df);
    const double p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
    return std::min(1.0, p);
}

TTestResult paired_t_test(const Vector& a, const Vector& b, Sidedness sidedness) {
    require_same_length(a, b, 2, "paired_t_test");
    const Vector diff = a - b;
    const auto n = static_cast<double>(diff.size());
    const double mean = diff.mean();
    const double var = (diff.array() - mean).square().sum() / (n - 1.0);
    if (!(var > 0.0)) throw DegenerateTestError("paired_t_test: differences have zero variance");

    TTestResult out;
    out.df = n - 1.0;
    out.t = mean / std::sqrt(var / n);
    if (sidedness == Sidedness::TwoSided) {
        out.p = student_t_two_sided_p(out.t, out.df);
    } else {
        const boost::math::students_t dist(out.df);
        out.p = boost::math::cdf(boost::math::complement(dist, out.t));
    }
    return out;
}

}  // namespace shoot
