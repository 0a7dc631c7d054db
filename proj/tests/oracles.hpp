#ifndef SHOOT_TESTS_ORACLES_HPP
#define SHOOT_TESTS_ORACLES_HPP

// Independent reference computations for the test suites. Nothing here calls
// into the library code paths being checked.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

inline double t_density(double x, double df) {
    const double c = std::exp(std::lgamma((df + 1.0) / 2.0) - std::lgamma(df / 2.0)) / std::sqrt(df * std::numbers::pi);
    return c * std::pow(1.0 + x * x / df, -(df + 1.0) / 2.0);
}

/// Two-sided p by composite trapezoid integration of the density over [0, |t|]:
/// p = 1 - 2 * integral_0^|t| f.
inline double t_two_sided_p(double t, double df, int steps = 200000) {
    const double a = std::abs(t);
    const double h = a / steps;
    double s = 0.5 * (t_density(0.0, df) + t_density(a, df));
    for (int i = 1; i < steps; ++i) s += t_density(i * h, df);
    return 1.0 - 2.0 * s * h;
}

inline double t_cdf(double t, double df, int steps = 200000) {
    const double half = 0.5 * (1.0 - t_two_sided_p(t, df, steps));
    return t >= 0 ? 0.5 + half : 0.5 - half;
}

inline double population_cov(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const double ma = a.sum() / a.size();
    const double mb = b.sum() / b.size();
    double s = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) s += (a(i) - ma) * (b(i) - mb);
    return s / a.size();
}

inline double correlation(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return population_cov(a, b) / std::sqrt(population_cov(a, a) * population_cov(b, b));
}

/// Assembles the m x k matrix of columns z - nu * P_i.
inline Eigen::MatrixXd assemble(const Eigen::VectorXd& z, const Eigen::MatrixXd& p, double nu) {
    Eigen::MatrixXd g(p.rows(), p.cols());
    for (Eigen::Index i = 0; i < p.cols(); ++i)
        for (Eigen::Index r = 0; r < p.rows(); ++r) g(r, i) = z(r) - nu * p(r, i);
    return g;
}

struct Objective {
    double corr = 0.0;
    double magnitude = 0.0;
};

inline Objective brute_objective(const Eigen::VectorXd& z, const Eigen::MatrixXd& p, double nu) {
    const Eigen::MatrixXd g = assemble(z, p, nu);
    double sq = 0.0;
    for (Eigen::Index i = 0; i < g.cols(); ++i)
        for (Eigen::Index j = 0; j < g.cols(); ++j) {
            const double r = correlation(g.col(i), g.col(j));
            sq += r * r;
        }
    double mag = 0.0;
    for (Eigen::Index i = 0; i < g.size(); ++i) mag += g.data()[i] * g.data()[i];
    return {std::sqrt(sq), std::sqrt(mag)};
}

struct Split {
    int feature = -1;
    double threshold = 0.0;
    double sse = std::numeric_limits<double>::infinity();
};

/// Every feature, every midpoint between consecutive distinct values; SSE computed directly.
inline Split brute_best_split(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, int min_leaf = 1) {
    Split best;
    double scale = 0.0;
    {
        const double mean = y.mean();
        for (Eigen::Index i = 0; i < y.size(); ++i) scale += (y(i) - mean) * (y(i) - mean);
    }
    for (int f = 0; f < x.cols(); ++f) {
        std::vector<double> values(x.col(f).data(), x.col(f).data() + x.rows());
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());
        for (std::size_t v = 0; v + 1 < values.size(); ++v) {
            const double thr = values[v] + (values[v + 1] - values[v]) / 2.0;
            double sl = 0, sr = 0;
            int nl = 0, nr = 0;
            for (Eigen::Index r = 0; r < x.rows(); ++r) {
                if (x(r, f) <= thr) { sl += y(r); ++nl; } else { sr += y(r); ++nr; }
            }
            if (nl < min_leaf || nr < min_leaf) continue;
            const double ml = sl / nl, mr = sr / nr;
            double sse = 0.0;
            for (Eigen::Index r = 0; r < x.rows(); ++r) {
                const double d = x(r, f) <= thr ? y(r) - ml : y(r) - mr;
                sse += d * d;
            }
            if (sse < best.sse - 1e-12 * std::max(scale, 1e-300)) best = {f, thr, sse};
        }
    }
    return best;
}

}  // namespace oracle

#endif  // SHOOT_TESTS_ORACLES_HPP
