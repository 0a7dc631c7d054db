#ifndef SHOOT_NUOPT_HPP
#define SHOOT_NUOPT_HPP

#include <vector>

#include "shoot/numeric.hpp"

namespace shoot {

/// Precomputed second moments of a residual vector z and k direction columns P_i.
///
/// The columns under study are g_i(nu) = z - nu * P_i. Every quantity the
/// objective needs is a polynomial in nu whose coefficients live here, so
/// evaluations cost O(k^2) and never touch length-m data again.
/// Covariances use the population (1/m) convention.
class NuCache {
public:
    double c_zz() const noexcept { return c_zz_; }
    const Vector& c_zi() const noexcept { return c_zi_; }
    const Matrix& c_ij() const noexcept { return c_ij_; }

    // raw sums for the Frobenius magnitude
    double sum_zz() const noexcept { return sum_zz_; }
    const Vector& sum_zp() const noexcept { return sum_zp_; }
    const Matrix& sum_pp() const noexcept { return sum_pp_; }
    double mean_z() const noexcept { return mean_z_; }
    const Vector& mean_p() const noexcept { return mean_p_; }

    Eigen::Index m() const noexcept { return m_; }
    Eigen::Index k() const noexcept { return c_zi_.size(); }

    /// Columns with zero variance; their correlations are undefined in the large-nu limit.
    const std::vector<bool>& constant_columns() const noexcept { return constant_; }

    /// Beyond this nu a constant column is treated as degenerate (infinite when none can be).
    double degenerate_nu() const noexcept { return degenerate_nu_; }

    /// Variance of z - nu * P_i.
    double variance_at(double nu, Eigen::Index i) const noexcept {
        return c_zz_ - 2.0 * nu * c_zi_(i) + nu * nu * c_ij_(i, i);
    }

private:
    friend NuCache build_cache(const Vector& z, const Matrix& directions);

    double c_zz_ = 0.0;
    Vector c_zi_;
    Matrix c_ij_;
    double sum_zz_ = 0.0;
    Vector sum_zp_;
    Matrix sum_pp_;
    double mean_z_ = 0.0;
    Vector mean_p_;
    Eigen::Index m_ = 0;
    std::vector<bool> constant_;
    double degenerate_nu_ = std::numeric_limits<double>::infinity();
};

/// O(m k^2). Throws DegenerateCorrelationError when z is constant.
NuCache build_cache(const Vector& z, const Matrix& directions);

/// Corr(z - nu P_i, z - nu P_j) from cached moments, clamped to [-1, 1].
double correlation_at(const NuCache& cache, double nu, Eigen::Index i, Eigen::Index j);

struct NuObjective {
    double total = 0.0;
    double corr_term = 0.0;       // Frobenius norm of the k x k correlation matrix
    double magnitude_term = 0.0;  // weight * Frobenius norm of [z - nu P_1, ..., z - nu P_k]
};

/// Correlation-plus-magnitude objective at nu.
NuObjective objective(const NuCache& cache, double nu, double magnitude_weight = 1.0);

struct NuSearch {
    double lo = 1e-6;
    double hi = 1e3;
    int grid_points = 64;
    double tol = 1e-4;
    double magnitude_weight = 1.0;
};

struct NuResult {
    double nu = 0.0;
    double objective_value = 0.0;
    double corr_term = 0.0;
    double magnitude_term = 0.0;
    int evaluations = 0;
};

/// Log-spaced grid over [max(lo, 1e-6), hi] (plus lo itself when lo is below that),
/// then golden-section refinement of every grid-local minimum. Degenerate points are skipped;
/// if all are degenerate, DegenerateCorrelationError is thrown.
NuResult minimize_nu(const NuCache& cache, const NuSearch& search = {});

/// Minimizes f on [a, b] to bracket width <= tol * (1 + |x|).
/// Returns the best abscissa seen; `evaluations` is incremented per call of f.
template <class F>
double golden_section_minimize(F&& f, double a, double b, double tol, int& evaluations, double& best_value);

}  // namespace shoot

#include "shoot/detail/golden.hpp"

#endif  // SHOOT_NUOPT_HPP
