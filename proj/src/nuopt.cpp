#include "shoot/nuopt.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "shoot/error.hpp"

namespace shoot {

namespace {

constexpr double kMinGridNu = 1e-6;
constexpr double kVarianceCancellation = 1e-13;
constexpr int kRefinedMinima = 4;

}  // namespace

NuCache build_cache(const Vector& z, const Matrix& directions) {
    const Eigen::Index m = z.size();
    const Eigen::Index k = directions.cols();
    if (m < 2) throw DataError("build_cache: need at least 2 samples");
    if (k < 2) throw DataError("build_cache: need at least 2 columns");
    if (directions.rows() != m)
        throw DataError("build_cache: direction rows " + std::to_string(directions.rows()) + " != z length " +
                        std::to_string(m));

    NuCache c;
    c.m_ = m;
    const double inv_m = 1.0 / static_cast<double>(m);

    c.mean_z_ = z.mean();
    c.mean_p_ = directions.colwise().mean().transpose();
    const Vector zc = z.array() - c.mean_z_;
    const Matrix pc = directions.rowwise() - c.mean_p_.transpose();

    c.c_zz_ = zc.squaredNorm() * inv_m;
    if (!(c.c_zz_ > 0.0) || zc.cwiseAbs().maxCoeff() == 0.0)
        throw DegenerateCorrelationError("build_cache: residual vector z is constant", 0.0);

    c.c_zi_ = pc.transpose() * zc * inv_m;
    Matrix cij = pc.transpose() * pc * inv_m;
    c.c_ij_ = 0.5 * (cij + cij.transpose());

    c.sum_zz_ = z.squaredNorm();
    c.sum_zp_ = directions.transpose() * z;
    Matrix spp = directions.transpose() * directions;
    c.sum_pp_ = 0.5 * (spp + spp.transpose());

    c.constant_.assign(static_cast<std::size_t>(k), false);
    double max_var = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) {
        const double scale = directions.col(i).cwiseAbs().maxCoeff();
        const bool constant = pc.col(i).cwiseAbs().maxCoeff() <= 1e-12 * scale || scale == 0.0;
        c.constant_[static_cast<std::size_t>(i)] = constant;
        if (!constant) max_var = std::max(max_var, c.c_ij_(i, i));
    }
    const bool any_constant = std::find(c.constant_.begin(), c.constant_.end(), true) != c.constant_.end();
    if (any_constant && max_var > 0.0) c.degenerate_nu_ = 1e6 * std::sqrt(c.c_zz_ / max_var);
    return c;
}

double correlation_at(const NuCache& cache, double nu, Eigen::Index i, Eigen::Index j) {
    const Eigen::Index k = cache.k();
    if (i < 0 || j < 0 || i >= k || j >= k) throw DataError("correlation_at: column index out of range");

    auto checked_variance = [&](Eigen::Index c) {
        const double var = cache.variance_at(nu, c);
        const double magnitude =
            cache.c_zz() + 2.0 * std::abs(nu * cache.c_zi()(c)) + nu * nu * cache.c_ij()(c, c);
        if (!(var > kVarianceCancellation * magnitude))
            throw DegenerateCorrelationError("zero variance in column " + std::to_string(c), nu);
        if (cache.constant_columns()[static_cast<std::size_t>(c)] && nu > cache.degenerate_nu())
            throw DegenerateCorrelationError("constant offset column " + std::to_string(c) + " at large nu", nu);
        return var;
    };

    const double var_i = checked_variance(i);
    if (i == j) return 1.0;
    const double var_j = checked_variance(j);

    const double cov = cache.c_zz() - nu * cache.c_zi()(i) - nu * cache.c_zi()(j) + nu * nu * cache.c_ij()(i, j);
    const double r = cov / std::sqrt(var_i * var_j);
    return std::clamp(r, -1.0, 1.0);
}

NuObjective objective(const NuCache& cache, double nu, double magnitude_weight) {
    const Eigen::Index k = cache.k();
    double sq = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) {
        sq += 1.0;  // diagonal; correlation_at validates the variance
        (void)correlation_at(cache, nu, i, i);
        for (Eigen::Index j = i + 1; j < k; ++j) {
            const double r = correlation_at(cache, nu, i, j);
            sq += 2.0 * r * r;
        }
    }

    // sum_i |z - nu P_i|^2 = k z.z - 2 nu sum_i z.P_i + nu^2 sum_i P_i.P_i
    const double mag_sq = static_cast<double>(k) * cache.sum_zz() - 2.0 * nu * cache.sum_zp().sum() +
                          nu * nu * cache.sum_pp().trace();

    NuObjective out;
    out.corr_term = std::sqrt(sq);
    out.magnitude_term = magnitude_weight * std::sqrt(std::max(0.0, mag_sq));
    out.total = out.corr_term + out.magnitude_term;
    return out;
}

NuResult minimize_nu(const NuCache& cache, const NuSearch& search) {
    if (!(search.lo >= 0.0) || !(search.hi > search.lo))
        throw ConfigError("minimize_nu: need 0 <= lo < hi");
    if (search.grid_points < 2) throw ConfigError("minimize_nu: grid_points must be >= 2");
    if (!(search.tol > 0.0)) throw ConfigError("minimize_nu: tol must be positive");

    int evaluations = 0;
    auto eval = [&](double nu) {
        ++evaluations;
        try {
            return objective(cache, nu, search.magnitude_weight).total;
        } catch (const DegenerateCorrelationError&) {
            return std::numeric_limits<double>::infinity();
        }
    };

    std::vector<double> grid;
    const double start = std::max(search.lo, kMinGridNu);
    if (search.lo < start) grid.push_back(search.lo);
    if (start < search.hi) {
        const double log_lo = std::log(start);
        const double log_hi = std::log(search.hi);
        for (int g = 0; g < search.grid_points; ++g) {
            const double t = static_cast<double>(g) / static_cast<double>(search.grid_points - 1);
            grid.push_back(g == 0                        ? start
                           : g == search.grid_points - 1 ? search.hi
                                                         : std::exp(log_lo + t * (log_hi - log_lo)));
        }
    } else {
        grid.push_back(search.hi);
    }

    std::vector<double> values(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g) values[g] = eval(grid[g]);

    double best_nu = 0.0;
    double best_value = std::numeric_limits<double>::infinity();
    for (std::size_t g = 0; g < grid.size(); ++g) {
        if (values[g] < best_value) {
            best_value = values[g];
            best_nu = grid[g];
        }
    }
    if (!std::isfinite(best_value))
        throw DegenerateCorrelationError("minimize_nu: objective degenerate over the whole search range", search.lo);

    // grid-local minima, best first
    std::vector<std::size_t> minima;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        if (!std::isfinite(values[g])) continue;
        const bool left_ok = g == 0 || values[g] < values[g - 1];
        const bool right_ok = g + 1 == grid.size() || values[g] <= values[g + 1];
        if (left_ok && right_ok) minima.push_back(g);
    }
    std::stable_sort(minima.begin(), minima.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    if (minima.size() > kRefinedMinima) minima.resize(kRefinedMinima);

    for (const std::size_t g : minima) {
        const double a = grid[g == 0 ? 0 : g - 1];
        const double b = grid[std::min(g + 1, grid.size() - 1)];
        if (!(b > a)) continue;
        double value = 0.0;
        int inner = 0;
        const double x = golden_section_minimize(eval, a, b, search.tol, inner, value);
        if (value < best_value || (value == best_value && x < best_nu)) {
            best_value = value;
            best_nu = x;
        }
    }

    const NuObjective at = objective(cache, best_nu, search.magnitude_weight);
    NuResult out;
    out.nu = best_nu;
    out.objective_value = at.total;
    out.corr_term = at.corr_term;
    out.magnitude_term = at.magnitude_term;
    out.evaluations = evaluations + 1;
    return out;
}

}  // namespace shoot
