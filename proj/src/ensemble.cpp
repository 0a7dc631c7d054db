#include "shoot/ensemble.hpp"

#include <cmath>
#include <string>

#include "shoot/error.hpp"

namespace shoot {

namespace {

// stream identifiers under SRConfig::seed
constexpr std::uint64_t kOffsetStream = 1;
constexpr std::uint64_t kTreeStream = 2;

constexpr double kPowerTolerance = 1e-9;
constexpr int kPowerMaxIterations = 10000;

void check_consistent(const LinearModel& linear, const Matrix& offsets, const Matrix& features) {
    if (features.cols() != linear.n_features())
        throw DataError("expected " + std::to_string(linear.n_features()) + " features, got " +
                        std::to_string(features.cols()));
    if (offsets.rows() != linear.coefficients.size())
        throw DataError("offset length " + std::to_string(offsets.rows()) + " does not match coefficient count " +
                        std::to_string(linear.coefficients.size()));
}

}  // namespace

Matrix initial_predictions(const LinearModel& linear, const Matrix& offsets, double nu, const Matrix& features) {
    check_consistent(linear, offsets, features);
    const Matrix design = augment(features);
    Matrix coef = (nu * offsets).colwise() + linear.coefficients;
    return design * coef;
}

Matrix gradient_targets(const LinearModel& linear, const OffsetSet& offsets, double nu, const Dataset& d) {
    check_consistent(linear, offsets.offsets, d.features());
    if (offsets.projected_offsets.rows() != d.rows() || offsets.projected_offsets.cols() != offsets.count())
        throw DataError("projected offsets do not match the dataset");
    const Vector z = predict_linear(linear, d.features()) - d.target();
    Matrix g = nu * offsets.projected_offsets;
    g.colwise() += z;
    return g;
}

ShootingSetup prepare_shooting(const Dataset& train, const SRConfig& config) {
    if (config.k < 1) throw ConfigError("shooting regressor: k must be >= 1");
    ShootingSetup setup;
    setup.linear = fit_ols(train);
    setup.offsets = sample_offsets(setup.linear, train.features(), config.k, derive_seed(config.seed, kOffsetStream));
    setup.residual = predict_linear(setup.linear, train.features()) - train.target();
    return setup;
}

NuCache shooting_nu_cache(const ShootingSetup& setup) {
    return build_cache(setup.residual, -setup.offsets.projected_offsets);
}

ShootingEnsemble fit_shooting(const Dataset& train, const SRConfig& config) {
    if (config.fixed_nu && !(*config.fixed_nu >= 0.0 && std::isfinite(*config.fixed_nu)))
        throw ConfigError("shooting regressor: fixed nu must be finite and >= 0");

    const ShootingSetup setup = prepare_shooting(train, config);
    ShootingEnsemble ens;
    ens.linear = setup.linear;
    ens.offsets = setup.offsets.offsets;

    if (config.fixed_nu) {
        ens.nu = *config.fixed_nu;
    } else if (config.k < 2) {
        ens.nu = 1.0;
        ens.warnings.emplace_back("automatic nu needs k >= 2; using nu = 1");
    } else {
        try {
            ens.nu_diagnostics = minimize_nu(shooting_nu_cache(setup), config.nu_search);
            ens.nu = ens.nu_diagnostics->nu;
        } catch (const DegenerateCorrelationError& e) {
            ens.nu = 1.0;
            ens.warnings.push_back(std::string("automatic nu failed (") + e.what() + "); using nu = 1");
        }
    }

    const Matrix targets = gradient_targets(ens.linear, setup.offsets, ens.nu, train);
    ens.trees.resize(static_cast<std::size_t>(config.k));
    parallel_for(static_cast<std::size_t>(config.k), config.threads, [&](std::size_t i) {
        TreeParams params = config.tree_params;
        params.rng_seed = derive_seed(config.seed, kTreeStream, i);
        ens.trees[i] = fit_tree(train.features(), targets.col(static_cast<Eigen::Index>(i)), params);
    });
    return ens;
}

Matrix predict_per_estimator(const ShootingEnsemble& ensemble, const Matrix& features) {
    if (static_cast<Eigen::Index>(ensemble.trees.size()) != ensemble.k())
        throw DataError("ensemble has " + std::to_string(ensemble.trees.size()) + " trees for " +
                        std::to_string(ensemble.k()) + " offsets");
    Matrix out = initial_predictions(ensemble.linear, ensemble.offsets, ensemble.nu, features);
    for (Eigen::Index i = 0; i < ensemble.k(); ++i)
        out.col(i) -= ensemble.trees[static_cast<std::size_t>(i)].predict(features);
    return out;
}

Vector predict(const ShootingEnsemble& ensemble, const Matrix& features) {
    return compensated_row_mean(predict_per_estimator(ensemble, features));
}

OracleOutput oracle_predict(const LinearModel& linear, const OffsetSet& offsets, double nu, const Dataset& d) {
    OracleOutput out;
    out.per_estimator = initial_predictions(linear, offsets.offsets, nu, d.features()) -
                        gradient_targets(linear, offsets, nu, d);
    out.aggregate = compensated_row_mean(out.per_estimator);
    return out;
}

// ---------------------------------------------------------------------------
// PCA diagnostics
// ---------------------------------------------------------------------------

PcaProjection pca_project(const Matrix& initial, const Matrix& terminal, const Vector& target) {
    const Eigen::Index m = target.size();
    if (m < 2) throw DataError("pca_project: need at least 2 rows");
    if (initial.rows() != m || terminal.rows() != m || initial.cols() != terminal.cols())
        throw DataError("pca_project: inconsistent vector collection");

    const Eigen::Index k = initial.cols();
    // one sample per row: k initial, k terminal, then the target
    Matrix samples(2 * k + 1, m);
    samples.topRows(k) = initial.transpose();
    samples.middleRows(k, k) = terminal.transpose();
    samples.row(2 * k) = target.transpose();

    const Eigen::RowVectorXd centroid = samples.colwise().mean();
    const Matrix centered = samples.rowwise() - centroid;
    const double spread = centered.cwiseAbs().maxCoeff();
    const double scale = samples.cwiseAbs().maxCoeff();
    if (!(spread > 1e-14 * std::max(scale, 1.0))) throw NumericalError("pca_project: collection has zero variance");

    auto apply_cov = [&](const Vector& v) -> Vector { return centered.transpose() * (centered * v); };

    Vector v = Vector::Ones(m) / std::sqrt(static_cast<double>(m));
    Vector w = apply_cov(v);
    if (!(w.norm() > 1e-12 * centered.squaredNorm())) {
        // start vector orthogonal to every direction of variation
        Eigen::Index axis = 0;
        centered.colwise().squaredNorm().maxCoeff(&axis);
        v = Vector::Unit(m, axis);
        w = apply_cov(v);
    }
    for (int it = 0; it < kPowerMaxIterations; ++it) {
        const double norm = w.norm();
        if (!(norm > 0.0)) break;
        const Vector next = w / norm;
        const double delta = (next - v).norm();
        v = next;
        if (delta < kPowerTolerance) break;
        w = apply_cov(v);
    }

    Eigen::Index lead = 0;
    v.cwiseAbs().maxCoeff(&lead);
    if (v(lead) < 0.0) v = -v;

    PcaProjection out;
    const Vector coords = samples * v;
    out.initial_coord.assign(coords.data(), coords.data() + k);
    out.terminal_coord.assign(coords.data() + k, coords.data() + 2 * k);
    out.target_coord = coords(2 * k);
    return out;
}

PcaProjection pca_project_diagnostics(const ShootingEnsemble& ensemble, const Dataset& d) {
    const Matrix initial = initial_predictions(ensemble.linear, ensemble.offsets, ensemble.nu, d.features());
    const Matrix terminal = predict_per_estimator(ensemble, d.features());
    return pca_project(initial, terminal, d.target());
}

}  // namespace shoot
