#include "shoot/linear.hpp"

#include <cmath>
#include <string>

#include "shoot/error.hpp"

namespace shoot {

namespace {

constexpr double kMaxCondition = 1e12;
constexpr double kJitterStart = 1e-12;
constexpr double kJitterLimit = 1e-6;
constexpr double kFactorTolerance = 1e-8;

bool try_cholesky(const Matrix& cov, Matrix& factor) {
    Eigen::LLT<Matrix> llt(cov);
    if (llt.info() != Eigen::Success) return false;
    Matrix l = llt.matrixL();
    if (!l.allFinite()) return false;
    const double err = (l * l.transpose() - cov).norm();
    if (err > kFactorTolerance * std::max(cov.norm(), std::numeric_limits<double>::min())) return false;
    factor = std::move(l);
    return true;
}

}  // namespace

Matrix augment(const Matrix& features) {
    Matrix out(features.rows(), features.cols() + 1);
    out.col(0).setOnes();
    out.rightCols(features.cols()) = features;
    return out;
}

double factorize_covariance(const Matrix& cov, Matrix& factor) {
    const Eigen::Index p = cov.rows();
    if (cov.cols() != p) throw NumericalError("covariance matrix is not square");
    if (!cov.allFinite()) throw NumericalError("covariance matrix has non-finite entries");
    if (cov.cwiseAbs().maxCoeff() == 0.0) {
        factor = Matrix::Zero(p, p);
        return 0.0;
    }
    if (try_cholesky(cov, factor)) return 0.0;

    const double scale = cov.trace() / static_cast<double>(p);
    if (!(scale > 0.0)) throw NumericalError("covariance matrix has non-positive trace");
    for (double level = kJitterStart; level <= kJitterLimit * (1.0 + 1e-9); level *= 10.0) {
        const double jitter = level * scale;
        Matrix jittered = cov;
        jittered.diagonal().array() += jitter;
        if (try_cholesky(jittered, factor)) return jitter;
    }
    throw NumericalError("covariance matrix is not positive semi-definite within jitter limit");
}

LinearModel fit_ols(const Dataset& d) {
    const Eigen::Index m = d.rows();
    const Eigen::Index p = d.cols() + 1;
    if (m <= p)
        throw SingularDesignError("OLS needs more rows than coefficients (m = " + std::to_string(m) +
                                  ", n + 1 = " + std::to_string(p) + ")");

    const Matrix design = augment(d.features());

    // Column equilibration so the rank test reflects collinearity, not units.
    Vector col_scale(p);
    for (Eigen::Index j = 0; j < p; ++j) {
        const double norm = design.col(j).norm();
        if (norm == 0.0) throw SingularDesignError("design column " + std::to_string(j) + " is identically zero");
        col_scale(j) = 1.0 / norm;
    }
    const Matrix scaled = design * col_scale.asDiagonal();

    Eigen::ColPivHouseholderQR<Matrix> qr(scaled);
    const Matrix r = qr.matrixR().topLeftCorner(p, p).triangularView<Eigen::Upper>();
    Eigen::JacobiSVD<Matrix> svd(r);
    const Vector sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    const double cond_gram = smin > 0.0 ? (sv(0) / smin) * (sv(0) / smin) : std::numeric_limits<double>::infinity();
    if (!(cond_gram <= kMaxCondition))
        throw SingularDesignError("design matrix is rank deficient (condition estimate of X'X = " +
                                  std::to_string(cond_gram) + ")");

    LinearModel model;
    model.coefficients = col_scale.asDiagonal() * qr.solve(d.target());

    const Vector residual = d.target() - design * model.coefficients;
    model.residual_variance = residual.squaredNorm() / static_cast<double>(m - p);

    // (Xs'Xs)^-1 = P R^-1 R^-T P'
    const Matrix r_inv = r.triangularView<Eigen::Upper>().solve(Matrix::Identity(p, p));
    const auto& perm = qr.colsPermutation();
    Matrix gram_inv = perm * (r_inv * r_inv.transpose()) * perm.transpose();
    gram_inv = col_scale.asDiagonal() * gram_inv * col_scale.asDiagonal();

    Matrix cov = model.residual_variance * gram_inv;
    model.coefficient_covariance = 0.5 * (cov + cov.transpose());
    model.jitter = factorize_covariance(model.coefficient_covariance, model.covariance_factor);
    return model;
}

Matrix sample_offset_columns(const LinearModel& model, Eigen::Index k, std::uint64_t seed) {
    if (k < 1) throw DataError("sample_offsets: k must be >= 1");
    const Eigen::Index p = model.coefficients.size();
    Matrix out(p, k);
    Vector z(p);
    for (Eigen::Index i = 0; i < k; ++i) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
        std::normal_distribution<double> normal(0.0, 1.0);
        for (Eigen::Index j = 0; j < p; ++j) z(j) = normal(rng);
        out.col(i) = model.covariance_factor.triangularView<Eigen::Lower>() * z;
    }
    return out;
}

OffsetSet sample_offsets(const LinearModel& model, const Matrix& train_features, Eigen::Index k, std::uint64_t seed) {
    if (train_features.cols() != model.n_features())
        throw DataError("sample_offsets: feature count " + std::to_string(train_features.cols()) +
                        " does not match model (" + std::to_string(model.n_features()) + ")");
    OffsetSet set;
    set.offsets = sample_offset_columns(model, k, seed);
    set.projected_offsets = augment(train_features) * set.offsets;
    return set;
}

Vector predict_linear(const LinearModel& model, const Matrix& features) {
    if (features.cols() != model.n_features())
        throw DataError("predict_linear: expected " + std::to_string(model.n_features()) + " features, got " +
                        std::to_string(features.cols()));
    if (features.rows() == 0) return Vector(0);
    return augment(features) * model.coefficients;
}

}  // namespace shoot
