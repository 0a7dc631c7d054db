#ifndef SHOOT_DATA_HPP
#define SHOOT_DATA_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "shoot/numeric.hpp"

namespace shoot {

/// Feature matrix (m x n), target (m) and one name per feature column.
/// Construction validates: m >= 2, n >= 1, all values finite, names match n.
class Dataset {
public:
    Dataset(Matrix features, Vector target, std::vector<std::string> feature_names);

    const Matrix& features() const noexcept { return features_; }
    const Vector& target() const noexcept { return target_; }
    const std::vector<std::string>& feature_names() const noexcept { return names_; }

    Eigen::Index rows() const noexcept { return features_.rows(); }
    Eigen::Index cols() const noexcept { return features_.cols(); }

    /// New dataset holding the given rows, in the given order.
    Dataset subset(const std::vector<Eigen::Index>& rows) const;

private:
    Matrix features_;
    Vector target_;
    std::vector<std::string> names_;
};

/// Reads the UCI auto-mpg.data layout: mpg, cylinders, displacement, horsepower,
/// weight, acceleration, model year, origin, quoted car name. Rows with "?"
/// horsepower are dropped and the car name is discarded.
Dataset load_auto_mpg(const std::filesystem::path& path);

/// Same parser over in-memory text.
Dataset parse_auto_mpg(const std::string& text);

/// X ~ N(0, 1) i.i.d.; y = X w + b + N(0, noise_sd^2), with w, b drawn once from the seeded stream.
Dataset make_synthetic(Eigen::Index m, Eigen::Index n, double noise_sd, std::uint64_t seed);

/// Seeded random holdout. round(m * val_fraction) rows go to the validation part.
std::pair<Dataset, Dataset> split(const Dataset& d, double val_fraction, std::uint64_t seed);

}  // namespace shoot

#endif  // SHOOT_DATA_HPP
