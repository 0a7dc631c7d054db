#ifndef SHOOT_NUMERIC_HPP
#define SHOOT_NUMERIC_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>

#include <Eigen/Dense>

namespace shoot {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// splitmix64 finalizer; used to derive independent per-stream seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed for stream `index` of a generator family rooted at `seed`.
/// Streams are independent of evaluation order, so parallel loops stay deterministic.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    return mix64(mix64(seed) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) noexcept {
    return derive_seed(derive_seed(seed, a), b);
}

using Rng = std::mt19937_64;

/// Neumaier-compensated accumulator.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Row-wise compensated mean of the columns of `columns` (m x k -> m).
Vector compensated_row_mean(const Matrix& columns);

/// Runs body(i) for i in [0, count) on up to `threads` workers (0 = hardware concurrency).
/// Work items must write only to their own output slot.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

unsigned resolve_threads(unsigned requested) noexcept;

}  // namespace shoot

#endif  // SHOOT_NUMERIC_HPP
