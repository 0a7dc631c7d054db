#include "shoot/numeric.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace shoot {

Vector compensated_row_mean(const Matrix& columns) {
    Vector out(columns.rows());
    if (columns.cols() == 0) {
        out.setZero();
        return out;
    }
    for (Eigen::Index r = 0; r < columns.rows(); ++r) {
        CompensatedSum acc;
        for (Eigen::Index c = 0; c < columns.cols(); ++c) acc.add(columns(r, c));
        out(r) = acc.value() / static_cast<double>(columns.cols());
    }
    return out;
}

unsigned resolve_threads(unsigned requested) noexcept {
    if (requested != 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
    const std::size_t workers = std::min<std::size_t>(resolve_threads(threads), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::size_t error_index = count;

    auto run = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                body(i);
            } catch (...) {
                // keep the lowest failing index so the reported error is scheduling-independent
                std::lock_guard lock(error_mutex);
                if (i < error_index) {
                    error_index = i;
                    first_error = std::current_exception();
                }
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
    run();
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace shoot
