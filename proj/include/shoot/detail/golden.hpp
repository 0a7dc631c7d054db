#ifndef SHOOT_DETAIL_GOLDEN_HPP
#define SHOOT_DETAIL_GOLDEN_HPP

#include <cmath>
#include <utility>

namespace shoot {

template <class F>
double golden_section_minimize(F&& f, double a, double b, double tol, int& evaluations, double& best_value) {
    constexpr double inv_phi = 0.6180339887498948482;
    if (b < a) std::swap(a, b);

    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    evaluations += 2;

    double best_x = fc <= fd ? c : d;
    best_value = std::min(fc, fd);

    constexpr int kMaxIterations = 200;
    for (int it = 0; it < kMaxIterations && (b - a) > tol * (1.0 + std::abs(best_x)); ++it) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
            if (fc < best_value || (fc == best_value && c < best_x)) {
                best_value = fc;
                best_x = c;
            }
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
            if (fd < best_value) {
                best_value = fd;
                best_x = d;
            }
        }
        ++evaluations;
    }
    return best_x;
}

}  // namespace shoot

#endif  // SHOOT_DETAIL_GOLDEN_HPP
