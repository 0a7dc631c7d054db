#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "shoot/error.hpp"
#include "shoot/nuopt.hpp"

using namespace shoot;

namespace {

struct Problem {
    Vector z;
    Matrix p;
};

Problem random_problem(std::uint64_t seed, Eigen::Index m, Eigen::Index k, double scale = 1.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    Problem out{Vector(m), Matrix(m, k)};
    for (Eigen::Index i = 0; i < m; ++i) out.z(i) = g(rng);
    for (Eigen::Index i = 0; i < out.p.size(); ++i) out.p.data()[i] = scale * g(rng);
    return out;
}

// z = (1, 0, -1), P1 = (1, -1, 0), P2 = (0, -1, 1)
Problem hand_problem() {
    Problem out{Vector(3), Matrix(3, 2)};
    out.z << 1, 0, -1;
    out.p << 1, 0, -1, -1, 0, 1;
    return out;
}

}  // namespace

TEST_CASE("cache moments for a hand example") {
    const Problem h = hand_problem();
    const NuCache c = build_cache(h.z, h.p);
    CHECK(c.c_zz() == doctest::Approx(2.0 / 3.0));
    CHECK(c.c_zi()(0) == doctest::Approx(1.0 / 3.0));
    CHECK(c.c_zi()(1) == doctest::Approx(-1.0 / 3.0));
    CHECK(c.c_ij()(0, 0) == doctest::Approx(2.0 / 3.0));
    CHECK(c.c_ij()(1, 1) == doctest::Approx(2.0 / 3.0));
    CHECK(c.c_ij()(0, 1) == doctest::Approx(1.0 / 3.0));
    // z - P1 = (0, 1, -1), z - P2 = (1, 1, -2)
    CHECK(correlation_at(c, 1.0, 0, 1) == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-12));
    CHECK(correlation_at(c, 0.0, 0, 1) == 1.0);
    CHECK(correlation_at(c, 1e8, 0, 1) == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("cached correlation equals the direct computation") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Problem pr = random_problem(seed, 40, 6, 0.3 + seed);
        const NuCache c = build_cache(pr.z, pr.p);
        for (double nu : {0.0, 1e-4, 0.01, 0.3, 1.0, 7.0, 100.0}) {
            const Matrix g = oracle::assemble(pr.z, pr.p, nu);
            for (Eigen::Index i = 0; i < 6; ++i)
                for (Eigen::Index j = 0; j < 6; ++j)
                    CHECK(std::abs(correlation_at(c, nu, i, j) - oracle::correlation(g.col(i), g.col(j))) < 1e-9);
        }
    }
}

TEST_CASE("large-nu limit is the correlation of the directions") {
    const Problem pr = random_problem(17, 30, 4);
    const NuCache c = build_cache(pr.z, pr.p);
    for (Eigen::Index i = 0; i < 4; ++i)
        for (Eigen::Index j = 0; j < 4; ++j)
            CHECK(std::abs(correlation_at(c, 1e8, i, j) - oracle::correlation(pr.p.col(i), pr.p.col(j))) < 1e-6);
}

TEST_CASE("objective matches brute force") {
    const Problem pr = random_problem(3, 25, 5, 2.0);
    const NuCache c = build_cache(pr.z, pr.p);
    for (double nu : {0.0, 0.05, 0.5, 2.0, 40.0}) {
        const oracle::Objective expect = oracle::brute_objective(pr.z, pr.p, nu);
        const NuObjective got = objective(c, nu);
        CHECK(got.corr_term == doctest::Approx(expect.corr).epsilon(1e-9));
        CHECK(got.magnitude_term == doctest::Approx(expect.magnitude).epsilon(1e-9));
        CHECK(got.total == doctest::Approx(expect.corr + expect.magnitude).epsilon(1e-9));
        CHECK(objective(c, nu, 0.25).magnitude_term == doctest::Approx(0.25 * expect.magnitude).epsilon(1e-9));
    }
    // nu = 0: every column is z
    const NuObjective zero = objective(c, 0.0);
    CHECK(zero.corr_term == doctest::Approx(5.0));
    CHECK(zero.magnitude_term == doctest::Approx(std::sqrt(5.0 * pr.z.squaredNorm())));
}

TEST_CASE("degenerate correlations are reported") {
    Vector z(4);
    z << 1, 2, 3, 4;
    CHECK_THROWS_AS(build_cache(Vector::Constant(4, 2.0), Matrix::Random(4, 3)), DegenerateCorrelationError);
    CHECK_THROWS_AS(build_cache(z, Matrix::Random(4, 1)), DataError);

    // P1 = z: z - 1 * P1 vanishes
    Matrix p(4, 2);
    p.col(0) = z;
    p.col(1) << 0, 1, 0, 1;
    const NuCache c = build_cache(z, p);
    try {
        (void)correlation_at(c, 1.0, 0, 1);
        FAIL("expected a degenerate correlation");
    } catch (const DegenerateCorrelationError& e) {
        CHECK(e.nu() == 1.0);
    }

    // a constant direction becomes a constant column for very large nu
    Matrix q(4, 2);
    q.col(0).setConstant(3.0);
    q.col(1) << 0, 1, 0, 1;
    const NuCache cq = build_cache(z, q);
    CHECK(cq.constant_columns()[0]);
    CHECK_FALSE(cq.constant_columns()[1]);
    CHECK(std::isfinite(cq.degenerate_nu()));
    CHECK_NOTHROW((void)correlation_at(cq, 10.0, 0, 1));
    CHECK_THROWS_AS((void)correlation_at(cq, 2.0 * cq.degenerate_nu(), 0, 1), DegenerateCorrelationError);
}

TEST_CASE("minimize_nu against a dense grid") {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const Problem pr = random_problem(100 + seed, 50, 8, 0.1);
        const NuCache c = build_cache(pr.z, pr.p);
        NuSearch s;
        s.lo = 1e-4;
        s.hi = 100.0;
        s.magnitude_weight = 0.02;
        const NuResult r = minimize_nu(c, s);
        CHECK(r.nu >= s.lo);
        CHECK(r.nu <= s.hi);
        CHECK(r.objective_value == doctest::Approx(objective(c, r.nu, s.magnitude_weight).total).epsilon(1e-12));

        double grid_best = std::numeric_limits<double>::infinity();
        const int points = 4000;
        for (int g = 0; g < points; ++g) {
            const double nu = std::exp(std::log(s.lo) + (std::log(s.hi) - std::log(s.lo)) * g / (points - 1));
            grid_best = std::min(grid_best, objective(c, nu, s.magnitude_weight).total);
        }
        CAPTURE(seed);
        CHECK(r.objective_value <= grid_best + 1e-6 * std::abs(grid_best));

        // local optimality
        for (double f : {0.999, 1.001})
            if (r.nu * f >= s.lo && r.nu * f <= s.hi)
                CHECK(r.objective_value <= objective(c, r.nu * f, s.magnitude_weight).total + 1e-9);
    }
}

TEST_CASE("zero directions leave nu at the lower bound") {
    Vector z(5);
    z << 1, -2, 0.5, 3, -1;
    const NuCache c = build_cache(z, Matrix::Zero(5, 3));
    NuSearch s;
    s.lo = 1e-3;
    CHECK(minimize_nu(c, s).nu == s.lo);
}

TEST_CASE("objective is continuous in nu") {
    const Problem pr = random_problem(8, 30, 5);
    const NuCache c = build_cache(pr.z, pr.p);
    for (double nu : {0.01, 0.2, 1.0, 5.0}) {
        const double f = objective(c, nu).total;
        const double g = objective(c, nu * (1 + 1e-9)).total;
        CHECK(std::abs(f - g) <= 1e-6 * std::max(1.0, std::abs(f)));
    }
}

TEST_CASE("golden section on a parabola") {
    int evals = 0;
    double value = 0.0;
    const double x = golden_section_minimize([](double t) { return (t - 0.3) * (t - 0.3) + 1.0; }, 0.0, 2.0, 1e-8,
                                             evals, value);
    CHECK(x == doctest::Approx(0.3).epsilon(1e-6));
    CHECK(value == doctest::Approx(1.0));
    CHECK(evals > 0);
}

TEST_CASE("search validation") {
    const Problem pr = random_problem(1, 10, 3);
    const NuCache c = build_cache(pr.z, pr.p);
    NuSearch s;
    s.lo = 5.0;
    s.hi = 1.0;
    CHECK_THROWS_AS(minimize_nu(c, s), ConfigError);
    s = {};
    s.grid_points = 1;
    CHECK_THROWS_AS(minimize_nu(c, s), ConfigError);
}
