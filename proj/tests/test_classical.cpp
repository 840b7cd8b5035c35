#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "balayage/classical_domains.hpp"
#include "balayage/errors.hpp"
#include "balayage/kernels.hpp"
#include "balayage/potentials.hpp"
#include "support.hpp"

using namespace balayage;

namespace {

/// Green's function of a disc via complex arithmetic: ln |r^2 - conj(x) y| / (r |y - x|).
double green_disc_oracle(std::complex<double> c, double r, std::complex<double> x, std::complex<double> y) {
    const auto xs = x - c;
    const auto ys = y - c;
    return std::log(std::abs(r * r - std::conj(xs) * ys) / (r * std::abs(ys - xs)));
}

/// Green's function of a ball in R^3 via the Kelvin image of the pole.
double green_ball3_oracle(const Point& c, double r, const Point& x, const Point& y) {
    Point xs(3), ys(3);
    double xx = 0.0;
    for (int a = 0; a < 3; ++a) {
        xs[a] = x[a] - c[a];
        ys[a] = y[a] - c[a];
        xx += xs[a] * xs[a];
    }
    const double direct = 1.0 / distance(ys, xs);
    if (xx == 0.0) return direct - 1.0 / r;
    Point img(3);
    for (int a = 0; a < 3; ++a) img[a] = xs[a] * r * r / xx;
    return direct - r / (std::sqrt(xx) * distance(ys, img));
}

} // namespace

TEST_CASE("poisson density") {
    const BallDomain B(Point{0.5, -0.25}, 2.0);
    const Point c = B.center();
    for (const auto& y : boundary_nodes(B, 64)) CHECK(poisson_density(B, c, y) == doctest::Approx(1.0).epsilon(1e-12));
    const Point x{1.0, 0.3};
    double sum = 0.0;
    for (const auto& y : boundary_nodes(B, 256)) sum += poisson_density(B, x, y) / 256.0;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
    CHECK_THROWS_AS(poisson_density(B, Point{3.0, 0.0}, Point{2.5, -0.25}), DomainError);
    CHECK_THROWS_AS(poisson_density(B, x, Point{0.0, 0.0}), DomainError);
}

TEST_CASE("harmonic measure quadrature") {
    const BallDomain B(Point{0.0, 0.0}, 1.0);
    const Point c{0.0, 0.0};
    const auto w0 = harmonic_measure_quadrature(B, c, 64);
    for (std::size_t i = 0; i < w0.size(); ++i) CHECK(w0.weight(i) == doctest::Approx(1.0 / 64).epsilon(1e-14));
    std::mt19937_64 rng(2);
    for (int d = 1; d <= 3; ++d) {
        const BallDomain Bd(Point(static_cast<std::size_t>(d), 0.1), 1.3);
        for (int k = 0; k < 20; ++k) {
            Point x = testing_support::random_point(rng, d, -0.4, 0.4);
            for (auto& v : x) v += 0.1;
            const std::size_t n = d == 3 ? 4096 : 256;
            const auto w = harmonic_measure_quadrature(Bd, x, n);
            CHECK(w.mass().total == 1.0);
            CHECK(w.is_positive());
            // coordinates are harmonic, so the measure reproduces them
            for (int a = 0; a < d; ++a) {
                double m = 0.0;
                for (std::size_t i = 0; i < w.size(); ++i) m += w.weight(i) * w.location(i)[a];
                CHECK(m == doctest::Approx(x[a]).epsilon(d == 3 ? 2e-3 : 1e-10));
            }
        }
    }
    CHECK_THROWS_AS(harmonic_measure_quadrature(B, Point{1.0, 0.0}, 64), DomainError);
    CHECK_THROWS_AS(harmonic_measure_quadrature(B, c, 4), DomainError);
}

TEST_CASE("quadrature potential equals the pole kernel outside the ball") {
    const BallDomain B(Point{0.0, 0.0}, 1.0);
    const Point x{0.3, -0.2};
    double worst_coarse = 0.0;
    double worst_fine = 0.0;
    const auto coarse = harmonic_measure_quadrature(B, x, 16);
    const auto fine = harmonic_measure_quadrature(B, x, 64);
    for (int k = 0; k < 50; ++k) {
        const double t = 2.0 * std::numbers::pi * k / 50.0;
        const Point y{1.5 * std::cos(t), 1.5 * std::sin(t)};
        const double ref = spatial_kernel(2, y, x).value();
        worst_coarse = std::max(worst_coarse, std::abs(pt(coarse, y).value() - ref));
        worst_fine = std::max(worst_fine, std::abs(pt(fine, y).value() - ref));
    }
    CHECK(worst_fine < worst_coarse / 16.0);
    CHECK(worst_fine < 1e-9);
}

TEST_CASE("green's function of the ball") {
    const BallDomain B(Point{0.2, 0.1}, 1.5);
    const Point x{0.5, -0.4};
    CHECK(green_ball(B, x, x).is_pos_inf());
    CHECK(green_ball(B, x, Point{3.0, 0.0}).value() == 0.0);
    CHECK(green_ball(B, x, Point{1.7, 0.1}).value() == doctest::Approx(0.0).epsilon(1e-12));

    std::mt19937_64 rng(12);
    for (int k = 0; k < 200; ++k) {
        Point y = testing_support::random_point(rng, 2, -1.0, 1.0);
        y[0] += 0.2;
        y[1] += 0.1;
        if (!B.contains(y)) continue;
        const double g = green_ball(B, x, y).value();
        CHECK(g == doctest::Approx(green_disc_oracle({0.2, 0.1}, 1.5, {x[0], x[1]}, {y[0], y[1]})).epsilon(1e-10));
        CHECK(g == green_ball(B, y, x).value());
        CHECK(g >= 0.0);
    }

    const BallDomain B3(Point{0.0, 0.0, 0.0}, 1.0);
    const Point x3{0.1, 0.2, -0.3};
    for (int k = 0; k < 200; ++k) {
        const Point y = testing_support::random_point(rng, 3, -0.57, 0.57);
        CHECK(green_ball(B3, x3, y).value() ==
              doctest::Approx(green_ball3_oracle(Point(3, 0.0), 1.0, x3, y)).epsilon(1e-10));
        CHECK(green_ball(B3, Point(3, 0.0), y).value() ==
              doctest::Approx(green_ball3_oracle(Point(3, 0.0), 1.0, Point(3, 0.0), y)).epsilon(1e-10));
    }

    const BallDomain B1(Point{0.0}, 1.0);
    CHECK(green_ball(B1, Point{0.2}, Point{-0.5}).value() == doctest::Approx((1.0 + 0.2 * 0.5) - 0.7));
}

TEST_CASE("green's function equals the quadrature potential minus the pole kernel") {
    const BallDomain B(Point{0.0, 0.0}, 1.0);
    const Point x{0.25, 0.1};
    const auto w = harmonic_measure_quadrature(B, x, 512);
    std::mt19937_64 rng(31);
    int used = 0;
    while (used < 100) {
        const Point y = testing_support::random_point(rng, 2, -0.8, 0.8);
        if (norm(y) > 0.8) continue;
        ++used;
        const double v = pt(w, y).value() - spatial_kernel(2, y, x).value();
        CHECK(std::abs(green_ball(B, x, y).value() - v) < 1e-4);
    }
}

TEST_CASE("walk on spheres: unit mass, uniform exits from the center, determinism") {
    const BallDomain B(Point{0.0, 0.0}, 1.0);
    WosConfig cfg;
    cfg.n_samples = 10000;
    cfg.seed = 42;
    WosStats stats;
    const auto mc = walk_on_spheres(B, Point{0.0, 0.0}, cfg, &stats);
    CHECK(mc.mass().total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(stats.restarts == 0);

    // Kolmogorov-Smirnov statistic of exit angles against the uniform law
    std::vector<std::pair<double, double>> angles;
    for (std::size_t i = 0; i < mc.size(); ++i) {
        double t = std::atan2(mc.location(i)[1], mc.location(i)[0]) / (2.0 * std::numbers::pi);
        if (t < 0.0) t += 1.0;
        angles.push_back({t, mc.weight(i)});
    }
    std::sort(angles.begin(), angles.end());
    double cdf = 0.0;
    double ks = 0.0;
    for (const auto& [t, wt] : angles) {
        ks = std::max(ks, std::abs(cdf - t));
        cdf += wt;
        ks = std::max(ks, std::abs(cdf - t));
    }
    CHECK(ks < 1.36 / std::sqrt(10000.0));

    CHECK(walk_on_spheres(B, Point{0.0, 0.0}, cfg) == mc);
    cfg.seed = 43;
    CHECK_FALSE(walk_on_spheres(B, Point{0.0, 0.0}, cfg) == mc);
}

TEST_CASE("walk on spheres first moment against the quadrature") {
    const BallDomain B(Point{0.0, 0.0}, 1.0);
    const Point x{0.4, -0.3};
    WosConfig cfg;
    cfg.n_samples = 20000;
    cfg.seed = 7;
    const auto mc = walk_on_spheres(B, x, cfg);
    const auto quad = harmonic_measure_quadrature(B, x, 2048);
    double m1 = 0.0, m2 = 0.0, q = 0.0;
    for (std::size_t i = 0; i < mc.size(); ++i) {
        m1 += mc.weight(i) * mc.location(i)[0];
        m2 += mc.weight(i) * mc.location(i)[0] * mc.location(i)[0];
    }
    for (std::size_t i = 0; i < quad.size(); ++i) q += quad.weight(i) * quad.location(i)[0];
    const double se = std::sqrt((m2 - m1 * m1) / cfg.n_samples);
    CHECK(std::abs(m1 - q) < 4.0 * se);
}

TEST_CASE("walk on spheres on a grid domain") {
    // the open set is a box of cells; exits land on its boundary
    const GridOpenSet g(Point{0.0, 0.0}, 0.1, std::vector<int>{10, 10});
    WosConfig cfg;
    cfg.n_samples = 2000;
    cfg.seed = 3;
    const auto mc = walk_on_spheres(g, Point{0.5, 0.5}, cfg);
    CHECK(mc.mass().total == doctest::Approx(1.0).epsilon(1e-12));
    double m = 0.0;
    for (std::size_t i = 0; i < mc.size(); ++i) {
        const auto p = mc.location(i);
        const double edge = std::min({p[0], p[1], 1.0 - p[0], 1.0 - p[1]});
        CHECK(std::abs(edge) < 2e-4);
        m += mc.weight(i) * p[0];
    }
    CHECK(m == doctest::Approx(0.5).epsilon(0.05));
    CHECK(distance_to_boundary(g, Point{0.5, 0.5}) == doctest::Approx(0.5));
}

TEST_CASE("walk on spheres restart overflow is a numeric fault") {
    const BallDomain B(Point{0.0, 0.0}, 1.0);
    WosConfig cfg;
    cfg.n_samples = 200;
    cfg.max_steps = 1;
    cfg.epsilon_shell = 1e-9;
    CHECK_THROWS_AS(walk_on_spheres(B, Point{0.1, 0.0}, cfg), NumericFault);
}

TEST_CASE("walk on spheres moment error shrinks like one over the square root of the walk count") {
    // root-mean-square error of the first moments over many seeds; a single
    // seed's error is too noisy for a ratio test
    const BallDomain B(Point{0.0, 0.0}, 1.0);
    const Point x{0.3, -0.2};
    const auto quad = harmonic_measure_quadrature(B, x, 2048);
    double ref[2] = {0.0, 0.0};
    for (std::size_t i = 0; i < quad.size(); ++i)
        for (int a = 0; a < 2; ++a) ref[a] += quad.weight(i) * quad.location(i)[a];
    auto rms_error = [&](std::size_t n) {
        double sq = 0.0;
        int count = 0;
        for (std::uint64_t seed = 0; seed < 64; ++seed) {
            WosConfig cfg;
            cfg.n_samples = n;
            cfg.seed = 1000 + seed;
            const auto mc = walk_on_spheres(B, x, cfg);
            for (int a = 0; a < 2; ++a) {
                double m = 0.0;
                for (std::size_t i = 0; i < mc.size(); ++i) m += mc.weight(i) * mc.location(i)[a];
                sq += (m - ref[a]) * (m - ref[a]);
                ++count;
            }
        }
        return std::sqrt(sq / count);
    };
    const double ratio = rms_error(2500) / rms_error(10000);
    CHECK(ratio >= 1.5);
    CHECK(ratio <= 3.0);
}
