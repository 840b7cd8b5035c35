#include "doctest.h"

#include <cmath>
#include <random>

#include "balayage/balayage.hpp"
#include "balayage/duality.hpp"
#include "balayage/errors.hpp"
#include "balayage/kernels.hpp"
#include "balayage/potentials.hpp"
#include "fixtures.hpp"
#include "support.hpp"

using namespace balayage;
using testing_support::disc_frame;
using testing_support::unit_disc;

namespace {

SampleLattice lattice_over(const GridOpenSet& g, double h) {
    SampleLattice lat;
    lat.spacing = h;
    lat.origin = g.box_lo();
    for (int a = 0; a < g.dim(); ++a) {
        lat.origin[a] += h * (0.5 + 0.1180339887498949 * (a + 1));
        lat.shape.push_back(static_cast<int>(std::floor((g.box_hi()[a] - lat.origin[a]) / h)) + 1);
    }
    return lat;
}

double quadrant_gap(const DiscreteMeasure& a, const DiscreteMeasure& b, const Point& c) {
    double m[4] = {0, 0, 0, 0};
    for (std::size_t i = 0; i < a.size(); ++i)
        m[(a.location(i)[0] >= c[0]) + 2 * (a.location(i)[1] >= c[1])] += a.weight(i);
    for (std::size_t i = 0; i < b.size(); ++i)
        m[(b.location(i)[0] >= c[0]) + 2 * (b.location(i)[1] >= c[1])] -= b.weight(i);
    return std::max({std::abs(m[0]), std::abs(m[1]), std::abs(m[2]), std::abs(m[3])});
}

} // namespace

TEST_CASE("forward map of a point mass vanishes") {
    const auto g = disc_frame();
    const Point x{0.1, 0.2};
    const auto V = forward_map(dirac(x), x, g);
    for (std::size_t c = 0; c < g.cell_count(); c += 7) CHECK(V(g.cell_center(c)).value() == 0.0);
    CHECK(vanishing_residual(V, g) == 0.0);
}

TEST_CASE("forward map of harmonic measure is the Green's function") {
    const auto g = disc_frame();
    const Point x{-0.3, 0.2};
    const auto omega = harmonic_measure_quadrature(unit_disc(), x, 512);
    const auto V = forward_map(omega, x, g);
    std::mt19937_64 rng(41);
    int used = 0;
    while (used < 100) {
        const auto y = testing_support::random_point(rng, 2, -0.85, 0.85);
        if (norm(y) > 0.85 || distance(y, x) < 1e-3) continue;
        ++used;
        CHECK(std::abs(V(y).value() - green_ball(unit_disc(), x, y).value()) < 1e-3);
    }
    CHECK(vanishing_residual(V, g) <= 1e-3);
    CHECK(minimum_on_grid(V, g) >= -1e-3);
    CHECK_THROWS_AS(forward_map(dirac(Point{0.5, 0.5}), x, g), HypothesisViolated);
}

TEST_CASE("forward map is affine") {
    const auto g = disc_frame();
    const Point x{0.1, -0.1};
    const auto w1 = harmonic_measure_quadrature(unit_disc(), x, 256);
    const auto w2 = harmonic_measure_quadrature(BallDomain(Point{0.1, -0.1}, 0.5), x, 128);
    const double t = 0.3;
    const auto mixed = combine(t, w1, 1.0 - t, w2);
    const auto V1 = forward_map(w1, x, g);
    const auto V2 = forward_map(w2, x, g);
    const auto Vm = forward_map(mixed, x, g);
    std::mt19937_64 rng(43);
    for (int k = 0; k < 100; ++k) {
        const auto y = testing_support::random_point(rng, 2, -1.2, 1.2);
        const double lhs = Vm(y).value();
        const double rhs = t * V1(y).value() + (1.0 - t) * V2(y).value();
        CHECK(std::abs(lhs - rhs) < 1e-12 * (1.0 + std::abs(lhs)));
    }
}

TEST_CASE("inverse map of the zero potential is the point mass") {
    for (int d = 2; d <= 3; ++d) {
        const Point x(static_cast<std::size_t>(d), 0.01234);
        SampledPotential V{x, [](std::span<const double>) { return ExtReal(0.0); }, std::nullopt};
        SampleLattice lat{Point(static_cast<std::size_t>(d), -0.5), 0.05, std::vector<int>(static_cast<std::size_t>(d), 21)};
        const auto rec = inverse_map(V, lat, {});
        REQUIRE(rec.size() == 1);
        CHECK(std::abs(rec.weight(0) - 1.0) < 1e-6);
        CHECK(rec.location(0)[0] == x[0]);
    }
}

TEST_CASE("pole coefficient of the kernel") {
    const Point x{0.3, 0.1};
    SampledPotential V{x, [&](std::span<const double> y) { return -spatial_kernel(2, y, x) + ExtReal(2.0); }, std::nullopt};
    const double radii[] = {0.01, 0.02, 0.04};
    CHECK(pole_coefficient(V, radii, 64) == doctest::Approx(1.0).epsilon(1e-10));
    const Point x3{0.3, 0.1, 0.0};
    SampledPotential V3{x3, [&](std::span<const double> y) { return -0.5 * spatial_kernel(3, y, x3); }, std::nullopt};
    CHECK(pole_coefficient(V3, radii, 256) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("round trip through the forward and inverse maps") {
    const auto g = disc_frame();
    const Point x{0.25, -0.2};
    const auto omega = harmonic_measure_quadrature(unit_disc(), x, 512);
    const auto V = forward_map(omega, x, g);
    const SampledPotential sampled{x, [&](std::span<const double> y) { return V(y); }, omega};
    const auto rec = inverse_map(sampled, lattice_over(g, 1.0 / 200.0), {});
    CHECK(std::abs(rec.mass().total - 1.0) < 1e-2);
    CHECK(quadrant_gap(rec, omega, x) < 5e-2);
    CHECK(quadrant_gap(rec, omega, Point{0.0, 0.0}) < 5e-2);
}

TEST_CASE("inverse map of the sampled Green's function") {
    const auto g = disc_frame();
    const Point x{-0.2, 0.15};
    const SampledPotential sampled{x, [&](std::span<const double> y) { return green_ball(unit_disc(), x, y); },
                                   std::nullopt};
    const auto rec = inverse_map(sampled, lattice_over(g, 1.0 / 100.0), {});
    CHECK(std::abs(rec.mass().total - 1.0) < 1e-2);
    // stencil error near the pole oscillates in sign, so only its net mass is small
    double pole = 0.0;
    double band = 0.0;
    double elsewhere = 0.0;
    for (std::size_t i = 0; i < rec.size(); ++i) {
        if (distance(rec.location(i), x) == 0.0)
            pole = rec.weight(i);
        else if (std::abs(norm(rec.location(i)) - 1.0) <= 0.03)
            band += rec.weight(i);
        else
            elsewhere += rec.weight(i);
    }
    CHECK(std::abs(pole) < 1e-2);
    CHECK(std::abs(band - 1.0) < 1e-2);
    CHECK(std::abs(elsewhere) < 1e-2);
}

TEST_CASE("inverse map preconditions") {
    const Point x{0.0, 0.0};
    SampledPotential V{x, [](std::span<const double>) { return ExtReal(0.0); }, std::nullopt};
    SampleLattice lat{Point{-0.5, -0.5}, 0.05, {21, 21}};
    CHECK_THROWS_AS(inverse_map(V, lat, {}), DomainError);
    const Point x2{0.0123, 0.0};
    SampledPotential W{x2, [](std::span<const double>) { return ExtReal(0.0); }, dirac(Point{0.1, 0.0})};
    CHECK_THROWS_AS(inverse_map(W, lat, {}), DomainError);
    SampledPotential W1{Point{0.1}, [](std::span<const double>) { return ExtReal(0.0); }, std::nullopt};
    CHECK_THROWS_AS(inverse_map(W1, SampleLattice{Point{0.0}, 0.1, {10}}, {}), DomainError);
}

TEST_CASE("harmonic approximation by kernel sums") {
    // constant on an annulus
    const Point c{0.0, 0.0};
    std::vector<Point> ring_samples;
    for (double r : {0.5, 0.6, 0.7, 0.8})
        for (const auto& p : mfs_default_sources(c, r, 64)) ring_samples.push_back(p);
    std::vector<double> ones(ring_samples.size(), 1.0);
    const auto in_annulus = [](std::span<const double> y) {
        const double r = norm(y);
        return r >= 0.5 && r <= 0.8;
    };
    const auto fit1 = mfs_fit(ring_samples, ones, mfs_default_sources(c, 3.0, 16), 1e-2, in_annulus);
    CHECK(fit1.success);
    CHECK(fit1.sup_error < 1e-6);
    CHECK(std::abs(fit1(Point{0.0, 0.65}) - 1.0) < 1e-6);

    // real part of the squared complex coordinate on the unit disc
    std::vector<Point> disc_samples;
    for (double r : {0.25, 0.5, 0.75, 1.0})
        for (const auto& p : mfs_default_sources(c, r, 64)) disc_samples.push_back(p);
    std::vector<double> vals;
    for (const auto& p : disc_samples) vals.push_back(p[0] * p[0] - p[1] * p[1]);
    const auto in_disc = [](std::span<const double> y) { return norm(y) <= 1.0; };
    const auto fit2 = mfs_fit(disc_samples, vals, mfs_default_sources(c, 1.5, 32), 1e-4, in_disc);
    CHECK(fit2.success);
    double prev = fit2.sup_error;
    for (std::size_t m : {64, 128}) {
        const auto f = mfs_fit(disc_samples, vals, mfs_default_sources(c, 1.5, m), 1e-4, in_disc);
        CHECK(f.sup_error <= prev + 1e-12);
        prev = f.sup_error;
    }

    // vacuous threshold
    const auto fit3 = mfs_fit(disc_samples, vals, mfs_default_sources(c, 3.0, 1), 1e6, in_disc);
    CHECK(fit3.success);

    CHECK_THROWS_AS(mfs_fit(disc_samples, vals, std::vector<Point>{{0.1, 0.1}}, 1.0, in_disc), DomainError);
    CHECK_THROWS_AS(mfs_fit(disc_samples, vals, std::vector<Point>{}, 1.0, in_disc), DomainError);

    // repeated sources make the system rank deficient
    std::vector<Point> twice = mfs_default_sources(c, 1.5, 8);
    twice.push_back(twice.front());
    const auto fit4 = mfs_fit(disc_samples, vals, twice, 1.0, in_disc);
    CHECK(fit4.regularized);
}

TEST_CASE("Jensen measures give nonnegative potentials") {
    const auto g = disc_frame();
    std::mt19937_64 rng(61);
    for (int k = 0; k < 6; ++k) {
        const Point x = testing_support::random_point(rng, 2, -0.4, 0.4);
        const double r = testing_support::uniform(rng, 0.6, 0.95);
        const auto omega = harmonic_measure_quadrature(BallDomain(Point{0.0, 0.0}, r), x, 256);
        const double tol = 1e-3;
        REQUIRE(check_sbh_balayage(dirac(x), omega, g, tol).verdict);
        const auto V = forward_map(omega, x, g, tol);
        CHECK(minimum_on_grid(V, g) >= -10.0 * tol);
        CHECK(vanishing_residual(V, g) <= 10.0 * tol);
    }
}
