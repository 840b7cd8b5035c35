#include "doctest.h"

#include <cmath>
#include <random>

#include "balayage/balayage.hpp"
#include "balayage/errors.hpp"
#include "balayage/kernels.hpp"
#include "balayage/poisson_jensen.hpp"
#include "balayage/potentials.hpp"
#include "fixtures.hpp"
#include "support.hpp"

using namespace balayage;
using testing_support::disc_frame;
using testing_support::frame_box;
using testing_support::unit_disc;

namespace {

const Box kWide{{-2.0, -2.0}, {2.0, 2.0}};

/// Five atoms at radius <= 0.55, sources outside the wide box.
CanonicalSubharmonic random_u(std::mt19937_64& rng) {
    std::vector<DiscreteMeasure::Atom> atoms, sources;
    for (int k = 0; k < 5; ++k) {
        const double t = testing_support::uniform(rng, 0, 6.283185307179586);
        const double r = testing_support::uniform(rng, 0.05, 0.55);
        atoms.push_back({{r * std::cos(t), r * std::sin(t)}, testing_support::uniform(rng, 0.1, 1.0)});
    }
    for (int k = 0; k < 3; ++k) {
        const double t = testing_support::uniform(rng, 0, 6.283185307179586);
        sources.push_back({{3.0 * std::cos(t), 3.0 * std::sin(t)}, testing_support::uniform(rng, -1.0, 1.0)});
    }
    return CanonicalSubharmonic(DiscreteMeasure(2, atoms), DiscreteMeasure(2, sources),
                                testing_support::uniform(rng, -1, 1), kWide, {0.3, -0.2});
}

} // namespace

TEST_CASE("canonical subharmonic functions") {
    const Point x{0.2, 0.3};
    const auto k = CanonicalSubharmonic::kernel_at(x, kWide);
    const Point y{-0.5, 0.1};
    CHECK(eval_subharmonic(k, y) == spatial_kernel(2, y, x));
    CHECK_THROWS_AS(CanonicalSubharmonic(DiscreteMeasure(2), dirac(Point{0.0, 0.0}), 0.0, kWide), DomainError);
    CHECK_THROWS_AS(CanonicalSubharmonic(combine(-1.0, dirac(x), 0.0, dirac(x)), DiscreteMeasure(2), 0.0, kWide),
                    DomainError);

    // harmonic part satisfies the mean value property
    const auto h = CanonicalSubharmonic::harmonic(
        DiscreteMeasure(2, std::vector<DiscreteMeasure::Atom>{{{3.0, 0.5}, 0.7}, {{-2.5, 2.5}, -1.1}}), 0.4, kWide,
        {0.5, 1.5});
    const auto f = [&](std::span<const double> p) { return eval_subharmonic(h, p).value(); };
    const Point c{0.1, -0.2};
    CHECK(std::abs(spherical_mean(f, c, 0.9, 256) - f(c)) < 1e-9);
    CHECK(h.harmonic_norm() == doctest::Approx(0.7 + 1.1 + 0.4 + 0.5 + 1.5));
}

TEST_CASE("classical identity on the disc") {
    const Point x{0.3, -0.2};
    const auto u = CanonicalSubharmonic::kernel_at(Point{-0.35, 0.25}, kWide);
    const double r8 = classical_pj_residual(u, unit_disc(), x, 8).residual;
    const double r32 = classical_pj_residual(u, unit_disc(), x, 32).residual;
    const double r512 = classical_pj_residual(u, unit_disc(), x, 512).residual;
    CHECK(r512 < 1e-3);
    CHECK(r32 < r8 / 10.0);
    CHECK(r512 <= std::max(r32, 1e-14));

    // harmonic on the closed ball: only the Poisson integral remains
    const auto h = CanonicalSubharmonic(dirac(Point{1.5, 0.2}), DiscreteMeasure(2), 0.0, kWide);
    CHECK(classical_pj_residual(h, unit_disc(), x, 512).residual < 1e-9);

    // atom at the pole: both sides are -inf
    const auto at_pole = CanonicalSubharmonic::kernel_at(x, kWide);
    const auto rep = classical_pj_residual(at_pole, unit_disc(), x, 512);
    CHECK(rep.lhs.is_neg_inf());
    CHECK(rep.rhs.is_neg_inf());
    CHECK(rep.both_neg_inf);
    CHECK(rep.residual == 0.0);

    // constants shift both sides equally
    std::mt19937_64 rng(6);
    for (int k = 0; k < 10; ++k) {
        const auto v = random_u(rng);
        const double a = classical_pj_residual(v, unit_disc(), x, 512).residual;
        const double b = classical_pj_residual(v.with_constant(v.constant() + 1.0), unit_disc(), x, 512).residual;
        CHECK(std::abs(a - b) < 1e-12);
        CHECK(a < 1e-3);
    }

    const auto straddle = CanonicalSubharmonic::kernel_at(Point{1.0, 0.0}, kWide);
    CHECK_THROWS_AS(classical_pj_residual(straddle, unit_disc(), x, 64), DomainError);
}

TEST_CASE("symmetric identity: equal functions give zero") {
    const auto g = disc_frame();
    std::mt19937_64 rng(13);
    const auto u = random_u(rng);
    const auto q = CanonicalSubharmonic::kernel_at(Point{0.2, 0.1}, frame_box(g));
    const DiscreteMeasure at[] = {q.atoms()};
    const auto S = inward_fill(g, rasterize_support(g, at));
    const auto rep = symmetric_pj_residual(u, q, q, S, g);
    CHECK(rep.residual == 0.0);
}

TEST_CASE("symmetric identity: classical instance and cross-check") {
    const auto g = disc_frame();
    const Point x{0.25, -0.15};
    const auto omega = harmonic_measure_quadrature(unit_disc(), x, 512);
    const auto q = CanonicalSubharmonic::kernel_at(x, frame_box(g));
    const CanonicalSubharmonic p(omega, DiscreteMeasure(2), 0.0, frame_box(g));
    const auto S = swept_hull(g, dirac(x), omega);
    std::mt19937_64 rng(17);
    for (int k = 0; k < 5; ++k) {
        const auto u = random_u(rng);
        const auto sym = symmetric_pj_residual(u, q, p, S, g, 1e-3);
        const auto cls = classical_pj_residual(u, unit_disc(), x, 512);
        CHECK(sym.residual < 1e-3);
        CHECK(std::abs(sym.signed_residual() - cls.signed_residual()) < 2e-3);
    }
    // q and p differ outside a set that is too small
    CellSet tiny(g);
    tiny.insert(*g.locate(x));
    const auto u = random_u(rng);
    CHECK_THROWS_AS(symmetric_pj_residual(u, q, p, tiny, g), HypothesisViolated);
}

TEST_CASE("symmetric identity: shared harmonic part") {
    const auto g = disc_frame();
    const Point x{-0.1, 0.2};
    const auto Delta = dirac(x);
    const auto omega = harmonic_measure_quadrature(unit_disc(), x, 512);
    const auto rep = check_har_balayage(Delta, omega, g, 1e-3);
    REQUIRE(rep.verdict);
    const DiscreteMeasure sources(2, std::vector<DiscreteMeasure::Atom>{{{2.5, 0.3}, 0.8}, {{-0.4, 2.9}, -0.5}});
    const CanonicalSubharmonic q(Delta, sources, 0.1, frame_box(g));
    const CanonicalSubharmonic p(omega, sources, 0.1, frame_box(g));
    std::mt19937_64 rng(19);
    const auto u = random_u(rng);
    const auto r = symmetric_pj_residual(u, q, p, rep.S_O, g, 1e-3);
    CHECK(r.residual <= 10.0 * std::max(*rep.potential_residual, 1e-12) * u.atoms().mass().total + 1e-3);
}

TEST_CASE("measure form of the identity") {
    const auto g = disc_frame();
    const Point x{0.3, 0.1};
    const auto omega = harmonic_measure_quadrature(unit_disc(), x, 512);
    const auto S_O = swept_hull(g, dirac(x), omega);
    std::mt19937_64 rng(23);
    const auto u = random_u(rng);
    CHECK(measure_pj_residual(u, omega, omega, S_O, g).residual == 0.0);

    const auto k = CanonicalSubharmonic::kernel_at(Point{-0.4, -0.3}, frame_box(g));
    const auto m = measure_pj_residual(k, dirac(x), omega, S_O, g);
    const auto c = classical_pj_residual(k, unit_disc(), x, 512);
    CHECK(m.residual < 1e-3);
    CHECK(std::abs(m.signed_residual() - c.signed_residual()) < 2e-3);

    // enlarging B where the two potentials agree leaves the residual unchanged
    CellSet bigger = S_O;
    for (std::size_t cell = 0; cell < g.cell_count(); ++cell)
        if (norm(g.cell_center(cell)) < 1.15) bigger.insert(cell);
    const auto u2 = CanonicalSubharmonic(
        DiscreteMeasure(2, std::vector<DiscreteMeasure::Atom>{{{-0.4, -0.3}, 1.0}, {{1.09, 0.0}, 0.5}}),
        DiscreteMeasure(2), 0.0, frame_box(g));
    const double r1 = measure_pj_residual(u2, dirac(x), omega, S_O, g).residual;
    const double r2 = measure_pj_residual(u2, dirac(x), omega, bigger, g).residual;
    CHECK(std::abs(r1 - r2) < 1e-9);

    CellSet small(g);
    small.insert(*g.locate(x));
    CHECK_THROWS_AS(measure_pj_residual(u, dirac(x), omega, small, g), HypothesisViolated);
}

TEST_CASE("Arens-Singer forms of the identity") {
    const auto g = disc_frame();
    const Point x{-0.2, -0.25};
    const auto omega = harmonic_measure_quadrature(unit_disc(), x, 512);
    const auto u = CanonicalSubharmonic::kernel_at(Point{0.35, 0.3}, frame_box(g));
    const auto asj = asj_pj_residual(u, omega, x, g);
    CHECK(asj.residual < 1e-3);

    // identical arithmetic through the potential object
    const auto V = forward_map(omega, x, g);
    const auto asp = asp_pj_residual(u, V, g);
    CHECK(asp.lhs == asj.lhs);
    CHECK(asp.rhs == asj.rhs);

    // V from the Green's function reproduces the classical identity
    const auto green = [&](std::span<const double> y) { return green_ball(unit_disc(), x, y); };
    const auto gr = asp_pj_residual(u, x, omega, green, g);
    CHECK(std::abs(gr.signed_residual() - classical_pj_residual(u, unit_disc(), x, 512).signed_residual()) < 1e-9);

    // omega = delta_x: V vanishes and rhs = u(x)
    const auto trivial = asj_pj_residual(u, dirac(x), x, g);
    CHECK(trivial.residual == 0.0);
    const auto zero = [](std::span<const double>) { return ExtReal(0.0); };
    CHECK(asp_pj_residual(u, x, dirac(x), zero, g).residual == 0.0);

    // harmonic u on the infill: the correction term vanishes
    const auto h = CanonicalSubharmonic::harmonic(dirac(Point{2.0, 2.0}), 0.5, Box{{-1.5, -1.5}, {1.5, 1.5}});
    const auto hr = asj_pj_residual(h, omega, x, g);
    CHECK(hr.residual < 1e-3);

    CHECK_THROWS_AS(asj_pj_residual(u, dirac(Point{0.5, 0.5}), x, g), HypothesisViolated);
}

TEST_CASE("ambiguous atom placement is rejected") {
    const GridOpenSet g(Point{0.0, 0.0}, 1.0, std::vector<int>{6, 6});
    CellSet S(g);
    S.insert(g.index(std::vector<int>{2, 2}));
    const auto on_face = dirac(Point{3.0, 2.5});
    CHECK_THROWS_AS(atoms_in_cells(on_face, g, S), DomainError);
    const auto inside = dirac(Point{2.5, 2.5});
    CHECK(atoms_in_cells(inside, g, S).size() == 1);
}

TEST_CASE("full symmetric identity over a random family") {
    const auto g = disc_frame();
    const Point x{0.15, 0.2};
    const auto omega = harmonic_measure_quadrature(unit_disc(), x, 512);
    const auto q = CanonicalSubharmonic::kernel_at(x, frame_box(g));
    const CanonicalSubharmonic p(omega, DiscreteMeasure(2), 0.0, frame_box(g));
    const auto B = swept_hull(g, dirac(x), omega);
    std::mt19937_64 rng(53);
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) worst = std::max(worst, full_symmetric_pj_residual(random_u(rng), q, p, B, g).residual);
    CHECK(worst <= 1e-3);

    // vanishing residuals on the special family bound |q - p| outside S_O
    double special = 0.0;
    double gap = 0.0;
    for (auto c : cells_outside(g, B)) {
        const auto y = g.cell_center(c);
        const auto u = CanonicalSubharmonic::kernel_at(y, frame_box(g));
        special = std::max(special, full_symmetric_pj_residual(u, q, p, B, g).residual);
        gap = std::max(gap, std::abs(eval_subharmonic(q, y).value() - eval_subharmonic(p, y).value()));
    }
    CHECK(special <= 1e-3);
    CHECK(gap <= 1e-2);
}

TEST_CASE("residual is subadditive in u") {
    const BallDomain& B = unit_disc();
    const Point x{-0.1, 0.3};
    std::mt19937_64 rng(59);
    for (int k = 0; k < 30; ++k) {
        const auto u1 = random_u(rng);
        const auto u2 = random_u(rng);
        const double a = testing_support::uniform(rng, 0.1, 3.0);
        std::vector<double> lin = {a * u1.linear()[0] + u2.linear()[0], a * u1.linear()[1] + u2.linear()[1]};
        const CanonicalSubharmonic sum(combine(a, u1.atoms(), 1.0, u2.atoms()), combine(a, u1.sources(), 1.0, u2.sources()),
                                       a * u1.constant() + u2.constant(), kWide, lin);
        for (std::size_t n : {16, 64}) {
            const double r = classical_pj_residual(sum, B, x, n).residual;
            const double r1 = classical_pj_residual(u1, B, x, n).residual;
            const double r2 = classical_pj_residual(u2, B, x, n).residual;
            CHECK(r <= a * r1 + r2 + 1e-12);
        }
    }
}
