#include "balayage/balayage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "balayage/errors.hpp"
#include "balayage/kernels.hpp"
#include "balayage/poisson_jensen.hpp"
#include "balayage/potentials.hpp"

namespace balayage {

const char* to_string(HarnessConsistency c) {
    switch (c) {
    case HarnessConsistency::AllPass: return "all-pass";
    case HarnessConsistency::AllFail: return "all-fail";
    case HarnessConsistency::Mixed: return "mixed";
    case HarnessConsistency::Inconclusive: return "inconclusive";
    }
    return "?";
}

namespace {

void require_positive_pair(const DiscreteMeasure& Delta, const DiscreteMeasure& omega, const GridOpenSet& g) {
    if (Delta.dim() != g.dim() || omega.dim() != g.dim()) throw DimensionError("balayage check: dimension mismatch");
    if (!Delta.is_positive() || !omega.is_positive())
        throw DomainError("balayage check: both measures must be positive");
}

double abs_difference(ExtReal a, ExtReal b) {
    if (a.is_finite() && b.is_finite()) return std::abs(a.value() - b.value());
    if (a == b) return 0.0;
    return std::numeric_limits<double>::infinity();
}

Point box_center(const GridOpenSet& g) {
    Point c = g.box_lo();
    const auto hi = g.box_hi();
    for (std::size_t a = 0; a < c.size(); ++a) c[a] = 0.5 * (c[a] + hi[a]);
    return c;
}

Box grid_box(const GridOpenSet& g) { return Box{g.box_lo(), g.box_hi()}; }

} // namespace

CellSet swept_hull(const GridOpenSet& g, const DiscreteMeasure& Delta, const DiscreteMeasure& omega) {
    const DiscreteMeasure both[] = {Delta, omega};
    const CellSet support = rasterize_support(g, both);
    if (!is_relatively_compact(g, support))
        throw DomainError("balayage check: supports reach the frontier band of the open set");
    return inward_fill(g, support);
}

std::vector<Point> outside_samples(const GridOpenSet& g, const CellSet& S_O, std::size_t far_points) {
    std::vector<Point> out;
    for (std::size_t c : cells_outside(g, S_O)) out.push_back(g.cell_center(c));
    const Point center = box_center(g);
    const double R = 3.0 * g.box_diameter();
    for (const auto& dir : sphere_directions(g.dim(), far_points)) out.push_back(axpy(center, R, dir));
    return out;
}

BalayageReport check_har_balayage(const DiscreteMeasure& Delta, const DiscreteMeasure& omega, const GridOpenSet& g,
                                  double tol) {
    require_positive_pair(Delta, omega, g);
    BalayageReport rep;
    rep.tolerance = tol;
    rep.S_O = swept_hull(g, Delta, omega);
    const auto samples = outside_samples(g, rep.S_O);
    rep.samples = samples.size();
    double worst = 0.0;
    Point worst_at;
    for (const auto& y : samples) {
        const double r = abs_difference(pt(Delta, y), pt(omega, y));
        if (r > worst || worst_at.empty()) {
            worst = r;
            worst_at = y;
        }
    }
    rep.potential_residual = worst;
    rep.worst.push_back({"potential", worst_at, worst});
    rep.mass_gap = std::abs(Delta.mass().total - omega.mass().total);
    rep.verdict = worst <= tol && rep.mass_gap <= tol;
    return rep;
}

double check_har_test_functions(const DiscreteMeasure& Delta, const DiscreteMeasure& omega,
                                std::span<const CanonicalSubharmonic> H) {
    if (Delta.dim() != omega.dim()) throw DimensionError("check_har_test_functions: dimension mismatch");
    const auto d = static_cast<std::size_t>(Delta.dim());
    Box hull{Point(d, std::numeric_limits<double>::infinity()), Point(d, -std::numeric_limits<double>::infinity())};
    for (const auto* mu : {&Delta, &omega})
        for (std::size_t i = 0; i < mu->size(); ++i)
            for (std::size_t a = 0; a < d; ++a) {
                hull.lo[a] = std::min(hull.lo[a], mu->location(i)[a]);
                hull.hi[a] = std::max(hull.hi[a], mu->location(i)[a]);
            }
    double worst = 0.0;
    for (const auto& h : H) {
        if (h.dim() != Delta.dim()) throw DimensionError("check_har_test_functions: dimension mismatch");
        if (!h.atoms().empty()) throw DomainError("check_har_test_functions: test functions must be harmonic");
        for (std::size_t i = 0; i < h.sources().size(); ++i)
            if (hull.contains(h.sources().location(i)))
                throw DomainError("check_har_test_functions: a source lies inside the hull of the supports");
        const double r = abs_difference(integrate(h, Delta), integrate(h, omega));
        worst = std::max(worst, r / std::max(1.0, h.harmonic_norm()));
    }
    return worst;
}

BalayageReport check_sbh_balayage(const DiscreteMeasure& Delta, const DiscreteMeasure& omega, const GridOpenSet& g,
                                  double tol) {
    BalayageReport rep = check_har_balayage(Delta, omega, g, tol);
    const DiscreteMeasure only_omega[] = {omega};
    const CellSet omega_cells = rasterize_support(g, only_omega);
    double worst = 0.0;
    Point worst_at;
    for (std::size_t c = 0; c < g.cell_count(); ++c) {
        if (omega_cells.contains(c)) continue;
        const auto y = g.cell_center(c);
        const ExtReal gap = pt(Delta, y) - pt(omega, y);
        const double v = gap.is_neg_inf() ? 0.0 : std::max(0.0, gap.value());
        if (v > worst || worst_at.empty()) {
            worst = v;
            worst_at = y;
        }
    }
    rep.sbh_violation = worst;
    rep.worst.push_back({"subharmonic", worst_at, worst});
    rep.verdict = rep.verdict && worst <= tol;
    return rep;
}

std::vector<CanonicalSubharmonic> default_test_family(const GridOpenSet& g, std::size_t n_random,
                                                      std::uint64_t seed) {
    const int d = g.dim();
    const Box box = grid_box(g);
    std::vector<CanonicalSubharmonic> H;
    H.push_back(CanonicalSubharmonic::harmonic(DiscreteMeasure(d), 1.0, box));
    for (int a = 0; a < d; ++a) {
        std::vector<double> lin(static_cast<std::size_t>(d), 0.0);
        lin[static_cast<std::size_t>(a)] = 1.0;
        H.push_back(CanonicalSubharmonic::harmonic(DiscreteMeasure(d), 0.0, box, lin));
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const Point center = box_center(g);
    const double R = 2.0 * g.box_diameter();
    for (std::size_t k = 0; k < n_random; ++k) {
        std::vector<DiscreteMeasure::Atom> atoms;
        for (int s = 0; s < 3; ++s) {
            Point dir(static_cast<std::size_t>(d));
            double nn = 0.0;
            do {
                nn = 0.0;
                for (auto& c : dir) {
                    c = unit(rng);
                    nn += c * c;
                }
            } while (nn < 1e-6 || nn > 1.0);
            for (auto& c : dir) c /= std::sqrt(nn);
            atoms.push_back({axpy(center, R, dir), unit(rng)});
        }
        H.push_back(CanonicalSubharmonic::harmonic(DiscreteMeasure(d, atoms), 0.0, box));
    }
    return H;
}

BalayageReport main_lemma_harness(const DiscreteMeasure& Delta, const DiscreteMeasure& omega, const GridOpenSet& g,
                                  std::span<const CanonicalSubharmonic> u_list, double tol,
                                  std::size_t special_points) {
    BalayageReport rep = check_har_balayage(Delta, omega, g, tol);
    const CellSet& S_O = rep.S_O;

    // harmonic test functions
    const auto H = default_test_family(g, 20, 0x5eedULL);
    rep.har_test_residual = check_har_test_functions(Delta, omega, H);

    // identity in measure form over B = S_O
    double pj = 0.0;
    for (const auto& u : u_list) {
        const auto r = measure_pj_residual(u, Delta, omega, S_O, g);
        pj = std::max(pj, r.residual);
    }
    rep.pj_residual = pj;

    // kernel family with q = pt_Delta, p = pt_omega and u_z = K(., z), z outside S_O
    const Box box = grid_box(g);
    const int d = g.dim();
    const CanonicalSubharmonic q(Delta, DiscreteMeasure(d), 0.0, box);
    const CanonicalSubharmonic p(omega, DiscreteMeasure(d), 0.0, box);
    std::vector<std::size_t> candidates;
    for (std::size_t c = 0; c < g.cell_count(); ++c)
        if (g.inside(c) && !S_O.contains(c)) candidates.push_back(c);
    double special = 0.0;
    Point special_at;
    if (!candidates.empty() && special_points > 0) {
        const std::size_t n = std::min(special_points, candidates.size());
        for (std::size_t k = 0; k < n; ++k) {
            const auto z = g.cell_center(candidates[k * candidates.size() / n]);
            const auto r = full_symmetric_pj_residual(CanonicalSubharmonic::kernel_at(z, box), q, p, S_O, g);
            if (r.residual > special || special_at.empty()) {
                special = r.residual;
                special_at = z;
            }
        }
    }
    rep.special_residual = special;
    rep.worst.push_back({"special", special_at, special});

    const double families[] = {*rep.har_test_residual, *rep.potential_residual, *rep.pj_residual,
                               *rep.special_residual};
    bool all_low = true;
    bool all_high = true;
    bool borderline = false;
    for (double r : families) {
        all_low = all_low && r <= tol / 10.0;
        all_high = all_high && r >= 10.0 * tol;
        borderline = borderline || (r > tol / 10.0 && r < 10.0 * tol);
    }
    if (borderline)
        rep.consistency = HarnessConsistency::Inconclusive;
    else if (all_low)
        rep.consistency = HarnessConsistency::AllPass;
    else if (all_high)
        rep.consistency = HarnessConsistency::AllFail;
    else
        rep.consistency = HarnessConsistency::Mixed;
    rep.verdict = std::all_of(std::begin(families), std::end(families), [&](double r) { return r <= tol; }) &&
                  rep.mass_gap <= tol;
    return rep;
}

} // namespace balayage
