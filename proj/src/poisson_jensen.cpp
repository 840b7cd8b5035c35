#include "balayage/poisson_jensen.hpp"

#include <cmath>
#include <limits>

#include "balayage/balayage.hpp"
#include "balayage/duality.hpp"
#include "balayage/errors.hpp"
#include "balayage/kernels.hpp"
#include "balayage/potentials.hpp"

namespace balayage {

double PJReport::signed_residual() const {
    if (lhs.is_finite() && rhs.is_finite()) return lhs.value() - rhs.value();
    if (lhs == rhs) return 0.0;
    return lhs.value() > rhs.value() ? std::numeric_limits<double>::infinity()
                                     : -std::numeric_limits<double>::infinity();
}

PJReport make_pj_report(ExtReal lhs, ExtReal rhs) {
    PJReport r{lhs, rhs, 0.0, false};
    if (lhs.is_finite() && rhs.is_finite())
        r.residual = std::abs(lhs.value() - rhs.value());
    else if (lhs == rhs)
        r.both_neg_inf = lhs.is_neg_inf();
    else
        r.residual = std::numeric_limits<double>::infinity();
    return r;
}

namespace {

constexpr double kFaceAmbiguity = 1e-9;

// Whether the atom is near a face whose two sides differ in S-membership.
bool ambiguous_membership(const GridOpenSet& g, const CellSet& S, std::span<const double> p, std::size_t cell) {
    const auto m = g.multi_index(cell);
    const bool in = S.contains(cell);
    for (int a = 0; a < g.dim(); ++a) {
        const double lo = g.origin()[static_cast<std::size_t>(a)] + m[static_cast<std::size_t>(a)] * g.spacing();
        const double off = p[static_cast<std::size_t>(a)] - lo;
        for (int side : {-1, 1}) {
            const double gap = side < 0 ? off : g.spacing() - off;
            if (gap >= kFaceAmbiguity) continue;
            int q[3] = {m[0], m[1], m[2]};
            q[a] += side;
            bool neighbour_in = false;
            if (q[a] >= 0 && q[a] < g.shape()[static_cast<std::size_t>(a)])
                neighbour_in = S.contains(g.index(std::span<const int>(q, static_cast<std::size_t>(g.dim()))));
            if (neighbour_in != in) return true;
        }
    }
    return false;
}

// Atoms of u in the inside cells of g.
DiscreteMeasure atoms_in_open_set(const DiscreteMeasure& mu, const GridOpenSet& g) {
    CellSet all(g);
    for (std::size_t c = 0; c < g.cell_count(); ++c)
        if (g.inside(c)) all.insert(c);
    return atoms_in_cells(mu, g, all);
}

// sum_b w_b f(b)
ExtReal weighted_sum(const DiscreteMeasure& mu, const std::function<ExtReal(std::span<const double>)>& f) {
    ExtAccumulator acc;
    for (std::size_t i = 0; i < mu.size(); ++i) acc.add(mu.weight(i) * f(mu.location(i)));
    return acc.result();
}

} // namespace

DiscreteMeasure atoms_in_cells(const DiscreteMeasure& mu, const GridOpenSet& g, const CellSet& S) {
    if (mu.dim() != g.dim()) throw DimensionError("atoms_in_cells: dimension mismatch");
    return restrict(mu, [&](std::span<const double> p) {
        const auto cell = g.locate(p);
        if (!cell) return false;
        if (ambiguous_membership(g, S, p, *cell))
            throw DomainError("atoms_in_cells: atom lies on a face separating the cell set from its complement");
        return S.contains(*cell);
    });
}

PJReport classical_pj_residual(const CanonicalSubharmonic& u, const BallDomain& B, std::span<const double> x,
                               std::size_t n_quad) {
    if (u.dim() != B.dim()) throw DimensionError("classical_pj_residual: dimension mismatch");
    Box ball_box{B.center(), B.center()};
    for (std::size_t a = 0; a < ball_box.lo.size(); ++a) {
        ball_box.lo[a] -= B.radius();
        ball_box.hi[a] += B.radius();
    }
    if (!u.region().contains(ball_box))
        throw DomainError("classical_pj_residual: the closed ball must lie in the region of u");
    const auto& atoms = u.atoms();
    for (std::size_t i = 0; i < atoms.size(); ++i)
        if (std::abs(distance(atoms.location(i), B.center()) - B.radius()) <= 1e-9 * B.radius())
            throw DomainError("classical_pj_residual: an atom of u lies on the boundary sphere");

    const auto omega = harmonic_measure_quadrature(B, x, n_quad);
    const auto in_ball =
        restrict(atoms, [&](std::span<const double> a) { return distance(a, B.center()) <= B.radius(); });
    const ExtReal green_term = weighted_sum(in_ball, [&](std::span<const double> a) { return green_ball(B, x, a); });
    return make_pj_report(eval_subharmonic(u, x), integrate(u, omega) - green_term);
}

PJReport full_symmetric_pj_residual(const CanonicalSubharmonic& u, const CanonicalSubharmonic& q,
                                    const CanonicalSubharmonic& p, const CellSet& B_cells, const GridOpenSet& g) {
    if (u.dim() != g.dim() || q.dim() != g.dim() || p.dim() != g.dim())
        throw DimensionError("full_symmetric_pj_residual: dimension mismatch");
    const auto u_in_B = atoms_in_cells(u.atoms(), g, B_cells);
    auto eval_p = [&](std::span<const double> y) { return eval_subharmonic(p, y); };
    auto eval_q = [&](std::span<const double> y) { return eval_subharmonic(q, y); };
    const ExtReal lhs = integrate(u, q.atoms()) + weighted_sum(u_in_B, eval_p);
    const ExtReal rhs = integrate(u, p.atoms()) + weighted_sum(u_in_B, eval_q);
    return make_pj_report(lhs, rhs);
}

PJReport symmetric_pj_residual(const CanonicalSubharmonic& u, const CanonicalSubharmonic& q,
                               const CanonicalSubharmonic& p, const CellSet& S_cells, const GridOpenSet& g,
                               double hypothesis_tol) {
    if (atoms_in_cells(q.atoms(), g, S_cells).size() != q.atoms().size() ||
        atoms_in_cells(p.atoms(), g, S_cells).size() != p.atoms().size())
        throw HypothesisViolated("symmetric_pj_residual: the Riesz measures of q and p must live in S");
    for (std::size_t c = 0; c < g.cell_count(); ++c) {
        if (!g.inside(c) || S_cells.contains(c)) continue;
        const auto y = g.cell_center(c);
        const double qv = eval_subharmonic(q, y).value();
        const double pv = eval_subharmonic(p, y).value();
        if (!(std::abs(qv - pv) <= hypothesis_tol * (1.0 + std::abs(qv))))
            throw HypothesisViolated("symmetric_pj_residual: q != p outside S (hypothesis violated)");
    }
    return full_symmetric_pj_residual(u, q, p, S_cells, g);
}

PJReport measure_pj_residual(const CanonicalSubharmonic& u, const DiscreteMeasure& Delta,
                             const DiscreteMeasure& omega, const CellSet& B_cells, const GridOpenSet& g) {
    const CellSet S_O = swept_hull(g, Delta, omega);
    if (!S_O.is_subset_of(B_cells)) throw HypothesisViolated("measure_pj_residual: S_O is not contained in B");
    if (!is_relatively_compact(g, B_cells))
        throw HypothesisViolated("measure_pj_residual: B is not relatively compact in the open set");
    const auto u_in_B = atoms_in_cells(u.atoms(), g, B_cells);
    const ExtReal lhs =
        integrate(u, Delta) + weighted_sum(u_in_B, [&](std::span<const double> b) { return pt(omega, b); });
    const ExtReal rhs =
        integrate(u, omega) + weighted_sum(u_in_B, [&](std::span<const double> b) { return pt(Delta, b); });
    return make_pj_report(lhs, rhs);
}

PJReport asp_pj_residual(const CanonicalSubharmonic& u, std::span<const double> x, const DiscreteMeasure& Delta_V,
                         const std::function<ExtReal(std::span<const double>)>& V, const GridOpenSet& g) {
    if (u.dim() != g.dim() || x.size() != static_cast<std::size_t>(g.dim()))
        throw DimensionError("asp_pj_residual: dimension mismatch");
    const auto u_in_O = atoms_in_open_set(u.atoms(), g);
    return make_pj_report(eval_subharmonic(u, x), integrate(u, Delta_V) - weighted_sum(u_in_O, V));
}

PJReport asp_pj_residual(const CanonicalSubharmonic& u, const ASPotential& V, const GridOpenSet& g) {
    return asp_pj_residual(u, V.pole(), V.base_measure(), V, g);
}

PJReport asj_pj_residual(const CanonicalSubharmonic& u, const DiscreteMeasure& omega, std::span<const double> x,
                         const GridOpenSet& g, double premise_tol) {
    if (!check_har_balayage(dirac(x), omega, g, premise_tol).verdict)
        throw HypothesisViolated("asj_pj_residual: omega is not an Arens-Singer measure at x");
    return asp_pj_residual(u, x, omega,
                           [&](std::span<const double> y) { return as_potential_value(omega, x, y); }, g);
}

} // namespace balayage
