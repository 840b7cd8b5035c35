#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "balayage/classical_domains.hpp"
#include "balayage/duality.hpp"
#include "balayage/ext_real.hpp"
#include "balayage/geometry.hpp"
#include "balayage/measures.hpp"
#include "balayage/subharmonic.hpp"

namespace balayage {

/// Both sides of a Poisson-Jensen identity. residual = |lhs - rhs| when both
/// are finite, 0 when both are the same infinity (flagged for -inf), +inf when
/// exactly one side is infinite.
struct PJReport {
    ExtReal lhs;
    ExtReal rhs;
    double residual = 0.0;
    bool both_neg_inf = false;

    /// lhs - rhs when both finite, else 0 or +-inf.
    double signed_residual() const;
};

PJReport make_pj_report(ExtReal lhs, ExtReal rhs);

/// Atoms of mu lying in cells of S. An atom closer than 1e-9 to a face that
/// separates an S cell from a non-S cell is ambiguous and throws DomainError.
DiscreteMeasure atoms_in_cells(const DiscreteMeasure& mu, const GridOpenSet& g, const CellSet& S);

/// u(x) = sum_i w_i u(y_i) - sum_{a in clos B} w_a g_B(x, a), with the harmonic
/// measure replaced by its n_quad-node quadrature.
PJReport classical_pj_residual(const CanonicalSubharmonic& u, const BallDomain& B, std::span<const double> x,
                               std::size_t n_quad);

/// Full symmetric identity
///   int_S u dDelta_q + int_B p dDelta_u = int_S u dDelta_p + int_B q dDelta_u
/// where Delta_q, Delta_p are the atoms of q and p (all of which must lie in
/// S) and Delta_u is restricted to the cells of B.
PJReport full_symmetric_pj_residual(const CanonicalSubharmonic& u, const CanonicalSubharmonic& q,
                                    const CanonicalSubharmonic& p, const CellSet& B_cells, const GridOpenSet& g);

/// Symmetric identity with B = S. Before evaluating, q = p is checked at every
/// cell center outside S (|q - p| <= hypothesis_tol (1 + |q|)); failure throws
/// HypothesisViolated.
PJReport symmetric_pj_residual(const CanonicalSubharmonic& u, const CanonicalSubharmonic& q,
                               const CanonicalSubharmonic& p, const CellSet& S_cells, const GridOpenSet& g,
                               double hypothesis_tol = 1e-9);

/// int u dDelta + int_B pt_omega dDelta_u = int u domega + int_B pt_Delta dDelta_u.
/// Requires S_O subset of B and B relatively compact in g.
PJReport measure_pj_residual(const CanonicalSubharmonic& u, const DiscreteMeasure& Delta,
                             const DiscreteMeasure& omega, const CellSet& B_cells, const GridOpenSet& g);

/// u(x) = int u dDelta_V - int V dDelta_u for an explicit pair (Delta_V, V).
/// Delta_u is restricted to the inside cells of g.
PJReport asp_pj_residual(const CanonicalSubharmonic& u, std::span<const double> x, const DiscreteMeasure& Delta_V,
                         const std::function<ExtReal(std::span<const double>)>& V, const GridOpenSet& g);

/// Same identity for V = P_x(omega); identical arithmetic to asj_pj_residual.
PJReport asp_pj_residual(const CanonicalSubharmonic& u, const ASPotential& V, const GridOpenSet& g);

/// u(x) = int u domega - int pt_{omega - delta_x} dDelta_u. Checks first that
/// omega is a har-balayage of delta_x on g at tolerance premise_tol; throws
/// HypothesisViolated otherwise.
PJReport asj_pj_residual(const CanonicalSubharmonic& u, const DiscreteMeasure& omega, std::span<const double> x,
                         const GridOpenSet& g, double premise_tol = 1e-3);

} // namespace balayage
