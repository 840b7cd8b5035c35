#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "balayage/geometry.hpp"
#include "balayage/measures.hpp"
#include "balayage/subharmonic.hpp"

namespace balayage {

/// Where a residual family attained its maximum.
struct WorstPoint {
    std::string family;
    Point location;
    double residual = 0.0;
};

enum class HarnessConsistency {
    AllPass,
    AllFail,
    Mixed,         ///< clear-margin verdicts disagree
    Inconclusive,  ///< some residual lies in (tol/10, 10 tol)
};

const char* to_string(HarnessConsistency c);

/// Residuals of the balayage checks. Families that were not evaluated are
/// nullopt. All residuals are >= 0.
struct BalayageReport {
    std::optional<double> har_test_residual;   ///< harmonic test functions
    std::optional<double> potential_residual;  ///< pt_Delta = pt_omega outside S_O
    double mass_gap = 0.0;
    std::optional<double> pj_residual;          ///< identity in measure form over S_O
    std::optional<double> special_residual;     ///< kernels K(., z), z outside S_O
    std::optional<double> sbh_violation;        ///< max(0, pt_Delta - pt_omega) on the grid
    double tolerance = 0.0;
    std::size_t samples = 0;
    std::vector<WorstPoint> worst;
    CellSet S_O;
    bool verdict = false;
    std::optional<HarnessConsistency> consistency;
};

/// Sample points for the potential check: centers of all array cells outside S_O
/// and a ring of points at three times the array diameter.
std::vector<Point> outside_samples(const GridOpenSet& g, const CellSet& S_O, std::size_t far_points = 100);

/// S_O = inward_fill(rasterize_support(g, {Delta, omega})).
CellSet swept_hull(const GridOpenSet& g, const DiscreteMeasure& Delta, const DiscreteMeasure& omega);

/// Decides Delta <=_har(g) omega at grid resolution: |pt_Delta - pt_omega| on
/// the complement of S_O and the mass gap, both against tol.
BalayageReport check_har_balayage(const DiscreteMeasure& Delta, const DiscreteMeasure& omega, const GridOpenSet& g,
                                  double tol);

/// max over h of |int h dDelta - int h domega| / max(1, harmonic_norm(h)).
/// Every h must have no atoms, and no source inside the bounding box of the
/// two supports; otherwise DomainError.
double check_har_test_functions(const DiscreteMeasure& Delta, const DiscreteMeasure& omega,
                                std::span<const CanonicalSubharmonic> H);

/// check_har_balayage plus pt_omega >= pt_Delta - tol at every cell center of
/// the array, cells holding atoms of omega excluded (the discrete omega has its
/// own logarithmic singularities there).
BalayageReport check_sbh_balayage(const DiscreteMeasure& Delta, const DiscreteMeasure& omega, const GridOpenSet& g,
                                  double tol);

/// Default harmonic test family for a grid: constant 1, the coordinate
/// functions, and n_random kernel combinations with sources on a sphere of
/// twice the array diameter.
std::vector<CanonicalSubharmonic> default_test_family(const GridOpenSet& g, std::size_t n_random, std::uint64_t seed);

/// Evaluates the test-function, potential, measure-identity and kernel-family
/// checks for (Delta, omega) and classifies whether their verdicts agree.
BalayageReport main_lemma_harness(const DiscreteMeasure& Delta, const DiscreteMeasure& omega, const GridOpenSet& g,
                                  std::span<const CanonicalSubharmonic> u_list, double tol,
                                  std::size_t special_points = 50);

} // namespace balayage
