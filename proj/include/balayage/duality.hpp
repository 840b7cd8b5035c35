#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "balayage/ext_real.hpp"
#include "balayage/geometry.hpp"
#include "balayage/measures.hpp"
#include "balayage/point.hpp"

namespace balayage {

/// pt_omega(y) - K(y, x) over the extended reals.
ExtReal as_potential_value(const DiscreteMeasure& omega, std::span<const double> x, std::span<const double> y);

/// V = pt_omega - K(., x) for an Arens-Singer measure omega at the pole x.
class ASPotential {
public:
    ASPotential(Point pole, DiscreteMeasure omega, CellSet infill);

    const Point& pole() const { return pole_; }
    const DiscreteMeasure& base_measure() const { return omega_; }
    const CellSet& infill() const { return infill_; }

    ExtReal operator()(std::span<const double> y) const;

private:
    Point pole_;
    DiscreteMeasure omega_;
    CellSet infill_;
};

/// omega -> pt_{omega - delta_x}. Throws HypothesisViolated unless omega is a
/// har-balayage of delta_x on g at tolerance tol.
ASPotential forward_map(const DiscreteMeasure& omega, std::span<const double> x, const GridOpenSet& g,
                        double tol = 1e-3);

/// max |V| over cell centers outside the cached infill.
double vanishing_residual(const ASPotential& V, const GridOpenSet& g);
/// min V over cell centers of g, cells holding atoms of omega excluded.
double minimum_on_grid(const ASPotential& V, const GridOpenSet& g);

/// Node lattice origin + idx * spacing with the given number of nodes per axis.
struct SampleLattice {
    Point origin;
    double spacing = 0.0;
    std::vector<int> shape;
};

/// A potential with a declared pole, sampled through its evaluator.
struct SampledPotential {
    Point pole;
    std::function<ExtReal(std::span<const double>)> eval;
    /// Singular support of V away from the pole, when known; rings around the
    /// pole must not reach it. Atoms sitting exactly at the pole are ignored.
    std::optional<DiscreteMeasure> known_support;
};

struct InverseMapOptions {
    /// Radii of the rings around the pole used to estimate the pole weight.
    std::vector<double> ring_radii;
    std::size_t ring_points = 64;
    double drop_below = 1e-6;
};

/// Recovers the measure c_d Lap V off the pole plus (1 - rho) delta_x, where
/// rho = lim V(y) / (-K(x, y)) at the pole. The Laplacian is the 5-point
/// (7-point) stencil on the lattice, excluding nodes within the smallest ring
/// radius of the pole; rho is the slope of the ring means of V against
/// -k_{d-2}(radius). d in {2, 3}.
DiscreteMeasure inverse_map(const SampledPotential& V, const SampleLattice& lattice, const InverseMapOptions& opts);

/// Ring-mean slope estimate of lim V(y)/(-K(x, y)).
double pole_coefficient(const SampledPotential& V, std::span<const double> radii, std::size_t ring_points);

/// Least-squares fit of sum_j a_j k_{d-2}(|y - y_j|) to a harmonic target.
struct MfsFit {
    std::vector<Point> sources;
    std::vector<double> coefficients;
    double sup_error = 0.0;
    bool success = false;
    bool regularized = false;

    double operator()(std::span<const double> y) const;
};

/// Fits target values h_i at sample points with the given sources (outside F,
/// never on a sample). Falls back to a 1e-10 ridge solve when the system is
/// rank deficient (regularized = true). success iff sup_error < b.
MfsFit mfs_fit(std::span<const Point> samples, std::span<const double> values, std::span<const Point> sources,
               double b, const std::function<bool(std::span<const double>)>& in_F = {});

/// n points on the circle/sphere of radius `radius` about `center`.
std::vector<Point> mfs_default_sources(std::span<const double> center, double radius, std::size_t n);

} // namespace balayage
