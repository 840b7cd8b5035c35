#pragma once

#include <span>
#include <vector>

#include "balayage/ext_real.hpp"
#include "balayage/measures.hpp"
#include "balayage/point.hpp"

namespace balayage {

/// Closed axis-aligned box.
struct Box {
    Point lo;
    Point hi;

    int dim() const { return static_cast<int>(lo.size()); }
    bool contains(std::span<const double> p) const;
    bool contains(const Box& other) const;
};

/// Subharmonic test function with exactly known Riesz measure:
///   u(y) = pt_atoms(y) + pt_sources(y) + <linear, y> + constant.
/// The positive measure `atoms` is the Riesz measure of u on `region`; every
/// source lies strictly outside the closed region, so the remaining terms are
/// harmonic there.
class CanonicalSubharmonic {
public:
    CanonicalSubharmonic(DiscreteMeasure atoms, DiscreteMeasure sources, double constant, Box region,
                         std::vector<double> linear = {});

    /// Harmonic function (no atoms) on region.
    static CanonicalSubharmonic harmonic(DiscreteMeasure sources, double constant, Box region,
                                         std::vector<double> linear = {});
    /// y -> K_{d-2}(y, x), certified on region.
    static CanonicalSubharmonic kernel_at(std::span<const double> x, Box region);

    int dim() const { return atoms_.dim(); }
    const DiscreteMeasure& atoms() const { return atoms_; }
    const DiscreteMeasure& sources() const { return sources_; }
    double constant() const { return constant_; }
    const std::vector<double>& linear() const { return linear_; }
    const Box& region() const { return region_; }

    /// Sum of |coefficients| of the harmonic part (sources, linear, constant).
    double harmonic_norm() const;

    CanonicalSubharmonic with_constant(double c) const;

private:
    DiscreteMeasure atoms_;
    DiscreteMeasure sources_;
    double constant_;
    Box region_;
    std::vector<double> linear_;
};

/// u(y) over the extended reals.
ExtReal eval_subharmonic(const CanonicalSubharmonic& u, std::span<const double> y);

/// Integral of u against a positive or signed atomic measure, sum_i w_i u(a_i).
ExtReal integrate(const CanonicalSubharmonic& u, const DiscreteMeasure& mu);

} // namespace balayage
