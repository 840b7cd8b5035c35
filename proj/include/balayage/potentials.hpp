#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "balayage/ext_real.hpp"
#include "balayage/measures.hpp"
#include "balayage/point.hpp"

namespace balayage {

/// pt_mu(y) together with whether y lies in the evaluability set. For atomic
/// measures y fails to be evaluable only when it sits (within the diagonal
/// tolerance) on atoms of both signs at once.
struct PotentialValue {
    ExtReal value;
    bool evaluable = true;
};

/// pt_mu(y) = sum_i w_i K_{d-2}(a_i, y) over the extended reals.
PotentialValue potential(const DiscreteMeasure& mu, std::span<const double> y);

/// potential(mu, y).value, throwing NumericFault if y is not evaluable.
ExtReal pt(const DiscreteMeasure& mu, std::span<const double> y);

/// Closed form of pt_mu for a positive measure on the line at a point outside
/// the convex hull of its support: mass * x - first_moment for x >= s_r and
/// -mass * x + first_moment for x <= s_l. Throws DomainError for x strictly
/// between s_l and s_r.
double potential_1d_closed(const DiscreteMeasure& mu, double x);

/// Deterministic unit directions: {+1, -1, ...} for d = 1, equally spaced angles
/// for d = 2, Fibonacci sphere points for d = 3.
std::vector<Point> sphere_directions(int d, std::size_t n);

/// max over n_dirs directions of |pt_mu(R dir) - mass(mu) k_{d-2}(R)|.
/// Requires R > 2 sup |a_i|.
double asymptotic_deviation(const DiscreteMeasure& mu, double R, std::size_t n_dirs);

/// Weighted nodes on the unit sphere, weights summing to 1. d = 2 uses m equally
/// spaced angles (exact for trigonometric polynomials of degree < m). d = 3 uses
/// Gauss-Legendre in z times equally spaced azimuths, n_z = ceil(sqrt(m/2)) and
/// 2 n_z azimuths, exact for spherical harmonics of degree < 2 n_z.
struct SphereRule {
    std::vector<Point> nodes;
    std::vector<double> weights;
};
SphereRule sphere_rule(int d, std::size_t m);

/// Mean of f over the sphere of radius rho about y, by sphere_rule(d, m).
double spherical_mean(const std::function<double(std::span<const double>)>& f,
                      std::span<const double> y, double rho, std::size_t m);

} // namespace balayage
