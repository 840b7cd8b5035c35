#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>

#include "balayage/ext_real.hpp"
#include "balayage/geometry.hpp"
#include "balayage/measures.hpp"
#include "balayage/point.hpp"

namespace balayage {

/// Open ball B(center, radius) in R^d.
class BallDomain {
public:
    BallDomain(Point center, double radius);

    int dim() const { return static_cast<int>(center_.size()); }
    const Point& center() const { return center_; }
    double radius() const { return radius_; }
    bool contains(std::span<const double> x) const;

private:
    Point center_;
    double radius_;
};

/// Density of the harmonic measure of B at x with respect to the normalized
/// (total mass 1) surface measure of the sphere:
/// r^(d-2) (r^2 - |x - c|^2) / |x - y|^d.
double poisson_density(const BallDomain& B, std::span<const double> x, std::span<const double> y);

/// Boundary nodes used by the quadrature: the two endpoints for d = 1,
/// equally spaced angles for d = 2, a Fibonacci sphere for d = 3.
std::vector<Point> boundary_nodes(const BallDomain& B, std::size_t n);

/// Harmonic measure of B at x discretized on n boundary nodes, weights
/// proportional to the Poisson density and total mass exactly 1. n >= 8.
DiscreteMeasure harmonic_measure_quadrature(const BallDomain& B, std::span<const double> x, std::size_t n);

/// Green's function g_B(y, x) of the ball with pole x, extended by zero
/// outside the closed ball and by +inf at y == x. Symmetric in (x, y) inside B.
ExtReal green_ball(const BallDomain& B, std::span<const double> x, std::span<const double> y);

struct WosConfig {
    double epsilon_shell = 1e-4;
    std::size_t max_steps = 10000;
    std::size_t n_samples = 10000;
    std::uint64_t seed = 0;
};

/// Diagnostics of a walk-on-spheres run.
struct WosStats {
    std::size_t restarts = 0;
    std::size_t total_steps = 0;
};

using WosDomain = std::variant<BallDomain, GridOpenSet>;

/// Distance from p to the complement of the domain (<= 0 outside).
double distance_to_boundary(const WosDomain& domain, std::span<const double> p);

/// Empirical exit distribution of Brownian motion started at x, by walk on
/// spheres. Each walk uses its own random stream derived from (seed, index),
/// so the result does not depend on evaluation order. Exit points are snapped
/// to the epsilon_shell lattice and merged; each walk carries weight 1/n.
/// A walk exceeding max_steps is restarted; more than 1% restarts throws
/// NumericFault.
DiscreteMeasure walk_on_spheres(const WosDomain& domain, std::span<const double> x, const WosConfig& cfg,
                                WosStats* stats = nullptr);

} // namespace balayage
