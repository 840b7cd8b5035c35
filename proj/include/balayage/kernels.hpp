#pragma once

#include <span>

#include "balayage/ext_real.hpp"

namespace balayage {

/// Ambient dimension d >= 1.
class Dimension {
public:
    explicit Dimension(int d);
    int value() const { return d_; }
    operator int() const { return d_; }  // NOLINT

private:
    int d_;
};

/// Relative tolerance below which |y - x| counts as the diagonal for d >= 2.
inline constexpr double kDiagonalTolerance = 1e-14;

/// k_s(t): ln t for s == 0, otherwise -sgn(s) t^(-s). Strictly increasing in t.
/// Throws DomainError for t <= 0.
double radial_kernel(double s, double t);

/// K_{d-2}(y, x). Off the diagonal this is radial_kernel(d - 2, |y - x|); on
/// the diagonal it is -inf for d >= 2 and 0 for d == 1.
ExtReal spatial_kernel(int d, std::span<const double> y, std::span<const double> x);

/// K_{d-2} as a function of the distance r >= 0 (r == 0 is the diagonal).
ExtReal kernel_of_distance(int d, double r);

/// Riesz constant c_d = Gamma(d/2) / (2 pi^(d/2) max{1, d-2}), so that
/// c_d * Laplacian(K_{d-2}(., x)) = delta_x.
double riesz_constant(int d);

/// Euclidean distance; computed as sqrt(sum (y_i - x_i)^2) so it is exactly
/// symmetric in its arguments.
double distance(std::span<const double> y, std::span<const double> x);

} // namespace balayage
