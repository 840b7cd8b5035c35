#include "balayage/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "balayage/errors.hpp"

namespace balayage {

Dimension::Dimension(int d) : d_(d) {
    if (d < 1) throw DimensionError("dimension must be >= 1, got " + std::to_string(d));
}

double radial_kernel(double s, double t) {
    if (!(t > 0.0)) throw DomainError("radial_kernel: t must be > 0");
    if (s == 0.0) return std::log(t);
    const double sign = s > 0.0 ? 1.0 : -1.0;
    if (s == 1.0) return -1.0 / t;
    if (s == -1.0) return t;
    return -sign * std::pow(t, -s);
}

ExtReal kernel_of_distance(int d, double r) {
    if (r == 0.0) return d >= 2 ? ExtReal::neg_inf() : ExtReal(0.0);
    return ExtReal(radial_kernel(d - 2, r));
}

double distance(std::span<const double> y, std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double t = y[i] - x[i];
        s += t * t;
    }
    return std::sqrt(s);
}

ExtReal spatial_kernel(int d, std::span<const double> y, std::span<const double> x) {
    Dimension dim(d);
    if (y.size() != static_cast<std::size_t>(d) || x.size() != static_cast<std::size_t>(d))
        throw DimensionError("spatial_kernel: point dimension does not match d");
    const double r = distance(y, x);
    if (d >= 2) {
        double scale = 1.0;
        for (std::size_t i = 0; i < y.size(); ++i) scale = std::max({scale, std::abs(y[i]), std::abs(x[i])});
        if (r < kDiagonalTolerance * scale) return ExtReal::neg_inf();
    }
    return kernel_of_distance(d, r);
}

double riesz_constant(int d) {
    Dimension dim(d);
    const double half = 0.5 * d;
    return std::tgamma(half) / (2.0 * std::pow(std::numbers::pi, half) * std::max(1, d - 2));
}

} // namespace balayage
