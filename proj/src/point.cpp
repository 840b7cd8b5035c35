#include "balayage/point.hpp"

#include <cmath>

namespace balayage {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(std::span<const double> v) { return std::sqrt(dot(v, v)); }

Point axpy(std::span<const double> a, double t, std::span<const double> b) {
    Point out(a.begin(), a.end());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += t * b[i];
    return out;
}

} // namespace balayage
