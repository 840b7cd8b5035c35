#pragma once

#include <span>
#include <vector>

namespace balayage {

/// A point of R^d. Dimension is the vector length.
using Point = std::vector<double>;

inline std::span<const double> as_span(const Point& p) { return {p.data(), p.size()}; }

double norm(std::span<const double> v);
double dot(std::span<const double> a, std::span<const double> b);

/// a + t * b
Point axpy(std::span<const double> a, double t, std::span<const double> b);

} // namespace balayage
