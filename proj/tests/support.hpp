#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "balayage/measures.hpp"
#include "balayage/point.hpp"

namespace testing_support {

inline double uniform(std::mt19937_64& rng, double a, double b) {
    return a + (b - a) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

inline balayage::Point random_point(std::mt19937_64& rng, int d, double lo, double hi) {
    balayage::Point p(static_cast<std::size_t>(d));
    for (auto& c : p) c = uniform(rng, lo, hi);
    return p;
}

/// Positive measure with 1..max_atoms atoms in [lo, hi]^d.
inline balayage::DiscreteMeasure random_positive(std::mt19937_64& rng, int d, std::size_t max_atoms, double lo,
                                                  double hi) {
    std::vector<balayage::DiscreteMeasure::Atom> atoms;
    const std::size_t n = 1 + rng() % max_atoms;
    for (std::size_t i = 0; i < n; ++i) atoms.push_back({random_point(rng, d, lo, hi), uniform(rng, 0.05, 2.0)});
    return balayage::DiscreteMeasure(d, atoms);
}

inline balayage::DiscreteMeasure random_signed(std::mt19937_64& rng, int d, std::size_t max_atoms, double lo,
                                                double hi) {
    std::vector<balayage::DiscreteMeasure::Atom> atoms;
    const std::size_t n = 1 + rng() % max_atoms;
    for (std::size_t i = 0; i < n; ++i) atoms.push_back({random_point(rng, d, lo, hi), uniform(rng, -2.0, 2.0)});
    return balayage::DiscreteMeasure(d, atoms);
}

/// Lanczos approximation (g = 7, n = 9) with reflection, independent of std::tgamma.
inline double lanczos_gamma(double z) {
    static const double c[] = {0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                               771.32342877765313,   -176.61502916214059,   12.507343278686905,
                               -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    const double pi = 3.14159265358979323846;
    if (z < 0.5) return pi / (std::sin(pi * z) * lanczos_gamma(1.0 - z));
    z -= 1.0;
    double x = c[0];
    for (int i = 1; i < 9; ++i) x += c[i] / (z + i);
    const double t = z + 7.5;
    return std::sqrt(2.0 * pi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

/// Surface area of the unit sphere in R^d from the volume recursion
/// V_0 = 1, V_1 = 2, V_n = 2 pi V_{n-2} / n, area = d V_d.
inline double unit_sphere_area(int d) {
    const double pi = 3.14159265358979323846;
    std::vector<double> V = {1.0, 2.0};
    for (int n = 2; n <= d; ++n) V.push_back(2.0 * pi * V[static_cast<std::size_t>(n - 2)] / n);
    return d * V[static_cast<std::size_t>(d)];
}

} // namespace testing_support
