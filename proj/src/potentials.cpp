#include "balayage/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "balayage/errors.hpp"
#include "balayage/kernels.hpp"

namespace balayage {

PotentialValue potential(const DiscreteMeasure& mu, std::span<const double> y) {
    const int d = mu.dim();
    if (y.size() != static_cast<std::size_t>(d)) throw DimensionError("potential: point dimension mismatch");

    double y_scale = 1.0;
    for (double c : y) y_scale = std::max(y_scale, std::abs(c));

    ExtAccumulator acc;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        const auto a = mu.location(i);
        const double w = mu.weight(i);
        const double r = distance(a, y);
        if (d >= 2) {
            double scale = y_scale;
            for (double c : a) scale = std::max(scale, std::abs(c));
            if (r < kDiagonalTolerance * scale) {
                acc.add(w > 0.0 ? ExtReal::neg_inf() : ExtReal::pos_inf());
                continue;
            }
        }
        acc.add_finite(w * kernel_of_distance(d, r).value());
    }
    if (acc.clashed()) return {ExtReal(0.0), false};
    return {acc.result(), true};
}

ExtReal pt(const DiscreteMeasure& mu, std::span<const double> y) {
    const auto v = potential(mu, y);
    if (!v.evaluable) throw NumericFault("potential: point carries atoms of both signs");
    return v.value;
}

double potential_1d_closed(const DiscreteMeasure& mu, double x) {
    if (mu.dim() != 1) throw DimensionError("potential_1d_closed: measure must live on the line");
    if (!mu.is_positive()) throw DomainError("potential_1d_closed: measure must be positive");
    if (mu.empty()) return 0.0;
    // atoms are sorted, so the hull is [first, last]
    const double s_l = mu.location(0)[0];
    const double s_r = mu.location(mu.size() - 1)[0];
    std::vector<double> moments(mu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) moments[i] = mu.weight(i) * mu.location(i)[0];
    const double m = mu.mass().total;
    const double first = compensated_sum(moments);
    if (x >= s_r) return m * x - first;
    if (x <= s_l) return -m * x + first;
    throw DomainError("potential_1d_closed: x lies strictly inside the support hull");
}

std::vector<Point> sphere_directions(int d, std::size_t n) {
    std::vector<Point> dirs;
    dirs.reserve(n);
    if (d == 1) {
        for (std::size_t k = 0; k < n; ++k) dirs.push_back({k % 2 == 0 ? 1.0 : -1.0});
    } else if (d == 2) {
        for (std::size_t k = 0; k < n; ++k) {
            const double t = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
            dirs.push_back({std::cos(t), std::sin(t)});
        }
    } else if (d == 3) {
        const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
        for (std::size_t k = 0; k < n; ++k) {
            const double z = 1.0 - (2.0 * static_cast<double>(k) + 1.0) / static_cast<double>(n);
            const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double phi = golden * static_cast<double>(k);
            dirs.push_back({rho * std::cos(phi), rho * std::sin(phi), z});
        }
    } else {
        throw DomainError("sphere_directions: only d in {1, 2, 3} is supported");
    }
    return dirs;
}

double asymptotic_deviation(const DiscreteMeasure& mu, double R, std::size_t n_dirs) {
    if (n_dirs < 1) throw DomainError("asymptotic_deviation: need at least one direction");
    if (!(R > 2.0 * mu.support_radius())) throw DomainError("asymptotic_deviation: R must exceed 2 sup|a|");
    const int d = mu.dim();
    const double mass = mu.mass().total;
    const Point origin(static_cast<std::size_t>(d), 0.0);
    double worst = 0.0;
    for (const auto& dir : sphere_directions(d, n_dirs)) {
        Point y(dir);
        for (double& c : y) c *= R;
        // |y| rather than R, so that a point mass at the origin deviates by exactly 0
        const double far = mass * radial_kernel(d - 2, distance(y, origin));
        worst = std::max(worst, std::abs(pt(mu, y).value() - far));
    }
    return worst;
}

SphereRule sphere_rule(int d, std::size_t m) {
    if (m < 1) throw DomainError("sphere_rule: need at least one node");
    SphereRule rule;
    if (d == 1 || d == 2) {
        rule.nodes = sphere_directions(d, d == 1 ? 2 : m);
        rule.weights.assign(rule.nodes.size(), 1.0 / static_cast<double>(rule.nodes.size()));
        return rule;
    }
    if (d != 3) throw DomainError("sphere_rule: only d in {1, 2, 3} is supported");
    const int nz = std::max(2, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(m) / 2.0))));
    const int nphi = 2 * nz;
    // Golub-Welsch for the Legendre weight on [-1, 1]
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(nz, nz);
    for (int k = 1; k < nz; ++k) {
        const double b = k / std::sqrt(4.0 * k * k - 1.0);
        J(k, k - 1) = b;
        J(k - 1, k) = b;
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    for (int i = 0; i < nz; ++i) {
        const double z = es.eigenvalues()(i);
        const double wz = es.eigenvectors()(0, i) * es.eigenvectors()(0, i);  // sums to 1
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        for (int j = 0; j < nphi; ++j) {
            const double phi = 2.0 * std::numbers::pi * (j + 0.5 * (i % 2)) / nphi;
            rule.nodes.push_back({r * std::cos(phi), r * std::sin(phi), z});
            rule.weights.push_back(wz / nphi);
        }
    }
    return rule;
}

double spherical_mean(const std::function<double(std::span<const double>)>& f, std::span<const double> y,
                      double rho, std::size_t m) {
    const auto rule = sphere_rule(static_cast<int>(y.size()), m);
    std::vector<double> values;
    values.reserve(rule.nodes.size());
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) values.push_back(rule.weights[k] * f(axpy(y, rho, rule.nodes[k])));
    return compensated_sum(values);
}

} // namespace balayage
