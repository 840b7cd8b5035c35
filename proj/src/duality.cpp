#include "balayage/duality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "balayage/balayage.hpp"
#include "balayage/errors.hpp"
#include "balayage/kernels.hpp"
#include "balayage/potentials.hpp"

namespace balayage {

ExtReal as_potential_value(const DiscreteMeasure& omega, std::span<const double> x, std::span<const double> y) {
    return pt(omega, y) - spatial_kernel(omega.dim(), y, x);
}

ASPotential::ASPotential(Point pole, DiscreteMeasure omega, CellSet infill)
    : pole_(std::move(pole)), omega_(std::move(omega)), infill_(std::move(infill)) {
    if (pole_.size() != static_cast<std::size_t>(omega_.dim())) throw DimensionError("ASPotential: dimension mismatch");
}

ExtReal ASPotential::operator()(std::span<const double> y) const { return as_potential_value(omega_, pole_, y); }

ASPotential forward_map(const DiscreteMeasure& omega, std::span<const double> x, const GridOpenSet& g, double tol) {
    const auto delta = dirac(x);
    const auto rep = check_har_balayage(delta, omega, g, tol);
    if (!rep.verdict) throw HypothesisViolated("forward_map: omega is not an Arens-Singer measure at x");
    return ASPotential(Point(x.begin(), x.end()), omega, rep.S_O);
}

double vanishing_residual(const ASPotential& V, const GridOpenSet& g) {
    double worst = 0.0;
    for (std::size_t c : cells_outside(g, V.infill())) {
        const ExtReal v = V(g.cell_center(c));
        worst = std::max(worst, v.is_finite() ? std::abs(v.value()) : std::numeric_limits<double>::infinity());
    }
    return worst;
}

double minimum_on_grid(const ASPotential& V, const GridOpenSet& g) {
    const DiscreteMeasure only_omega[] = {V.base_measure()};
    const CellSet omega_cells = rasterize_support(g, only_omega);
    double lowest = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < g.cell_count(); ++c) {
        if (omega_cells.contains(c)) continue;
        lowest = std::min(lowest, V(g.cell_center(c)).value());
    }
    return lowest;
}

double pole_coefficient(const SampledPotential& V, std::span<const double> radii, std::size_t ring_points) {
    if (radii.empty()) throw DomainError("pole_coefficient: need at least one ring radius");
    const int d = static_cast<int>(V.pole.size());
    const auto rule = sphere_rule(d, ring_points);
    std::vector<double> t;
    std::vector<double> means;
    for (double rho : radii) {
        std::vector<double> vals;
        vals.reserve(rule.nodes.size());
        for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
            const ExtReal v = V.eval(axpy(V.pole, rho, rule.nodes[k]));
            if (!v.is_finite()) throw DomainError("pole_coefficient: a ring meets a singularity of V");
            vals.push_back(rule.weights[k] * v.value());
        }
        means.push_back(compensated_sum(vals));
        t.push_back(-radial_kernel(d - 2, rho));
    }
    if (radii.size() == 1) return means[0] / t[0];
    // ring means of V = rho * (-k(radius)) + (harmonic part at the pole)
    const double n = static_cast<double>(t.size());
    double tm = 0.0;
    double mm = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        tm += t[i] / n;
        mm += means[i] / n;
    }
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        num += (t[i] - tm) * (means[i] - mm);
        den += (t[i] - tm) * (t[i] - tm);
    }
    if (den == 0.0) throw DomainError("pole_coefficient: ring radii must be distinct");
    return num / den;
}

DiscreteMeasure inverse_map(const SampledPotential& V, const SampleLattice& lattice, const InverseMapOptions& opts) {
    const int d = static_cast<int>(V.pole.size());
    if (d != 2 && d != 3) throw DomainError("inverse_map: only d = 2 or 3 is supported");
    if (lattice.origin.size() != V.pole.size() || lattice.shape.size() != V.pole.size())
        throw DimensionError("inverse_map: lattice dimension mismatch");
    const double h = lattice.spacing;
    if (!(h > 0.0)) throw DomainError("inverse_map: lattice spacing must be > 0");
    for (int s : lattice.shape)
        if (s < 3) throw DomainError("inverse_map: lattice needs at least 3 nodes per axis");

    std::vector<double> radii = opts.ring_radii;
    if (radii.empty()) radii = {4.0 * h, 8.0 * h, 16.0 * h};
    std::sort(radii.begin(), radii.end());

    bool on_node = true;
    for (std::size_t a = 0; a < V.pole.size(); ++a) {
        const double u = (V.pole[a] - lattice.origin[a]) / h;
        on_node = on_node && std::abs(u - std::round(u)) < 1e-9;
    }
    if (on_node) throw DomainError("inverse_map: the pole sits on a lattice node");
    if (V.known_support) {
        const auto& S = *V.known_support;
        for (std::size_t i = 0; i < S.size(); ++i) {
            const double r = distance(S.location(i), V.pole);
            if (r > 0.0 && r <= radii.back() + h)
                throw DomainError("inverse_map: rings around the pole intersect the support");
        }
    }

    const int nx = lattice.shape[0];
    const int ny = lattice.shape[1];
    const int nz = d == 3 ? lattice.shape[2] : 1;
    auto idx = [&](int i, int j, int k) {
        return static_cast<std::size_t>(i) +
               static_cast<std::size_t>(nx) * (static_cast<std::size_t>(j) + static_cast<std::size_t>(ny) * k);
    };
    auto node = [&](int i, int j, int k) {
        Point p(lattice.origin);
        p[0] += i * h;
        p[1] += j * h;
        if (d == 3) p[2] += k * h;
        return p;
    };

    std::vector<double> values(static_cast<std::size_t>(nx) * ny * nz);
    for (int k = 0; k < nz; ++k)
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                const ExtReal v = V.eval(node(i, j, k));
                if (!v.is_finite()) throw DomainError("inverse_map: V is singular at a lattice node");
                values[idx(i, j, k)] = v.value();
            }

    const double cd = riesz_constant(d);
    const double cell = std::pow(h, d);
    const double exclusion = radii.front();
    std::vector<DiscreteMeasure::Atom> atoms;
    const int k_lo = d == 3 ? 1 : 0;
    const int k_hi = d == 3 ? nz - 1 : 1;
    for (int k = k_lo; k < k_hi; ++k)
        for (int j = 1; j < ny - 1; ++j)
            for (int i = 1; i < nx - 1; ++i) {
                const auto p = node(i, j, k);
                if (distance(p, V.pole) < exclusion) continue;
                double lap = values[idx(i - 1, j, k)] + values[idx(i + 1, j, k)] + values[idx(i, j - 1, k)] +
                             values[idx(i, j + 1, k)] - 2.0 * d * values[idx(i, j, k)];
                if (d == 3) lap += values[idx(i, j, k - 1)] + values[idx(i, j, k + 1)];
                const double w = cd * lap / (h * h) * cell;
                if (std::abs(w) >= opts.drop_below) atoms.push_back({p, w});
            }

    const double rho = pole_coefficient(V, radii, opts.ring_points);
    const double pole_weight = 1.0 - rho;
    if (std::abs(pole_weight) >= opts.drop_below) atoms.push_back({V.pole, pole_weight});
    return DiscreteMeasure(d, atoms);
}

double MfsFit::operator()(std::span<const double> y) const {
    const int d = static_cast<int>(y.size());
    double s = 0.0;
    for (std::size_t j = 0; j < sources.size(); ++j) s += coefficients[j] * radial_kernel(d - 2, distance(y, sources[j]));
    return s;
}

MfsFit mfs_fit(std::span<const Point> samples, std::span<const double> values, std::span<const Point> sources,
               double b, const std::function<bool(std::span<const double>)>& in_F) {
    if (samples.size() != values.size()) throw DimensionError("mfs_fit: samples and values differ in length");
    if (samples.empty()) throw DomainError("mfs_fit: need at least one sample");
    if (sources.empty()) throw DomainError("mfs_fit: need at least one source");
    if (!(b > 0.0)) throw DomainError("mfs_fit: b must be > 0");
    const auto d = samples.front().size();
    for (const auto& s : sources) {
        if (s.size() != d) throw DimensionError("mfs_fit: source dimension mismatch");
        if (in_F && in_F(s)) throw DomainError("mfs_fit: a source lies in F");
        for (const auto& x : samples)
            if (distance(x, s) == 0.0) throw DomainError("mfs_fit: a source coincides with a sample point");
    }

    const auto n = static_cast<Eigen::Index>(samples.size());
    const auto m = static_cast<Eigen::Index>(sources.size());
    Eigen::MatrixXd A(n, m);
    Eigen::VectorXd rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        rhs(i) = values[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < m; ++j)
            A(i, j) = radial_kernel(static_cast<double>(d) - 2.0,
                                    distance(samples[static_cast<std::size_t>(i)], sources[static_cast<std::size_t>(j)]));
    }

    MfsFit fit;
    fit.sources.assign(sources.begin(), sources.end());
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    Eigen::VectorXd a;
    if (qr.rank() == m && n >= m) {
        a = qr.solve(rhs);
    } else {
        constexpr double ridge = 1e-10;
        Eigen::MatrixXd Aug(n + m, m);
        Aug << A, std::sqrt(ridge) * Eigen::MatrixXd::Identity(m, m);
        Eigen::VectorXd rhs_aug(n + m);
        rhs_aug << rhs, Eigen::VectorXd::Zero(m);
        a = Aug.colPivHouseholderQr().solve(rhs_aug);
        fit.regularized = true;
    }
    fit.coefficients.assign(a.data(), a.data() + a.size());
    fit.sup_error = (A * a - rhs).cwiseAbs().maxCoeff();
    fit.success = fit.sup_error < b;
    return fit;
}

std::vector<Point> mfs_default_sources(std::span<const double> center, double radius, std::size_t n) {
    std::vector<Point> out;
    for (const auto& dir : sphere_directions(static_cast<int>(center.size()), n)) out.push_back(axpy(center, radius, dir));
    return out;
}

} // namespace balayage
