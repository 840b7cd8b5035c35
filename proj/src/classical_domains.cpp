#include "balayage/classical_domains.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "balayage/errors.hpp"
#include "balayage/kernels.hpp"
#include "balayage/potentials.hpp"

namespace balayage {

BallDomain::BallDomain(Point center, double radius) : center_(std::move(center)), radius_(radius) {
    Dimension(static_cast<int>(center_.size()));
    if (!(radius_ > 0.0) || !std::isfinite(radius_)) throw DomainError("BallDomain: radius must be > 0");
}

bool BallDomain::contains(std::span<const double> x) const { return distance(x, center_) < radius_; }

namespace {

// Pushes the rounding remainder into the largest weight until the compensated
// total is exactly 1.
DiscreteMeasure with_unit_mass(const DiscreteMeasure& mu) {
    std::vector<double> weights(mu.weights().begin(), mu.weights().end());
    const auto big = static_cast<std::size_t>(std::max_element(weights.begin(), weights.end()) - weights.begin());
    for (int it = 0; it < 4; ++it) {
        const double gap = 1.0 - compensated_sum(weights);
        if (gap == 0.0) break;
        weights[big] += gap;
    }
    return DiscreteMeasure(mu.dim(), mu.coords(), weights);
}

void require_interior(const BallDomain& B, std::span<const double> x, const char* what) {
    if (x.size() != static_cast<std::size_t>(B.dim())) throw DimensionError(std::string(what) + ": dimension mismatch");
    if (!B.contains(x)) throw DomainError(std::string(what) + ": pole must lie inside the ball");
}

} // namespace

double poisson_density(const BallDomain& B, std::span<const double> x, std::span<const double> y) {
    require_interior(B, x, "poisson_density");
    if (y.size() != x.size()) throw DimensionError("poisson_density: dimension mismatch");
    const double r = B.radius();
    if (std::abs(distance(y, B.center()) - r) > 1e-12 * r)
        throw DomainError("poisson_density: y must lie on the boundary sphere");
    const int d = B.dim();
    const double rx = distance(x, B.center());
    return std::pow(r, d - 2) * (r * r - rx * rx) / std::pow(distance(x, y), d);
}

std::vector<Point> boundary_nodes(const BallDomain& B, std::size_t n) {
    const int d = B.dim();
    const auto dirs = sphere_directions(d, d == 1 ? 2 : n);
    std::vector<Point> nodes;
    nodes.reserve(dirs.size());
    for (const auto& dir : dirs) nodes.push_back(axpy(B.center(), B.radius(), dir));
    return nodes;
}

DiscreteMeasure harmonic_measure_quadrature(const BallDomain& B, std::span<const double> x, std::size_t n) {
    require_interior(B, x, "harmonic_measure_quadrature");
    if (n < 8) throw DomainError("harmonic_measure_quadrature: need n >= 8 nodes");
    const auto nodes = boundary_nodes(B, n);
    std::vector<double> weights;
    weights.reserve(nodes.size());
    for (const auto& y : nodes) weights.push_back(poisson_density(B, x, y));
    const double total = compensated_sum(weights);
    for (double& w : weights) w /= total;
    std::vector<double> coords;
    coords.reserve(nodes.size() * static_cast<std::size_t>(B.dim()));
    for (const auto& y : nodes) coords.insert(coords.end(), y.begin(), y.end());
    return with_unit_mass(DiscreteMeasure(B.dim(), coords, weights));
}

ExtReal green_ball(const BallDomain& B, std::span<const double> x, std::span<const double> y) {
    require_interior(B, x, "green_ball");
    if (y.size() != x.size()) throw DimensionError("green_ball: dimension mismatch");
    const int d = B.dim();
    const double r = B.radius();
    if (distance(y, B.center()) >= r) return ExtReal(0.0);
    const double ryx = distance(y, x);
    if (ryx == 0.0) return ExtReal::pos_inf();

    // |x'|^2 |y'|^2 - 2 r^2 <x', y'> + r^4 = (r |y' - x'^*| |x'|)^2 with x'^* the
    // Kelvin image; symmetric in x', y'.
    double xx = 0.0;
    double yy = 0.0;
    double xy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double a = x[i] - B.center()[i];
        const double b = y[i] - B.center()[i];
        xx += a * a;
        yy += b * b;
        xy += a * b;
    }
    const double A = xx * yy - 2.0 * r * r * xy + r * r * r * r;
    const double g = radial_kernel(d - 2, std::sqrt(A) / r) - radial_kernel(d - 2, ryx);
    return ExtReal(std::max(0.0, g));
}

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double box_distance(std::span<const double> p, std::span<const double> lo, double h) {
    double s = 0.0;
    for (std::size_t a = 0; a < p.size(); ++a) {
        const double t = std::max({lo[a] - p[a], 0.0, p[a] - (lo[a] + h)});
        s += t * t;
    }
    return std::sqrt(s);
}

// Distance to the complement of a rasterized open set: the non-inside cells
// that touch the set (faces, edges or corners) plus the exterior of the frame.
class GridDistance {
public:
    explicit GridDistance(const GridOpenSet& g) : g_(g) {
        const int d = g.dim();
        std::vector<std::uint8_t> mark(g.cell_count(), 0);
        for (std::size_t c = 0; c < g.cell_count(); ++c) {
            if (!g.inside(c)) continue;
            const auto m = g.multi_index(c);
            for (int dz = (d == 3 ? -1 : 0); dz <= (d == 3 ? 1 : 0); ++dz)
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int q[3] = {m[0] + dx, m[1] + dy, m[2] + dz};
                        bool ok = true;
                        for (int a = 0; a < d; ++a) ok = ok && q[a] >= 0 && q[a] < g.shape()[a];
                        if (!ok) continue;
                        const auto idx = g.index(std::span<const int>(q, static_cast<std::size_t>(d)));
                        if (!g.inside(idx)) mark[idx] = 1;
                    }
        }
        for (std::size_t c = 0; c < g.cell_count(); ++c) {
            if (!mark[c]) continue;
            Point lo(g.origin());
            const auto m = g.multi_index(c);
            for (int a = 0; a < d; ++a) lo[a] += m[a] * g.spacing();
            lows_.push_back(std::move(lo));
        }
        center_dist_.assign(g.cell_count(), 0.0);
        for (std::size_t c = 0; c < g.cell_count(); ++c)
            if (g.inside(c)) center_dist_[c] = exact(g.cell_center(c), nullptr);
    }

    // exact distance; optionally the nearest complement point
    double exact(std::span<const double> p, Point* nearest) const {
        const auto lo = g_.box_lo();
        const auto hi = g_.box_hi();
        double best = std::numeric_limits<double>::infinity();
        int frame_axis = -1;
        bool frame_high = false;
        for (std::size_t a = 0; a < p.size(); ++a) {
            if (p[a] - lo[a] < best) {
                best = p[a] - lo[a];
                frame_axis = static_cast<int>(a);
                frame_high = false;
            }
            if (hi[a] - p[a] < best) {
                best = hi[a] - p[a];
                frame_axis = static_cast<int>(a);
                frame_high = true;
            }
        }
        if (best <= 0.0) {
            if (nearest) *nearest = Point(p.begin(), p.end());
            return best;
        }
        const auto cell = g_.locate(p);
        if (cell && !g_.inside(*cell)) {
            if (nearest) *nearest = Point(p.begin(), p.end());
            return 0.0;
        }
        std::ptrdiff_t best_box = -1;
        for (std::size_t b = 0; b < lows_.size(); ++b) {
            const double t = box_distance(p, lows_[b], g_.spacing());
            if (t < best) {
                best = t;
                best_box = static_cast<std::ptrdiff_t>(b);
            }
        }
        if (nearest) {
            *nearest = Point(p.begin(), p.end());
            if (best_box >= 0) {
                const auto& l = lows_[static_cast<std::size_t>(best_box)];
                for (std::size_t a = 0; a < p.size(); ++a)
                    (*nearest)[a] = std::clamp(p[a], l[a], l[a] + g_.spacing());
            } else {
                (*nearest)[static_cast<std::size_t>(frame_axis)] =
                    frame_high ? hi[static_cast<std::size_t>(frame_axis)] : lo[static_cast<std::size_t>(frame_axis)];
            }
        }
        return best;
    }

    // a radius r <= exact distance, cheap away from the boundary
    double lower_bound(std::span<const double> p) const {
        const auto cell = g_.locate(p);
        if (!cell || !g_.inside(*cell)) return 0.0;
        return center_dist_[*cell] - distance(p, g_.cell_center(*cell));
    }

private:
    const GridOpenSet& g_;
    std::vector<Point> lows_;
    std::vector<double> center_dist_;
};

} // namespace

double distance_to_boundary(const WosDomain& domain, std::span<const double> p) {
    if (const auto* ball = std::get_if<BallDomain>(&domain)) return ball->radius() - distance(p, ball->center());
    const auto& g = std::get<GridOpenSet>(domain);
    return GridDistance(g).exact(p, nullptr);
}

DiscreteMeasure walk_on_spheres(const WosDomain& domain, std::span<const double> x, const WosConfig& cfg,
                                WosStats* stats) {
    if (cfg.n_samples < 1) throw DomainError("walk_on_spheres: n_samples must be >= 1");
    if (!(cfg.epsilon_shell > 0.0)) throw DomainError("walk_on_spheres: epsilon_shell must be > 0");
    const int d = std::visit([](const auto& dom) { return dom.dim(); }, domain);
    if (x.size() != static_cast<std::size_t>(d)) throw DimensionError("walk_on_spheres: dimension mismatch");

    const BallDomain* ball = std::get_if<BallDomain>(&domain);
    std::optional<GridDistance> grid;
    if (!ball) grid.emplace(std::get<GridOpenSet>(domain));

    auto dist_exact = [&](std::span<const double> p, Point* nearest) {
        if (ball) {
            const double rp = distance(p, ball->center());
            if (nearest) {
                *nearest = ball->center();
                if (rp > 0.0)
                    for (std::size_t a = 0; a < p.size(); ++a)
                        (*nearest)[a] += (p[a] - ball->center()[a]) * ball->radius() / rp;
            }
            return ball->radius() - rp;
        }
        return grid->exact(p, nearest);
    };

    const double start = dist_exact(x, nullptr);
    if (!(start > 0.0)) throw DomainError("walk_on_spheres: start point must be interior");
    if (!(cfg.epsilon_shell < start)) throw DomainError("walk_on_spheres: epsilon_shell must be below the start depth");

    const std::size_t allowed_restarts = cfg.n_samples / 100;
    std::size_t restarts = 0;
    std::size_t total_steps = 0;
    std::vector<double> coords;
    coords.reserve(cfg.n_samples * static_cast<std::size_t>(d));
    Point p(static_cast<std::size_t>(d));
    Point dir(static_cast<std::size_t>(d));
    Point exit_point;
    std::normal_distribution<double> normal(0.0, 1.0);

    for (std::size_t s = 0; s < cfg.n_samples; ++s) {
        for (std::uint64_t attempt = 0;; ++attempt) {
            std::mt19937_64 rng(splitmix64(cfg.seed ^ splitmix64(s * 0x100000001b3ULL + attempt)));
            normal.reset();
            p.assign(x.begin(), x.end());
            bool done = false;
            for (std::size_t step = 0; step < cfg.max_steps; ++step) {
                double radius = grid ? grid->lower_bound(p) : 0.0;
                if (radius <= cfg.epsilon_shell) {
                    radius = dist_exact(p, &exit_point);
                    if (radius <= cfg.epsilon_shell) {
                        done = true;
                        total_steps += step;
                        break;
                    }
                }
                double nn = 0.0;
                for (auto& c : dir) {
                    c = normal(rng);
                    nn += c * c;
                }
                nn = std::sqrt(nn);
                for (std::size_t a = 0; a < p.size(); ++a) p[a] += radius * dir[a] / nn;
            }
            if (done) break;
            total_steps += cfg.max_steps;
            if (++restarts > allowed_restarts)
                throw NumericFault("walk_on_spheres: more than 1% of walks exceeded max_steps");
        }
        for (double c : exit_point) coords.push_back(std::round(c / cfg.epsilon_shell) * cfg.epsilon_shell);
    }
    if (stats) {
        stats->restarts = restarts;
        stats->total_steps = total_steps;
    }
    std::vector<double> weights(cfg.n_samples, 1.0 / static_cast<double>(cfg.n_samples));
    return with_unit_mass(DiscreteMeasure(d, coords, weights));
}

} // namespace balayage
