#include "balayage/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>

#include "balayage/balayage.hpp"
#include "balayage/classical_domains.hpp"
#include "balayage/duality.hpp"
#include "balayage/errors.hpp"
#include "balayage/geometry.hpp"
#include "balayage/kernels.hpp"
#include "balayage/poisson_jensen.hpp"
#include "balayage/potentials.hpp"
#include "balayage/serialization.hpp"

namespace balayage {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Uniform on [0, 1) from the top 53 bits; identical on every standard library.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }
double uniform(std::mt19937_64& rng, double a, double b) { return a + (b - a) * uniform01(rng); }

const std::map<std::string, double>& default_tolerances() {
    static const std::map<std::string, double> t = {
        {"pj", 1e-3},       {"exact", 1e-9},    {"hypothesis", 1e-9}, {"balayage", 1e-3},
        {"vanishing", 1e-3}, {"positivity", 1e-3}, {"mass", 1e-2},    {"quadrant", 5e-2},
        {"mfs", 1e-4},      {"doubling", 1e-12}, {"sigma", 4.0},
    };
    return t;
}

struct Residual {
    std::string name;
    double value;
    double tolerance;
    bool pass;
};

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class Run {
public:
    Run(const Json& params, const Json& tolerances, std::uint64_t seed, std::string base_dir,
        std::vector<std::string> tolerance_keys)
        : params(params), seed(seed), rng(seed), base_dir_(std::move(base_dir)) {
        for (const auto& k : tolerance_keys) used_[k] = default_tolerances().at(k);
        if (!tolerances.is_object()) throw ConfigError("\"tolerances\" must be an object");
        for (const auto& [k, v] : tolerances.items()) {
            if (!used_.count(k)) throw ConfigError("tolerance \"" + k + "\" does not apply to this kind");
            if (!v.is_number() || !(v.get<double>() >= 0.0))
                throw ConfigError("tolerance \"" + k + "\" must be a non-negative number");
            used_[k] = v.get<double>();
        }
    }

    double tol(const std::string& key) const { return used_.at(key); }

    void add(std::string name, double value, double tolerance) {
        residuals.push_back({std::move(name), value, tolerance, value <= tolerance});
    }

    Json tolerances_json() const {
        Json j = Json::object();
        for (const auto& [k, v] : used_) j[k] = v;
        return j;
    }

    std::filesystem::path resolve(const std::string& p) const {
        std::filesystem::path path(p);
        if (path.is_relative() && !base_dir_.empty()) path = std::filesystem::path(base_dir_) / path;
        return path;
    }

    const Json& params;
    std::uint64_t seed;
    std::mt19937_64 rng;
    std::vector<Residual> residuals;
    Json details = Json::object();

private:
    std::string base_dir_;
    std::map<std::string, double> used_;
};

// ---- config parsing -------------------------------------------------------

BallDomain parse_ball(const Json& node, int dim = 0) {
    Point c = point_from_json(require(node, "center"), dim);
    const double r = require_number(node, "radius");
    if (!(r > 0.0)) throw ConfigError("ball radius must be > 0");
    return BallDomain(std::move(c), r);
}

GridOpenSet box_grid(const Point& lo, const Point& hi, double h) {
    if (!(h > 0.0)) throw ConfigError("grid spacing must be > 0");
    if (lo.size() != hi.size() || (lo.size() != 2 && lo.size() != 3))
        throw ConfigError("grid corners must be 2- or 3-dimensional");
    std::vector<int> shape;
    for (std::size_t a = 0; a < lo.size(); ++a) {
        const double n = std::round((hi[a] - lo[a]) / h);
        if (!(n >= 1.0) || n > 4096.0) throw ConfigError("grid box must span between 1 and 4096 cells per axis");
        shape.push_back(static_cast<int>(n));
    }
    return GridOpenSet(lo, h, shape);
}

GridOpenSet parse_grid(const Run& run, const Json& node) {
    if (!node.is_object()) throw ConfigError("\"grid\" must be an object");
    try {
        if (node.contains("mask_file")) return grid_from_mask(read_file(run.resolve(node["mask_file"].get<std::string>())));
        if (node.contains("mask")) return grid_from_mask(node["mask"].get<std::string>());
        if (node.contains("box")) {
            const Json& b = node["box"];
            return box_grid(point_from_json(require(b, "lo")), point_from_json(require(b, "hi")),
                            require_number(b, "spacing"));
        }
        if (node.contains("ball")) {
            // cells whose center lies in the ball, inside a frame with a margin
            const Json& b = node["ball"];
            const BallDomain B = parse_ball(b);
            const double h = require_number(b, "spacing");
            if (!(h > 0.0)) throw ConfigError("grid spacing must be > 0");
            const double margin = number_or(b, "margin", 2.0);
            // an irrational shift keeps cell faces away from round coordinates
            const double half = B.radius() + (margin + 0.3819660112501051) * h;
            Point lo(B.center());
            for (auto& c : lo) c -= half;
            const int n = static_cast<int>(std::ceil(2.0 * half / h));
            if (n > 4096) throw ConfigError("grid ball spans too many cells");
            std::vector<int> shape(B.center().size(), n);
            GridOpenSet frame(lo, h, shape);
            std::vector<std::uint8_t> inside(frame.cell_count());
            for (std::size_t c = 0; c < inside.size(); ++c) inside[c] = B.contains(frame.cell_center(c)) ? 1 : 0;
            return GridOpenSet(lo, h, shape, inside);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("grid: ") + e.what());
    } catch (const DomainError& e) {
        throw ConfigError(std::string("grid: ") + e.what());
    } catch (const DimensionError& e) {
        throw ConfigError(std::string("grid: ") + e.what());
    }
    throw ConfigError("\"grid\" needs one of mask_file, mask, box, ball");
}

DiscreteMeasure parse_measure(const Json& node, int dim);

DiscreteMeasure sweep_into_ball(const DiscreteMeasure& mu, const BallDomain& B, std::size_t n) {
    DiscreteMeasure out(mu.dim());
    for (std::size_t i = 0; i < mu.size(); ++i) {
        const auto a = mu.location(i);
        if (B.contains(a))
            out = combine(1.0, out, mu.weight(i), harmonic_measure_quadrature(B, a, n));
        else
            out = combine(1.0, out, mu.weight(i), dirac(a));
    }
    return out;
}

DiscreteMeasure parse_measure(const Json& node, int dim) {
    if (!node.is_object()) throw ConfigError("a measure entry must be an object");
    if (node.contains("atoms")) return measure_from_json(node, dim);
    if (node.contains("dirac")) return dirac(point_from_json(node["dirac"], dim));
    if (node.contains("harmonic_measure")) {
        const Json& h = node["harmonic_measure"];
        const BallDomain B = parse_ball(h, dim);
        const Point x = point_from_json(require(h, "pole"), B.dim());
        if (!B.contains(x)) throw ConfigError("harmonic_measure: the pole must lie inside the ball");
        return harmonic_measure_quadrature(B, x, count_or(h, "n", 512));
    }
    if (node.contains("sweep")) {
        const Json& s = node["sweep"];
        const DiscreteMeasure mu = parse_measure(require(s, "measure"), dim);
        const BallDomain B = parse_ball(require(s, "ball"), mu.dim());
        return sweep_into_ball(mu, B, count_or(s, "n", 512));
    }
    if (node.contains("combine")) {
        const Json& terms = node["combine"];
        if (!terms.is_array() || terms.empty()) throw ConfigError("combine: expected [[coefficient, measure], ...]");
        std::optional<DiscreteMeasure> acc;
        for (const auto& t : terms) {
            if (!t.is_array() || t.size() != 2 || !t[0].is_number())
                throw ConfigError("combine: expected [[coefficient, measure], ...]");
            const DiscreteMeasure m = parse_measure(t[1], dim);
            acc = acc ? combine(1.0, *acc, t[0].get<double>(), m) : combine(t[0].get<double>(), m, 0.0, m);
        }
        return *acc;
    }
    throw ConfigError("a measure entry needs one of atoms, dirac, harmonic_measure, sweep, combine");
}

DiscreteMeasure parse_positive_measure(const Json& node, int dim, const char* what) {
    DiscreteMeasure m = parse_measure(node, dim);
    if (!m.is_positive()) throw ConfigError(std::string(what) + " must be a positive measure");
    if (m.empty()) throw ConfigError(std::string(what) + " must not be empty");
    return m;
}

CanonicalSubharmonic parse_subharmonic(const Json& node, const GridOpenSet* g, int dim) {
    if (g && node.is_object() && !node.contains("region")) {
        // default region: the grid box
        Json copy = node;
        copy["region"] = {{"lo", point_to_json(g->box_lo())}, {"hi", point_to_json(g->box_hi())}};
        return subharmonic_from_json(copy, dim);
    }
    return subharmonic_from_json(node, dim);
}

std::vector<CanonicalSubharmonic> parse_u_list(const Run& run, const GridOpenSet* g, int dim) {
    std::vector<CanonicalSubharmonic> out;
    if (run.params.contains("u")) out.push_back(parse_subharmonic(run.params["u"], g, dim));
    if (run.params.contains("u_list")) {
        if (!run.params["u_list"].is_array()) throw ConfigError("\"u_list\" must be an array");
        for (const auto& u : run.params["u_list"]) out.push_back(parse_subharmonic(u, g, dim));
    }
    return out;
}

CellSet parse_cells(const Run& run, const Json& node, const GridOpenSet& g) {
    if (!node.is_object()) throw ConfigError("a cell set entry must be an object");
    if (node.contains("mask_file")) return cells_from_mask(g, read_file(run.resolve(node["mask_file"].get<std::string>())));
    if (node.contains("mask")) return cells_from_mask(g, node["mask"].get<std::string>());
    CellSet S(g);
    if (node.contains("cells")) {
        for (const auto& c : node["cells"]) {
            if (!c.is_array() || static_cast<int>(c.size()) != g.dim()) throw ConfigError("cells: bad multi-index");
            std::vector<int> m;
            for (std::size_t a = 0; a < c.size(); ++a) {
                const int v = c[a].get<int>();
                if (v < 0 || v >= g.shape()[a]) throw ConfigError("cells: index outside the grid");
                m.push_back(v);
            }
            const std::size_t cell = g.index(m);
            if (!g.inside(cell)) throw ConfigError("cells: cell outside the open set");
            S.insert(cell);
        }
        return S;
    }
    if (node.contains("ball") || node.contains("annulus")) {
        const bool ann = node.contains("annulus");
        const Json& b = ann ? node["annulus"] : node["ball"];
        const Point c = point_from_json(require(b, "center"), g.dim());
        const double r_out = ann ? require_number(b, "r_out") : require_number(b, "radius");
        const double r_in = ann ? require_number(b, "r_in") : -1.0;
        for (std::size_t cell = 0; cell < g.cell_count(); ++cell) {
            if (!g.inside(cell)) continue;
            const double r = distance(g.cell_center(cell), c);
            if (r <= r_out && r >= r_in) S.insert(cell);
        }
        return S;
    }
    throw ConfigError("a cell set entry needs one of mask_file, mask, cells, ball, annulus");
}

// ---- scenario kinds -------------------------------------------------------

void record_pj(Run& run, const std::string& name, const PJReport& r, double tol) {
    run.details[name] = pj_report_to_json(r);
    run.add(name, r.residual, tol);
}

void run_pj_classical(Run& run) {
    const BallDomain B = parse_ball(require(run.params, "ball"));
    const Point x = point_from_json(require(run.params, "pole"), B.dim());
    const auto n = count_or(run.params, "n_quad", 512);
    const auto us = parse_u_list(run, nullptr, B.dim());
    if (us.empty()) throw ConfigError("pj-classical needs \"u\" or \"u_list\"");
    for (std::size_t i = 0; i < us.size(); ++i)
        record_pj(run, "pj[" + std::to_string(i) + "]", classical_pj_residual(us[i], B, x, n), run.tol("pj"));
}

CellSet hull_of_atoms(const GridOpenSet& g, std::initializer_list<const DiscreteMeasure*> ms) {
    std::vector<DiscreteMeasure> list;
    for (const auto* m : ms)
        if (!m->empty()) list.push_back(*m);
    if (list.empty()) throw ConfigError("cannot derive S: no atoms given; pass \"S\" explicitly");
    return inward_fill(g, rasterize_support(g, list));
}

void run_pj_symmetric(Run& run) {
    const GridOpenSet g = parse_grid(run, require(run.params, "grid"));
    const auto u = parse_subharmonic(require(run.params, "u"), &g, g.dim());
    const auto q = parse_subharmonic(require(run.params, "q"), &g, g.dim());
    const auto p = parse_subharmonic(require(run.params, "p"), &g, g.dim());
    const CellSet S = run.params.contains("S") ? parse_cells(run, run.params["S"], g)
                                               : hull_of_atoms(g, {&q.atoms(), &p.atoms()});
    run.details["S_cells"] = S.count();
    record_pj(run, "pj_symmetric", symmetric_pj_residual(u, q, p, S, g, run.tol("hypothesis")), run.tol("exact"));
}

void run_pj_measure(Run& run) {
    const GridOpenSet g = parse_grid(run, require(run.params, "grid"));
    const auto Delta = parse_positive_measure(require(run.params, "Delta"), g.dim(), "Delta");
    const auto omega = parse_positive_measure(require(run.params, "omega"), g.dim(), "omega");
    const auto us = parse_u_list(run, &g, g.dim());
    if (us.empty()) throw ConfigError("pj-measure needs \"u\" or \"u_list\"");
    const CellSet B = run.params.contains("B") ? parse_cells(run, run.params["B"], g) : swept_hull(g, Delta, omega);
    run.details["B_cells"] = B.count();
    for (std::size_t i = 0; i < us.size(); ++i)
        record_pj(run, "pj_measure[" + std::to_string(i) + "]", measure_pj_residual(us[i], Delta, omega, B, g),
                  run.tol("pj"));
}

double min_distance_to_atoms(std::span<const double> y, const DiscreteMeasure& a, const DiscreteMeasure& b) {
    double m = kInf;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::min(m, distance(y, a.location(i)));
    for (std::size_t i = 0; i < b.size(); ++i) m = std::min(m, distance(y, b.location(i)));
    return m;
}

/// One kernel at the S_O cell farthest from every atom, two at seeded cells of
/// g outside S_O.
std::vector<CanonicalSubharmonic> default_u_list(Run& run, const GridOpenSet& g, const DiscreteMeasure& Delta,
                                                 const DiscreteMeasure& omega) {
    const CellSet S_O = swept_hull(g, Delta, omega);
    const Box box{g.box_lo(), g.box_hi()};
    std::vector<CanonicalSubharmonic> out;
    std::optional<std::size_t> best;
    double best_d = -1.0;
    std::vector<std::size_t> outside;
    for (std::size_t c = 0; c < g.cell_count(); ++c) {
        if (!g.inside(c)) continue;
        if (S_O.contains(c)) {
            const double dd = min_distance_to_atoms(g.cell_center(c), Delta, omega);
            if (dd > best_d) {
                best_d = dd;
                best = c;
            }
        } else {
            outside.push_back(c);
        }
    }
    if (best) out.push_back(CanonicalSubharmonic::kernel_at(g.cell_center(*best), box));
    for (int k = 0; k < 2 && !outside.empty(); ++k)
        out.push_back(CanonicalSubharmonic::kernel_at(g.cell_center(outside[run.rng() % outside.size()]), box));
    return out;
}

void record_balayage(Run& run, const BalayageReport& rep, double tol) {
    run.details["report"] = balayage_report_to_json(rep);
    auto opt = [&](const char* name, const std::optional<double>& v) {
        if (v) run.add(name, *v, tol);
    };
    opt("har_test", rep.har_test_residual);
    opt("potential", rep.potential_residual);
    run.add("mass_gap", rep.mass_gap, tol);
    opt("pj", rep.pj_residual);
    opt("special", rep.special_residual);
    opt("sbh_violation", rep.sbh_violation);
}

void run_main_lemma(Run& run) {
    const GridOpenSet g = parse_grid(run, require(run.params, "grid"));
    const auto Delta = parse_positive_measure(require(run.params, "Delta"), g.dim(), "Delta");
    const auto omega = parse_positive_measure(require(run.params, "omega"), g.dim(), "omega");
    auto us = parse_u_list(run, &g, g.dim());
    if (us.empty()) us = default_u_list(run, g, Delta, omega);
    Json ujs = Json::array();
    for (const auto& u : us) ujs.push_back(subharmonic_to_json(u));
    const auto rep =
        main_lemma_harness(Delta, omega, g, us, run.tol("balayage"), count_or(run.params, "special_points", 50));
    record_balayage(run, rep, run.tol("balayage"));
    run.details["u_list"] = std::move(ujs);
    // agreement of the checks is itself asserted
    run.add("mixed_verdicts", rep.consistency == HarnessConsistency::Mixed ? 1.0 : 0.0, 0.0);
}

void run_balayage(Run& run, bool sbh) {
    const GridOpenSet g = parse_grid(run, require(run.params, "grid"));
    const auto Delta = parse_positive_measure(require(run.params, "Delta"), g.dim(), "Delta");
    const auto omega = parse_positive_measure(require(run.params, "omega"), g.dim(), "omega");
    const double tol = run.tol("balayage");
    record_balayage(run, sbh ? check_sbh_balayage(Delta, omega, g, tol) : check_har_balayage(Delta, omega, g, tol),
                    tol);
}

std::vector<double> orthant_masses(const DiscreteMeasure& mu, std::span<const double> center) {
    const int d = mu.dim();
    std::vector<std::vector<double>> parts(std::size_t{1} << d);
    for (std::size_t i = 0; i < mu.size(); ++i) {
        std::size_t bin = 0;
        for (int a = 0; a < d; ++a)
            if (mu.location(i)[a] >= center[a]) bin |= std::size_t{1} << a;
        parts[bin].push_back(mu.weight(i));
    }
    std::vector<double> out;
    for (const auto& p : parts) out.push_back(compensated_sum(p));
    return out;
}

void run_duality_roundtrip(Run& run) {
    const GridOpenSet g = parse_grid(run, require(run.params, "grid"));
    const int d = g.dim();
    const Point x = point_from_json(require(run.params, "pole"), d);
    const auto omega = parse_positive_measure(require(run.params, "omega"), d, "omega");

    const ASPotential V = forward_map(omega, x, g, run.tol("balayage"));
    run.add("vanishing", vanishing_residual(V, g), run.tol("vanishing"));
    run.add("positivity", std::max(0.0, -minimum_on_grid(V, g)), run.tol("positivity"));

    SampleLattice lat;
    if (run.params.contains("lattice")) {
        const Json& l = run.params["lattice"];
        lat.origin = point_from_json(require(l, "origin"), d);
        lat.spacing = require_number(l, "spacing");
        for (const auto& s : require(l, "shape")) lat.shape.push_back(s.get<int>());
    } else {
        const double h = number_or(run.params, "stencil_h", g.spacing() / 4.0);
        if (!(h > 0.0)) throw ConfigError("stencil_h must be > 0");
        lat.spacing = h;
        lat.origin = g.box_lo();
        const Point hi = g.box_hi();
        for (int a = 0; a < d; ++a) {
            lat.origin[a] += h * (0.5 + 0.1180339887498949 * (a + 1));
            const double n = std::floor((hi[a] - lat.origin[a]) / h) + 1.0;
            if (n > 8192.0) throw ConfigError("sampling lattice too large; raise stencil_h");
            lat.shape.push_back(static_cast<int>(n));
        }
    }
    InverseMapOptions opts;
    if (run.params.contains("ring_radii"))
        for (const auto& r : run.params["ring_radii"]) opts.ring_radii.push_back(r.get<double>());
    opts.ring_points = count_or(run.params, "ring_points", 64);

    // the pole itself is not part of the singular support of V
    const DiscreteMeasure support = restrict(omega, [&](std::span<const double> y) { return distance(y, x) > 0.0; });
    const SampledPotential sampled{x, [&V](std::span<const double> y) { return V(y); }, support};
    const DiscreteMeasure rec = inverse_map(sampled, lat, opts);

    double rec_pole = 0.0;
    double want_pole = 0.0;
    for (std::size_t i = 0; i < rec.size(); ++i)
        if (distance(rec.location(i), x) == 0.0) rec_pole = rec.weight(i);
    for (std::size_t i = 0; i < omega.size(); ++i)
        if (distance(omega.location(i), x) == 0.0) want_pole = omega.weight(i);

    const Point center = run.params.contains("bin_center") ? point_from_json(run.params["bin_center"], d) : x;
    const auto got = orthant_masses(rec, center);
    const auto want = orthant_masses(omega, center);
    double worst_bin = 0.0;
    Json bins = Json::array();
    for (std::size_t b = 0; b < got.size(); ++b) {
        worst_bin = std::max(worst_bin, std::abs(got[b] - want[b]));
        bins.push_back({{"recovered", got[b]}, {"expected", want[b]}});
    }
    run.add("mass", std::abs(rec.mass().total - omega.mass().total), run.tol("mass"));
    run.add("quadrant", worst_bin, run.tol("quadrant"));
    run.add("pole_weight", std::abs(rec_pole - want_pole), run.tol("mass"));
    run.details["recovered_mass"] = rec.mass().total;
    run.details["recovered_atoms"] = rec.size();
    run.details["recovered_pole_weight"] = rec_pole;
    run.details["bins"] = std::move(bins);
    run.details["lattice"] = {{"origin", point_to_json(lat.origin)}, {"spacing", lat.spacing},
                              {"shape", lat.shape}};
}

std::function<double(std::span<const double>)> mfs_target(const Json& node, std::span<const double> c, int d) {
    if (node.is_string()) {
        const auto s = node.get<std::string>();
        const Point cc(c.begin(), c.end());
        if (s == "constant") return [](std::span<const double>) { return 1.0; };
        if (s == "coordinate") return [cc](std::span<const double> y) { return y[0] - cc[0]; };
        if (s == "re_z2")
            return [cc](std::span<const double> y) {
                const double a = y[0] - cc[0];
                const double b = y[1] - cc[1];
                return a * a - b * b;
            };
        throw ConfigError("unknown MFS target \"" + s + "\" (constant, coordinate, re_z2, or an object)");
    }
    auto h = std::make_shared<CanonicalSubharmonic>(parse_subharmonic(node, nullptr, d));
    if (!h->atoms().empty()) throw ConfigError("MFS target must be harmonic (no atoms)");
    return [h](std::span<const double> y) { return eval_subharmonic(*h, y).value(); };
}

void run_mfs_fit(Run& run) {
    const Json& F = require(run.params, "F");
    const bool ann = F.contains("annulus");
    const Json& fs = ann ? F["annulus"] : require(F, "ball");
    const Point c = point_from_json(require(fs, "center"));
    const int d = static_cast<int>(c.size());
    if (d != 2 && d != 3) throw ConfigError("mfs-fit supports d = 2 or 3");
    const double r_out = ann ? require_number(fs, "r_out") : require_number(fs, "radius");
    const double r_in = ann ? require_number(fs, "r_in") : 0.0;
    if (!(r_out > 0.0) || r_in < 0.0 || r_in >= r_out) throw ConfigError("F: bad radii");
    const auto target = mfs_target(require(run.params, "target"), c, d);

    const std::size_t n_samples = count_or(run.params, "samples", 256);
    const std::size_t n_sources = count_or(run.params, "sources", 32);
    if (n_sources == 0 || n_samples < 4) throw ConfigError("mfs-fit needs sources >= 1 and samples >= 4");
    const double src_r = number_or(run.params, "source_radius", 1.5 * r_out);
    const double b = number_or(run.params, "b", run.tol("mfs"));

    // samples on four rings spanning F (plus the center of a ball)
    std::vector<Point> samples;
    for (int k = 1; k <= 4; ++k)
        for (const auto& p : mfs_default_sources(c, r_in + (r_out - r_in) * k / 4.0, n_samples / 4)) samples.push_back(p);
    if (!ann) samples.push_back(c);
    std::vector<double> values;
    for (const auto& s : samples) values.push_back(target(s));
    const auto in_F = [&](std::span<const double> y) {
        const double r = distance(y, c);
        return r <= r_out && r >= r_in;
    };
    const auto fit = mfs_fit(samples, values, mfs_default_sources(c, src_r, n_sources), b, in_F);
    run.details["fit"] = mfs_fit_to_json(fit);
    run.add("sup_error", fit.sup_error, b);
    if (run.params.value("check_doubling", true)) {
        const auto fit2 = mfs_fit(samples, values, mfs_default_sources(c, src_r, 2 * n_sources), b, in_F);
        run.details["doubled_sup_error"] = fit2.sup_error;
        run.add("doubling_increase", std::max(0.0, fit2.sup_error - fit.sup_error), run.tol("doubling"));
    }
}

void run_inward_fill(Run& run) {
    const GridOpenSet g = parse_grid(run, require(run.params, "grid"));
    const CellSet S = parse_cells(run, require(run.params, "S"), g);
    const CellSet F = inward_fill(g, S);
    const CellSet FF = inward_fill(g, F);
    const auto comps = complement_components(g, F);
    run.add("idempotence", FF == F ? 0.0 : 1.0, 0.0);
    run.add("contains_S", S.is_subset_of(F) ? 0.0 : 1.0, 0.0);
    run.add("bounded_complement_components", static_cast<double>(comps.total - comps.with_infinity), 0.0);
    run.add("infinity_components", std::abs(static_cast<double>(comps.with_infinity) - 1.0), 0.0);
    run.details["S_cells"] = S.count();
    run.details["filled_cells"] = F.count();
    run.details["filled_mask"] = cells_to_mask(g, F);
}

void run_wos_compare(Run& run) {
    const BallDomain B = parse_ball(require(run.params, "ball"));
    const int d = B.dim();
    std::vector<Point> poles;
    if (run.params.contains("poles"))
        for (const auto& p : run.params["poles"]) poles.push_back(point_from_json(p, d));
    if (run.params.contains("pole")) poles.push_back(point_from_json(run.params["pole"], d));
    if (poles.empty()) throw ConfigError("wos-compare needs \"pole\" or \"poles\"");
    for (const auto& p : poles)
        if (!B.contains(p)) throw ConfigError("wos-compare: every pole must lie inside the ball");
    WosConfig cfg;
    cfg.n_samples = count_or(run.params, "walks", 100000);
    cfg.epsilon_shell = number_or(run.params, "epsilon", 1e-4);
    cfg.max_steps = count_or(run.params, "max_steps", 10000);
    const std::size_t n_quad = count_or(run.params, "n_quad", d == 3 ? 8192 : 4096);
    const double sigma = run.tol("sigma");

    Json per_pole = Json::array();
    for (std::size_t k = 0; k < poles.size(); ++k) {
        cfg.seed = run.seed + 0x9e3779b97f4a7c15ULL * (k + 1);
        WosStats stats;
        const auto mc = walk_on_spheres(B, poles[k], cfg, &stats);
        const auto quad = harmonic_measure_quadrature(B, poles[k], n_quad);
        // first moments y_a and second moments y_a y_b about the center
        std::vector<std::pair<std::string, std::function<double(std::span<const double>)>>> fs;
        for (int a = 0; a < d; ++a)
            fs.push_back({"m1[" + std::to_string(a) + "]",
                          [&B, a](std::span<const double> y) { return y[a] - B.center()[a]; }});
        for (int a = 0; a < d; ++a)
            for (int b = a; b < d; ++b)
                fs.push_back({"m2[" + std::to_string(a) + std::to_string(b) + "]",
                              [&B, a, b](std::span<const double> y) {
                                  return (y[a] - B.center()[a]) * (y[b] - B.center()[b]);
                              }});
        Json moments = Json::object();
        for (const auto& [name, f] : fs) {
            std::vector<double> m1, m2, q1;
            for (std::size_t i = 0; i < mc.size(); ++i) {
                const double v = f(mc.location(i));
                m1.push_back(mc.weight(i) * v);
                m2.push_back(mc.weight(i) * v * v);
            }
            for (std::size_t i = 0; i < quad.size(); ++i) q1.push_back(quad.weight(i) * f(quad.location(i)));
            const double mean = compensated_sum(m1);
            const double var = std::max(0.0, compensated_sum(m2) - mean * mean);
            const double se = std::sqrt(var / static_cast<double>(cfg.n_samples));
            const double ref = compensated_sum(q1);
            const double gap = std::abs(mean - ref);
            const double z = se > 0.0 ? gap / se : (gap > 0.0 ? kInf : 0.0);
            moments[name] = {{"monte_carlo", mean}, {"quadrature", ref}, {"std_error", se}, {"z", z}};
            run.add("pole[" + std::to_string(k) + "]." + name, z, sigma);
        }
        per_pole.push_back({{"pole", point_to_json(poles[k])}, {"restarts", stats.restarts},
                            {"total_steps", stats.total_steps}, {"exit_atoms", mc.size()}, {"moments", moments}});
    }
    run.details["poles"] = std::move(per_pole);
}

struct KindSpec {
    std::function<void(Run&)> fn;
    std::vector<std::string> tolerances;
};

const std::map<std::string, KindSpec>& kind_table() {
    static const std::map<std::string, KindSpec> t = {
        {"pj-classical", {run_pj_classical, {"pj"}}},
        {"pj-symmetric", {run_pj_symmetric, {"exact", "hypothesis"}}},
        {"pj-measure", {run_pj_measure, {"pj"}}},
        {"main-lemma", {run_main_lemma, {"balayage"}}},
        {"balayage-har", {[](Run& r) { run_balayage(r, false); }, {"balayage"}}},
        {"balayage-sbh", {[](Run& r) { run_balayage(r, true); }, {"balayage"}}},
        {"duality-roundtrip",
         {run_duality_roundtrip, {"balayage", "vanishing", "positivity", "mass", "quadrant"}}},
        {"mfs-fit", {run_mfs_fit, {"mfs", "doubling"}}},
        {"inward-fill", {run_inward_fill, {}}},
        {"wos-compare", {run_wos_compare, {"sigma"}}},
    };
    return t;
}

std::string csv_of(const std::vector<Residual>& rs) {
    std::string out = "name,value,tolerance,pass\n";
    for (const auto& r : rs)
        out += r.name + "," + ext_to_json(ExtReal(r.value)).dump() + "," + Json(r.tolerance).dump() + "," +
               (r.pass ? "true" : "false") + "\n";
    return out;
}

} // namespace

const std::vector<std::string>& scenario_kinds() {
    static const std::vector<std::string> kinds = {
        "pj-classical", "pj-symmetric",      "pj-measure", "main-lemma",  "balayage-har",
        "balayage-sbh", "duality-roundtrip", "mfs-fit",    "inward-fill", "wos-compare",
    };
    return kinds;
}

ScenarioResult run_scenario(const std::string& config_text, const ScenarioOptions& options) {
    const auto t0 = std::chrono::steady_clock::now();
    ScenarioResult result;
    Json report = Json::object();
    Json config;
    std::vector<Residual> residuals;
    try {
        try {
            config = Json::parse(config_text);
        } catch (const nlohmann::json::parse_error& e) {
            throw ConfigError(std::string("config is not valid JSON: ") + e.what());
        }
        if (!config.is_object()) throw ConfigError("config must be a JSON object");
        for (const auto& [k, v] : config.items())
            if (k != "kind" && k != "seed" && k != "params" && k != "tolerances")
                throw ConfigError("unknown config field \"" + k + "\"");
        const Json& kind_j = require(config, "kind");
        if (!kind_j.is_string()) throw ConfigError("\"kind\" must be a string");
        const std::string kind = kind_j.get<std::string>();
        report["kind"] = kind;
        const auto it = kind_table().find(kind);
        if (it == kind_table().end()) throw ConfigError("unknown scenario kind \"" + kind + "\"");
        std::uint64_t seed = 0;
        if (config.contains("seed")) {
            if (!config["seed"].is_number_integer()) throw ConfigError("\"seed\" must be an integer");
            seed = config["seed"].is_number_unsigned() ? config["seed"].get<std::uint64_t>()
                                                       : static_cast<std::uint64_t>(config["seed"].get<std::int64_t>());
        }
        if (options.seed) seed = *options.seed;
        report["seed"] = seed;
        const Json params = config.contains("params") ? config["params"] : Json::object();
        if (!params.is_object()) throw ConfigError("\"params\" must be an object");
        const Json tols = config.contains("tolerances") ? config["tolerances"] : Json::object();

        Run run(params, tols, seed, options.base_dir, it->second.tolerances);
        report["tolerances"] = run.tolerances_json();
        try {
            it->second.fn(run);
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("bad parameter: ") + e.what());
        }
        residuals = run.residuals;
        report["details"] = std::move(run.details);
        if (residuals.empty()) throw ConfigError("scenario evaluated no residuals");
        const bool pass = std::all_of(residuals.begin(), residuals.end(), [](const Residual& r) { return r.pass; });
        result.exit_code = pass ? kExitPass : kExitVerificationFailed;
        if (!pass) result.message = "verification failed";
    } catch (const ConfigError& e) {
        result.exit_code = kExitConfigError;
        result.message = std::string("config error: ") + e.what();
    } catch (const DomainError& e) {
        result.exit_code = kExitConfigError;
        result.message = std::string("domain error: ") + e.what();
    } catch (const DimensionError& e) {
        result.exit_code = kExitConfigError;
        result.message = std::string("dimension error: ") + e.what();
    } catch (const HypothesisViolated& e) {
        result.exit_code = kExitVerificationFailed;
        result.message = std::string("hypothesis violated: ") + e.what();
    } catch (const NumericFault& e) {
        result.exit_code = kExitNumericFault;
        result.message = std::string("numeric fault: ") + e.what();
    } catch (const std::exception& e) {
        result.exit_code = kExitNumericFault;
        result.message = std::string("internal error: ") + e.what();
    }

    Json out;
    out["kind"] = report.value("kind", Json(nullptr));
    out["seed"] = report.value("seed", Json(nullptr));
    out["exit_code"] = result.exit_code;
    out["verdict"] = result.exit_code == kExitPass ? "pass" : (result.exit_code == kExitVerificationFailed ? "fail" : "error");
    if (!result.message.empty()) out["message"] = result.message;
    out["config"] = config;
    out["tolerances"] = report.value("tolerances", Json::object());
    Json rs = Json::array();
    for (const auto& r : residuals)
        rs.push_back({{"name", r.name}, {"value", ext_to_json(ExtReal(r.value))}, {"tolerance", r.tolerance},
                      {"pass", r.pass}});
    out["residuals"] = std::move(rs);
    out["details"] = report.value("details", Json::object());
    if (options.timing)
        out["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    result.report = out.dump(2) + "\n";
    result.csv = csv_of(residuals);
    return result;
}

// ---- fixtures -------------------------------------------------------------

namespace {

GridOpenSet unit_frame(int n) { return GridOpenSet(Point{-1.0, -1.0}, 2.0 / n, std::vector<int>{n, n}); }

std::string annulus_fixture(std::mt19937_64& rng) {
    const GridOpenSet frame = unit_frame(64);
    const double r_out = uniform(rng, 0.6, 0.9);
    const double r_in = uniform(rng, 0.25, r_out - 0.2);
    const Point c{uniform(rng, -0.05, 0.05), uniform(rng, -0.05, 0.05)};
    std::vector<std::uint8_t> inside(frame.cell_count());
    for (std::size_t k = 0; k < inside.size(); ++k) {
        const double r = distance(frame.cell_center(k), c);
        inside[k] = r > r_in && r < r_out ? 1 : 0;
    }
    return grid_to_mask(GridOpenSet(frame.origin(), frame.spacing(), frame.shape(), inside));
}

std::string blob_fixture(std::mt19937_64& rng) {
    const GridOpenSet frame = unit_frame(64);
    CellSet S(frame);
    const int discs = 3 + static_cast<int>(rng() % 4);
    for (int k = 0; k < discs; ++k) {
        const Point c{uniform(rng, -0.6, 0.6), uniform(rng, -0.6, 0.6)};
        const double r = uniform(rng, 0.08, 0.25);
        for (std::size_t cell = 0; cell < frame.cell_count(); ++cell)
            if (distance(frame.cell_center(cell), c) < r) S.insert(cell);
    }
    return cells_to_mask(frame, S);
}

std::string subharmonic_fixture(std::mt19937_64& rng) {
    std::vector<DiscreteMeasure::Atom> atoms, sources;
    for (int k = 0; k < 5; ++k) atoms.push_back({{uniform(rng, -0.5, 0.5), uniform(rng, -0.5, 0.5)}, uniform(rng, 0.1, 1.0)});
    for (int k = 0; k < 8; ++k) {
        const double t = 2.0 * std::numbers::pi * (k + uniform(rng, 0.0, 0.5)) / 8.0;
        const double r = uniform(rng, 2.0, 3.0);
        sources.push_back({{r * std::cos(t), r * std::sin(t)}, uniform(rng, -1.0, 1.0)});
    }
    const CanonicalSubharmonic u(DiscreteMeasure(2, atoms), DiscreteMeasure(2, sources), uniform(rng, -1.0, 1.0),
                                 Box{{-1.0, -1.0}, {1.0, 1.0}});
    return subharmonic_to_json(u).dump(2) + "\n";
}

std::string harmonic_measure_fixture(std::mt19937_64& rng) {
    const BallDomain B(Point{0.0, 0.0}, 1.0);
    const double t = uniform(rng, 0.0, 2.0 * std::numbers::pi);
    const double r = 0.5 * std::sqrt(uniform01(rng));
    return measure_to_json(harmonic_measure_quadrature(B, Point{r * std::cos(t), r * std::sin(t)}, 512)).dump(2) + "\n";
}

std::vector<std::pair<std::string, std::string>> scenario_config_fixture(std::uint64_t seed) {
    // frame offset so that no cell face passes through a round coordinate
    const Json disc_grid = {{"box", {{"lo", {-1.3190983005625053, -1.3190983005625053}},
                                     {"hi", {1.3309016994374947, 1.3309016994374947}},
                                     {"spacing", 0.05}}}};
    const Json hm = {{"harmonic_measure", {{"center", {0.0, 0.0}}, {"radius", 1.0}, {"pole", {0.2, -0.1}}, {"n", 512}}}};
    const Json region = {{"lo", {-1.5, -1.5}}, {"hi", {1.5, 1.5}}};
    const Json u = {{"atoms", {{"d", 2}, {"atoms", {{{0.1, 0.3}, 0.7}, {{-0.3, 0.0}, 0.4}}}}},
                    {"sources", {{"d", 2}, {"atoms", {{{3.0, 0.5}, -0.6}, {{-2.5, 2.0}, 0.9}}}}},
                    {"constant", 0.25},
                    {"region", region}};
    std::vector<std::pair<std::string, Json>> cfgs = {
        {"pj-classical", {{"params", {{"ball", {{"center", {0.0, 0.0}}, {"radius", 1.0}}}, {"pole", {0.2, -0.1}}, {"u", u}, {"n_quad", 512}}}}},
        {"pj-symmetric", {{"params", {{"grid", disc_grid}, {"u", u}, {"q", {{"atoms", {{"atoms", {{{0.2, 0.1}, 1.0}}}}}}}, {"p", {{"atoms", {{"atoms", {{{0.2, 0.1}, 1.0}}}}}}}}}}},
        {"pj-measure", {{"params", {{"grid", disc_grid}, {"Delta", {{"dirac", {0.2, -0.1}}}}, {"omega", hm}, {"u", {{"kernel_at", {-0.4, 0.3}}}}}}}},
        {"main-lemma", {{"params", {{"grid", disc_grid}, {"Delta", {{"dirac", {0.2, -0.1}}}}, {"omega", hm}}}}},
        {"balayage-har", {{"params", {{"grid", disc_grid}, {"Delta", {{"dirac", {0.2, -0.1}}}}, {"omega", hm}}}}},
        {"balayage-sbh", {{"params", {{"grid", disc_grid}, {"Delta", {{"dirac", {0.2, -0.1}}}}, {"omega", hm}}}}},
        {"duality-roundtrip", {{"params", {{"grid", disc_grid}, {"pole", {0.2, -0.1}}, {"omega", hm}, {"stencil_h", 0.01}}}}},
        {"mfs-fit", {{"params", {{"F", {{"ball", {{"center", {0.0, 0.0}}, {"radius", 1.0}}}}}, {"target", "re_z2"}, {"sources", 32}}}}},
        {"inward-fill", {{"params", {{"grid", {{"box", {{"lo", {-1.0, -1.0}}, {"hi", {1.0, 1.0}}, {"spacing", 0.0625}}}}}, {"S", {{"annulus", {{"center", {0.0, 0.0}}, {"r_in", 0.4}, {"r_out", 0.6}}}}}}}}},
        {"wos-compare", {{"params", {{"ball", {{"center", {0.0, 0.0}}, {"radius", 1.0}}}, {"poles", {{0.0, 0.0}, {0.3, 0.2}, {-0.5, 0.1}}}, {"walks", 20000}}}}},
    };
    std::vector<std::pair<std::string, std::string>> files;
    for (auto& [kind, cfg] : cfgs) {
        Json full;
        full["kind"] = kind;
        full["seed"] = seed;
        for (auto& [k, v] : cfg.items()) full[k] = v;
        files.push_back({kind + ".json", full.dump(2) + "\n"});
    }
    return files;
}

} // namespace

const std::vector<std::string>& fixture_kinds() {
    static const std::vector<std::string> kinds = {"grid-annulus", "grid-blob", "random-subharmonic", "harmonic-measure",
                                                   "scenario-configs"};
    return kinds;
}

std::vector<std::pair<std::string, std::string>> make_fixture(const std::string& kind, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    if (kind == "grid-annulus") return {{"grid-annulus.mask", annulus_fixture(rng)}};
    if (kind == "grid-blob") return {{"grid-blob.mask", blob_fixture(rng)}};
    if (kind == "random-subharmonic") return {{"random-subharmonic.json", subharmonic_fixture(rng)}};
    if (kind == "harmonic-measure") return {{"harmonic-measure.json", harmonic_measure_fixture(rng)}};
    if (kind == "scenario-configs") return scenario_config_fixture(seed);
    throw ConfigError("unknown fixture kind \"" + kind + "\"");
}

} // namespace balayage
