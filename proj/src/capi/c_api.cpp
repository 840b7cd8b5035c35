#include "balayage.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "balayage/balayage.hpp"
#include "balayage/classical_domains.hpp"
#include "balayage/errors.hpp"
#include "balayage/geometry.hpp"
#include "balayage/kernels.hpp"
#include "balayage/measures.hpp"
#include "balayage/potentials.hpp"
#include "balayage/scenario.hpp"
#include "balayage/serialization.hpp"

struct bl_measure {
    balayage::DiscreteMeasure m;
};
struct bl_grid {
    balayage::GridOpenSet g;
};
struct bl_cells {
    balayage::CellSet s;
};

namespace {

thread_local std::string g_last_error;

bl_status fail(bl_status s, const char* what) {
    g_last_error = what;
    return s;
}

template <class F>
bl_status guard(F&& f) {
    try {
        g_last_error.clear();
        f();
        return BL_OK;
    } catch (const balayage::ConfigError& e) {
        return fail(BL_ERR_CONFIG, e.what());
    } catch (const balayage::DomainError& e) {
        return fail(BL_ERR_DOMAIN, e.what());
    } catch (const balayage::DimensionError& e) {
        return fail(BL_ERR_DIMENSION, e.what());
    } catch (const balayage::HypothesisViolated& e) {
        return fail(BL_ERR_HYPOTHESIS, e.what());
    } catch (const balayage::NumericFault& e) {
        return fail(BL_ERR_NUMERIC, e.what());
    } catch (const nlohmann::json::exception& e) {
        return fail(BL_ERR_CONFIG, e.what());
    } catch (const std::exception& e) {
        return fail(BL_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(BL_ERR_INTERNAL, "unknown error");
    }
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

bool null_args() { return false; }
template <class P, class... R>
bool null_args(P p, R... rest) {
    return p == nullptr || null_args(rest...);
}

#define BL_REQUIRE(...) \
    if (null_args(__VA_ARGS__)) return fail(BL_ERR_INVALID_ARGUMENT, "null argument")

std::span<const double> span_of(const double* p, int dim) { return {p, static_cast<std::size_t>(dim)}; }

} // namespace

extern "C" {

const char* bl_version(void) { return "0.1.0"; }
const char* bl_last_error(void) { return g_last_error.c_str(); }
void bl_string_free(char* s) { std::free(s); }

bl_status bl_measure_create(int dim, size_t n, const double* coords, const double* weights, bl_measure** out) {
    BL_REQUIRE(out);
    if (n > 0) BL_REQUIRE(coords, weights);
    return guard([&] {
        balayage::DiscreteMeasure m(dim, std::span<const double>(coords, n * static_cast<std::size_t>(dim > 0 ? dim : 0)),
                                    std::span<const double>(weights, n));
        *out = new bl_measure{std::move(m)};
    });
}

bl_status bl_measure_from_json(const char* json, bl_measure** out) {
    BL_REQUIRE(json, out);
    return guard([&] { *out = new bl_measure{balayage::measure_from_json(balayage::Json::parse(json))}; });
}

bl_status bl_measure_to_json(const bl_measure* m, char** out) {
    BL_REQUIRE(m, out);
    return guard([&] { *out = dup_string(balayage::measure_to_json(m->m).dump()); });
}

void bl_measure_destroy(bl_measure* m) { delete m; }
int bl_measure_dim(const bl_measure* m) { return m ? m->m.dim() : 0; }
size_t bl_measure_size(const bl_measure* m) { return m ? m->m.size() : 0; }

bl_status bl_measure_mass(const bl_measure* m, double* total, double* positive, double* negative) {
    BL_REQUIRE(m);
    return guard([&] {
        const auto mass = m->m.mass();
        if (total) *total = mass.total;
        if (positive) *positive = mass.positive_total;
        if (negative) *negative = mass.negative_total;
    });
}

bl_status bl_potential(const bl_measure* m, const double* y, double* value, int* evaluable) {
    BL_REQUIRE(m, y, value);
    return guard([&] {
        const auto v = balayage::potential(m->m, span_of(y, m->m.dim()));
        *value = v.value.value();
        if (evaluable) *evaluable = v.evaluable ? 1 : 0;
    });
}

bl_status bl_spatial_kernel(int dim, const double* y, const double* x, double* value) {
    BL_REQUIRE(y, x, value);
    return guard([&] {
        if (dim < 1) throw balayage::DimensionError("dimension must be >= 1");
        *value = balayage::spatial_kernel(dim, span_of(y, dim), span_of(x, dim)).value();
    });
}

bl_status bl_riesz_constant(int dim, double* value) {
    BL_REQUIRE(value);
    return guard([&] { *value = balayage::riesz_constant(dim); });
}

bl_status bl_harmonic_measure(int dim, const double* center, double radius, const double* x, size_t n,
                              bl_measure** out) {
    BL_REQUIRE(center, x, out);
    return guard([&] {
        if (dim < 1) throw balayage::DimensionError("dimension must be >= 1");
        const balayage::BallDomain B(balayage::Point(center, center + dim), radius);
        *out = new bl_measure{balayage::harmonic_measure_quadrature(B, span_of(x, dim), n)};
    });
}

bl_status bl_green_ball(int dim, const double* center, double radius, const double* x, const double* y,
                        double* value) {
    BL_REQUIRE(center, x, y, value);
    return guard([&] {
        if (dim < 1) throw balayage::DimensionError("dimension must be >= 1");
        const balayage::BallDomain B(balayage::Point(center, center + dim), radius);
        *value = balayage::green_ball(B, span_of(x, dim), span_of(y, dim)).value();
    });
}

bl_status bl_grid_from_mask(const char* text, bl_grid** out) {
    BL_REQUIRE(text, out);
    return guard([&] { *out = new bl_grid{balayage::grid_from_mask(text)}; });
}

void bl_grid_destroy(bl_grid* g) { delete g; }

bl_status bl_cells_from_mask(const bl_grid* g, const char* text, bl_cells** out) {
    BL_REQUIRE(g, text, out);
    return guard([&] { *out = new bl_cells{balayage::cells_from_mask(g->g, text)}; });
}

void bl_cells_destroy(bl_cells* s) { delete s; }
size_t bl_cells_count(const bl_cells* s) { return s ? s->s.count() : 0; }

bl_status bl_cells_to_mask(const bl_grid* g, const bl_cells* s, char** out) {
    BL_REQUIRE(g, s, out);
    return guard([&] { *out = dup_string(balayage::cells_to_mask(g->g, s->s)); });
}

bl_status bl_inward_fill(const bl_grid* g, const bl_cells* s, bl_cells** out) {
    BL_REQUIRE(g, s, out);
    return guard([&] { *out = new bl_cells{balayage::inward_fill(g->g, s->s)}; });
}

bl_status bl_check_har_balayage(const bl_measure* delta, const bl_measure* omega, const bl_grid* g, double tol,
                                int* verdict, char** report_json) {
    BL_REQUIRE(delta, omega, g, verdict);
    return guard([&] {
        const auto rep = balayage::check_har_balayage(delta->m, omega->m, g->g, tol);
        *verdict = rep.verdict ? 1 : 0;
        if (report_json) *report_json = dup_string(balayage::balayage_report_to_json(rep).dump(2));
    });
}

bl_status bl_scenario_run(const char* config_json, const char* base_dir, int has_seed, uint64_t seed, int timing,
                          int* exit_code, char** report, char** csv) {
    BL_REQUIRE(config_json, exit_code);
    return guard([&] {
        balayage::ScenarioOptions opts;
        if (has_seed) opts.seed = seed;
        opts.timing = timing != 0;
        if (base_dir) opts.base_dir = base_dir;
        const auto r = balayage::run_scenario(config_json, opts);
        *exit_code = r.exit_code;
        if (report) *report = dup_string(r.report);
        if (csv) *csv = dup_string(r.csv);
        if (!r.message.empty()) g_last_error = r.message;
    });
}

bl_status bl_fixture_make(const char* kind, uint64_t seed, const char* out_dir) {
    BL_REQUIRE(kind, out_dir);
    return guard([&] {
        const std::filesystem::path dir(out_dir);
        if (!std::filesystem::is_directory(dir))
            throw balayage::ConfigError("output directory does not exist: " + dir.string());
        for (const auto& [name, contents] : balayage::make_fixture(kind, seed)) {
            std::ofstream out(dir / name, std::ios::binary);
            if (!out) throw balayage::ConfigError("cannot write " + (dir / name).string());
            out << contents;
        }
    });
}

} // extern "C"
