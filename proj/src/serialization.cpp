#include "balayage/serialization.hpp"

#include <cmath>
#include <limits>

#include "balayage/errors.hpp"

namespace balayage {

Json ext_to_json(ExtReal v) {
    if (v.is_pos_inf()) return "+inf";
    if (v.is_neg_inf()) return "-inf";
    return v.value();
}

ExtReal ext_from_json(const Json& j) {
    if (j.is_number()) return ExtReal(j.get<double>());
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "+inf" || s == "inf") return ExtReal::pos_inf();
        if (s == "-inf") return ExtReal::neg_inf();
    }
    throw ConfigError("expected a number or \"+inf\"/\"-inf\"");
}

Json point_to_json(std::span<const double> p) {
    Json a = Json::array();
    for (double c : p) a.push_back(c);
    return a;
}

Point point_from_json(const Json& j, int expected_dim) {
    if (!j.is_array() || j.empty()) throw ConfigError("a point must be a non-empty array of numbers");
    Point p;
    for (const auto& c : j) {
        if (!c.is_number()) throw ConfigError("a point must be a non-empty array of numbers");
        const double v = c.get<double>();
        if (!std::isfinite(v)) throw ConfigError("point coordinates must be finite");
        p.push_back(v);
    }
    if (expected_dim > 0 && static_cast<int>(p.size()) != expected_dim)
        throw ConfigError("point has dimension " + std::to_string(p.size()) + ", expected " +
                          std::to_string(expected_dim));
    return p;
}

Json measure_to_json(const DiscreteMeasure& mu) {
    Json atoms = Json::array();
    for (std::size_t i = 0; i < mu.size(); ++i) atoms.push_back(Json::array({point_to_json(mu.location(i)), mu.weight(i)}));
    Json j;
    j["d"] = mu.dim();
    j["atoms"] = std::move(atoms);
    return j;
}

DiscreteMeasure measure_from_json(const Json& j, int expected_dim) {
    if (!j.is_object()) throw ConfigError("a measure must be a JSON object");
    int d = expected_dim;
    if (j.contains("d")) {
        if (!j["d"].is_number_integer()) throw ConfigError("measure field \"d\" must be an integer");
        d = j["d"].get<int>();
        if (expected_dim > 0 && d != expected_dim) throw ConfigError("measure dimension mismatch");
    }
    const Json& atoms = require(j, "atoms");
    if (!atoms.is_array()) throw ConfigError("measure field \"atoms\" must be an array");
    std::vector<DiscreteMeasure::Atom> out;
    for (const auto& a : atoms) {
        if (!a.is_array() || a.size() != 2 || !a[1].is_number())
            throw ConfigError("each atom must be [[coordinates], weight]");
        Point loc = point_from_json(a[0], d);
        if (d <= 0) d = static_cast<int>(loc.size());
        out.push_back({std::move(loc), a[1].get<double>()});
    }
    if (d <= 0) throw ConfigError("measure dimension is unknown (empty atoms and no \"d\")");
    try {
        return DiscreteMeasure(d, out);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("invalid measure: ") + e.what());
    }
}

Json subharmonic_to_json(const CanonicalSubharmonic& u) {
    Json j;
    j["atoms"] = measure_to_json(u.atoms());
    j["sources"] = measure_to_json(u.sources());
    j["constant"] = u.constant();
    j["linear"] = point_to_json(u.linear());
    j["region"] = {{"lo", point_to_json(u.region().lo)}, {"hi", point_to_json(u.region().hi)}};
    return j;
}

CanonicalSubharmonic subharmonic_from_json(const Json& j, int expected_dim) {
    if (!j.is_object()) throw ConfigError("a subharmonic function must be a JSON object");
    const Json& region = require(j, "region");
    Box box{point_from_json(require(region, "lo"), expected_dim), point_from_json(require(region, "hi"), expected_dim)};
    const int d = box.dim();
    if (box.hi.size() != box.lo.size()) throw ConfigError("region corners differ in dimension");
    if (j.contains("kernel_at")) return CanonicalSubharmonic::kernel_at(point_from_json(j["kernel_at"], d), box);
    DiscreteMeasure atoms = j.contains("atoms") ? measure_from_json(j["atoms"], d) : DiscreteMeasure(d);
    DiscreteMeasure sources = j.contains("sources") ? measure_from_json(j["sources"], d) : DiscreteMeasure(d);
    std::vector<double> linear;
    if (j.contains("linear") && !j["linear"].empty()) linear = point_from_json(j["linear"], d);
    try {
        return CanonicalSubharmonic(std::move(atoms), std::move(sources), number_or(j, "constant", 0.0), box,
                                    std::move(linear));
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("invalid subharmonic function: ") + e.what());
    }
}

Json pj_report_to_json(const PJReport& r) {
    Json j;
    j["lhs"] = ext_to_json(r.lhs);
    j["rhs"] = ext_to_json(r.rhs);
    j["residual"] = ext_to_json(ExtReal(r.residual));
    j["both_neg_inf"] = r.both_neg_inf;
    return j;
}

namespace {

Json optional_number(const std::optional<double>& v) {
    if (!v) return nullptr;
    return ext_to_json(ExtReal(*v));
}

} // namespace

Json balayage_report_to_json(const BalayageReport& r) {
    Json j;
    j["har_test_residual"] = optional_number(r.har_test_residual);
    j["potential_residual"] = optional_number(r.potential_residual);
    j["mass_gap"] = r.mass_gap;
    j["pj_residual"] = optional_number(r.pj_residual);
    j["special_residual"] = optional_number(r.special_residual);
    j["sbh_violation"] = optional_number(r.sbh_violation);
    j["tolerance"] = r.tolerance;
    j["samples"] = r.samples;
    Json worst = Json::array();
    for (const auto& w : r.worst)
        worst.push_back({{"family", w.family}, {"location", point_to_json(w.location)},
                         {"residual", ext_to_json(ExtReal(w.residual))}});
    j["worst"] = std::move(worst);
    j["S_O_cells"] = r.S_O.count();
    j["verdict"] = r.verdict;
    j["consistency"] = r.consistency ? Json(to_string(*r.consistency)) : Json(nullptr);
    return j;
}

Json mfs_fit_to_json(const MfsFit& f) {
    Json sources = Json::array();
    for (const auto& s : f.sources) sources.push_back(point_to_json(s));
    Json j;
    j["sources"] = std::move(sources);
    j["coefficients"] = point_to_json(f.coefficients);
    j["sup_error"] = f.sup_error;
    j["success"] = f.success;
    j["regularized"] = f.regularized;
    return j;
}

const Json& require(const Json& obj, const char* key) {
    if (!obj.is_object() || !obj.contains(key)) throw ConfigError(std::string("missing required field \"") + key + "\"");
    return obj[key];
}

double require_number(const Json& obj, const char* key) {
    const Json& v = require(obj, key);
    if (!v.is_number()) throw ConfigError(std::string("field \"") + key + "\" must be a number");
    return v.get<double>();
}

double number_or(const Json& obj, const char* key, double fallback) {
    if (!obj.is_object() || !obj.contains(key)) return fallback;
    if (!obj[key].is_number()) throw ConfigError(std::string("field \"") + key + "\" must be a number");
    return obj[key].get<double>();
}

std::size_t count_or(const Json& obj, const char* key, std::size_t fallback) {
    if (!obj.is_object() || !obj.contains(key)) return fallback;
    const Json& v = obj[key];
    if (!v.is_number_integer() || v.get<long long>() < 0)
        throw ConfigError(std::string("field \"") + key + "\" must be a non-negative integer");
    return v.get<std::size_t>();
}

} // namespace balayage
