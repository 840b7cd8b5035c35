#pragma once

#include <string>

#include "json.hpp"

#include "balayage/balayage.hpp"
#include "balayage/duality.hpp"
#include "balayage/ext_real.hpp"
#include "balayage/measures.hpp"
#include "balayage/poisson_jensen.hpp"
#include "balayage/subharmonic.hpp"

namespace balayage {

using Json = nlohmann::ordered_json;

/// Finite values are JSON numbers; infinities are the strings "+inf"/"-inf".
Json ext_to_json(ExtReal v);
ExtReal ext_from_json(const Json& j);

/// {"d": d, "atoms": [[[x...], w], ...]}. Doubles round-trip bit for bit.
Json measure_to_json(const DiscreteMeasure& mu);
/// Parses the form above. `expected_dim` > 0 pins the dimension; ConfigError on
/// malformed input.
DiscreteMeasure measure_from_json(const Json& j, int expected_dim = 0);

Json point_to_json(std::span<const double> p);
Point point_from_json(const Json& j, int expected_dim = 0);

/// {"atoms": measure, "sources": measure, "constant": c, "linear": [...],
///  "region": {"lo": [...], "hi": [...]}}
Json subharmonic_to_json(const CanonicalSubharmonic& u);
CanonicalSubharmonic subharmonic_from_json(const Json& j, int expected_dim = 0);

Json pj_report_to_json(const PJReport& r);
Json balayage_report_to_json(const BalayageReport& r);
Json mfs_fit_to_json(const MfsFit& f);

/// Helpers for reading config objects; all throw ConfigError.
const Json& require(const Json& obj, const char* key);
double require_number(const Json& obj, const char* key);
double number_or(const Json& obj, const char* key, double fallback);
std::size_t count_or(const Json& obj, const char* key, std::size_t fallback);

} // namespace balayage
