#pragma once

// JSON (de)serialization kept out of the core headers so translation units
// that only need math never pull in json.hpp.

#include <json.hpp>

#include "gapseq/coverage.hpp"
#include "gapseq/distribution.hpp"
#include "gapseq/modular_chain.hpp"
#include "gapseq/semigroup.hpp"

namespace gapseq {

// {"kind":"geometric","p":0.8} and friends. Throws ConfigError on unknown
// kinds, bad parameter ranges, or a finite pmf not summing to 1 within 1e-9.
GapDistribution dist_from_json(const nlohmann::json& j);
nlohmann::json dist_to_json(const GapDistribution& dist);

nlohmann::json to_json(const AdmissibilityReport& report);
nlohmann::json to_json(const CoverageReport& report);
nlohmann::json to_json(const DifferenceSetReport& report);
nlohmann::json to_json(const SemigroupDescriptor& descriptor);
nlohmann::json to_json(const EquidistributionResult& result);
nlohmann::json to_json(const RegularityResult& result);

}  // namespace gapseq
