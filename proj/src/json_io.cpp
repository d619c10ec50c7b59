#include "gapseq/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gapseq/errors.hpp"

namespace gapseq {

using nlohmann::json;

namespace {

double require_number(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number())
        throw ConfigError(std::string("dist: missing or non-numeric field '") + key + "'");
    return j[key].get<double>();
}

// +inf is not representable in JSON; reports encode it as null.
json finite_or_null(double x) {
    if (std::isinf(x) || std::isnan(x)) return nullptr;
    return x;
}

}  // namespace

GapDistribution dist_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
        throw ConfigError("dist: expected an object with a string 'kind'");
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "finite") {
        if (!j.contains("pmf") || !j["pmf"].is_object() || j["pmf"].empty())
            throw ConfigError("dist: finite kind needs a nonempty 'pmf' object");
        std::vector<std::pair<uint64_t, double>> pmf;
        for (const auto& [key, val] : j["pmf"].items()) {
            uint64_t value;
            try {
                size_t pos = 0;
                value = std::stoull(key, &pos);
                if (pos != key.size()) throw std::invalid_argument("trailing");
            } catch (const std::exception&) {
                throw ConfigError("dist: finite pmf key '" + key + "' is not a positive integer");
            }
            if (!val.is_number()) throw ConfigError("dist: finite pmf mass for '" + key + "' is not numeric");
            pmf.emplace_back(value, val.get<double>());
        }
        std::sort(pmf.begin(), pmf.end());
        return GapDistribution::finite(std::move(pmf));
    }
    if (kind == "geometric") return GapDistribution::geometric(require_number(j, "p"));
    if (kind == "shifted_poisson") return GapDistribution::shifted_poisson(require_number(j, "lambda"));
    if (kind == "pow2_counterexample") {
        double m = require_number(j, "m");
        if (m < 1 || m != std::floor(m) || m > 60)
            throw ConfigError("dist: pow2_counterexample 'm' must be an integer in [1, 60]");
        return GapDistribution::pow2_counterexample((uint32_t)m);
    }
    throw ConfigError("dist: unknown kind '" + kind + "'");
}

json dist_to_json(const GapDistribution& dist) {
    json j;
    switch (dist.kind()) {
        case DistKind::Finite: {
            j["kind"] = "finite";
            json pmf = json::object();
            for (const auto& [value, mass] : dist.finite_pmf()) pmf[std::to_string(value)] = mass;
            j["pmf"] = pmf;
            break;
        }
        case DistKind::Geometric:
            j["kind"] = "geometric";
            j["p"] = dist.p();
            break;
        case DistKind::ShiftedPoisson:
            j["kind"] = "shifted_poisson";
            j["lambda"] = dist.lambda();
            break;
        case DistKind::PowerOfTwoCounterexample:
            j["kind"] = "pow2_counterexample";
            j["m"] = dist.counterexample_m();
            break;
    }
    return j;
}

json to_json(const AdmissibilityReport& report) {
    json j;
    j["support_gcd"] = report.support_gcd;
    j["star_ratio"] = report.star_ratio;
    j["threshold"] = report.threshold;
    j["mgf_radius"] = finite_or_null(report.mgf_radius);
    j["m_completeness_applies"] = report.m_completeness_applies;
    if (report.half_moment_finite)
        j["half_moment_finite"] = *report.half_moment_finite;
    else
        j["half_moment_finite"] = nullptr;
    return j;
}

json to_json(const CoverageReport& report) {
    json j;
    j["window"] = {report.lo, report.hi};
    j["covered_count"] = report.covered_count;
    j["uncovered_total"] = report.uncovered_total;
    j["uncovered"] = report.uncovered;
    j["uncovered_truncated"] = report.uncovered.size() < report.uncovered_total;
    j["largest_uncovered"] = report.largest_uncovered ? json(*report.largest_uncovered) : json(nullptr);
    j["threshold_n0"] = report.threshold_n0 ? json(*report.threshold_n0) : json(nullptr);
    return j;
}

json to_json(const DifferenceSetReport& report) {
    json j;
    j["window_hi"] = report.window_hi;
    j["all_contained"] = report.all_contained;
    j["first_violation"] = report.first_violation ? json(*report.first_violation) : json(nullptr);
    j["realized_count"] = report.realized_count;
    j["member_count"] = report.member_count;
    j["saturation"] = report.saturation;
    return j;
}

json to_json(const SemigroupDescriptor& descriptor) {
    json j;
    j["generators"] = descriptor.generators;
    j["gcd"] = descriptor.d;
    j["a1"] = descriptor.a1;
    j["apery"] = descriptor.apery;
    j["frobenius_reduced"] = descriptor.frobenius_reduced;
    return j;
}

json to_json(const EquidistributionResult& result) {
    json j;
    j["modulus"] = result.modulus;
    j["k"] = result.k;
    j["steps"] = result.steps;
    j["trials"] = result.trials;
    json freq = json::array();
    for (double f : result.freq) freq.push_back(std::isnan(f) ? json(nullptr) : json(f));
    j["freq"] = freq;
    j["counts"] = result.counts;
    j["row_counts"] = result.row_counts;
    j["low_sample"] = result.low_sample;
    j["gcd_warning"] = result.gcd_warning;
    return j;
}

json to_json(const RegularityResult& result) {
    json j;
    j["regular"] = result.regular;
    j["witness_power"] = result.witness_power ? json(*result.witness_power) : json(nullptr);
    return j;
}

}  // namespace gapseq
