#include "gapseq/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include "gapseq/coverage.hpp"
#include "gapseq/errors.hpp"
#include "gapseq/json_io.hpp"
#include "gapseq/modular_chain.hpp"
#include "gapseq/semigroup.hpp"
#include "gapseq/sequence.hpp"
#include "gapseq/stats.hpp"

namespace gapseq {

using nlohmann::json;

namespace {

constexpr std::pair<ExperimentKind, const char*> kKindNames[] = {
    {ExperimentKind::Density, "density"},
    {ExperimentKind::Equidistribution, "equidistribution"},
    {ExperimentKind::MCompleteness, "m_completeness"},
    {ExperimentKind::AsymptoticCompleteness, "asymptotic_completeness"},
    {ExperimentKind::Counterexample, "counterexample"},
    {ExperimentKind::PrevaultIndependence, "prevault_independence"},
    {ExperimentKind::SemigroupTable, "semigroup_table"},
    {ExperimentKind::DifferenceSet, "difference_set"},
    {ExperimentKind::HalfMoment, "half_moment"},
    {ExperimentKind::MaxGap, "max_gap"},
};

constexpr double kGoldenRatioThreshold = 0.61803398874989485;  // (sqrt(5)-1)/2

// JSON integers may carry a signed storage type even when nonnegative
// (programmatically built documents do); accept both representations.
bool is_u64(const json& v) {
    return v.is_number_unsigned() || (v.is_number_integer() && v.get<int64_t>() >= 0);
}

uint64_t get_u64(const json& j, const char* key, uint64_t fallback) {
    if (!j.contains(key)) return fallback;
    if (!is_u64(j[key]))
        throw ConfigError(std::string("config: '") + key + "' must be a nonnegative integer");
    return j[key].get<uint64_t>();
}

json opt_u64(const std::optional<uint64_t>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

const char* to_string(ExperimentKind kind) {
    for (const auto& [k, name] : kKindNames)
        if (k == kind) return name;
    return "unknown";
}

std::optional<ExperimentKind> experiment_kind_from_string(std::string_view name) {
    for (const auto& [k, n] : kKindNames)
        if (name == n) return k;
    return std::nullopt;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("config: expected a JSON object");
    ExperimentConfig c;
    if (!j.contains("experiment") || !j["experiment"].is_string())
        throw ConfigError("config: missing string field 'experiment'");
    auto kind = experiment_kind_from_string(j["experiment"].get<std::string>());
    if (!kind)
        throw ConfigError("config: unknown experiment '" + j["experiment"].get<std::string>() + "'");
    c.kind = *kind;

    if (j.contains("dist")) c.dist = dist_from_json(j["dist"]);

    if (j.contains("seeds") && j.contains("seed"))
        throw ConfigError("config: give either 'seeds' or 'seed'/'num_seeds', not both");
    if (j.contains("seeds")) {
        if (!j["seeds"].is_array()) throw ConfigError("config: 'seeds' must be an array");
        for (const auto& s : j["seeds"]) {
            if (!is_u64(s)) throw ConfigError("config: seeds must be nonnegative integers");
            c.seeds.push_back(s.get<uint64_t>());
        }
    } else if (j.contains("seed")) {
        uint64_t base = get_u64(j, "seed", 0);
        uint64_t count = get_u64(j, "num_seeds", 1);
        for (uint64_t i = 0; i < count; ++i) c.seeds.push_back(derive_seed(base, i));
    }

    c.horizon = get_u64(j, "horizon", 0);
    c.m = (uint32_t)get_u64(j, "m", 2);
    c.modulus = (uint32_t)get_u64(j, "modulus", 0);
    if (j.contains("window")) {
        const auto& w = j["window"];
        if (!w.is_array() || w.size() != 2 || !is_u64(w[0]) || !is_u64(w[1]))
            throw ConfigError("config: 'window' must be [lo, hi] with nonnegative integers");
        c.window_lo = w[0].get<uint64_t>();
        c.window_hi = w[1].get<uint64_t>();
    }
    c.eq_k = get_u64(j, "k", c.eq_k);
    c.eq_steps = get_u64(j, "steps", c.eq_steps);
    c.eq_trials = get_u64(j, "trials", c.eq_trials);
    c.vault_target = get_u64(j, "n", c.vault_target);
    c.vault_b = (uint32_t)get_u64(j, "b", c.vault_b);
    c.vault_sequences = get_u64(j, "sequences", c.vault_sequences);
    c.diff_window = get_u64(j, "diff_window", c.diff_window);
    if (j.contains("generators")) {
        if (!j["generators"].is_array()) throw ConfigError("config: 'generators' must be an array");
        for (const auto& g : j["generators"]) {
            if (!is_u64(g)) throw ConfigError("config: generators must be positive integers");
            c.generators.push_back(g.get<uint64_t>());
        }
    }
    if (j.contains("thresholds")) {
        const auto& t = j["thresholds"];
        if (!t.is_object()) throw ConfigError("config: 'thresholds' must be an object");
        auto num = [&](const char* key, double fallback) {
            if (!t.contains(key)) return fallback;
            if (!t[key].is_number()) throw ConfigError(std::string("config: thresholds.") + key + " must be numeric");
            return t[key].get<double>();
        };
        c.thresholds.density_each_abs = num("density_each_abs", c.thresholds.density_each_abs);
        c.thresholds.density_mean_abs = num("density_mean_abs", c.thresholds.density_mean_abs);
        c.thresholds.analytic_power = get_u64(t, "analytic_power", c.thresholds.analytic_power);
        c.thresholds.analytic_tol = num("analytic_tol", c.thresholds.analytic_tol);
        c.thresholds.empirical_tol = num("empirical_tol", c.thresholds.empirical_tol);
        c.thresholds.threshold_max = get_u64(t, "threshold_max", c.thresholds.threshold_max);
        c.thresholds.min_pass_fraction = num("min_pass_fraction", c.thresholds.min_pass_fraction);
        c.thresholds.uncovered_above = get_u64(t, "uncovered_above", c.thresholds.uncovered_above);
        c.thresholds.alpha = num("alpha", c.thresholds.alpha);
        c.thresholds.min_accept_fraction = num("min_accept_fraction", c.thresholds.min_accept_fraction);
        c.thresholds.scaling_ratio_max = num("scaling_ratio_max", c.thresholds.scaling_ratio_max);
        c.thresholds.max_gap_ratio_max = num("max_gap_ratio_max", c.thresholds.max_gap_ratio_max);
        c.thresholds.diagnostics_min_n = get_u64(t, "diagnostics_min_n", c.thresholds.diagnostics_min_n);
        c.thresholds.min_saturation = num("min_saturation", c.thresholds.min_saturation);
    }
    if (j.contains("out")) {
        if (!j["out"].is_string()) throw ConfigError("config: 'out' must be a string");
        c.out_dir = j["out"].get<std::string>();
    }
    c.threads = (uint32_t)get_u64(j, "threads", 0);
    if (j.contains("quiet")) {
        if (!j["quiet"].is_boolean()) throw ConfigError("config: 'quiet' must be a boolean");
        c.quiet = j["quiet"].get<bool>();
    }

    // Kind-specific resolved defaults, echoed back so replays are unambiguous.
    if (c.seeds.empty() && c.kind == ExperimentKind::SemigroupTable) c.seeds.push_back(0);
    bool windowed = c.kind == ExperimentKind::MCompleteness ||
                    c.kind == ExperimentKind::AsymptoticCompleteness ||
                    c.kind == ExperimentKind::Counterexample;
    if (windowed && c.horizon > 0) {
        if (c.window_lo == 0) c.window_lo = 1000;
        if (c.window_hi == 0) c.window_hi = c.horizon - c.horizon / 10;
    }
    return c;
}

json ExperimentConfig::to_json() const {
    json j;
    j["experiment"] = gapseq::to_string(kind);
    if (dist) j["dist"] = dist_to_json(*dist);
    j["seeds"] = seeds;
    j["horizon"] = horizon;
    j["m"] = m;
    j["modulus"] = modulus;
    j["window"] = {window_lo, window_hi};
    j["k"] = eq_k;
    j["steps"] = eq_steps;
    j["trials"] = eq_trials;
    j["n"] = vault_target;
    j["b"] = vault_b;
    j["sequences"] = vault_sequences;
    j["diff_window"] = diff_window;
    j["generators"] = generators;
    j["thresholds"] = {
        {"density_each_abs", thresholds.density_each_abs},
        {"density_mean_abs", thresholds.density_mean_abs},
        {"analytic_power", thresholds.analytic_power},
        {"analytic_tol", thresholds.analytic_tol},
        {"empirical_tol", thresholds.empirical_tol},
        {"threshold_max", thresholds.threshold_max},
        {"min_pass_fraction", thresholds.min_pass_fraction},
        {"uncovered_above", thresholds.uncovered_above},
        {"alpha", thresholds.alpha},
        {"min_accept_fraction", thresholds.min_accept_fraction},
        {"scaling_ratio_max", thresholds.scaling_ratio_max},
        {"max_gap_ratio_max", thresholds.max_gap_ratio_max},
        {"diagnostics_min_n", thresholds.diagnostics_min_n},
        {"min_saturation", thresholds.min_saturation},
    };
    // execution knobs (threads, out, quiet) are deliberately not echoed:
    // reports must be identical no matter how the run was scheduled
    return j;
}

std::vector<Diagnostic> validate(const ExperimentConfig& c) {
    std::vector<Diagnostic> out;
    auto err = [&](const char* field, std::string msg) {
        out.push_back({Diagnostic::Severity::Error, field, std::move(msg)});
    };
    auto warn = [&](const char* field, std::string msg) {
        out.push_back({Diagnostic::Severity::Warning, field, std::move(msg)});
    };

    if (c.seeds.empty()) err("seeds", "seed fan is empty");
    {
        auto sorted = c.seeds;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            err("seeds", "seed fan contains duplicates");
    }
    if (!(c.thresholds.alpha > 0.0) || !(c.thresholds.alpha < 1.0))
        err("thresholds.alpha", "alpha must lie in (0, 1)");
    if (!(c.thresholds.min_pass_fraction > 0.0) || c.thresholds.min_pass_fraction > 1.0)
        err("thresholds.min_pass_fraction", "must lie in (0, 1]");
    if (!(c.thresholds.min_accept_fraction > 0.0) || c.thresholds.min_accept_fraction > 1.0)
        err("thresholds.min_accept_fraction", "must lie in (0, 1]");

    const bool needs_dist = c.kind != ExperimentKind::SemigroupTable;
    if (needs_dist && !c.dist) {
        err("dist", "distribution required for this experiment kind");
        return out;
    }
    const bool needs_horizon = c.kind != ExperimentKind::SemigroupTable &&
                               c.kind != ExperimentKind::Equidistribution &&
                               c.kind != ExperimentKind::PrevaultIndependence;
    if (needs_horizon && c.horizon == 0) err("horizon", "horizon required for this experiment kind");

    switch (c.kind) {
        case ExperimentKind::Density:
        case ExperimentKind::HalfMoment:
            if (c.dist && std::isinf(c.dist->mean()))
                warn("dist", "gap mean is infinite; expected density is 0");
            if (c.kind == ExperimentKind::HalfMoment && c.horizon > 0 &&
                c.horizon < 4 * c.thresholds.diagnostics_min_n)
                warn("horizon", "horizon leaves few checkpoints at or past diagnostics_min_n");
            break;
        case ExperimentKind::Equidistribution:
            if (c.modulus < 2) err("modulus", "modulus (>= 2) required for equidistribution");
            if (c.eq_steps == 0) err("steps", "steps must be >= 1");
            if (c.eq_trials == 0) err("trials", "trials must be >= 1");
            if (c.dist && c.dist->support_gcd() != 1)
                warn("dist", "support gcd != 1: the chain cannot be regular");
            break;
        case ExperimentKind::MCompleteness:
        case ExperimentKind::Counterexample:
        case ExperimentKind::AsymptoticCompleteness:
            if (c.kind != ExperimentKind::AsymptoticCompleteness && c.m < 1)
                err("m", "m must be >= 1");
            if (c.horizon > 0) {
                if (c.window_hi < 1) err("window", "window hi must be >= 1");
                if (c.window_lo > c.window_hi) err("window", "window lo > hi");
                if (c.window_hi > c.horizon) err("window", "window hi exceeds horizon");
            }
            if (c.kind == ExperimentKind::MCompleteness && c.dist) {
                auto adm = c.dist->admissibility();
                if (!adm.m_completeness_applies) {
                    if (c.dist->kind() == DistKind::Geometric) {
                        char buf[160];
                        std::snprintf(buf, sizeof(buf),
                                      "geometric p=%g is below golden-ratio threshold %.10f; the "
                                      "m-completeness guarantee does not apply (exploratory run)",
                                      c.dist->p(), kGoldenRatioThreshold);
                        warn("dist", buf);
                    } else {
                        warn("dist",
                             "m-completeness guarantee does not apply: mgf radius <= 2 * star-ratio "
                             "(exploratory run)");
                    }
                }
                if (adm.support_gcd != 1)
                    warn("dist", "support gcd != 1: only multiples of the gcd can be covered");
            }
            break;
        case ExperimentKind::PrevaultIndependence:
            if (c.dist && c.dist->kind() != DistKind::Finite)
                err("dist", "prevault_independence needs a finite gap distribution (finite cell space)");
            if (c.vault_b < 1) err("b", "b must be >= 1");
            if (c.vault_target < 2) err("n", "vault target n must be >= 2");
            if (c.vault_sequences < 100) warn("sequences", "fewer than 100 sequences per meta-trial");
            if (c.dist && c.dist->kind() == DistKind::Finite) {
                double cells = std::pow((double)c.dist->finite_pmf().size(), (double)c.vault_b);
                if (cells > 4096.0) err("b", "prevault cell space |support|^b exceeds 4096");
            }
            break;
        case ExperimentKind::SemigroupTable:
            if (c.generators.empty()) err("generators", "semigroup_table needs generators");
            for (uint64_t g : c.generators)
                if (g == 0) err("generators", "generators must be >= 1");
            break;
        case ExperimentKind::DifferenceSet:
            if (c.diff_window < 1) err("diff_window", "diff_window must be >= 1");
            if (c.horizon > 0 && c.diff_window > c.horizon / 2)
                err("diff_window", "diff_window must be at most horizon / 2");
            break;
        case ExperimentKind::MaxGap:
            if (c.horizon > 0 && c.horizon < 4 * c.thresholds.diagnostics_min_n)
                warn("horizon", "horizon leaves few checkpoints at or past diagnostics_min_n");
            break;
    }
    return out;
}

std::vector<Diagnostic> validate_json(const json& config_json) {
    static const char* kKnown[] = {"experiment", "dist",    "seeds",   "seed",       "num_seeds",
                                   "horizon",    "m",       "modulus", "window",     "k",
                                   "steps",      "trials",  "n",       "b",          "sequences",
                                   "diff_window", "generators", "thresholds", "out", "threads",
                                   "quiet"};
    std::vector<Diagnostic> out;
    if (config_json.is_object()) {
        for (const auto& [key, value] : config_json.items()) {
            if (std::none_of(std::begin(kKnown), std::end(kKnown),
                             [&](const char* k) { return key == k; }))
                out.push_back({Diagnostic::Severity::Warning, key.c_str(), "unknown config key ignored"});
        }
    }
    try {
        ExperimentConfig c = ExperimentConfig::from_json(config_json);
        auto more = validate(c);
        out.insert(out.end(), more.begin(), more.end());
    } catch (const ConfigError& e) {
        out.push_back({Diagnostic::Severity::Error, "config", e.what()});
    }
    return out;
}

namespace {

struct SeedOutcome {
    json result;
    bool pass = false;
};

json json_of(const Diagnostic& d) {
    return {{"severity", d.severity == Diagnostic::Severity::Error ? "error" : "warning"},
            {"field", d.field},
            {"message", d.message}};
}

SeedOutcome seed_density(const ExperimentConfig& c, uint64_t seed) {
    const auto& dist = *c.dist;
    WeightSequence seq = generate(dist, seed, c.horizon);
    double mean = dist.mean();
    double expected = std::isinf(mean) ? 0.0 : 1.0 / mean;
    double d = density(seq, c.horizon);
    double dev = std::abs(d - expected);
    SeedOutcome out;
    out.pass = dev < c.thresholds.density_each_abs;
    out.result = {{"seed", seed},       {"density", d},
                  {"expected", expected}, {"abs_deviation", dev},
                  {"weights", seq.weights.size()}, {"pass", out.pass}};
    return out;
}

SeedOutcome seed_equidistribution(const ExperimentConfig& c, uint64_t seed) {
    const auto& dist = *c.dist;
    auto emp = empirical_equidistribution(dist, c.modulus, c.eq_k, c.eq_steps, c.eq_trials, seed);
    const double uniform = 1.0 / (double)c.modulus;
    double max_dev = 0.0;
    uint32_t low_rows = 0;
    for (uint32_t i = 0; i < c.modulus; ++i) {
        if (emp.low_sample[i]) {
            ++low_rows;
            continue;
        }
        for (uint32_t j = 0; j < c.modulus; ++j)
            max_dev = std::max(max_dev, std::abs(emp.freq[size_t(i) * c.modulus + j] - uniform));
    }
    SeedOutcome out;
    out.pass = low_rows == 0 && max_dev <= c.thresholds.empirical_tol;
    out.result = {{"seed", seed},
                  {"max_abs_dev", max_dev},
                  {"low_sample_rows", low_rows},
                  {"trials", emp.trials},
                  {"counts", emp.counts},
                  {"row_counts", emp.row_counts},
                  {"pass", out.pass}};
    return out;
}

SeedOutcome seed_coverage(const ExperimentConfig& c, uint64_t seed) {
    const auto& dist = *c.dist;
    WeightSequence seq = generate(dist, seed, c.horizon);
    CoverageReport rep;
    uint64_t weights_used = 0;
    if (c.kind == ExperimentKind::AsymptoticCompleteness) {
        BitVec sums = build_distinct_sums(seq.weights, c.window_hi);
        rep = report(sums, 1, c.window_hi);
        weights_used = seq.weights.size();
    } else {
        SumsetTable table = build_table(seq.weights, c.m, c.window_hi);
        // counterexample runs ask whether the window has large uncovered
        // points, so they scan the configured window; completeness runs scan
        // from 1 so threshold_n0 is the true empirical threshold
        uint64_t lo = c.kind == ExperimentKind::Counterexample ? c.window_lo : 1;
        rep = report(table.layers[c.m], lo, c.window_hi);
        weights_used = table.weights_used;
    }
    SeedOutcome out;
    if (c.kind == ExperimentKind::Counterexample)
        out.pass = rep.largest_uncovered && *rep.largest_uncovered > c.thresholds.uncovered_above;
    else
        out.pass = rep.threshold_n0 && *rep.threshold_n0 < c.thresholds.threshold_max;
    out.result = {{"seed", seed},
                  {"threshold_n0", opt_u64(rep.threshold_n0)},
                  {"covered_count", rep.covered_count},
                  {"uncovered_total", rep.uncovered_total},
                  {"largest_uncovered", opt_u64(rep.largest_uncovered)},
                  {"weights_used", weights_used},
                  {"pass", out.pass}};
    return out;
}

SeedOutcome seed_prevault(const ExperimentConfig& c, uint64_t seed) {
    const auto& dist = *c.dist;
    const auto& pmf = dist.finite_pmf();
    const size_t k = pmf.size();
    size_t cells = 1;
    for (uint32_t i = 0; i < c.vault_b; ++i) cells *= k;
    std::vector<double> probs(cells, 1.0);
    for (size_t cell = 0; cell < cells; ++cell) {
        size_t rest = cell;
        for (uint32_t pos = 0; pos < c.vault_b; ++pos) {
            probs[cell] *= pmf[rest % k].second;
            rest /= k;
        }
    }
    std::vector<uint64_t> counts(cells, 0);
    uint64_t discarded = 0;
    for (uint64_t t = 0; t < c.vault_sequences; ++t) {
        RngStream sub = RngStream::for_stream(seed, t);
        auto rec = stream_vault(dist, sub, c.vault_target, c.vault_b);
        if (!rec) {
            ++discarded;
            continue;
        }
        size_t cell = 0;
        for (uint32_t pos = c.vault_b; pos-- > 0;) {
            uint64_t value = rec->prevault_gaps[pos];
            size_t digit = (size_t)(std::lower_bound(pmf.begin(), pmf.end(), value,
                                                     [](const auto& e, uint64_t v) {
                                                         return e.first < v;
                                                     }) -
                                    pmf.begin());
            cell = cell * k + digit;
        }
        ++counts[cell];
    }
    auto chi = chi_square_gof(counts, probs, c.thresholds.alpha);
    SeedOutcome out;
    out.pass = !chi.rejected;
    out.result = {{"seed", seed},
                  {"statistic", chi.statistic},
                  {"df", chi.df},
                  {"p_value", chi.p_value},
                  {"rejected", chi.rejected},
                  {"sequences", c.vault_sequences - discarded},
                  {"discarded", discarded},
                  {"pass", out.pass}};
    return out;
}

SeedOutcome seed_difference_set(const ExperimentConfig& c, const SemigroupDescriptor& desc,
                                uint64_t seed) {
    WeightSequence seq = generate(*c.dist, seed, c.horizon);
    DifferenceSetReport rep = difference_set_check(seq, desc, c.diff_window);
    SeedOutcome out;
    out.pass = rep.all_contained &&
               (c.thresholds.min_saturation < 0.0 || rep.saturation >= c.thresholds.min_saturation);
    out.result = to_json(rep);
    out.result["seed"] = seed;
    out.result["pass"] = out.pass;
    return out;
}

SeedOutcome seed_half_moment(const ExperimentConfig& c, uint64_t seed) {
    WeightSequence seq = generate(*c.dist, seed, c.horizon);
    auto scaling = partial_sum_scaling(seq);
    json checkpoints = json::array();
    double max_ratio = 0.0;
    uint64_t considered = 0;
    for (const auto& [n, ratio] : scaling) {
        checkpoints.push_back({n, ratio});
        if (n >= c.thresholds.diagnostics_min_n) {
            max_ratio = std::max(max_ratio, ratio);
            ++considered;
        }
    }
    SeedOutcome out;
    out.pass = considered > 0 && max_ratio < c.thresholds.scaling_ratio_max;
    out.result = {{"seed", seed},
                  {"checkpoints", checkpoints},
                  {"max_ratio", max_ratio},
                  {"checkpoints_considered", considered},
                  {"pass", out.pass}};
    return out;
}

SeedOutcome seed_max_gap(const ExperimentConfig& c, uint64_t seed) {
    WeightSequence seq = generate(*c.dist, seed, c.horizon);
    auto profile = max_gap_profile(seq);
    json checkpoints = json::array();
    double max_ratio = 0.0;
    uint64_t considered = 0;
    for (const auto& [n, mg] : profile) {
        double ratio = (double)mg / std::log((double)n);
        checkpoints.push_back({n, mg, ratio});
        if (n >= c.thresholds.diagnostics_min_n) {
            max_ratio = std::max(max_ratio, ratio);
            ++considered;
        }
    }
    SeedOutcome out;
    out.pass = considered > 0 && max_ratio < c.thresholds.max_gap_ratio_max;
    out.result = {{"seed", seed},
                  {"checkpoints", checkpoints},
                  {"max_ratio", max_ratio},
                  {"checkpoints_considered", considered},
                  {"pass", out.pass}};
    return out;
}

// Deterministic table + invariant self-check; no randomness involved.
ExperimentReport run_semigroup_table(const ExperimentConfig& c, std::vector<Diagnostic> warnings,
                                     std::chrono::steady_clock::time_point t0) {
    SemigroupDescriptor desc = build(c.generators);
    bool ok = desc.apery[0] == 0;
    for (uint64_t r = 0; r < desc.a1; ++r) {
        if (desc.apery[r] % desc.a1 != r) ok = false;
        if (!member(desc, desc.apery[r] * desc.d)) ok = false;
        if (desc.apery[r] >= desc.a1 && member(desc, (desc.apery[r] - desc.a1) * desc.d)) ok = false;
    }
    if (desc.a1 > 1 && desc.frobenius_reduced >= 0 &&
        member(desc, (uint64_t)desc.frobenius_reduced * desc.d))
        ok = false;

    json doc;
    doc["schema"] = "gapseq-report/1";
    doc["experiment"] = to_string(c.kind);
    doc["config"] = c.to_json();
    doc["table"] = to_json(desc);
    if (c.window_hi > c.window_lo) {
        json members = json::array();
        for (uint64_t x = c.window_lo; x <= c.window_hi; ++x)
            if (member(desc, x)) members.push_back(x);
        doc["members_in_window"] = members;
    }
    if (desc.d == 1) {
        auto stamp = stamp_bound_n0(desc.generators);
        doc["stamp"] = {{"n0", stamp.n0},
                        {"n0_prime", stamp_bound_n0_prime(desc.generators)},
                        {"bezout", stamp.bezout}};
    }
    doc["per_seed"] = json::array();
    doc["aggregate"] = {{"invariants_ok", ok}};
    doc["verdict"] = {{"pass", ok},
                      {"details", ok ? "apery/membership invariants hold"
                                     : "apery/membership invariant violated"}};
    json diag = json::array();
    for (const auto& d : warnings) diag.push_back(json_of(d));
    doc["diagnostics"] = diag;
    doc["timing"] = {{"wall_ms", std::chrono::duration_cast<std::chrono::milliseconds>(
                                     std::chrono::steady_clock::now() - t0)
                                     .count()}};
    return {doc, ok};
}

void write_outputs(const ExperimentConfig& c, const json& doc) {
    if (c.out_dir.empty()) return;
    std::filesystem::create_directories(c.out_dir);
    std::ofstream rep(std::filesystem::path(c.out_dir) / "report.json");
    rep << doc.dump(2) << '\n';
}

}  // namespace

ExperimentReport run(const ExperimentConfig& config) {
    const auto t0 = std::chrono::steady_clock::now();
    auto diags = validate(config);
    std::vector<Diagnostic> warnings;
    std::string errors;
    for (auto& d : diags) {
        if (d.severity == Diagnostic::Severity::Error)
            errors += (errors.empty() ? "" : "; ") + d.field + ": " + d.message;
        else
            warnings.push_back(std::move(d));
    }
    if (!errors.empty()) throw ConfigError("invalid config: " + errors);

    if (config.kind == ExperimentKind::SemigroupTable) {
        auto rep = run_semigroup_table(config, std::move(warnings), t0);
        write_outputs(config, rep.document);
        return rep;
    }

    // Shared (seed-independent) analysis.
    json analytic;
    bool analytic_pass = true;
    SemigroupDescriptor diff_desc;
    if (config.kind == ExperimentKind::Equidistribution) {
        ModularChain chain = build_chain(*config.dist, config.modulus);
        RegularityResult reg = is_regular(chain);
        auto rows = power_rows(chain, config.thresholds.analytic_power);
        double max_dev = 0.0;
        const double uniform = 1.0 / (double)config.modulus;
        for (double x : rows) max_dev = std::max(max_dev, std::abs(x - uniform));
        analytic_pass = reg.regular && max_dev <= config.thresholds.analytic_tol;
        analytic = {{"regularity", to_json(reg)},
                    {"power", config.thresholds.analytic_power},
                    {"max_abs_dev", max_dev},
                    {"mass_truncation_error", chain.mass_truncation_error},
                    {"first_row", chain.first_row},
                    {"pass", analytic_pass}};
    } else if (config.kind == ExperimentKind::DifferenceSet) {
        diff_desc = build(config.dist->truncated_support());
    }

    // Per-seed fan-out. Slots are indexed, so thread scheduling cannot change
    // the report.
    const size_t n = config.seeds.size();
    std::vector<json> results(n);
    std::vector<char> seed_pass(n, 0);
    std::vector<std::exception_ptr> failures(n);
    std::ofstream trace;
    std::mutex trace_mu;
    if (!config.out_dir.empty()) {
        std::filesystem::create_directories(config.out_dir);
        trace.open(std::filesystem::path(config.out_dir) / "trace.jsonl");
    }
    std::atomic<size_t> cursor{0};
    auto body = [&] {
        for (;;) {
            size_t i = cursor.fetch_add(1);
            if (i >= n) return;
            try {
                SeedOutcome out;
                switch (config.kind) {
                    case ExperimentKind::Density: out = seed_density(config, config.seeds[i]); break;
                    case ExperimentKind::Equidistribution:
                        out = seed_equidistribution(config, config.seeds[i]);
                        break;
                    case ExperimentKind::MCompleteness:
                    case ExperimentKind::AsymptoticCompleteness:
                    case ExperimentKind::Counterexample:
                        out = seed_coverage(config, config.seeds[i]);
                        break;
                    case ExperimentKind::PrevaultIndependence:
                        out = seed_prevault(config, config.seeds[i]);
                        break;
                    case ExperimentKind::DifferenceSet:
                        out = seed_difference_set(config, diff_desc, config.seeds[i]);
                        break;
                    case ExperimentKind::HalfMoment: out = seed_half_moment(config, config.seeds[i]); break;
                    case ExperimentKind::MaxGap: out = seed_max_gap(config, config.seeds[i]); break;
                    case ExperimentKind::SemigroupTable: break;  // handled above
                }
                results[i] = std::move(out.result);
                seed_pass[i] = out.pass ? 1 : 0;
                if (trace.is_open()) {
                    json line = {{"seed_index", i}, {"seed", config.seeds[i]}, {"result", results[i]}};
                    std::lock_guard<std::mutex> lock(trace_mu);
                    trace << line.dump() << '\n';
                    trace.flush();
                }
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };
    unsigned workers = config.threads ? config.threads : std::thread::hardware_concurrency();
    workers = std::max(1u, std::min<unsigned>(workers, (unsigned)n));
    if (workers == 1) {
        body();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body);
        for (auto& t : pool) t.join();
    }
    for (size_t i = 0; i < n; ++i) {
        if (!failures[i]) continue;
        try {
            std::rethrow_exception(failures[i]);
        } catch (const std::exception& e) {
            throw Error("seed " + std::to_string(config.seeds[i]) + ": " + e.what());
        }
    }

    size_t passed = 0;
    for (char p : seed_pass) passed += p;
    const double pass_fraction = (double)passed / (double)n;

    json aggregate;
    bool verdict = false;
    std::string details;
    char buf[256];
    switch (config.kind) {
        case ExperimentKind::Density: {
            // fold in sorted order so the aggregate is exactly invariant
            // under permutations of the seed list
            std::vector<double> densities, devs;
            densities.reserve(n);
            devs.reserve(n);
            for (const auto& r : results) {
                densities.push_back(r["density"].get<double>());
                devs.push_back(r["abs_deviation"].get<double>());
            }
            std::sort(densities.begin(), densities.end());
            std::sort(devs.begin(), devs.end());
            double mean_density = 0.0, mean_abs_dev = 0.0;
            for (double v : densities) mean_density += v;
            for (double v : devs) mean_abs_dev += v;
            double max_abs_dev = devs.empty() ? 0.0 : devs.back();
            mean_density /= (double)n;
            mean_abs_dev /= (double)n;
            bool mean_ok = mean_abs_dev < config.thresholds.density_mean_abs;
            verdict = passed == n && mean_ok;
            aggregate = {{"mean_density", mean_density},
                         {"mean_abs_deviation", mean_abs_dev},
                         {"max_abs_deviation", max_abs_dev},
                         {"pass_fraction", pass_fraction}};
            std::snprintf(buf, sizeof(buf),
                          "%zu/%zu seeds within %.3g; mean |dev| %.3g (bound %.3g)", passed, n,
                          config.thresholds.density_each_abs, mean_abs_dev,
                          config.thresholds.density_mean_abs);
            details = buf;
            break;
        }
        case ExperimentKind::Equidistribution: {
            double max_dev = 0.0;
            for (const auto& r : results) max_dev = std::max(max_dev, r["max_abs_dev"].get<double>());
            verdict = analytic_pass && passed == n;
            aggregate = {{"empirical_max_abs_dev", max_dev}, {"pass_fraction", pass_fraction}};
            std::snprintf(buf, sizeof(buf),
                          "analytic %s (max dev %.3g); empirical max dev %.3g (bound %.3g)",
                          analytic_pass ? "ok" : "FAILED",
                          analytic.contains("max_abs_dev") ? analytic["max_abs_dev"].get<double>() : 0.0,
                          max_dev, config.thresholds.empirical_tol);
            details = buf;
            break;
        }
        case ExperimentKind::MCompleteness:
        case ExperimentKind::AsymptoticCompleteness: {
            verdict = pass_fraction >= config.thresholds.min_pass_fraction;
            aggregate = {{"pass_fraction", pass_fraction}};
            std::snprintf(buf, sizeof(buf),
                          "%zu/%zu seeds with threshold_n0 < %llu (need fraction >= %.2f)", passed,
                          n, (unsigned long long)config.thresholds.threshold_max,
                          config.thresholds.min_pass_fraction);
            details = buf;
            break;
        }
        case ExperimentKind::Counterexample: {
            verdict = pass_fraction >= config.thresholds.min_pass_fraction;
            aggregate = {{"pass_fraction", pass_fraction}};
            std::snprintf(buf, sizeof(buf),
                          "%zu/%zu seeds with uncovered integers above %llu (need fraction >= %.2f)",
                          passed, n, (unsigned long long)config.thresholds.uncovered_above,
                          config.thresholds.min_pass_fraction);
            details = buf;
            break;
        }
        case ExperimentKind::PrevaultIndependence: {
            verdict = pass_fraction >= config.thresholds.min_accept_fraction;
            aggregate = {{"accept_fraction", pass_fraction}};
            std::snprintf(buf, sizeof(buf),
                          "%zu/%zu meta-trials not rejected at alpha=%.3g (need fraction >= %.2f)",
                          passed, n, config.thresholds.alpha, config.thresholds.min_accept_fraction);
            details = buf;
            break;
        }
        case ExperimentKind::DifferenceSet: {
            double min_sat = 1.0;
            for (const auto& r : results) min_sat = std::min(min_sat, r["saturation"].get<double>());
            verdict = passed == n;
            aggregate = {{"min_saturation", min_sat}, {"pass_fraction", pass_fraction}};
            std::snprintf(buf, sizeof(buf), "%zu/%zu seeds contained; min saturation %.4f", passed,
                          n, min_sat);
            details = buf;
            break;
        }
        case ExperimentKind::HalfMoment:
        case ExperimentKind::MaxGap: {
            double worst = 0.0;
            for (const auto& r : results) worst = std::max(worst, r["max_ratio"].get<double>());
            verdict = passed == n;
            double bound = config.kind == ExperimentKind::HalfMoment
                               ? config.thresholds.scaling_ratio_max
                               : config.thresholds.max_gap_ratio_max;
            aggregate = {{"max_ratio", worst}, {"pass_fraction", pass_fraction}};
            std::snprintf(buf, sizeof(buf), "%zu/%zu seeds with max ratio %.4g (bound %.3g)", passed,
                          n, worst, bound);
            details = buf;
            break;
        }
        case ExperimentKind::SemigroupTable: break;  // handled above
    }

    json doc;
    doc["schema"] = "gapseq-report/1";
    doc["experiment"] = to_string(config.kind);
    doc["config"] = config.to_json();
    doc["dist_fingerprint"] = config.dist->fingerprint();
    doc["admissibility"] = to_json(config.dist->admissibility());
    if (!analytic.is_null()) doc["analytic"] = analytic;
    doc["per_seed"] = results;
    doc["aggregate"] = aggregate;
    doc["verdict"] = {{"pass", verdict}, {"details", details}};
    json diag = json::array();
    for (const auto& d : warnings) diag.push_back(json_of(d));
    doc["diagnostics"] = diag;
    doc["timing"] = {{"wall_ms", std::chrono::duration_cast<std::chrono::milliseconds>(
                                     std::chrono::steady_clock::now() - t0)
                                     .count()}};
    write_outputs(config, doc);
    return {doc, verdict};
}

}  // namespace gapseq
