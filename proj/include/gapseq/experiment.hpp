#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gapseq/distribution.hpp"

namespace gapseq {

enum class ExperimentKind {
    Density,
    Equidistribution,
    MCompleteness,
    AsymptoticCompleteness,
    Counterexample,
    PrevaultIndependence,
    SemigroupTable,
    DifferenceSet,
    HalfMoment,
    MaxGap,
};

const char* to_string(ExperimentKind kind);
std::optional<ExperimentKind> experiment_kind_from_string(std::string_view name);

// Verdict knobs, overridable per config. Defaults are the acceptance-suite
// values; the binary verdict never hides the raw per-seed numbers.
struct Thresholds {
    double density_each_abs = 0.01;    // per-seed |density - 1/E[X]| bound
    double density_mean_abs = 0.005;   // mean deviation bound
    uint64_t analytic_power = 200;     // chain power checked analytically
    double analytic_tol = 1e-9;
    double empirical_tol = 0.02;       // conditional-frequency deviation bound
    uint64_t threshold_max = 1000;     // coverage threshold must fall below this
    double min_pass_fraction = 0.9;    // seed fraction for coverage verdicts
    uint64_t uncovered_above = 10000;  // counterexample: a gap above this must exist
    double alpha = 0.01;               // prevault chi-square level
    double min_accept_fraction = 0.95; // prevault meta-trials not rejecting
    double scaling_ratio_max = 0.01;   // W_n / n^2 bound at late checkpoints
    double max_gap_ratio_max = 2.0;    // running max gap / log n envelope
    uint64_t diagnostics_min_n = 1024; // first checkpoint the two bounds above apply to
    double min_saturation = -1.0;      // difference-set saturation gate; < 0 disables
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::Density;
    std::optional<GapDistribution> dist;
    std::vector<uint64_t> seeds;  // resolved fan, duplicate-free
    uint64_t horizon = 0;
    uint32_t m = 2;
    uint32_t modulus = 0;
    uint64_t window_lo = 0;
    uint64_t window_hi = 0;
    // equidistribution
    uint64_t eq_k = 10;
    uint64_t eq_steps = 100;
    uint64_t eq_trials = 100000;
    // prevault independence; each seed in the fan is one meta-trial
    uint64_t vault_target = 10000;
    uint32_t vault_b = 2;
    uint64_t vault_sequences = 100000;
    // difference set
    uint64_t diff_window = 200;
    // semigroup table
    std::vector<uint64_t> generators;

    Thresholds thresholds;
    std::string out_dir;   // when set, receives trace.jsonl + report.json
    uint32_t threads = 0;  // 0 = hardware concurrency
    bool quiet = false;

    static ExperimentConfig from_json(const nlohmann::json& j);  // throws ConfigError
    nlohmann::json to_json() const;
};

struct Diagnostic {
    enum class Severity { Warning, Error };
    Severity severity = Severity::Warning;
    std::string field;
    std::string message;
};

// Schema and semantic checks; returns diagnostics instead of throwing.
std::vector<Diagnostic> validate(const ExperimentConfig& config);

// Same, but starting from raw JSON: parse failures (unknown kinds, bad pmf,
// missing fields) come back as error diagnostics instead of exceptions.
std::vector<Diagnostic> validate_json(const nlohmann::json& config_json);

struct ExperimentReport {
    nlohmann::json document;  // "schema": "gapseq-report/1"
    bool pass = false;
};

// Executes the per-seed pipeline (possibly across threads; result identical
// either way) and folds a deterministic aggregate. Throws ConfigError when
// validate() reports errors.
ExperimentReport run(const ExperimentConfig& config);

}  // namespace gapseq
