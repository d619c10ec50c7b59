#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "gapseq/rng.hpp"

namespace gapseq {

enum class DistKind { Finite, Geometric, ShiftedPoisson, PowerOfTwoCounterexample };

// Analytic verdicts that decide which completeness guarantees apply to a gap
// distribution. star_ratio is the infimum over the support of
// (-log p_i) / s_i; the m-completeness guarantee needs the MGF radius of
// convergence to exceed twice that ratio (strictly).
struct AdmissibilityReport {
    uint64_t support_gcd = 1;
    double star_ratio = 0.0;
    double threshold = 0.0;  // 2 * star_ratio
    double mgf_radius = 0.0; // +inf for bounded / Poisson-tailed kinds
    bool m_completeness_applies = false;
    std::optional<bool> half_moment_finite;
};

// An i.i.d. positive-integer gap law. Immutable after construction and safe
// to share across workers; all sampling state lives in the caller's RngStream.
class GapDistribution {
  public:
    // Explicit value -> probability list; values strictly increasing, masses
    // in (0,1] summing to 1 within 1e-9 (then renormalized exactly).
    static GapDistribution finite(std::vector<std::pair<uint64_t, double>> pmf);
    // P(X = k) = (1-p)^{k-1} p for k = 1, 2, ...
    static GapDistribution geometric(double p);
    // X = 1 + K with K ~ Poisson(lambda).
    static GapDistribution shifted_poisson(double lambda);
    // P(X = 2^k) = p^k (1-p) for k >= 0, with p = 2^{-1/(m+1)}.
    static GapDistribution pow2_counterexample(uint32_t m);

    DistKind kind() const { return kind_; }

    // Exact analytic mass at `value` (0 outside the support).
    double pmf(uint64_t value) const;

    // Inverse-CDF draw (rejection-free for every kind). Values beyond 2^40
    // are clamped and counted in rng.clamp_count rather than wrapped.
    uint64_t sample(RngStream& rng) const;

    // gcd of the support. Infinite supports are scanned to the truncation
    // point with a doubling stability check; UnstableGcdError if the doubled
    // scan disagrees.
    uint64_t support_gcd() const;

    AdmissibilityReport admissibility() const;

    // E[X]; +inf for the power-of-two counterexample kind.
    double mean() const;

    // Content hash of kind + parameters, stable across runs.
    uint64_t fingerprint() const;

    // Support values kept by analytic scans: up to the first index where the
    // remaining tail mass is below tail_epsilon, capped at support_truncation
    // entries (and at values <= 2^62 so the power-of-two kind cannot
    // overflow). Sampling never truncates.
    std::vector<uint64_t> truncated_support() const;

    uint32_t support_truncation = 4096;
    double tail_epsilon = 1e-12;

    const std::vector<std::pair<uint64_t, double>>& finite_pmf() const { return finite_pmf_; }
    double p() const { return p_; }
    double lambda() const { return lambda_; }
    uint32_t counterexample_m() const { return m_; }

  private:
    GapDistribution() = default;

    DistKind kind_ = DistKind::Finite;
    std::vector<std::pair<uint64_t, double>> finite_pmf_;
    // Cumulative thresholds in 2^-53 fixed point; the last is forced to 2^53
    // so the scan always terminates.
    std::vector<uint64_t> finite_cdf_q53_;
    double p_ = 0.0;       // Geometric / PowerOfTwo parameter
    double lambda_ = 0.0;  // ShiftedPoisson rate
    uint32_t m_ = 0;       // PowerOfTwo counterexample index
    double log_p_ = 0.0;
    double log_1mp_ = 0.0;
    double exp_neg_lambda_ = 0.0;
    uint64_t poisson_cap_ = 0;
};

namespace detail {

// gcd over value_at(0..n-1), then over a doubled prefix; returns the gcd if
// stable (or already 1 on the first scan), throws UnstableGcdError otherwise.
uint64_t stable_truncated_gcd(const std::function<uint64_t(uint32_t)>& value_at,
                              uint32_t first_scan_len);

}  // namespace detail

}  // namespace gapseq
