#include "gapseq/distribution.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>

#include "gapseq/errors.hpp"

namespace gapseq {

namespace {

constexpr uint64_t kValueClamp = uint64_t{1} << 40;
constexpr double kQ53 = 9007199254740992.0;  // 2^53
constexpr double kInf = std::numeric_limits<double>::infinity();

uint64_t fold(uint64_t h, uint64_t x) { return mix64(h ^ x); }

uint64_t double_bits(double x) {
    uint64_t b;
    static_assert(sizeof(b) == sizeof(x));
    std::memcpy(&b, &x, sizeof(b));
    return b;
}

}  // namespace

GapDistribution GapDistribution::finite(std::vector<std::pair<uint64_t, double>> pmf) {
    if (pmf.empty()) throw ConfigError("finite pmf: empty");
    double total = 0.0;
    uint64_t prev = 0;
    for (const auto& [value, mass] : pmf) {
        if (value < 1) throw ConfigError("finite pmf: values must be >= 1");
        if (value <= prev) throw ConfigError("finite pmf: values must be strictly increasing");
        if (!(mass > 0.0) || mass > 1.0) throw ConfigError("finite pmf: masses must lie in (0, 1]");
        total += mass;
        prev = value;
    }
    if (std::abs(total - 1.0) > 1e-9) throw ConfigError("finite pmf: masses must sum to 1 within 1e-9");
    for (auto& [value, mass] : pmf) mass /= total;

    GapDistribution d;
    d.kind_ = DistKind::Finite;
    d.finite_pmf_ = std::move(pmf);
    d.finite_cdf_q53_.reserve(d.finite_pmf_.size());
    long double cum = 0.0L;
    for (const auto& [value, mass] : d.finite_pmf_) {
        cum += mass;
        long double scaled = std::ceil(cum * (long double)kQ53);
        d.finite_cdf_q53_.push_back((uint64_t)std::min(scaled, (long double)kQ53));
    }
    d.finite_cdf_q53_.back() = uint64_t{1} << 53;
    return d;
}

GapDistribution GapDistribution::geometric(double p) {
    if (!(p > 0.0) || !(p < 1.0)) throw ConfigError("geometric: p must lie in (0, 1)");
    GapDistribution d;
    d.kind_ = DistKind::Geometric;
    d.p_ = p;
    d.log_p_ = std::log(p);
    d.log_1mp_ = std::log1p(-p);
    return d;
}

GapDistribution GapDistribution::shifted_poisson(double lambda) {
    if (!(lambda > 0.0) || !(lambda <= 700.0))
        throw ConfigError("shifted_poisson: lambda must lie in (0, 700]");
    GapDistribution d;
    d.kind_ = DistKind::ShiftedPoisson;
    d.lambda_ = lambda;
    d.exp_neg_lambda_ = std::exp(-lambda);
    d.poisson_cap_ = (uint64_t)std::ceil(lambda + 12.0 * std::sqrt(lambda) + 80.0);
    return d;
}

GapDistribution GapDistribution::pow2_counterexample(uint32_t m) {
    if (m < 1) throw ConfigError("pow2_counterexample: m must be >= 1");
    GapDistribution d;
    d.kind_ = DistKind::PowerOfTwoCounterexample;
    d.m_ = m;
    d.p_ = std::exp2(-1.0 / (double)(m + 1));
    d.log_p_ = std::log(d.p_);
    d.log_1mp_ = std::log1p(-d.p_);
    return d;
}

double GapDistribution::pmf(uint64_t value) const {
    if (value < 1) return 0.0;
    switch (kind_) {
        case DistKind::Finite: {
            auto it = std::lower_bound(finite_pmf_.begin(), finite_pmf_.end(), value,
                                       [](const auto& e, uint64_t v) { return e.first < v; });
            if (it != finite_pmf_.end() && it->first == value) return it->second;
            return 0.0;
        }
        case DistKind::Geometric:
            return std::exp((double)(value - 1) * log_1mp_) * p_;
        case DistKind::ShiftedPoisson: {
            double k = (double)(value - 1);
            return std::exp(k * std::log(lambda_) - std::lgamma(k + 1.0) - lambda_);
        }
        case DistKind::PowerOfTwoCounterexample: {
            if ((value & (value - 1)) != 0) return 0.0;
            int k = std::countr_zero(value);
            return std::exp((double)k * log_p_) * (1.0 - p_);
        }
    }
    return 0.0;
}

uint64_t GapDistribution::sample(RngStream& rng) const {
    switch (kind_) {
        case DistKind::Finite: {
            uint64_t r = rng.u64() >> 11;
            size_t n = finite_cdf_q53_.size();
            if (n <= 16) {
                for (size_t j = 0; j < n; ++j)
                    if (r < finite_cdf_q53_[j]) return finite_pmf_[j].first;
                return finite_pmf_.back().first;
            }
            auto it = std::upper_bound(finite_cdf_q53_.begin(), finite_cdf_q53_.end(), r);
            return finite_pmf_[(size_t)(it - finite_cdf_q53_.begin())].first;
        }
        case DistKind::Geometric: {
            double u = rng.unit();
            double kd = std::floor(std::log1p(-u) / log_1mp_);
            if (kd >= (double)kValueClamp) {
                ++rng.clamp_count;
                return kValueClamp;
            }
            return (uint64_t)kd + 1;
        }
        case DistKind::ShiftedPoisson: {
            double u = rng.unit();
            double term = exp_neg_lambda_;
            double cum = term;
            uint64_t k = 0;
            while (u > cum && k < poisson_cap_) {
                ++k;
                term *= lambda_ / (double)k;
                cum += term;
            }
            return k + 1;
        }
        case DistKind::PowerOfTwoCounterexample: {
            double u = rng.unit();
            double kd = std::floor(std::log1p(-u) / log_p_);
            if (kd >= 40.0) {
                ++rng.clamp_count;
                return kValueClamp;
            }
            return uint64_t{1} << (uint32_t)kd;
        }
    }
    return 1;
}

uint64_t GapDistribution::support_gcd() const {
    if (kind_ == DistKind::Finite) {
        uint64_t g = 0;
        for (const auto& [value, mass] : finite_pmf_) g = std::gcd(g, value);
        return g;
    }
    auto value_at = [this](uint32_t i) -> uint64_t {
        if (kind_ == DistKind::PowerOfTwoCounterexample) return uint64_t{1} << std::min<uint32_t>(i, 62);
        return (uint64_t)i + 1;  // geometric / shifted Poisson support is 1, 2, 3, ...
    };
    return detail::stable_truncated_gcd(value_at, support_truncation);
}

AdmissibilityReport GapDistribution::admissibility() const {
    AdmissibilityReport r;
    r.support_gcd = support_gcd();
    switch (kind_) {
        case DistKind::Finite: {
            double star = kInf;
            for (const auto& [value, mass] : finite_pmf_)
                star = std::min(star, -std::log(mass) / (double)value);
            r.star_ratio = std::max(star, 0.0);  // a mass of exactly 1 gives ratio 0
            r.mgf_radius = kInf;
            r.half_moment_finite = true;
            break;
        }
        case DistKind::Geometric:
            // (-log pmf(k))/k = -log(1-p) + (log(1-p) - log p)/k is monotone in
            // k, so the infimum sits at k = 1 or at the k -> inf limit.
            r.star_ratio = std::min(-log_p_, -log_1mp_);
            r.mgf_radius = -log_1mp_;
            r.half_moment_finite = true;
            break;
        case DistKind::ShiftedPoisson: {
            // (-log pmf(k))/k grows like log k, so the infimum is attained at
            // some small k; scan the mass-carrying prefix.
            double star = kInf;
            for (uint64_t v : truncated_support())
                star = std::min(star, -std::log(pmf(v)) / (double)v);
            r.star_ratio = star;
            r.mgf_radius = kInf;
            r.half_moment_finite = true;
            break;
        }
        case DistKind::PowerOfTwoCounterexample:
            // (k(-log p) - log(1-p)) / 2^k -> 0: the infimum is 0, unattained.
            r.star_ratio = 0.0;
            r.mgf_radius = 0.0;
            r.half_moment_finite = std::sqrt(2.0) * p_ < 1.0;
            break;
    }
    r.threshold = 2.0 * r.star_ratio;
    r.m_completeness_applies = r.mgf_radius > r.threshold;
    return r;
}

double GapDistribution::mean() const {
    switch (kind_) {
        case DistKind::Finite: {
            double m = 0.0;
            for (const auto& [value, mass] : finite_pmf_) m += (double)value * mass;
            return m;
        }
        case DistKind::Geometric:
            return 1.0 / p_;
        case DistKind::ShiftedPoisson:
            return 1.0 + lambda_;
        case DistKind::PowerOfTwoCounterexample:
            return 2.0 * p_ >= 1.0 ? kInf
                                   : (1.0 - p_) / (1.0 - 2.0 * p_);
    }
    return 0.0;
}

uint64_t GapDistribution::fingerprint() const {
    uint64_t h = fold(0x6761707365713031ULL, (uint64_t)kind_);
    switch (kind_) {
        case DistKind::Finite:
            for (const auto& [value, mass] : finite_pmf_) {
                h = fold(h, value);
                h = fold(h, double_bits(mass));
            }
            break;
        case DistKind::Geometric:
            h = fold(h, double_bits(p_));
            break;
        case DistKind::ShiftedPoisson:
            h = fold(h, double_bits(lambda_));
            break;
        case DistKind::PowerOfTwoCounterexample:
            h = fold(h, m_);
            break;
    }
    return h;
}

std::vector<uint64_t> GapDistribution::truncated_support() const {
    std::vector<uint64_t> out;
    switch (kind_) {
        case DistKind::Finite:
            for (const auto& [value, mass] : finite_pmf_) out.push_back(value);
            break;
        case DistKind::Geometric: {
            // Tail beyond k is (1-p)^k.
            double kd = std::ceil(std::log(tail_epsilon) / log_1mp_);
            uint64_t n = std::min((uint64_t)std::max(kd, 1.0), (uint64_t)support_truncation);
            for (uint64_t k = 1; k <= n; ++k) out.push_back(k);
            break;
        }
        case DistKind::ShiftedPoisson: {
            double term = exp_neg_lambda_;
            double cum = term;
            out.push_back(1);
            uint64_t k = 0;
            while (cum < 1.0 - tail_epsilon && out.size() < support_truncation) {
                ++k;
                term *= lambda_ / (double)k;
                cum += term;
                out.push_back(k + 1);
            }
            break;
        }
        case DistKind::PowerOfTwoCounterexample: {
            // Tail beyond 2^k is p^{k+1}.
            for (uint32_t k = 0; k <= 62 && out.size() < support_truncation; ++k) {
                out.push_back(uint64_t{1} << k);
                if (std::exp((double)(k + 1) * log_p_) < tail_epsilon) break;
            }
            break;
        }
    }
    return out;
}

namespace detail {

uint64_t stable_truncated_gcd(const std::function<uint64_t(uint32_t)>& value_at,
                              uint32_t first_scan_len) {
    uint64_t g = 0;
    for (uint32_t i = 0; i < first_scan_len; ++i) {
        g = std::gcd(g, value_at(i));
        if (g == 1) return 1;
    }
    uint64_t g2 = g;
    for (uint32_t i = first_scan_len; i < 2 * first_scan_len; ++i) {
        g2 = std::gcd(g2, value_at(i));
        if (g2 != g) throw UnstableGcdError("support gcd not stable under doubled scan");
    }
    return g;
}

}  // namespace detail

}  // namespace gapseq
