#include "gapseq/modular_chain.hpp"

#include <algorithm>
#include <cmath>

#include "gapseq/errors.hpp"

namespace gapseq {

namespace {

constexpr double kTailCut = 1e-14;

// Analytic support of the gap law folded mod M, independent of the numeric
// tail cut: regularity is a structural property and must not flip when a
// residue's mass happens to fall below the truncation.
std::vector<uint8_t> folded_support(const GapDistribution& dist, uint32_t M) {
    std::vector<uint8_t> s(M, 0);
    switch (dist.kind()) {
        case DistKind::Finite:
            for (const auto& [value, mass] : dist.finite_pmf()) s[value % M] = 1;
            break;
        case DistKind::Geometric:
        case DistKind::ShiftedPoisson:
            // support is all of {1, 2, 3, ...}
            std::fill(s.begin(), s.end(), 1);
            break;
        case DistKind::PowerOfTwoCounterexample: {
            uint64_t r = 1 % M;
            std::vector<uint8_t> seen(M, 0);
            while (!seen[r]) {
                seen[r] = 1;
                s[r] = 1;
                r = (r * 2) % M;
            }
            break;
        }
    }
    return s;
}

}  // namespace

ModularChain build_chain(const GapDistribution& dist, uint32_t modulus) {
    if (modulus < 2) throw ConfigError("modular chain: modulus must be >= 2");
    ModularChain chain;
    chain.modulus = modulus;
    chain.first_row.assign(modulus, 0.0);

    double folded = 0.0;
    if (dist.kind() == DistKind::Finite) {
        for (const auto& [value, mass] : dist.finite_pmf()) {
            chain.first_row[value % modulus] += mass;
            folded += mass;
        }
    } else if (dist.kind() == DistKind::PowerOfTwoCounterexample) {
        // fold residues of 2^k directly so k can run past any value cap
        uint64_t r = 1 % modulus;
        double tail = 1.0;  // p^k, mass not yet folded
        double p = dist.p();
        for (uint32_t k = 0; tail >= kTailCut && k < 100000; ++k) {
            double mass = tail * (1.0 - p);
            chain.first_row[r] += mass;
            folded += mass;
            tail *= p;
            r = (r * 2) % modulus;
        }
    } else {
        // geometric / shifted Poisson: walk values 1, 2, 3, ... until the
        // remaining tail is negligible
        double cum = 0.0;
        for (uint64_t v = 1; 1.0 - cum >= kTailCut && v <= 100000000ULL; ++v) {
            double mass = dist.pmf(v);
            chain.first_row[v % modulus] += mass;
            folded += mass;
            cum += mass;
        }
    }
    chain.mass_truncation_error = std::max(0.0, 1.0 - folded);
    if (folded > 0.0)
        for (double& x : chain.first_row) x /= folded;

    chain.support_row = folded_support(dist, modulus);

    chain.matrix.assign(size_t(modulus) * modulus, 0.0);
    for (uint32_t i = 0; i < modulus; ++i)
        for (uint32_t j = 0; j < modulus; ++j)
            chain.matrix[size_t(i) * modulus + j] = chain.first_row[(j + modulus - i) % modulus];
    return chain;
}

RegularityResult is_regular(const ModularChain& chain) {
    const uint32_t M = chain.modulus;
    // N-step support = N-fold sumset of the one-step support in Z/M. A
    // primitive M x M nonnegative matrix has exponent <= (M-1)^2 + 1, so if
    // no power up to M^2 is all-positive none ever is.
    std::vector<uint8_t> t(chain.support_row.begin(), chain.support_row.end());
    const uint64_t cap = uint64_t(M) * M;
    for (uint64_t n = 1; n <= cap; ++n) {
        if (std::all_of(t.begin(), t.end(), [](uint8_t b) { return b != 0; }))
            return {true, (uint32_t)n};
        std::vector<uint8_t> u(M, 0);
        for (uint32_t s = 0; s < M; ++s) {
            if (!chain.support_row[s]) continue;
            for (uint32_t r = 0; r < M; ++r)
                if (t[r]) u[(r + s) % M] = 1;
        }
        if (u == t) return {false, std::nullopt};  // stabilized short of full
        t.swap(u);
    }
    return {false, std::nullopt};
}

namespace {

std::vector<double> mat_mul(const std::vector<double>& a, const std::vector<double>& b, uint32_t M) {
    std::vector<double> c(size_t(M) * M, 0.0);
    for (uint32_t i = 0; i < M; ++i)
        for (uint32_t k = 0; k < M; ++k) {
            double aik = a[size_t(i) * M + k];
            if (aik == 0.0) continue;
            for (uint32_t j = 0; j < M; ++j) c[size_t(i) * M + j] += aik * b[size_t(k) * M + j];
        }
    for (uint32_t i = 0; i < M; ++i) {
        double sum = 0.0;
        for (uint32_t j = 0; j < M; ++j) sum += c[size_t(i) * M + j];
        if (sum > 0.0)
            for (uint32_t j = 0; j < M; ++j) c[size_t(i) * M + j] /= sum;
    }
    return c;
}

}  // namespace

std::vector<double> power_rows(const ModularChain& chain, uint64_t n) {
    const uint32_t M = chain.modulus;
    std::vector<double> result(size_t(M) * M, 0.0);
    for (uint32_t i = 0; i < M; ++i) result[size_t(i) * M + i] = 1.0;  // A^0
    std::vector<double> base = chain.matrix;
    while (n > 0) {
        if (n & 1) result = mat_mul(result, base, M);
        n >>= 1;
        if (n > 0) base = mat_mul(base, base, M);
    }
    return result;
}

EquidistributionResult empirical_equidistribution(const GapDistribution& dist, uint32_t modulus,
                                                  uint64_t k, uint64_t steps, uint64_t trials,
                                                  uint64_t seed) {
    if (modulus < 2) throw ConfigError("modular chain: modulus must be >= 2");
    if (steps == 0) throw ConfigError("modular chain: steps must be >= 1");
    EquidistributionResult res;
    res.modulus = modulus;
    res.k = k;
    res.steps = steps;
    res.trials = trials;
    res.counts.assign(size_t(modulus) * modulus, 0);
    res.row_counts.assign(modulus, 0);
    for (uint64_t t = 0; t < trials; ++t) {
        RngStream rng = RngStream::for_stream(seed, t);
        uint64_t w = 0;
        for (uint64_t s = 0; s < k; ++s) w += dist.sample(rng);
        uint32_t i = uint32_t(w % modulus);
        for (uint64_t s = 0; s < steps; ++s) w += dist.sample(rng);
        uint32_t j = uint32_t(w % modulus);
        ++res.counts[size_t(i) * modulus + j];
        ++res.row_counts[i];
    }
    res.freq.assign(size_t(modulus) * modulus, std::nan(""));
    res.low_sample.assign(modulus, 0);
    for (uint32_t i = 0; i < modulus; ++i) {
        if (res.row_counts[i] < 30) res.low_sample[i] = 1;
        if (res.row_counts[i] == 0) continue;
        for (uint32_t j = 0; j < modulus; ++j)
            res.freq[size_t(i) * modulus + j] =
                (double)res.counts[size_t(i) * modulus + j] / (double)res.row_counts[i];
    }
    res.gcd_warning = dist.support_gcd() != 1;
    return res;
}

}  // namespace gapseq
