#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gapseq/distribution.hpp"

namespace gapseq {

// The mod-M walk of a weight sequence: a circulant, doubly stochastic M x M
// transition matrix with entry (i,j) = sum of gap masses over t = j - i (mod M).
struct ModularChain {
    uint32_t modulus = 2;
    std::vector<double> matrix;        // M*M row-major
    std::vector<double> first_row;     // folded gap pmf
    std::vector<uint8_t> support_row;  // boolean support pattern of first_row
    double mass_truncation_error = 0.0;

    double at(uint32_t i, uint32_t j) const { return matrix[size_t(i) * modulus + j]; }
};

// Folds the pmf modulo M (infinite supports until tail mass < 1e-14, then
// renormalized; the dropped mass is recorded).
ModularChain build_chain(const GapDistribution& dist, uint32_t modulus);

struct RegularityResult {
    bool regular = false;
    std::optional<uint32_t> witness_power;  // smallest N with A^N all-positive
};

// Decided on the boolean support pattern only (exact sumset closure mod M);
// the witness power is capped at M^2.
RegularityResult is_regular(const ModularChain& chain);

// A^N (row-major) by square-and-multiply, rows renormalized after each
// multiply to hold the row-sum drift below 1e-12 per step.
std::vector<double> power_rows(const ModularChain& chain, uint64_t n);

struct EquidistributionResult {
    uint32_t modulus = 0;
    uint64_t k = 0;
    uint64_t steps = 0;
    uint64_t trials = 0;
    std::vector<double> freq;           // M*M conditional frequencies, NaN when row empty
    std::vector<uint64_t> counts;       // M*M raw counts
    std::vector<uint64_t> row_counts;   // conditioning events per residue i
    std::vector<uint8_t> low_sample;    // rows with fewer than 30 conditioning events
    bool gcd_warning = false;           // support gcd != 1
};

// Simulates `trials` independent sequences and tabulates the conditional
// frequency of W_{k+steps} mod M given W_k mod M. Trial t uses the derived
// stream hash(seed, t).
EquidistributionResult empirical_equidistribution(const GapDistribution& dist, uint32_t modulus,
                                                  uint64_t k, uint64_t steps, uint64_t trials,
                                                  uint64_t seed);

}  // namespace gapseq
