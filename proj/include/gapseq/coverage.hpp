#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gapseq/bitvec.hpp"
#include "gapseq/semigroup.hpp"
#include "gapseq/sequence.hpp"

namespace gapseq {

// Layered subset-sum tables: layer d holds exactly the integers <= horizon
// expressible as a sum of d index-distinct weights from the consumed prefix.
struct SumsetTable {
    uint64_t horizon = 0;
    uint32_t m = 1;
    std::vector<BitVec> layers;  // m + 1 sets over [0, horizon]
    uint64_t weights_used = 0;
};

// Weights are consumed in increasing order; for each weight w <= L the layers
// are updated d = m .. 1 with layer_d |= layer_{d-1} << w. The descending
// order with a single pass per weight is what makes each layer exact for
// *distinct* indices: when layer_d absorbs layer_{d-1} shifted by w, the
// source cannot yet contain any sum using w itself.
SumsetTable build_table(std::span<const uint64_t> weights, uint32_t m, uint64_t horizon);

// Classic subset-sum closure: all distinct-index finite sums <= horizon.
BitVec build_distinct_sums(std::span<const uint64_t> weights, uint64_t horizon);

struct CoverageReport {
    uint64_t lo = 0;
    uint64_t hi = 0;
    uint64_t covered_count = 0;
    uint64_t uncovered_total = 0;
    std::vector<uint64_t> uncovered;  // ascending, truncated at 10^4 entries
    std::optional<uint64_t> largest_uncovered;  // exact even when truncated
    // Smallest t with [t, hi] fully covered; nullopt when hi itself is
    // uncovered. When present, t == lo or t-1 is uncovered.
    std::optional<uint64_t> threshold_n0;
};

// Scans `layer` over the inclusive window [lo, hi].
// WindowExceedsHorizonError if hi is past the layer's range.
CoverageReport report(const BitVec& layer, uint64_t lo, uint64_t hi);

struct BrownResult {
    bool complete = false;
    // 1-based index of the first term violating a_1 = 1 or
    // a_{n+1} <= a_1 + ... + a_n + 1.
    std::optional<uint64_t> first_violation_index;
};

// Completeness criterion for a non-decreasing positive prefix.
BrownResult brown_criterion(std::span<const uint64_t> terms);

struct DifferenceSetReport {
    uint64_t window_hi = 0;  // differences checked over [0, window_hi]
    bool all_contained = false;
    std::optional<uint64_t> first_violation;
    uint64_t realized_count = 0;  // distinct realized differences in window
    uint64_t member_count = 0;    // monoid members in window
    double saturation = 0.0;      // realized members / monoid members
};

// Containment direction of the difference-set law: every realized difference
// W_i - W_j in [0, K] must be a monoid member (holds deterministically when
// desc was built from the gap support). Saturation is reported, not asserted.
DifferenceSetReport difference_set_check(const WeightSequence& seq,
                                         const SemigroupDescriptor& desc, uint64_t k_window);

}  // namespace gapseq
