#include "gapseq/coverage.hpp"

#include <algorithm>

#include "gapseq/errors.hpp"

namespace gapseq {

SumsetTable build_table(std::span<const uint64_t> weights, uint32_t m, uint64_t horizon) {
    if (m < 1) throw ConfigError("sumset table: m must be >= 1");
    if (horizon < 1) throw ConfigError("sumset table: horizon must be >= 1");
    SumsetTable table;
    table.horizon = horizon;
    table.m = m;
    table.layers.reserve(m + 1);
    for (uint32_t d = 0; d <= m; ++d) table.layers.emplace_back(horizon + 1);
    table.layers[0].set(0);
    for (uint64_t w : weights) {
        if (w == 0) throw ConfigError("sumset table: weights must be >= 1");
        if (w > horizon) continue;
        for (uint32_t d = m; d >= 1; --d) table.layers[d].or_shifted(table.layers[d - 1], w);
        ++table.weights_used;
    }
    return table;
}

BitVec build_distinct_sums(std::span<const uint64_t> weights, uint64_t horizon) {
    if (horizon < 1) throw ConfigError("distinct sums: horizon must be >= 1");
    BitVec sums(horizon + 1);
    sums.set(0);
    for (uint64_t w : weights) {
        if (w == 0) throw ConfigError("distinct sums: weights must be >= 1");
        if (w > horizon) continue;
        sums.or_shifted(sums, w);
    }
    return sums;
}

CoverageReport report(const BitVec& layer, uint64_t lo, uint64_t hi) {
    if (hi >= layer.size())
        throw WindowExceedsHorizonError("coverage report: window extends past the table horizon");
    if (lo > hi) throw ConfigError("coverage report: window lo > hi");
    CoverageReport rep;
    rep.lo = lo;
    rep.hi = hi;
    rep.covered_count = layer.count_range(lo, hi);
    rep.uncovered_total = (hi - lo + 1) - rep.covered_count;
    constexpr uint64_t kListCap = 10000;
    layer.for_each_zero(lo, hi, [&](uint64_t i) {
        rep.uncovered.push_back(i);
        return rep.uncovered.size() < kListCap;
    });
    rep.largest_uncovered = layer.last_zero(lo, hi);
    if (layer.test(hi))
        rep.threshold_n0 = rep.largest_uncovered ? *rep.largest_uncovered + 1 : lo;
    return rep;
}

BrownResult brown_criterion(std::span<const uint64_t> terms) {
    BrownResult res;
    if (terms.empty() || terms[0] != 1) {
        res.first_violation_index = 1;
        return res;
    }
    uint64_t partial = 0;  // saturating, so huge prefixes cannot wrap
    for (size_t i = 0; i < terms.size(); ++i) {
        if (terms[i] > partial + 1) {
            res.first_violation_index = i + 1;
            return res;
        }
        partial = partial > UINT64_MAX - terms[i] ? UINT64_MAX - 1 : partial + terms[i];
    }
    res.complete = true;
    return res;
}

DifferenceSetReport difference_set_check(const WeightSequence& seq,
                                         const SemigroupDescriptor& desc, uint64_t k_window) {
    DifferenceSetReport rep;
    rep.window_hi = k_window;
    BitVec realized(k_window + 1);
    // partial sums including W_0 = 0, so W_i itself counts as W_i - W_0
    const auto& w = seq.weights;
    for (size_t j = 0; j <= w.size(); ++j) {
        uint64_t base = j == 0 ? 0 : w[j - 1];
        for (size_t i = j; i < w.size(); ++i) {
            uint64_t diff = w[i] - base;
            if (diff > k_window) break;
            realized.set(diff);
        }
    }
    rep.all_contained = true;
    uint64_t realized_members = 0;
    for (uint64_t x = 1; x <= k_window; ++x) {
        bool mem = member(desc, x);
        if (mem) ++rep.member_count;
        if (!realized.test(x)) continue;
        ++rep.realized_count;
        if (mem) {
            ++realized_members;
        } else if (rep.all_contained) {
            rep.all_contained = false;
            rep.first_violation = x;
        }
    }
    rep.saturation = rep.member_count == 0
                         ? 1.0
                         : (double)realized_members / (double)rep.member_count;
    return rep;
}

}  // namespace gapseq
