#pragma once

// Brute-force reference implementations for oracle tests. Deliberately naive:
// correctness by obviousness, never shared code with the library under test.

#include <cstdint>
#include <set>
#include <vector>

namespace oracle {

// All integers in [0, limit] expressible as a nonnegative combination of the
// generators (unbounded coin-change reachability).
inline std::vector<char> coin_reachable(const std::vector<uint64_t>& gens, uint64_t limit) {
    std::vector<char> reach(limit + 1, 0);
    reach[0] = 1;
    for (uint64_t x = 1; x <= limit; ++x)
        for (uint64_t g : gens)
            if (g <= x && reach[x - g]) {
                reach[x] = 1;
                break;
            }
    return reach;
}

// Sums of exactly d index-distinct weights, clipped at limit.
inline std::set<uint64_t> d_subset_sums(const std::vector<uint64_t>& weights, uint32_t d,
                                        uint64_t limit) {
    std::set<uint64_t> sums;
    std::vector<size_t> idx(d);
    // odometer over strictly increasing index tuples
    auto rec = [&](auto&& self, size_t pos, size_t start, uint64_t acc) -> void {
        if (acc > limit) return;
        if (pos == d) {
            sums.insert(acc);
            return;
        }
        for (size_t i = start; i < weights.size(); ++i) self(self, pos + 1, i + 1, acc + weights[i]);
    };
    rec(rec, 0, 0, 0);
    return sums;
}

// All distinct-index subset sums <= limit (any number of terms, including 0).
inline std::set<uint64_t> all_subset_sums(const std::vector<uint64_t>& weights, uint64_t limit) {
    std::set<uint64_t> sums = {0};
    for (uint64_t w : weights) {
        std::set<uint64_t> next = sums;
        for (uint64_t s : sums)
            if (s + w <= limit) next.insert(s + w);
        sums.swap(next);
    }
    return sums;
}

}  // namespace oracle
