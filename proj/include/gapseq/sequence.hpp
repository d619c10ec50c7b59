#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "gapseq/distribution.hpp"
#include "gapseq/rng.hpp"

namespace gapseq {

// A realized weight sequence W_n = X_1 + ... + X_n, generated until the
// first weight at or past the horizon. Immutable once generated.
struct WeightSequence {
    std::vector<uint64_t> weights;  // strictly increasing, last >= horizon
    std::vector<uint64_t> gaps;     // gaps[i] = weights[i] - weights[i-1], all >= 1
    uint64_t seed = 0;
    uint64_t dist_fingerprint = 0;
    uint64_t horizon = 0;
};

struct VaultRecord {
    uint64_t n = 0;
    uint64_t t_index = 0;                 // W_{t_index} < n <= W_{t_index+1}, W_0 = 0
    std::vector<uint64_t> prevault_gaps;  // X_{T_n}, X_{T_n-1}, ..., X_{T_n-b+1}
};

// Streams i.i.d. gaps from `dist` until the cumulative sum reaches `horizon`.
// Bit-reproducible per (dist, seed, horizon); prefixes agree across horizons.
WeightSequence generate(const GapDistribution& dist, uint64_t seed, uint64_t horizon);

// |{weights <= upto}| / upto. OutOfWindowError if upto > horizon or upto == 0.
double density(const WeightSequence& seq, uint64_t upto);

// Running maxima of the gaps at checkpoints n = 2, 4, 8, ... <= gap count.
std::vector<std::pair<uint64_t, uint64_t>> max_gap_profile(const WeightSequence& seq);

// (n, W_n / n^2) at the same power-of-two checkpoints.
std::vector<std::pair<uint64_t, double>> partial_sum_scaling(const WeightSequence& seq);

// Vaulting index for target n plus the b gaps immediately before the vault,
// newest first. TooFewGapsError if T_n < b; OutOfWindowError if n > horizon.
VaultRecord vault(const WeightSequence& seq, uint64_t n, uint32_t b);

// Same record as vault(generate(...)) but streamed: no sequence is stored.
// Returns nullopt when T_n < b. Used by the prevault-independence harness,
// where millions of short sequences would otherwise be materialized.
std::optional<VaultRecord> stream_vault(const GapDistribution& dist, RngStream& rng,
                                        uint64_t n, uint32_t b);

// Dump format: one-line header
//   # gapseq v1 seed=<s> dist=<fingerprint> horizon=<L>
// followed by newline-delimited decimal gaps.
void dump_gaps(const WeightSequence& seq, std::ostream& out);
WeightSequence load_gaps(std::istream& in);

}  // namespace gapseq
