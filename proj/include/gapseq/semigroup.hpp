#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace gapseq {

// Numerical-semigroup engine for the monoid generated by s_1 < ... < s_k.
// Everything is exact integer arithmetic; membership is O(1) once the Apery
// set of the smallest reduced generator is built.
struct SemigroupDescriptor {
    std::vector<uint64_t> generators;  // original, strictly increasing
    uint64_t d = 1;                    // gcd of the generators
    uint64_t a1 = 1;                   // smallest reduced generator, generators[0] / d
    // apery[r] = minimal element of the reduced monoid congruent to r mod a1.
    std::vector<uint64_t> apery;
    // Index of the reduced generator whose final relaxation produced apery[r];
    // -1 for r = 0. Lets representation() backtrack a witness.
    std::vector<int32_t> apery_gen;
    // Largest integer missing from the reduced monoid; -1 when a1 == 1.
    int64_t frobenius_reduced = -1;
};

SemigroupDescriptor build(std::vector<uint64_t> generators);

// x in M(generators)? Requires d | x and apery[(x/d) mod a1] <= x/d.
bool member(const SemigroupDescriptor& desc, uint64_t x);

// Nonnegative coefficients n_i with sum n_i * generators[i] = x, or nullopt.
std::optional<std::vector<uint64_t>> representation(const SemigroupDescriptor& desc, uint64_t x);

struct StampBound {
    uint64_t n0 = 0;
    std::vector<int64_t> bezout;  // canonical certificate, sum bezout[i]*s_i = 1
};

// Constructive threshold from the Bezout certificate: with I = {i : a_i < 0}
// and b_i = -a_i, n0 = sum over I of s_1 * b_i * s_i. Every integer >= n0 is
// a member. The certificate is canonicalized (left-fold extended Euclid,
// minimal-magnitude cofactor at each fold) so the bound is deterministic;
// other certificates can give smaller bounds. NotCoprimeError if gcd != 1.
StampBound stamp_bound_n0(const std::vector<uint64_t>& generators);

// n0 of the reduced generators plus sum s_i/d: at or beyond it, every
// multiple n*d has a representation with all coefficients >= 1.
uint64_t stamp_bound_n0_prime(const std::vector<uint64_t>& generators);

}  // namespace gapseq
