#include "gapseq/semigroup.hpp"

#include <algorithm>
#include <numeric>

#include "gapseq/errors.hpp"

namespace gapseq {

namespace {

std::vector<uint64_t> normalized(std::vector<uint64_t> gens) {
    if (gens.empty()) throw ConfigError("semigroup: need at least one generator");
    for (uint64_t g : gens)
        if (g == 0) throw ConfigError("semigroup: generators must be >= 1");
    std::sort(gens.begin(), gens.end());
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
    return gens;
}

int64_t checked_mul(int64_t a, int64_t b) {
    __int128 p = (__int128)a * b;
    if (p > INT64_MAX || p < INT64_MIN)
        throw HorizonOverflowError("semigroup: Bezout coefficient overflows 64 bits");
    return (int64_t)p;
}

// u*a + v*b = gcd(a, b) with u of minimal magnitude: u is reduced into
// (-m/2, m/2] for m = b/gcd, and v recomputed from it.
void bezout_pair(int64_t a, int64_t b, int64_t& g, int64_t& u, int64_t& v) {
    int64_t old_r = a, r = b, old_s = 1, s = 0;
    while (r != 0) {
        int64_t q = old_r / r;
        int64_t tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * s;
        old_s = s;
        s = tmp;
    }
    g = old_r;
    int64_t m = b / g;
    int64_t um = ((old_s % m) + m) % m;
    if (um * 2 > m) um -= m;
    u = um;
    v = (g - checked_mul(u, a)) / b;
}

}  // namespace

SemigroupDescriptor build(std::vector<uint64_t> generators) {
    SemigroupDescriptor desc;
    desc.generators = normalized(std::move(generators));
    desc.d = 0;
    for (uint64_t g : desc.generators) desc.d = std::gcd(desc.d, g);

    std::vector<uint64_t> reduced;
    reduced.reserve(desc.generators.size());
    for (uint64_t g : desc.generators) reduced.push_back(g / desc.d);
    desc.a1 = reduced[0];

    // Round-robin relaxation over residues mod a1; the final parent edges form
    // a tree rooted at residue 0 because every relaxation strictly lowers the
    // stored value.
    const uint64_t kUnset = UINT64_MAX;
    desc.apery.assign(desc.a1, kUnset);
    desc.apery_gen.assign(desc.a1, -1);
    desc.apery[0] = 0;
    bool changed = true;
    while (changed) {
        changed = false;
        for (uint64_t r = 0; r < desc.a1; ++r) {
            if (desc.apery[r] == kUnset) continue;
            for (size_t i = 0; i < reduced.size(); ++i) {
                uint64_t g = reduced[i];
                if (g % desc.a1 == 0) continue;  // same residue, larger value
                uint64_t cand = desc.apery[r] + g;
                uint64_t r2 = (r + g) % desc.a1;
                if (cand < desc.apery[r2]) {
                    desc.apery[r2] = cand;
                    desc.apery_gen[r2] = (int32_t)i;
                    changed = true;
                }
            }
        }
    }

    if (desc.a1 == 1) {
        desc.frobenius_reduced = -1;
    } else {
        uint64_t top = *std::max_element(desc.apery.begin(), desc.apery.end());
        desc.frobenius_reduced = (int64_t)(top - desc.a1);
    }
    return desc;
}

bool member(const SemigroupDescriptor& desc, uint64_t x) {
    if (x % desc.d != 0) return false;
    uint64_t y = x / desc.d;
    return desc.apery[y % desc.a1] <= y;
}

std::optional<std::vector<uint64_t>> representation(const SemigroupDescriptor& desc, uint64_t x) {
    if (!member(desc, x)) return std::nullopt;
    uint64_t y = x / desc.d;
    uint64_t r = y % desc.a1;
    std::vector<uint64_t> counts(desc.generators.size(), 0);
    counts[0] += (y - desc.apery[r]) / desc.a1;
    uint64_t v = desc.apery[r];
    while (r != 0) {
        int32_t gi = desc.apery_gen[r];
        ++counts[(size_t)gi];
        v -= desc.generators[(size_t)gi] / desc.d;
        r = v % desc.a1;
    }
    return counts;
}

StampBound stamp_bound_n0(const std::vector<uint64_t>& generators) {
    std::vector<uint64_t> gens = normalized(generators);
    StampBound out;
    out.bezout.assign(gens.size(), 0);
    out.bezout[0] = 1;
    int64_t g = (int64_t)gens[0];
    for (size_t i = 1; i < gens.size(); ++i) {
        int64_t g2, u, v;
        bezout_pair(g, (int64_t)gens[i], g2, u, v);
        for (size_t j = 0; j < i; ++j) out.bezout[j] = checked_mul(out.bezout[j], u);
        out.bezout[i] = v;
        g = g2;
    }
    if (g != 1) throw NotCoprimeError("stamp bound: generators must have gcd 1");

    unsigned __int128 n0 = 0;
    for (size_t i = 0; i < gens.size(); ++i) {
        if (out.bezout[i] >= 0) continue;
        unsigned __int128 b = (unsigned __int128)(-out.bezout[i]);
        n0 += (unsigned __int128)gens[0] * b * gens[i];
    }
    if (n0 > UINT64_MAX) throw HorizonOverflowError("stamp bound: n0 overflows 64 bits");
    out.n0 = (uint64_t)n0;
    return out;
}

uint64_t stamp_bound_n0_prime(const std::vector<uint64_t>& generators) {
    std::vector<uint64_t> gens = normalized(generators);
    uint64_t d = 0;
    for (uint64_t g : gens) d = std::gcd(d, g);
    std::vector<uint64_t> reduced;
    reduced.reserve(gens.size());
    for (uint64_t g : gens) reduced.push_back(g / d);

    uint64_t n0 = stamp_bound_n0(reduced).n0;
    for (uint64_t g : reduced) {
        if (n0 > UINT64_MAX - g) throw HorizonOverflowError("stamp bound: n0' overflows 64 bits");
        n0 += g;
    }
    return n0;
}

}  // namespace gapseq
