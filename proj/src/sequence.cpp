#include "gapseq/sequence.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "gapseq/errors.hpp"

namespace gapseq {

WeightSequence generate(const GapDistribution& dist, uint64_t seed, uint64_t horizon) {
    if (horizon == 0) throw ConfigError("generate: horizon must be >= 1");
    WeightSequence seq;
    seq.seed = seed;
    seq.dist_fingerprint = dist.fingerprint();
    seq.horizon = horizon;
    RngStream rng(seed);
    uint64_t w = 0;
    while (w < horizon) {
        uint64_t x = dist.sample(rng);
        if (w > UINT64_MAX - x) throw HorizonOverflowError("generate: weight overflow");
        w += x;
        seq.gaps.push_back(x);
        seq.weights.push_back(w);
    }
    return seq;
}

double density(const WeightSequence& seq, uint64_t upto) {
    if (upto == 0 || upto > seq.horizon)
        throw OutOfWindowError("density: upto outside (0, horizon]");
    auto it = std::upper_bound(seq.weights.begin(), seq.weights.end(), upto);
    return (double)(it - seq.weights.begin()) / (double)upto;
}

std::vector<std::pair<uint64_t, uint64_t>> max_gap_profile(const WeightSequence& seq) {
    std::vector<std::pair<uint64_t, uint64_t>> out;
    uint64_t running = 0, next = 2;
    for (size_t i = 0; i < seq.gaps.size(); ++i) {
        running = std::max(running, seq.gaps[i]);
        if (i + 1 == next) {
            out.emplace_back(next, running);
            next *= 2;
        }
    }
    return out;
}

std::vector<std::pair<uint64_t, double>> partial_sum_scaling(const WeightSequence& seq) {
    std::vector<std::pair<uint64_t, double>> out;
    for (uint64_t n = 2; n <= seq.weights.size(); n *= 2)
        out.emplace_back(n, (double)seq.weights[n - 1] / ((double)n * (double)n));
    return out;
}

VaultRecord vault(const WeightSequence& seq, uint64_t n, uint32_t b) {
    if (n == 0 || n > seq.horizon) throw OutOfWindowError("vault: n outside (0, horizon]");
    auto it = std::lower_bound(seq.weights.begin(), seq.weights.end(), n);
    uint64_t t = (uint64_t)(it - seq.weights.begin());  // |{i : W_i < n}|
    if (t < b) throw TooFewGapsError("vault: fewer than b gaps before the vaulting index");
    VaultRecord rec;
    rec.n = n;
    rec.t_index = t;
    rec.prevault_gaps.reserve(b);
    for (uint32_t i = 0; i < b; ++i) rec.prevault_gaps.push_back(seq.gaps[t - 1 - i]);
    return rec;
}

std::optional<VaultRecord> stream_vault(const GapDistribution& dist, RngStream& rng,
                                        uint64_t n, uint32_t b) {
    std::vector<uint64_t> ring(std::max<uint32_t>(b, 1));
    uint64_t w = 0, t = 0;
    for (;;) {
        uint64_t x = dist.sample(rng);
        w += x;
        if (w >= n) break;  // x is the vaulting gap X_{T+1}; not a prevault gap
        if (b > 0) ring[t % b] = x;
        ++t;
    }
    if (t < b) return std::nullopt;
    VaultRecord rec;
    rec.n = n;
    rec.t_index = t;
    rec.prevault_gaps.reserve(b);
    for (uint32_t i = 0; i < b; ++i) rec.prevault_gaps.push_back(ring[(t - 1 - i) % b]);
    return rec;
}

void dump_gaps(const WeightSequence& seq, std::ostream& out) {
    out << "# gapseq v1 seed=" << seq.seed << " dist=" << seq.dist_fingerprint
        << " horizon=" << seq.horizon << '\n';
    for (uint64_t g : seq.gaps) out << g << '\n';
}

namespace {

uint64_t parse_field(const std::string& token, const char* key) {
    std::string prefix = std::string(key) + "=";
    if (token.rfind(prefix, 0) != 0)
        throw ConfigError("gap dump: malformed header, expected " + prefix + "<value>");
    try {
        size_t pos = 0;
        uint64_t v = std::stoull(token.substr(prefix.size()), &pos);
        if (pos != token.size() - prefix.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("gap dump: bad integer in header field " + std::string(key));
    }
}

}  // namespace

WeightSequence load_gaps(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw ConfigError("gap dump: missing header");
    std::istringstream hs(header);
    std::string hash, name, version, seed_tok, dist_tok, horizon_tok;
    hs >> hash >> name >> version >> seed_tok >> dist_tok >> horizon_tok;
    if (hash != "#" || name != "gapseq" || version != "v1")
        throw ConfigError("gap dump: header must start with '# gapseq v1'");
    WeightSequence seq;
    seq.seed = parse_field(seed_tok, "seed");
    seq.dist_fingerprint = parse_field(dist_tok, "dist");
    seq.horizon = parse_field(horizon_tok, "horizon");

    std::string line;
    uint64_t w = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        uint64_t g;
        try {
            size_t pos = 0;
            g = std::stoull(line, &pos);
            if (pos != line.size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw ConfigError("gap dump: bad gap line '" + line + "'");
        }
        if (g == 0) throw ConfigError("gap dump: gaps must be >= 1");
        if (w > UINT64_MAX - g) throw HorizonOverflowError("gap dump: weight overflow");
        w += g;
        seq.gaps.push_back(g);
        seq.weights.push_back(w);
    }
    if (seq.weights.empty()) throw ConfigError("gap dump: no gaps");
    if (seq.weights.back() < seq.horizon)
        throw ConfigError("gap dump: gaps stop short of the declared horizon");
    return seq;
}

}  // namespace gapseq
