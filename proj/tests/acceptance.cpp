// Acceptance gate: one line per criterion, tolerances pinned inline.
// Exit code 0 only if every gating criterion passes (the throughput
// benchmark at the end is informational).

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <numeric>
#include <random>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "gapseq/coverage.hpp"
#include "gapseq/experiment.hpp"
#include "gapseq/semigroup.hpp"
#include "gapseq/sequence.hpp"
#include "oracles.hpp"

using namespace gapseq;
using nlohmann::json;

namespace {

constexpr uint64_t kSeedBase = 20260825;  // base of every derived seed fan
constexpr uint64_t kGenValueMax = 30;     // C1/C2 family: generators from 1..30
constexpr uint32_t kGenCountMax = 4;      // sets of size 1..4

struct Gate {
    bool all_pass = true;

    void line(bool pass, bool gating, const std::string& detail, double secs) {
        std::printf("[%s] %s (%.1fs)%s\n", pass ? "PASS" : "FAIL", detail.c_str(), secs,
                    gating ? "" : " [informational]");
        std::fflush(stdout);
        if (gating && !pass) all_pass = false;
    }
};

double secs_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// All strictly increasing generator sets of size 1..kGenCountMax from
// {1..kGenValueMax}, passed to fn as a vector.
template <typename Fn>
void for_each_generator_set(Fn&& fn) {
    std::vector<uint64_t> g;
    for (uint64_t a = 1; a <= kGenValueMax; ++a) {
        g = {a};
        fn(g);
        for (uint64_t b = a + 1; b <= kGenValueMax; ++b) {
            g = {a, b};
            fn(g);
            for (uint64_t c = b + 1; c <= kGenValueMax; ++c) {
                g = {a, b, c};
                fn(g);
                for (uint64_t d = c + 1; d <= kGenValueMax; ++d) {
                    g = {a, b, c, d};
                    fn(g);
                }
            }
        }
    }
}

uint64_t gcd_of(const std::vector<uint64_t>& v) {
    uint64_t g = 0;
    for (uint64_t x : v) g = std::gcd(g, x);
    return g;
}

ExperimentReport run_config(const json& j) { return run(ExperimentConfig::from_json(j)); }

// ---------------------------------------------------------------- C1
bool criterion_semigroup_exactness(Gate& gate) {
    auto t0 = std::chrono::steady_clock::now();
    uint64_t sets = 0, failures = 0;
    for_each_generator_set([&](const std::vector<uint64_t>& gens) {
        ++sets;
        auto desc = build(gens);
        const uint64_t limit = 2 * gens.front() * gens.back();
        auto reach = oracle::coin_reachable(gens, limit);
        for (uint64_t x = 0; x <= limit; ++x)
            if (member(desc, x) != (reach[x] != 0)) ++failures;

        // frobenius of the reduced monoid against a brute scan
        const uint64_t d = gcd_of(gens);
        std::vector<uint64_t> reduced;
        for (uint64_t x : gens) reduced.push_back(x / d);
        const uint64_t rlim = 2 * reduced.front() * reduced.back();
        auto rreach = oracle::coin_reachable(reduced, rlim);
        int64_t frob = -1;
        for (uint64_t x = 1; x <= rlim; ++x)
            if (!rreach[x]) frob = (int64_t)x;
        if (frob != desc.frobenius_reduced) ++failures;
    });

    // the worked example: M(5,6) below 26 and the frobenius number 19
    auto d56 = build({5, 6});
    std::set<uint64_t> got;
    for (uint64_t x = 0; x <= 25; ++x)
        if (member(d56, x)) got.insert(x);
    std::set<uint64_t> want{0, 5, 6, 10, 11, 12, 15, 16, 17, 18, 20, 21, 22, 23, 24, 25};
    if (got != want || d56.frobenius_reduced != 19) ++failures;
    for (uint64_t x = 20; x <= 100; ++x)
        if (!member(d56, x)) ++failures;

    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "C1 semigroup member/frobenius exact on %" PRIu64
                  " generator sets (k<=4, values<=30, x<=2*s1*sk), %" PRIu64 " mismatches",
                  sets, failures);
    gate.line(failures == 0, true, buf, secs_since(t0));
    return failures == 0;
}

// ---------------------------------------------------------------- C2
bool criterion_stamp_bounds(Gate& gate) {
    auto t0 = std::chrono::steady_clock::now();
    uint64_t sets = 0, failures = 0;
    for_each_generator_set([&](const std::vector<uint64_t>& gens) {
        if (gcd_of(gens) != 1) return;
        ++sets;
        auto desc = build(gens);
        auto stamp = stamp_bound_n0(gens);

        // certificate really combines to 1
        __int128 acc = 0;
        for (size_t i = 0; i < gens.size(); ++i)
            acc += (__int128)stamp.bezout[i] * (__int128)desc.generators[i];
        if (acc != 1) ++failures;

        // every integer in [n0, n0 + 2 s_1] is a member
        const uint64_t s1 = desc.generators.front();
        for (uint64_t x = stamp.n0; x <= stamp.n0 + 2 * s1; ++x)
            if (!member(desc, x)) ++failures;

        // every n >= n0' carries an all-positive witness; checked across one
        // full s_1 period past n0' plus a spread of larger points
        const uint64_t n0p = stamp_bound_n0_prime(gens);
        uint64_t gen_sum = 0;
        for (uint64_t x : desc.generators) gen_sum += x;
        auto check_witness = [&](uint64_t x) {
            if (x < gen_sum) return false;
            auto rep = representation(desc, x - gen_sum);
            if (!rep) return false;
            uint64_t total = 0;
            for (size_t i = 0; i < rep->size(); ++i) {
                uint64_t coeff = (*rep)[i] + 1;  // the witness itself
                if (coeff < 1) return false;
                total += coeff * desc.generators[i];
            }
            return total == x;
        };
        for (uint64_t x = n0p; x <= n0p + 2 * s1; ++x)
            if (!check_witness(x)) ++failures;
        for (uint64_t mult : {5ull, 17ull})
            if (!check_witness(n0p + mult * desc.generators.back())) ++failures;
    });

    // hand-pinned worked examples of the canonical certificate
    auto s56 = stamp_bound_n0({5, 6});
    if (s56.n0 != 25 || s56.bezout != std::vector<int64_t>{-1, 1}) ++failures;
    if (stamp_bound_n0_prime({5, 6}) != 36) ++failures;
    auto s35 = stamp_bound_n0({3, 5});
    if (s35.n0 != 15 || s35.bezout != std::vector<int64_t>{2, -1}) ++failures;
    if (stamp_bound_n0_prime({3, 5}) != 23) ++failures;

    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "C2 stamp bounds on %" PRIu64
                  " coprime sets: [n0, n0+2*s1] members, all-positive witnesses past n0', %" PRIu64
                  " failures",
                  sets, failures);
    gate.line(failures == 0, true, buf, secs_since(t0));
    return failures == 0;
}

// ---------------------------------------------------------------- C3
bool criterion_sumset_oracle(Gate& gate) {
    auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(kSeedBase);
    uint64_t failures = 0;
    const int kInstances = 200;
    for (int inst = 0; inst < kInstances; ++inst) {
        const size_t n = 1 + rng() % 20;
        const uint64_t horizon = 100 + rng() % 1901;  // <= 2000
        const uint32_t m = 1 + uint32_t(rng() % 4);
        std::vector<uint64_t> w(n);
        for (auto& x : w) x = 1 + rng() % 2000;

        auto table = build_table(w, m, horizon);
        for (uint32_t d = 1; d <= m; ++d) {
            auto want = oracle::d_subset_sums(w, d, horizon);
            for (uint64_t x = 0; x <= horizon; ++x)
                if (table.layers[d].test(x) != (want.count(x) != 0)) ++failures;
        }
        auto sums = build_distinct_sums(w, horizon);
        auto want_all = oracle::all_subset_sums(w, horizon);
        for (uint64_t x = 0; x <= horizon; ++x)
            if (sums.test(x) != (want_all.count(x) != 0)) ++failures;
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "C3 sumset tables match brute-force oracles on %d random instances "
                  "(<=20 weights, horizon<=2000, d<=4), %" PRIu64 " mismatches",
                  kInstances, failures);
    gate.line(failures == 0, true, buf, secs_since(t0));
    return failures == 0;
}

// ---------------------------------------------------------------- C4
bool criterion_density(Gate& gate) {
    auto t0 = std::chrono::steady_clock::now();
    json j = {{"experiment", "density"},
              {"dist", {{"kind", "finite"}, {"pmf", {{"2", 0.5}, {"3", 0.5}}}}},
              {"seed", kSeedBase},
              {"num_seeds", 20},
              {"horizon", 1000000},
              {"thresholds", {{"density_each_abs", 0.01}, {"density_mean_abs", 0.005}}}};
    auto rep = run_config(j);
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "C4 density at horizon 1e6: %s (tolerance 0.01 per seed, 0.005 mean)",
                  rep.document["verdict"]["details"].get<std::string>().c_str());
    gate.line(rep.pass, true, buf, secs_since(t0));
    return rep.pass;
}

// ---------------------------------------------------------------- C5
bool criterion_equidistribution(Gate& gate) {
    auto t0 = std::chrono::steady_clock::now();
    json j = {{"experiment", "equidistribution"},
              {"dist", {{"kind", "finite"}, {"pmf", {{"2", 0.5}, {"3", 0.5}}}}},
              {"seed", kSeedBase},
              {"num_seeds", 1},
              {"modulus", 5},
              {"k", 10},
              {"steps", 100},
              {"trials", 100000},
              {"thresholds",
               {{"analytic_power", 200}, {"analytic_tol", 1e-9}, {"empirical_tol", 0.02}}}};
    auto rep = run_config(j);
    char buf[240];
    std::snprintf(buf, sizeof(buf), "C5 equidistribution mod 5: %s",
                  rep.document["verdict"]["details"].get<std::string>().c_str());
    gate.line(rep.pass, true, buf, secs_since(t0));
    return rep.pass;
}

// ---------------------------------------------------------------- C6
bool criterion_m_completeness(Gate& gate) {
    auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    std::string detail = "C6 m-completeness geometric(0.8), horizon 1e5:";
    for (uint32_t m : {2u, 3u}) {
        json j = {{"experiment", "m_completeness"},
                  {"dist", {{"kind", "geometric"}, {"p", 0.8}}},
                  {"seed", kSeedBase},
                  {"num_seeds", 20},
                  {"horizon", 100000},
                  {"m", m},
                  {"window", {1000, 90000}},
                  {"thresholds", {{"threshold_max", 1000}, {"min_pass_fraction", 0.9}}}};
        auto rep = run_config(j);
        pass = pass && rep.pass;
        double frac = rep.document["aggregate"]["pass_fraction"].get<double>();
        char part[64];
        std::snprintf(part, sizeof(part), " m=%u pass_fraction %.2f;", m, frac);
        detail += part;
    }
    detail += " need >= 0.90 with threshold_n0 < 1000";
    gate.line(pass, true, detail, secs_since(t0));
    return pass;
}

// ---------------------------------------------------------------- C7
bool criterion_counterexample(Gate& gate) {
    auto t0 = std::chrono::steady_clock::now();
    json j = {{"experiment", "counterexample"},
              {"dist", {{"kind", "pow2_counterexample"}, {"m", 2}}},
              {"seed", kSeedBase},
              {"num_seeds", 20},
              {"horizon", 1000000},
              {"m", 2},
              {"window", {1000, 900000}},
              {"thresholds", {{"uncovered_above", 10000}, {"min_pass_fraction", 0.9}}}};
    auto rep = run_config(j);
    char buf[240];
    std::snprintf(buf, sizeof(buf), "C7 power-of-two counterexample (m=2, horizon 1e6): %s",
                  rep.document["verdict"]["details"].get<std::string>().c_str());
    gate.line(rep.pass, true, buf, secs_since(t0));
    return rep.pass;
}

// ---------------------------------------------------------------- C8
bool criterion_difference_set(Gate& gate) {
    auto t0 = std::chrono::steady_clock::now();
    struct Sub {
        const char* label;
        json dist;
        uint64_t horizon;
    };
    const Sub subs[] = {
        {"finite{2,3}", {{"kind", "finite"}, {"pmf", {{"2", 0.5}, {"3", 0.5}}}}, 1000000},
        {"finite{5}", {{"kind", "finite"}, {"pmf", {{"5", 1.0}}}}, 200000},
        {"geometric(0.8)", {{"kind", "geometric"}, {"p", 0.8}}, 200000},
        {"shifted_poisson(2)", {{"kind", "shifted_poisson"}, {"lambda", 2.0}}, 200000},
        {"pow2(2)", {{"kind", "pow2_counterexample"}, {"m", 2}}, 200000},
    };
    bool pass = true;
    double coin_saturation = -1.0;
    for (const auto& sub : subs) {
        json j = {{"experiment", "difference_set"}, {"dist", sub.dist},    {"seed", kSeedBase},
                  {"num_seeds", 5},                 {"horizon", sub.horizon}, {"diff_window", 200}};
        auto rep = run_config(j);
        pass = pass && rep.pass;  // hard gate: containment for every kind and seed
        if (std::string(sub.label) == "finite{2,3}")
            coin_saturation = rep.document["aggregate"]["min_saturation"].get<double>();
    }
    char buf[240];
    std::snprintf(buf, sizeof(buf),
                  "C8 difference sets contained in the gap monoid for 5 gap laws x 5 seeds "
                  "(window 200); finite{2,3} saturation at 1e6: %.4f (reported, not gated)",
                  coin_saturation);
    gate.line(pass, true, buf, secs_since(t0));
    return pass;
}

// ---------------------------------------------------------------- C9
bool criterion_prevault(Gate& gate) {
    auto t0 = std::chrono::steady_clock::now();
    json j = {{"experiment", "prevault_independence"},
              {"dist", {{"kind", "finite"}, {"pmf", {{"2", 0.5}, {"3", 0.5}}}}},
              {"seed", kSeedBase},
              {"num_seeds", 100},
              {"n", 10000},
              {"b", 2},
              {"sequences", 100000},
              {"thresholds", {{"alpha", 0.01}, {"min_accept_fraction", 0.95}}}};
    auto rep = run_config(j);
    char buf[240];
    std::snprintf(buf, sizeof(buf), "C9 prevault independence (n=1e4, b=2, 1e5 sequences): %s",
                  rep.document["verdict"]["details"].get<std::string>().c_str());
    gate.line(rep.pass, true, buf, secs_since(t0));
    return rep.pass;
}

// ---------------------------------------------------------------- C10
bool criterion_scaling(Gate& gate) {
    auto t0 = std::chrono::steady_clock::now();
    json hm = {{"experiment", "half_moment"},
               {"dist", {{"kind", "geometric"}, {"p", 0.5}}},
               {"seed", kSeedBase},
               {"num_seeds", 20},
               {"horizon", 1000000},
               {"thresholds", {{"scaling_ratio_max", 0.01}, {"diagnostics_min_n", 1024}}}};
    auto hm_rep = run_config(hm);
    json mg = {{"experiment", "max_gap"},
               {"dist", {{"kind", "geometric"}, {"p", 0.8}}},
               {"seed", kSeedBase},
               {"num_seeds", 20},
               {"horizon", 1000000},
               {"thresholds", {{"max_gap_ratio_max", 2.0}, {"diagnostics_min_n", 1024}}}};
    auto mg_rep = run_config(mg);
    bool pass = hm_rep.pass && mg_rep.pass;
    char buf[280];
    std::snprintf(buf, sizeof(buf),
                  "C10 scaling: W_n/n^2 max %.3g (< 0.01, geometric 0.5) and max-gap/log n "
                  "max %.3g (< 2.0, geometric 0.8) at checkpoints n >= 1024",
                  hm_rep.document["aggregate"]["max_ratio"].get<double>(),
                  mg_rep.document["aggregate"]["max_ratio"].get<double>());
    gate.line(pass, true, buf, secs_since(t0));
    return pass;
}

// ---------------------------------------------------------------- C11
void criterion_throughput(Gate& gate) {
    auto seq = generate(GapDistribution::geometric(0.5), kSeedBase, 1000000);
    const size_t n_weights = std::min<size_t>(seq.weights.size(), 500000);
    auto t0 = std::chrono::steady_clock::now();
    auto table = build_table(std::span(seq.weights.data(), n_weights), 3, 1000000);
    double secs = secs_since(t0);
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "C11 sumset throughput: m=3 table over %zu weights, horizon 1e6 in %.2fs "
                  "(budget 10s)",
                  n_weights, secs);
    gate.line(secs < 10.0 && table.weights_used > 0, false, buf, secs);
}

}  // namespace

int main() {
    Gate gate;
    criterion_semigroup_exactness(gate);
    criterion_stamp_bounds(gate);
    criterion_sumset_oracle(gate);
    criterion_density(gate);
    criterion_equidistribution(gate);
    criterion_m_completeness(gate);
    criterion_counterexample(gate);
    criterion_difference_set(gate);
    criterion_prevault(gate);
    criterion_scaling(gate);
    criterion_throughput(gate);
    std::printf("%s\n", gate.all_pass ? "acceptance: all gating criteria PASS"
                                      : "acceptance: at least one gating criterion FAILED");
    return gate.all_pass ? 0 : 1;
}
