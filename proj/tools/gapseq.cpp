// gapseq: simulate random gap processes and check completeness /
// equidistribution / semigroup claims about them at desk scale.
//
// Exit codes: 0 = all verdicts pass, 2 = a verdict failed, 1 = execution
// error (bad config, bad usage, I/O failure).

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <tuple>

#include <CLI11.hpp>
#include <json.hpp>

#include "gapseq/coverage.hpp"
#include "gapseq/errors.hpp"
#include "gapseq/experiment.hpp"
#include "gapseq/json_io.hpp"
#include "gapseq/modular_chain.hpp"
#include "gapseq/semigroup.hpp"
#include "gapseq/sequence.hpp"

namespace {

using nlohmann::json;

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw gapseq::Error("cannot open " + path);
    return json::parse(in);
}

std::pair<uint64_t, uint64_t> parse_window(const std::string& text) {
    auto pos = text.find("..");
    if (pos == std::string::npos)
        throw gapseq::ConfigError("window must look like LO..HI, got '" + text + "'");
    try {
        return {std::stoull(text.substr(0, pos)), std::stoull(text.substr(pos + 2))};
    } catch (const std::exception&) {
        throw gapseq::ConfigError("window must look like LO..HI, got '" + text + "'");
    }
}

gapseq::GapDistribution parse_dist(const std::string& text) {
    return gapseq::dist_from_json(json::parse(text, nullptr, true));
}

void print_diagnostics(const std::vector<gapseq::Diagnostic>& diags) {
    for (const auto& d : diags)
        std::cerr << (d.severity == gapseq::Diagnostic::Severity::Error ? "error" : "warning")
                  << " [" << d.field << "] " << d.message << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"random gap process toolkit"};
    app.require_subcommand(1);

    uint32_t threads = 0;
    std::string out_dir;
    bool quiet = false;
    app.add_option("--threads", threads, "worker threads (0 = hardware concurrency)");
    app.add_option("--out", out_dir, "directory for report.json / trace.jsonl");
    app.add_flag("--quiet", quiet, "print only the verdict");

    // run / validate
    std::string config_path;
    auto* run_cmd = app.add_subcommand("run", "run an experiment config");
    run_cmd->add_option("config", config_path, "experiment config JSON")->required();
    run_cmd->fallthrough();
    auto* validate_cmd = app.add_subcommand("validate", "check an experiment config");
    validate_cmd->add_option("config", config_path, "experiment config JSON")->required();
    validate_cmd->fallthrough();

    // semigroup
    std::vector<uint64_t> gens;
    uint64_t probe_x = 0;
    bool want_table = false;
    std::string sg_window;
    auto* semigroup_cmd = app.add_subcommand("semigroup", "numerical semigroup queries");
    semigroup_cmd->add_option("--gens", gens, "generators (comma separated)")
        ->required()
        ->delimiter(',');
    semigroup_cmd->add_option("--x", probe_x, "test membership / representation of x");
    semigroup_cmd->add_flag("--table", want_table, "include the full Apery table");
    semigroup_cmd->add_option("--window", sg_window, "list members in LO..HI");
    semigroup_cmd->fallthrough();

    // chain
    std::string dist_text;
    uint32_t modulus = 0;
    uint64_t power = 0, eq_k = 10, eq_steps = 100, eq_trials = 100000, seed = 0;
    bool empirical = false;
    auto* chain_cmd = app.add_subcommand("chain", "mod-M transition matrix analysis");
    chain_cmd->add_option("--dist", dist_text, "distribution JSON")->required();
    chain_cmd->add_option("--modulus", modulus, "modulus M >= 2")->required();
    chain_cmd->add_option("--power", power, "also emit A^N");
    chain_cmd->add_flag("--empirical", empirical, "also simulate conditional frequencies");
    chain_cmd->add_option("--k", eq_k, "empirical: conditioning step");
    chain_cmd->add_option("--steps", eq_steps, "empirical: steps after conditioning");
    chain_cmd->add_option("--trials", eq_trials, "empirical: number of sequences");
    chain_cmd->add_option("--seed", seed, "empirical: base seed");
    chain_cmd->fallthrough();

    // coverage
    uint64_t horizon = 0;
    uint32_t m = 2;
    std::string window_text, dump_path, load_path, csv_path;
    bool distinct_sums = false, brown = false;
    auto* coverage_cmd = app.add_subcommand("coverage", "sumset coverage of a weight sequence");
    coverage_cmd->add_option("--dist", dist_text, "distribution JSON");
    coverage_cmd->add_option("--seed", seed, "generation seed");
    coverage_cmd->add_option("--horizon", horizon, "generation horizon");
    coverage_cmd->add_option("--m", m, "distinct-summand count");
    coverage_cmd->add_option("--window", window_text, "report window LO..HI");
    coverage_cmd->add_flag("--distinct-sums", distinct_sums, "use the any-length distinct-sum closure");
    coverage_cmd->add_flag("--brown", brown, "also run the completeness criterion on the weights");
    coverage_cmd->add_option("--dump", dump_path, "write the generated gap dump here");
    coverage_cmd->add_option("--load", load_path, "load gaps from a dump instead of generating");
    coverage_cmd->add_option("--uncovered-csv", csv_path, "write the uncovered list as CSV");
    coverage_cmd->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (run_cmd->parsed()) {
            json cfg_json = read_json_file(config_path);
            gapseq::ExperimentConfig cfg = gapseq::ExperimentConfig::from_json(cfg_json);
            if (app.count("--threads")) cfg.threads = threads;
            if (app.count("--out")) cfg.out_dir = out_dir;
            if (app.count("--quiet")) cfg.quiet = true;
            auto rep = gapseq::run(cfg);
            if (cfg.quiet)
                std::cout << (rep.pass ? "PASS" : "FAIL") << "\n";
            else
                std::cout << rep.document.dump(2) << "\n";
            return rep.pass ? 0 : 2;
        }

        if (validate_cmd->parsed()) {
            auto diags = gapseq::validate_json(read_json_file(config_path));
            print_diagnostics(diags);
            bool bad = std::any_of(diags.begin(), diags.end(), [](const gapseq::Diagnostic& d) {
                return d.severity == gapseq::Diagnostic::Severity::Error;
            });
            if (!bad && !quiet) std::cout << "config ok (" << diags.size() << " warnings)\n";
            return bad ? 1 : 0;
        }

        if (semigroup_cmd->parsed()) {
            auto desc = gapseq::build(gens);
            json out = gapseq::to_json(desc);
            if (!want_table) out.erase("apery");
            if (desc.d == 1) {
                auto stamp = gapseq::stamp_bound_n0(desc.generators);
                out["stamp"] = {{"n0", stamp.n0},
                                {"n0_prime", gapseq::stamp_bound_n0_prime(desc.generators)},
                                {"bezout", stamp.bezout}};
            }
            if (semigroup_cmd->count("--x")) {
                out["x"] = probe_x;
                out["member"] = gapseq::member(desc, probe_x);
                auto rep = gapseq::representation(desc, probe_x);
                out["representation"] = rep ? json(*rep) : json(nullptr);
            }
            if (!sg_window.empty()) {
                auto [lo, hi] = parse_window(sg_window);
                json members = json::array();
                for (uint64_t x = lo; x <= hi; ++x)
                    if (gapseq::member(desc, x)) members.push_back(x);
                out["members_in_window"] = members;
            }
            std::cout << out.dump(2) << "\n";
            return 0;
        }

        if (chain_cmd->parsed()) {
            auto dist = parse_dist(dist_text);
            auto chain = gapseq::build_chain(dist, modulus);
            json out;
            out["modulus"] = chain.modulus;
            out["first_row"] = chain.first_row;
            out["mass_truncation_error"] = chain.mass_truncation_error;
            out["regularity"] = gapseq::to_json(gapseq::is_regular(chain));
            if (power > 0) out["power"] = {{"n", power}, {"rows", gapseq::power_rows(chain, power)}};
            if (empirical)
                out["empirical"] = gapseq::to_json(gapseq::empirical_equidistribution(
                    dist, modulus, eq_k, eq_steps, eq_trials, seed));
            std::cout << out.dump(2) << "\n";
            return 0;
        }

        if (coverage_cmd->parsed()) {
            gapseq::WeightSequence seq;
            if (!load_path.empty()) {
                std::ifstream in(load_path);
                if (!in) throw gapseq::Error("cannot open " + load_path);
                seq = gapseq::load_gaps(in);
                if (horizon == 0) horizon = seq.horizon;
            } else {
                if (dist_text.empty())
                    throw gapseq::ConfigError("coverage needs --dist (or --load)");
                if (horizon == 0) throw gapseq::ConfigError("coverage needs --horizon >= 1");
                seq = gapseq::generate(parse_dist(dist_text), seed, horizon);
            }
            if (!dump_path.empty()) {
                std::ofstream outf(dump_path);
                if (!outf) throw gapseq::Error("cannot open " + dump_path);
                gapseq::dump_gaps(seq, outf);
            }
            uint64_t lo = 1, hi = horizon - horizon / 10;
            if (!window_text.empty()) std::tie(lo, hi) = parse_window(window_text);
            json out;
            out["seed"] = seq.seed;
            out["horizon"] = horizon;
            out["dist_fingerprint"] = seq.dist_fingerprint;
            out["distinct_sums"] = distinct_sums;
            if (distinct_sums) {
                auto sums = gapseq::build_distinct_sums(seq.weights, hi);
                out["report"] = gapseq::to_json(gapseq::report(sums, lo, hi));
            } else {
                out["m"] = m;
                auto table = gapseq::build_table(seq.weights, m, hi);
                out["report"] = gapseq::to_json(gapseq::report(table.layers[m], lo, hi));
            }
            if (brown) {
                auto res = gapseq::brown_criterion(seq.weights);
                out["brown"] = {{"complete", res.complete},
                                {"first_violation_index",
                                 res.first_violation_index ? json(*res.first_violation_index)
                                                           : json(nullptr)}};
            }
            if (!csv_path.empty()) {
                std::ofstream csv(csv_path);
                if (!csv) throw gapseq::Error("cannot open " + csv_path);
                csv << "uncovered\n";
                for (uint64_t u : out["report"]["uncovered"]) csv << u << "\n";
            }
            std::cout << out.dump(2) << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
