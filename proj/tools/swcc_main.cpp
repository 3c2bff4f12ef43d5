#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "swcc/analytics.hpp"
#include "swcc/contagion.hpp"
#include "swcc/diagnostics.hpp"
#include "swcc/experiment.hpp"
#include "swcc/graph.hpp"
#include "swcc/infection_dag.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path output_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("SWCC_OUTPUT_DIR")) return env;
    return ".";
}

swcc::Variant parse_variant(const std::string& s) {
    if (s.size() != 1) throw CLI::ValidationError("variant must be W or I");
    return swcc::variant_from_code(s[0]);
}

std::vector<swcc::NodeId> origin_cluster(const swcc::TorusGeometry& geom, int k) {
    std::vector<swcc::NodeId> seeds;
    for (const swcc::Coord& c : swcc::canonical_seed_cluster(geom, {0, 0}, k))
        seeds.push_back(geom.node_id(c));
    return seeds;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path.string());
    os << text;
}

const char* regime_name(swcc::Regime r) {
    switch (r) {
        case swcc::Regime::Fast: return "fast";
        case swcc::Regime::Slow: return "slow";
        default: return "unknown";
    }
}

json trial_json(const swcc::TrialEstimate& est) {
    return json{{"trials", est.trials},
                {"successes", est.successes},
                {"success_rate", est.success_rate},
                {"ci95_lo", est.ci_lo},
                {"ci95_hi", est.ci_hi},
                {"subsquare_side", est.subsquare_side}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"small-world complex contagion laboratory"};
    app.require_subcommand(1);

    std::string out_flag;
    app.add_option("--out-dir", out_flag, "output directory (default: $SWCC_OUTPUT_DIR or .)");

    // generate
    auto* gen_cmd = app.add_subcommand("generate", "sample a graph and write it to disk");
    int gen_l = 32, gen_m = 2;
    double gen_gamma = 2.5;
    std::string gen_variant = "W", gen_out = "graph.swg", gen_edges;
    std::uint64_t gen_seed = 1;
    gen_cmd->add_option("--L", gen_l, "torus side")->required();
    gen_cmd->add_option("--m", gen_m, "weak ties per node")->required();
    gen_cmd->add_option("--gamma", gen_gamma, "distance exponent")->required();
    gen_cmd->add_option("--variant", gen_variant, "W (distinct targets) or I (independent)");
    gen_cmd->add_option("--seed", gen_seed, "rng seed");
    gen_cmd->add_option("--out", gen_out, "output graph file");
    gen_cmd->add_option("--edges-out", gen_edges, "also write a text edge list here");

    // run
    auto* run_cmd = app.add_subcommand("run", "run one cascade and write the trace");
    std::string run_graph;
    int run_l = 32, run_m = 2, run_k = 2, run_max_rounds = -1;
    double run_gamma = 2.5;
    std::string run_variant = "W";
    std::uint64_t run_seed = 1;
    std::string run_trace = "trace.csv";
    run_cmd->add_option("--graph", run_graph, "load this graph file instead of sampling");
    run_cmd->add_option("--L", run_l, "torus side (when sampling)");
    run_cmd->add_option("--m", run_m, "weak ties per node (when sampling)");
    run_cmd->add_option("--gamma", run_gamma, "distance exponent (when sampling)");
    run_cmd->add_option("--variant", run_variant, "W or I (when sampling)");
    run_cmd->add_option("--seed", run_seed, "rng seed (when sampling)");
    run_cmd->add_option("--k", run_k, "contagion threshold");
    run_cmd->add_option("--max-rounds", run_max_rounds, "round cap (-1: 4*L)");
    run_cmd->add_option("--trace-out", run_trace, "trace CSV path");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "run a parameter sweep from a JSON config");
    std::string sweep_config;
    std::vector<std::string> sweep_variants;
    std::vector<int> sweep_l;
    std::vector<double> sweep_gamma;
    int sweep_m = -1, sweep_k = -1, sweep_replicas = -1, sweep_threads = -1, sweep_max_rounds = -2;
    std::int64_t sweep_seed = -1;
    bool sweep_dag = false, sweep_census = false;
    sweep_cmd->add_option("--config", sweep_config, "JSON config path");
    sweep_cmd->add_option("--variants", sweep_variants, "override: variants (W I)");
    sweep_cmd->add_option("--L", sweep_l, "override: torus sides");
    sweep_cmd->add_option("--gamma", sweep_gamma, "override: gamma grid");
    sweep_cmd->add_option("--m", sweep_m, "override: weak ties per node");
    sweep_cmd->add_option("--k", sweep_k, "override: threshold");
    sweep_cmd->add_option("--replicas", sweep_replicas, "override: replicas per point");
    sweep_cmd->add_option("--threads", sweep_threads, "override: worker threads");
    sweep_cmd->add_option("--max-rounds", sweep_max_rounds, "override: round cap");
    sweep_cmd->add_option("--seed", sweep_seed, "override: base seed");
    sweep_cmd->add_flag("--dag-checks", sweep_dag, "attach route-DAG consistency checks");
    sweep_cmd->add_flag("--census", sweep_census, "attach wide-bridge censuses");

    // diagnose
    auto* diag_cmd = app.add_subcommand("diagnose", "structural diagnostics on one graph");
    diag_cmd->require_subcommand(1);
    std::string diag_graph;
    diag_cmd->add_option("--graph", diag_graph, "graph file")->required();

    auto* diag_dag = diag_cmd->add_subcommand("dag", "build the route DAG and check it");
    int dd_k = 2;
    double dd_eps = 0.1;
    std::string dd_csv;
    diag_dag->add_option("--k", dd_k, "contagion threshold");
    diag_dag->add_option("--epsilon", dd_eps, "long-tie exponent offset");
    diag_dag->add_option("--dag-out", dd_csv, "write the DAG edge list CSV here");

    auto* diag_census = diag_cmd->add_subcommand("census", "wide-bridge census around a center");
    int dc_k = 2, dc_x = 0, dc_y = 0;
    double dc_delta = 0.15;
    diag_census->add_option("--k", dc_k, "tie-count threshold");
    diag_census->add_option("--delta", dc_delta, "disk radius exponent");
    diag_census->add_option("--x", dc_x, "center x");
    diag_census->add_option("--y", dc_y, "center y");

    auto* diag_blocks = diag_cmd->add_subcommand("blocks", "long-tie ownership census");
    int db_k = 2;
    double db_delta = 0.15;
    bool db_trace = false;
    diag_blocks->add_option("--k", db_k, "tie-count threshold");
    diag_blocks->add_option("--delta", db_delta, "length exponent offset");
    diag_blocks->add_flag("--check-spread", db_trace,
                          "also run a cascade and verify block-adjacent spread");

    auto* diag_heavy = diag_cmd->add_subcommand("heavy", "search for a heavy connected subset");
    int dh_k = 2;
    double dh_eps = 0.1;
    diag_heavy->add_option("--k", dh_k, "threshold (2 or 3)");
    diag_heavy->add_option("--epsilon", dh_eps, "long-tie exponent offset");

    auto* diag_either = diag_cmd->add_subcommand("eitheror", "certify the seed/heavy dichotomy");
    int de_k = 2, de_bx = -1, de_by = -1;
    double de_eps = 0.1;
    diag_either->add_option("--k", de_k, "contagion threshold");
    diag_either->add_option("--epsilon", de_eps, "long-tie exponent offset");
    diag_either->add_option("--bx", de_bx, "B anchor x (default: far corner)");
    diag_either->add_option("--by", de_by, "B anchor y (default: far corner)");

    // trial
    auto* trial_cmd = app.add_subcommand("trial", "Monte Carlo recursive-spreading trials");
    int tr_l = 64, tr_m = 2, tr_k = 2, tr_trials = 100;
    double tr_gamma = 2.3, tr_delta = 0.15;
    std::string tr_variant = "W";
    std::uint64_t tr_seed = 1;
    trial_cmd->add_option("--L", tr_l, "torus side")->required();
    trial_cmd->add_option("--m", tr_m, "weak ties per node");
    trial_cmd->add_option("--gamma", tr_gamma, "distance exponent")->required();
    trial_cmd->add_option("--variant", tr_variant, "W or I");
    trial_cmd->add_option("--k", tr_k, "contagion threshold");
    trial_cmd->add_option("--delta", tr_delta, "subsquare shrink exponent");
    trial_cmd->add_option("--trials", tr_trials, "number of trials");
    trial_cmd->add_option("--seed", tr_seed, "base rng seed");

    // predict
    auto* pred_cmd = app.add_subcommand("predict", "print the regime table for a gamma grid");
    int pr_k = 2;
    double pr_min = 0.0, pr_max = 4.0, pr_step = 0.05;
    std::string pr_variant = "W";
    pred_cmd->add_option("--k", pr_k, "contagion threshold");
    pred_cmd->add_option("--variant", pr_variant, "W or I");
    pred_cmd->add_option("--gamma-min", pr_min, "grid start");
    pred_cmd->add_option("--gamma-max", pr_max, "grid end (inclusive)");
    pred_cmd->add_option("--gamma-step", pr_step, "grid step");

    // fit
    auto* fit_cmd = app.add_subcommand("fit", "fit a scaling exponent from an n,T CSV");
    std::string fit_file;
    fit_cmd->add_option("--csv", fit_file, "two-column CSV with header n,T")->required();

    CLI11_PARSE(app, argc, argv);
    const fs::path out = output_dir(out_flag);

    try {
        if (*gen_cmd) {
            const auto graph =
                swcc::generate(gen_l, gen_m, gen_gamma, parse_variant(gen_variant), gen_seed);
            graph.save(out / gen_out);
            if (!gen_edges.empty()) {
                std::ofstream os(out / gen_edges);
                graph.write_edge_list(os);
            }
            std::cout << "wrote " << (out / gen_out).string() << "\n";
            return 0;
        }
        if (*run_cmd) {
            const auto graph =
                run_graph.empty()
                    ? swcc::generate(run_l, run_m, run_gamma, parse_variant(run_variant), run_seed)
                    : swcc::SmallWorldGraph::load(run_graph);
            const auto seeds = origin_cluster(graph.geometry(), run_k);
            const auto trace = swcc::run_contagion(graph, run_k, seeds, run_max_rounds);
            {
                std::ofstream os(out / run_trace);
                swcc::write_trace_csv(os, graph.geometry(), trace);
            }
            std::cout << swcc::trace_summary_json(trace) << "\n";
            return trace.covered ? 0 : 2;
        }
        if (*sweep_cmd) {
            swcc::ExperimentSpec spec;
            if (!sweep_config.empty()) {
                std::ifstream is(sweep_config);
                if (!is) throw std::runtime_error("cannot open " + sweep_config);
                std::stringstream buf;
                buf << is.rdbuf();
                spec = swcc::spec_from_json(buf.str());
            }
            if (!sweep_variants.empty()) {
                spec.variants.clear();
                for (const auto& v : sweep_variants) spec.variants.push_back(parse_variant(v));
            }
            if (!sweep_l.empty()) spec.l_values = sweep_l;
            if (!sweep_gamma.empty()) spec.gammas = sweep_gamma;
            if (sweep_m >= 0) spec.m = sweep_m;
            if (sweep_k >= 0) spec.k = sweep_k;
            if (sweep_replicas >= 0) spec.replicas = sweep_replicas;
            if (sweep_threads >= 0) spec.threads = sweep_threads;
            if (sweep_max_rounds >= -1) spec.max_rounds = sweep_max_rounds;
            if (sweep_seed >= 0) spec.base_seed = static_cast<std::uint64_t>(sweep_seed);
            if (sweep_dag) spec.dag_checks = true;
            if (sweep_census) spec.census = true;

            const auto records = swcc::run_sweep(spec);
            fs::create_directories(out);
            {
                std::ofstream os(out / "records.csv");
                swcc::write_records_csv(os, records);
            }
            {
                std::ofstream os(out / "points.csv");
                swcc::write_point_summary_csv(os, records);
            }
            {
                std::ofstream os(out / "fits.csv");
                swcc::write_fit_summary_csv(os, records);
            }
            write_text(out / "spec.json", swcc::spec_to_json(spec));
            int failures = 0;
            for (const auto& r : records)
                if (!r.error.empty()) ++failures;
            std::cout << "records: " << records.size() << ", failures: " << failures << "\n";
            return failures == 0 ? 0 : 1;
        }
        if (*diag_cmd) {
            const auto graph = swcc::SmallWorldGraph::load(diag_graph);
            const auto& geom = graph.geometry();
            json report;
            if (*diag_dag) {
                const auto seeds = origin_cluster(geom, dd_k);
                const auto trace = swcc::run_contagion(graph, dd_k, seeds);
                const auto dag = swcc::build_dag(graph, trace, dd_k, dd_eps);
                const auto path_check = swcc::check_path_time_consistency(dag, trace);
                report = {{"covered", trace.covered},
                          {"rounds", trace.rounds_elapsed},
                          {"long_tie_threshold", dag.threshold()},
                          {"path_time_consistent", path_check.ok}};
                if (!dd_csv.empty()) {
                    std::ofstream os(out / dd_csv);
                    swcc::write_dag_csv(os, dag);
                }
            } else if (*diag_census) {
                const auto census = swcc::wide_bridge_census(graph, {dc_x, dc_y}, dc_delta, dc_k);
                report = {{"z1", census.z1},
                          {"z2", census.z2},
                          {"radius", census.radius},
                          {"annulus_size", census.annulus_size},
                          {"near_disk_size", census.near_disk_size}};
            } else if (*diag_blocks) {
                swcc::ContagionTrace trace;
                const swcc::ContagionTrace* trace_ptr = nullptr;
                if (db_trace) {
                    trace = swcc::run_contagion(graph, db_k, origin_cluster(geom, db_k));
                    trace_ptr = &trace;
                }
                const auto rep = swcc::long_tie_block_census(graph, db_delta, db_k, trace_ptr);
                report = {{"violators", rep.violating_nodes.size()},
                          {"any", rep.any},
                          {"min_long_length", rep.min_long_length},
                          {"block_side", rep.block_side}};
                if (rep.trace_checked) report["block_spread_ok"] = rep.block_spread_ok;
            } else if (*diag_heavy) {
                const auto witness = swcc::heavy_connected_subset_search(graph, dh_k, dh_eps);
                report = {{"found", witness.has_value()}};
                if (witness) {
                    report["nodes"] = witness->nodes;
                    report["long_ties"] = witness->long_ties;
                }
            } else if (*diag_either) {
                const auto seeds = origin_cluster(geom, de_k);
                const auto trace = swcc::run_contagion(graph, de_k, seeds);
                const int half = geom.side() / 2;
                const swcc::Coord anchor{de_bx >= 0 ? de_bx : half, de_by >= 0 ? de_by : half};
                std::vector<swcc::NodeId> b;
                for (const swcc::Coord& c : swcc::canonical_seed_cluster(geom, anchor, de_k))
                    b.push_back(geom.node_id(c));
                for (swcc::NodeId v : b)
                    if (trace.infected_round[v] < 0) {
                        std::cout << json{{"verdict", "not-applicable"},
                                          {"reason", "B not fully infected"}}
                                         .dump(2)
                                  << "\n";
                        return 2;
                    }
                const auto dag = swcc::build_dag(graph, trace, de_k, de_eps);
                const auto res = swcc::check_either_or(graph, dag, seeds, b, de_k);
                const char* verdict = res.verdict == swcc::EitherOrVerdict::Intersects
                                          ? "intersects"
                                          : (res.verdict == swcc::EitherOrVerdict::HeavySubset
                                                 ? "heavy-subset"
                                                 : "violation");
                report = {{"verdict", verdict}};
                if (res.verdict == swcc::EitherOrVerdict::HeavySubset) {
                    report["witness"] = res.witness;
                    report["witness_case"] = res.witness_case;
                    report["witness_long_ties"] = res.witness_long_ties;
                } else if (res.verdict == swcc::EitherOrVerdict::Violation) {
                    report["reason"] = res.violation_reason;
                }
            }
            std::cout << report.dump(2) << "\n";
            return 0;
        }
        if (*trial_cmd) {
            const auto est = swcc::recursive_spreading_trial(
                tr_l, tr_m, tr_gamma, parse_variant(tr_variant), tr_k, tr_delta, tr_trials,
                tr_seed);
            std::cout << trial_json(est).dump(2) << "\n";
            return 0;
        }
        if (*pred_cmd) {
            std::cout << "variant,k,gamma,regime,justification\n";
            for (double g = pr_min; g <= pr_max + 1e-9; g += pr_step) {
                const auto verdict = swcc::classify_regime(parse_variant(pr_variant), g, pr_k);
                std::cout << pr_variant << ',' << pr_k << ',' << g << ','
                          << regime_name(verdict.regime) << ",\"" << verdict.justification
                          << "\"\n";
            }
            return 0;
        }
        if (*fit_cmd) {
            std::ifstream is(fit_file);
            if (!is) throw std::runtime_error("cannot open " + fit_file);
            std::string line;
            std::getline(is, line);  // header
            std::vector<std::pair<double, double>> samples;
            while (std::getline(is, line)) {
                if (line.empty()) continue;
                const auto comma = line.find(',');
                if (comma == std::string::npos)
                    throw std::runtime_error("expected two columns: n,T");
                samples.emplace_back(std::stod(line.substr(0, comma)),
                                     std::stod(line.substr(comma + 1)));
            }
            const auto fit = swcc::fit_scaling_exponent(samples);
            std::cout << json{{"exponent", fit.exponent},
                              {"stderr", fit.stderr_value},
                              {"r_squared", fit.r_squared}}
                             .dump(2)
                      << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
