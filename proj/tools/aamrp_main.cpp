// aamrp — scenario runner for the ant-based adaptive multicast routing
// simulator. Subcommands: run (sweep a scenario), validate (resolve + check a
// scenario), trace (recompute metrics from a trace file), oracle (run the
// brute-force reference checks).

#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "aamrp/replay.hpp"
#include "aamrp/scenario.hpp"
#include "aamrp/sweep.hpp"
#include "oracles.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

std::int64_t seed_offset_from_env() {
    const char* raw = std::getenv("AAMRP_SEED_OFFSET");
    if (raw == nullptr || *raw == '\0') return 0;
    try {
        return std::stoll(raw);
    } catch (...) {
        throw aamrp::ConfigError("AAMRP_SEED_OFFSET is not an integer: " + std::string(raw));
    }
}

int cmd_run(const std::string& scenario_path, const aamrp::SweepOptions& opts) {
    aamrp::Scenario scenario = aamrp::load_scenario(scenario_path);
    aamrp::apply_seed_offset(scenario, seed_offset_from_env());
    const auto violations = scenario.validate();
    if (!violations.empty()) {
        for (const auto& v : violations) std::cerr << "config error: " << v << '\n';
        return kExitConfig;
    }
    const aamrp::SweepResult result = aamrp::run_sweep(scenario, opts);
    if (!opts.quiet) {
        std::cout << "runs executed: " << result.executed << ", resumed: " << result.resumed
                  << '\n'
                  << "metrics: " << result.csv_path << '\n';
    }
    return kExitOk;
}

int cmd_validate(const std::string& scenario_path) {
    aamrp::Scenario scenario = aamrp::load_scenario(scenario_path);
    aamrp::apply_seed_offset(scenario, seed_offset_from_env());
    std::cout << aamrp::describe_scenario(scenario);
    const auto violations = scenario.validate();
    if (violations.empty()) {
        std::cout << "scenario OK\n";
        return kExitOk;
    }
    for (const auto& v : violations) std::cout << "violation: " << v << '\n';
    return kExitConfig;
}

int cmd_trace(const std::string& trace_path) {
    const aamrp::TraceReplay replay = aamrp::replay_trace_file(trace_path);
    const aamrp::RunCounters& c = replay.counters;
    std::cout << "protocol: " << (replay.protocol.empty() ? "?" : replay.protocol) << '\n'
              << "lines: " << replay.lines << '\n'
              << "overhead: " << aamrp::overhead(c) << '\n'
              << "routing_load: " << aamrp::format_metric(aamrp::routing_load(c)) << '\n'
              << "avg_delay_s: " << aamrp::format_metric(aamrp::avg_delay(c)) << '\n'
              << "pdf_pct: " << aamrp::format_metric(aamrp::pdf_percent(c)) << '\n';
    return kExitOk;
}

int cmd_oracle(const std::string& which, std::uint64_t seed, std::uint32_t n, std::uint32_t k) {
    using namespace aamrp;
    Rng rng(seed);
    if (which == "ksp") {
        const WeightedGraph g = oracle::random_graph(n, 0.45, rng);
        const NodeId s = 0, t = n - 1;
        auto expect = oracle::enumerate_simple_paths(g, s, t);
        if (expect.size() > k) expect.resize(k);
        const auto got = k_shortest_paths(g, s, t, k);
        std::cout << "paths (oracle vs k_shortest_paths), K=" << k << ":\n";
        const std::size_t rows = std::max(expect.size(), got.size());
        bool ok = expect.size() == got.size();
        for (std::size_t i = 0; i < rows; ++i) {
            auto print = [](const std::vector<Path>& v, std::size_t i) {
                if (i >= v.size()) {
                    std::cout << "-";
                    return;
                }
                std::cout << v[i].cost << " [";
                for (std::size_t j = 0; j < v[i].nodes.size(); ++j)
                    std::cout << (j ? " " : "") << v[i].nodes[j];
                std::cout << "]";
            };
            std::cout << "  ";
            print(expect, i);
            std::cout << "  vs  ";
            print(got, i);
            std::cout << '\n';
            if (i < expect.size() && i < got.size() &&
                (expect[i].nodes != got[i].nodes || expect[i].cost != got[i].cost))
                ok = false;
        }
        std::cout << (ok ? "MATCH\n" : "MISMATCH\n");
        return ok ? kExitOk : kExitRuntime;
    }
    if (which == "reach") {
        const Adjacency adj = oracle::random_adjacency(n, 0.35, rng);
        bool ok = true;
        for (NodeId id = 0; id < n; ++id) {
            const auto expect = oracle::reachable_within(id, adj, k);
            const auto got = k_hop_set(id, adj, k);
            if (expect != got) ok = false;
        }
        std::cout << (ok ? "MATCH" : "MISMATCH") << " over " << n << " nodes, k=" << k << '\n';
        return ok ? kExitOk : kExitRuntime;
    }
    if (which == "tree") {
        const WeightedGraph g = oracle::random_graph(n, 0.5, rng);
        std::vector<NodeId> dests;
        for (NodeId d = n - 1; dests.size() < 2 && d > 0; --d) dests.push_back(d);
        AntParams params;
        params.max_iterations = 500;
        std::vector<std::vector<Path>> sets;
        for (NodeId d : dests) {
            auto ps = k_shortest_paths(g, 0, d, params.backup_paths);
            if (ps.empty()) {
                std::cout << "destination " << d << " unreachable; re-seed\n";
                return kExitRuntime;
            }
            sets.push_back(ps);
        }
        const auto best =
            oracle::best_tree_exhaustive(g, sets, params.delay_bound, params.delay_penalty);
        Rng ant_rng = rng.fork(7);
        const MulticastTree tree = construct_tree(g, 0, dests, params, ant_rng);
        std::cout << "exhaustive optimum: " << best.cost << "\nant tree cost:      "
                  << tree.total_cost << '\n';
        return kExitOk;
    }
    std::cerr << "unknown oracle '" << which << "' (expected ksp | reach | tree)\n";
    return kExitConfig;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ant-based adaptive multicast routing simulator"};
    app.require_subcommand(1);

    std::string scenario_path;
    aamrp::SweepOptions opts;

    auto* run = app.add_subcommand("run", "execute a scenario sweep");
    run->add_option("--scenario", scenario_path, "scenario file")->required();
    run->add_option("--jobs", opts.jobs, "parallel runs (OpenMP)")->default_val(1);
    run->add_option("--out", opts.out_dir, "output directory")->default_val("out");
    run->add_flag("--trace", opts.trace, "write per-run trace files");
    run->add_flag("--quiet", opts.quiet, "suppress progress output");

    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "resolve and check a scenario file");
    validate->add_option("--scenario", validate_path, "scenario file")->required();

    std::string trace_path;
    auto* trace = app.add_subcommand("trace", "replay a trace file through the metrics");
    trace->add_option("--file", trace_path, "trace file")->required();

    std::string oracle_which;
    std::uint64_t oracle_seed = 1;
    std::uint32_t oracle_n = 8;
    std::uint32_t oracle_k = 3;
    auto* oracle = app.add_subcommand("oracle", "run a brute-force reference check");
    oracle->add_option("which", oracle_which, "ksp | reach | tree")->required();
    oracle->add_option("--seed", oracle_seed, "rng seed")->default_val(1);
    oracle->add_option("--n", oracle_n, "graph size")->default_val(8);
    oracle->add_option("--k", oracle_k, "K (paths or hops)")->default_val(3);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(scenario_path, opts);
        if (validate->parsed()) return cmd_validate(validate_path);
        if (trace->parsed()) return cmd_trace(trace_path);
        if (oracle->parsed()) return cmd_oracle(oracle_which, oracle_seed, oracle_n, oracle_k);
    } catch (const aamrp::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitOk;
}
