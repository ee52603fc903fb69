#include "aamrp/sweep.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fs = std::filesystem;

namespace aamrp {

namespace {

struct RunSpec {
    Protocol protocol;
    std::uint32_t nodes;
    std::uint32_t group;
    std::uint64_t seed;
};

std::optional<double> parse_metric(const std::string& field) {
    if (field == "N/A") return std::nullopt;
    return std::stod(field);
}

std::optional<MetricsRow> read_marker(const fs::path& path) {
    std::ifstream in(path);
    if (!in) return std::nullopt;
    std::string line;
    if (!std::getline(in, line)) return std::nullopt;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (fields.size() != 8) return std::nullopt;
    try {
        MetricsRow r;
        r.protocol = fields[0];
        r.n_nodes = static_cast<std::uint32_t>(std::stoul(fields[1]));
        r.group_size = static_cast<std::uint32_t>(std::stoul(fields[2]));
        r.seed = std::stoull(fields[3]);
        r.overhead = std::stoull(fields[4]);
        r.load = parse_metric(fields[5]);
        r.delay_s = parse_metric(fields[6]);
        r.pdf_pct = parse_metric(fields[7]);
        return r;
    } catch (...) {
        return std::nullopt;
    }
}

std::string exact_metric(std::optional<double> v) {
    if (!v) return "N/A";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", *v); // bit-exact round trip
    return buf;
}

void write_marker(const fs::path& path, const MetricsRow& r) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        out << r.protocol << ',' << r.n_nodes << ',' << r.group_size << ',' << r.seed << ','
            << r.overhead << ',' << exact_metric(r.load) << ',' << exact_metric(r.delay_s)
            << ',' << exact_metric(r.pdf_pct) << '\n';
    }
    fs::rename(tmp, path); // atomic completion marker
}

} // namespace

std::string run_key(Protocol p, std::uint32_t nodes, std::uint32_t group, std::uint64_t seed) {
    std::ostringstream out;
    out << to_string(p) << "_n" << nodes << "_g" << group << "_s" << seed;
    return out.str();
}

SweepResult run_sweep(const Scenario& scenario, const SweepOptions& opts) {
    const auto violations = scenario.validate();
    if (!violations.empty()) {
        std::string all;
        for (const auto& v : violations) all += v + "; ";
        throw ConfigError(all);
    }

    fs::create_directories(opts.out_dir);

    std::vector<RunSpec> specs;
    for (Protocol p : scenario.protocols)
        for (std::uint32_t n : scenario.node_counts)
            for (std::uint32_t g : scenario.group_sizes)
                for (std::uint64_t seed : scenario.seeds)
                    specs.push_back(RunSpec{p, n, g, seed});

    SweepResult result;
    result.rows.resize(specs.size());
    std::vector<char> from_marker(specs.size(), 0);

    const bool want_trace = opts.trace || scenario.trace;

    auto execute = [&](std::size_t i) {
        const RunSpec& spec = specs[i];
        const std::string key = run_key(spec.protocol, spec.nodes, spec.group, spec.seed);
        const fs::path marker = fs::path(opts.out_dir) / (key + ".row");
        if (auto row = read_marker(marker)) {
            result.rows[i] = *row;
            from_marker[i] = 1;
            return;
        }

        RunConfig cfg = scenario.base;
        cfg.protocol = spec.protocol;
        cfg.world.n_nodes = spec.nodes;
        cfg.group_size = spec.group;

        TraceWriter trace;
        TraceWriter* trace_ptr = want_trace ? &trace : nullptr;

        RunConfig seeded = cfg;
        seeded.world.rng_seed = spec.seed;
        Simulator sim(seeded, trace_ptr);
        sim.run();
        MetricsRow row = make_row(to_string(spec.protocol), spec.nodes, spec.group, spec.seed,
                                  sim.counters());

        if (want_trace) trace.write_file((fs::path(opts.out_dir) / (key + ".trace")).string());
        if (scenario.convergence_dump && !sim.convergence().empty()) {
            std::ofstream conv(fs::path(opts.out_dir) / (key + ".convergence.csv"));
            conv << "round,iteration,best_cost\n";
            char buf[64];
            for (const auto& p : sim.convergence()) {
                std::snprintf(buf, sizeof(buf), "%u,%u,%.9f\n", p.round, p.iteration, p.best_cost);
                conv << buf;
            }
        }
        write_marker(marker, row);
        result.rows[i] = row;
    };

#ifdef _OPENMP
    if (opts.jobs > 1) {
        omp_set_num_threads(static_cast<int>(opts.jobs));
#pragma omp parallel for schedule(dynamic)
        for (std::size_t i = 0; i < specs.size(); ++i) execute(i);
    } else {
        for (std::size_t i = 0; i < specs.size(); ++i) execute(i);
    }
#else
    for (std::size_t i = 0; i < specs.size(); ++i) execute(i);
#endif

    for (char m : from_marker)
        (m ? result.resumed : result.executed) += 1;

    const std::string csv = metrics_csv(result.rows);
    const fs::path csv_path = fs::path(opts.out_dir) / scenario.csv_name;
    {
        std::ofstream out(csv_path, std::ios::binary);
        out << csv;
    }
    result.csv_path = csv_path.string();

    if (scenario.figures) write_figures(result.rows, scenario, opts.out_dir);
    return result;
}

namespace {

using MeanTable = std::map<std::pair<std::string, std::uint32_t>, std::pair<double, std::size_t>>;

void accumulate(MeanTable& table, const std::string& protocol, std::uint32_t x,
                std::optional<double> v) {
    if (!v) return;
    auto& cell = table[{protocol, x}];
    cell.first += *v;
    cell.second += 1;
}

void write_axis_metric(const fs::path& path, const std::vector<std::uint32_t>& xs,
                       const std::vector<Protocol>& protocols, const MeanTable& table,
                       const char* x_name) {
    std::ofstream out(path, std::ios::binary);
    out << x_name;
    for (Protocol p : protocols) out << '\t' << to_string(p);
    out << '\n';
    for (std::uint32_t x : xs) {
        out << x;
        for (Protocol p : protocols) {
            auto it = table.find({to_string(p), x});
            if (it == table.end() || it->second.second == 0) {
                out << "\tN/A";
            } else {
                char buf[32];
                std::snprintf(buf, sizeof(buf), "\t%.6f",
                              it->second.first / static_cast<double>(it->second.second));
                out << buf;
            }
        }
        out << '\n';
    }
}

} // namespace

void write_figures(const std::vector<MetricsRow>& rows, const Scenario& scenario,
                   const std::string& dir) {
    struct Axis {
        const char* name;
        bool by_nodes;
        const std::vector<std::uint32_t>* xs;
    };
    const Axis axes[2] = {{"nodes", true, &scenario.node_counts},
                          {"group_size", false, &scenario.group_sizes}};
    const char* metrics[4] = {"delay", "pdf", "overhead", "load"};

    for (const Axis& axis : axes) {
        MeanTable tables[4];
        for (const MetricsRow& r : rows) {
            const std::uint32_t x = axis.by_nodes ? r.n_nodes : r.group_size;
            accumulate(tables[0], r.protocol, x, r.delay_s);
            accumulate(tables[1], r.protocol, x, r.pdf_pct);
            accumulate(tables[2], r.protocol, x, static_cast<double>(r.overhead));
            accumulate(tables[3], r.protocol, x, r.load);
        }
        for (int m = 0; m < 4; ++m) {
            std::ostringstream name;
            name << "fig_" << axis.name << "_" << metrics[m] << ".tsv";
            write_axis_metric(fs::path(dir) / name.str(), *axis.xs, scenario.protocols, tables[m],
                              axis.name);
        }
    }
}

} // namespace aamrp
