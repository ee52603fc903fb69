// Benchmark: serial sweep execution vs OpenMP-parallel execution of the same
// run set, checking that both produce byte-identical metrics before timing
// them. Usage: aamrp_bench [jobs]

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "aamrp/scenario.hpp"
#include "aamrp/sweep.hpp"

namespace fs = std::filesystem;
using namespace aamrp;

namespace {

std::string read_file(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

double timed_sweep(const Scenario& scenario, const fs::path& dir, std::uint32_t jobs,
                   std::string& csv_out) {
    fs::remove_all(dir);
    SweepOptions opts;
    opts.out_dir = dir.string();
    opts.jobs = jobs;
    opts.quiet = true;
    const auto start = std::chrono::steady_clock::now();
    const SweepResult result = run_sweep(scenario, opts);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    csv_out = read_file(result.csv_path);
    return secs;
}

} // namespace

int main(int argc, char** argv) {
    std::uint32_t jobs = 2;
#ifdef _OPENMP
    jobs = static_cast<std::uint32_t>(omp_get_max_threads());
#endif
    if (argc > 1) jobs = static_cast<std::uint32_t>(std::stoul(argv[1]));

    Scenario scenario = parse_scenario_text("world.sim_time = 25\n"
                                            "sweep.node_counts = 25,50\n"
                                            "sweep.group_sizes = 2,4\n"
                                            "sweep.seeds = 1,2,3\n"
                                            "sweep.protocols = aamrp,flooding,shared_tree\n");
    scenario.figures = false;

    const fs::path base = fs::temp_directory_path() / "aamrp_bench";
    std::string serial_csv, parallel_csv;
    const double serial = timed_sweep(scenario, base / "serial", 1, serial_csv);
    const double parallel = timed_sweep(scenario, base / "parallel", jobs, parallel_csv);

    const std::size_t runs = scenario.protocols.size() * scenario.node_counts.size() *
                             scenario.group_sizes.size() * scenario.seeds.size();
    std::printf("runs:              %zu\n", runs);
    std::printf("serial (jobs=1):   %.3f s  (%.1f runs/s)\n", serial,
                static_cast<double>(runs) / serial);
    std::printf("openmp (jobs=%u):  %.3f s  (%.1f runs/s)\n", jobs, parallel,
                static_cast<double>(runs) / parallel);
    std::printf("speedup:           %.2fx\n", serial / parallel);
    std::printf("outputs identical: %s\n", serial_csv == parallel_csv ? "yes" : "NO");
    fs::remove_all(base);
    return serial_csv == parallel_csv ? 0 : 1;
}
