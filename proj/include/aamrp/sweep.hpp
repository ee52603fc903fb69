#pragma once

#include <string>
#include <vector>

#include "aamrp/scenario.hpp"

namespace aamrp {

struct SweepOptions {
    std::string out_dir = "out";
    std::uint32_t jobs = 1;
    bool trace = false; // forces traces on even when the scenario says off
    bool quiet = false;
};

struct SweepResult {
    std::vector<MetricsRow> rows;
    std::string csv_path;
    std::uint32_t executed = 0; // runs actually simulated
    std::uint32_t resumed = 0;  // runs restored from done-markers
};

// Executes every (protocol x node_count x group_size x seed) combination.
// Independent runs execute in parallel under OpenMP when jobs > 1; outputs
// are assembled after the last run finishes, so the CSV and figure files are
// byte-identical for any job count. Completed runs leave a row marker in
// out_dir and are skipped on re-execution.
SweepResult run_sweep(const Scenario& scenario, const SweepOptions& opts);

// Stable per-run identifier used for marker, trace and convergence files.
std::string run_key(Protocol p, std::uint32_t nodes, std::uint32_t group, std::uint64_t seed);

// Figure-ready aggregation: one file per (axis, metric), columns are
// x then the per-protocol means.
void write_figures(const std::vector<MetricsRow>& rows, const Scenario& scenario,
                   const std::string& dir);

} // namespace aamrp
