#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "aamrp/sim.hpp"

namespace aamrp {

// Structured error for scenario problems: what and where.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Resolved scenario: one base RunConfig plus the sweep axes and output knobs.
struct Scenario {
    RunConfig base;
    std::vector<std::uint32_t> node_counts{25, 50, 75, 100};
    std::vector<std::uint32_t> group_sizes{1, 2, 3, 4};
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    std::vector<Protocol> protocols{Protocol::Aamrp, Protocol::Flooding, Protocol::SharedTree};

    std::string csv_name = "metrics.csv";
    bool trace = false;
    bool convergence_dump = false;
    bool figures = true;

    // Field-path violations, empty when valid.
    std::vector<std::string> validate() const;
};

// Parses the flat "section.key = value" scenario format. Unknown keys and
// malformed lines raise ConfigError with the line number. An empty file (or
// empty string) resolves to the defaults.
Scenario parse_scenario_text(const std::string& text);
Scenario load_scenario(const std::string& path);

// Canonical rendering of a resolved scenario, echoing every setting.
std::string describe_scenario(const Scenario& s);

// Applies the AAMRP_SEED_OFFSET environment variable convention.
void apply_seed_offset(Scenario& s, std::int64_t offset);

} // namespace aamrp
