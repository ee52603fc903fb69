#include "aamrp/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>

namespace aamrp {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

struct Setter {
    std::function<bool(Scenario&, const std::string&)> apply; // false = bad value
};

bool to_double(const std::string& v, double& out) {
    try {
        std::size_t used = 0;
        out = std::stod(v, &used);
        return used == v.size();
    } catch (...) {
        return false;
    }
}

bool to_u32(const std::string& v, std::uint32_t& out) {
    try {
        std::size_t used = 0;
        const unsigned long x = std::stoul(v, &used);
        if (used != v.size()) return false;
        out = static_cast<std::uint32_t>(x);
        return true;
    } catch (...) {
        return false;
    }
}

bool to_u64(const std::string& v, std::uint64_t& out) {
    try {
        std::size_t used = 0;
        out = std::stoull(v, &used);
        return used == v.size();
    } catch (...) {
        return false;
    }
}

bool to_bool(const std::string& v, bool& out) {
    if (v == "true" || v == "1" || v == "yes") { out = true; return true; }
    if (v == "false" || v == "0" || v == "no") { out = false; return true; }
    return false;
}

std::map<std::string, Setter> make_setters() {
    std::map<std::string, Setter> m;

    auto add_double = [&m](const std::string& key, std::function<void(Scenario&, double)> set) {
        m[key] = Setter{[set](Scenario& s, const std::string& v) {
            double x;
            if (!to_double(v, x)) return false;
            set(s, x);
            return true;
        }};
    };
    auto add_u32 = [&m](const std::string& key, std::function<void(Scenario&, std::uint32_t)> set) {
        m[key] = Setter{[set](Scenario& s, const std::string& v) {
            std::uint32_t x;
            if (!to_u32(v, x)) return false;
            set(s, x);
            return true;
        }};
    };
    auto add_bool = [&m](const std::string& key, std::function<void(Scenario&, bool)> set) {
        m[key] = Setter{[set](Scenario& s, const std::string& v) {
            bool x;
            if (!to_bool(v, x)) return false;
            set(s, x);
            return true;
        }};
    };

    add_double("world.area_width", [](Scenario& s, double v) { s.base.world.area_width = v; });
    add_double("world.area_height", [](Scenario& s, double v) { s.base.world.area_height = v; });
    add_double("world.radio_range", [](Scenario& s, double v) { s.base.world.radio_range = v; });
    add_u32("world.n_nodes", [](Scenario& s, std::uint32_t v) { s.base.world.n_nodes = v; });
    add_double("world.min_speed", [](Scenario& s, double v) { s.base.world.min_speed = v; });
    add_double("world.max_speed", [](Scenario& s, double v) { s.base.world.max_speed = v; });
    add_double("world.pause_time", [](Scenario& s, double v) { s.base.world.pause_time = v; });
    add_double("world.sim_time", [](Scenario& s, double v) { s.base.world.sim_time = v; });
    add_double("world.tick", [](Scenario& s, double v) { s.base.world.tick = v; });
    m["world.rng_seed"] = Setter{[](Scenario& s, const std::string& v) {
        std::uint64_t x;
        if (!to_u64(v, x)) return false;
        s.base.world.rng_seed = x;
        return true;
    }};

    add_u32("protocol.k_hops", [](Scenario& s, std::uint32_t v) { s.base.world.k_hops = v; });
    add_u32("protocol.threshold_t",
            [](Scenario& s, std::uint32_t v) { s.base.cluster.threshold_T = v; });
    add_double("protocol.member_base_period",
               [](Scenario& s, double v) { s.base.cluster.member_base_period = v; });
    add_double("protocol.leader_beacon_period",
               [](Scenario& s, double v) { s.base.cluster.leader_beacon_period = v; });
    add_double("protocol.join_timeout",
               [](Scenario& s, double v) { s.base.cluster.join_timeout = v; });
    add_u32("protocol.missed_beacons",
            [](Scenario& s, std::uint32_t v) { s.base.cluster.missed_beacons = v; });

    add_double("ants.alpha", [](Scenario& s, double v) { s.base.tree.params.alpha = v; });
    add_double("ants.beta", [](Scenario& s, double v) { s.base.tree.params.beta = v; });
    add_double("ants.rho", [](Scenario& s, double v) { s.base.tree.params.rho = v; });
    add_double("ants.q", [](Scenario& s, double v) { s.base.tree.params.q = v; });
    add_u32("ants.n_ants", [](Scenario& s, std::uint32_t v) { s.base.tree.params.n_ants = v; });
    add_u32("ants.max_iterations",
            [](Scenario& s, std::uint32_t v) { s.base.tree.params.max_iterations = v; });
    add_double("ants.time_limit", [](Scenario& s, double v) { s.base.tree.params.time_limit = v; });
    add_u32("ants.k_paths", [](Scenario& s, std::uint32_t v) { s.base.tree.params.backup_paths = v; });
    add_double("ants.delay_bound",
               [](Scenario& s, double v) { s.base.tree.params.delay_bound = v; });
    add_double("ants.delay_penalty",
               [](Scenario& s, double v) { s.base.tree.params.delay_penalty = v; });
    add_double("ants.tau0", [](Scenario& s, double v) { s.base.tree.params.tau0 = v; });
    add_double("ants.tau_min", [](Scenario& s, double v) { s.base.tree.params.tau_min = v; });
    m["ants.deposit"] = Setter{[](Scenario& s, const std::string& v) {
        if (v == "best") s.base.tree.params.deposit = DepositPolicy::IterationBest;
        else if (v == "all") s.base.tree.params.deposit = DepositPolicy::AllAnts;
        else return false;
        return true;
    }};
    m["ants.edge_metric"] = Setter{[](Scenario& s, const std::string& v) {
        if (v == "hop") s.base.tree.euclidean_cost = false;
        else if (v == "euclid") s.base.tree.euclidean_cost = true;
        else return false;
        return true;
    }};
    add_bool("ants.persist_pheromone",
             [](Scenario& s, bool v) { s.base.tree.persist_pheromone = v; });

    add_u32("traffic.sources", [](Scenario& s, std::uint32_t v) { s.base.traffic.sources = v; });
    add_double("traffic.rate_pps", [](Scenario& s, double v) { s.base.traffic.rate_pps = v; });
    add_u32("traffic.payload_bytes",
            [](Scenario& s, std::uint32_t v) { s.base.traffic.payload_bytes = v; });
    add_double("traffic.start", [](Scenario& s, double v) { s.base.traffic.start = v; });
    add_double("traffic.stop_margin",
               [](Scenario& s, double v) { s.base.traffic.stop_margin = v; });
    add_double("traffic.refresh_period",
               [](Scenario& s, double v) { s.base.traffic.refresh_period = v; });
    add_double("traffic.member_join_time",
               [](Scenario& s, double v) { s.base.traffic.member_join_time = v; });

    add_double("transport.per_hop_latency",
               [](Scenario& s, double v) { s.base.transport.per_hop_latency = v; });
    add_double("transport.loss_probability",
               [](Scenario& s, double v) { s.base.transport.loss_probability = v; });
    add_double("transport.density_loss",
               [](Scenario& s, double v) { s.base.transport.density_loss = v; });
    add_double("transport.max_loss", [](Scenario& s, double v) { s.base.transport.max_loss = v; });
    add_double("transport.bandwidth_bps",
               [](Scenario& s, double v) { s.base.transport.bandwidth_bps = v; });
    add_u32("transport.control_bytes",
            [](Scenario& s, std::uint32_t v) { s.base.transport.control_bytes = v; });

    add_double("output.sample_period", [](Scenario& s, double v) { s.base.sample_period = v; });

    m["sweep.node_counts"] = Setter{[](Scenario& s, const std::string& v) {
        std::vector<std::uint32_t> xs;
        for (const auto& item : split_list(v)) {
            std::uint32_t x;
            if (!to_u32(item, x)) return false;
            xs.push_back(x);
        }
        if (xs.empty()) return false;
        s.node_counts = xs;
        return true;
    }};
    m["sweep.group_sizes"] = Setter{[](Scenario& s, const std::string& v) {
        std::vector<std::uint32_t> xs;
        for (const auto& item : split_list(v)) {
            std::uint32_t x;
            if (!to_u32(item, x)) return false;
            xs.push_back(x);
        }
        if (xs.empty()) return false;
        s.group_sizes = xs;
        return true;
    }};
    m["sweep.seeds"] = Setter{[](Scenario& s, const std::string& v) {
        std::vector<std::uint64_t> xs;
        for (const auto& item : split_list(v)) {
            std::uint64_t x;
            if (!to_u64(item, x)) return false;
            xs.push_back(x);
        }
        if (xs.empty()) return false;
        s.seeds = xs;
        return true;
    }};
    m["sweep.protocols"] = Setter{[](Scenario& s, const std::string& v) {
        std::vector<Protocol> xs;
        for (const auto& item : split_list(v)) {
            auto p = protocol_from_string(item);
            if (!p) return false;
            xs.push_back(*p);
        }
        if (xs.empty()) return false;
        s.protocols = xs;
        return true;
    }};

    m["output.csv"] = Setter{[](Scenario& s, const std::string& v) {
        if (v.empty()) return false;
        s.csv_name = v;
        return true;
    }};
    add_bool("output.trace", [](Scenario& s, bool v) { s.trace = v; });
    add_bool("output.convergence", [](Scenario& s, bool v) { s.convergence_dump = v; });
    add_bool("output.figures", [](Scenario& s, bool v) { s.figures = v; });

    return m;
}

} // namespace

Scenario parse_scenario_text(const std::string& text) {
    static const std::map<std::string, Setter> setters = make_setters();
    Scenario s;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            std::ostringstream err;
            err << "line " << lineno << ": expected 'section.key = value', got '" << line << "'";
            throw ConfigError(err.str());
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        auto it = setters.find(key);
        if (it == setters.end()) {
            std::ostringstream err;
            err << "line " << lineno << ": unknown key '" << key << "'";
            throw ConfigError(err.str());
        }
        if (!it->second.apply(s, value)) {
            std::ostringstream err;
            err << "line " << lineno << ": bad value '" << value << "' for " << key;
            throw ConfigError(err.str());
        }
    }
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_text(buf.str());
}

std::vector<std::string> Scenario::validate() const {
    std::vector<std::string> out;
    auto collect = [&out](const std::string& msgs) {
        std::stringstream ss(msgs);
        std::string item;
        while (std::getline(ss, item, ';')) {
            item = trim(item);
            if (!item.empty()) out.push_back(item);
        }
    };
    collect(base.world.validate());
    collect(base.cluster.validate());
    collect(base.tree.params.validate());
    collect(base.traffic.validate());
    collect(base.transport.validate());
    if (node_counts.empty()) out.push_back("sweep.node_counts must be nonempty");
    if (group_sizes.empty()) out.push_back("sweep.group_sizes must be nonempty");
    if (seeds.empty()) out.push_back("sweep.seeds must be nonempty");
    if (protocols.empty()) out.push_back("sweep.protocols must be nonempty");
    for (std::uint32_t n : node_counts)
        if (base.traffic.sources + *std::max_element(group_sizes.begin(), group_sizes.end()) > n)
            out.push_back("sweep: sources + max group_size exceeds node count " +
                          std::to_string(n));
    if (base.sample_period < 0.0) out.push_back("output.sample_period must be >= 0");
    return out;
}

std::string describe_scenario(const Scenario& s) {
    std::ostringstream out;
    const auto& b = s.base;
    out << "world.area_width = " << b.world.area_width << '\n'
        << "world.area_height = " << b.world.area_height << '\n'
        << "world.radio_range = " << b.world.radio_range << '\n'
        << "world.n_nodes = " << b.world.n_nodes << '\n'
        << "world.min_speed = " << b.world.min_speed << '\n'
        << "world.max_speed = " << b.world.max_speed << '\n'
        << "world.pause_time = " << b.world.pause_time << '\n'
        << "world.sim_time = " << b.world.sim_time << '\n'
        << "world.tick = " << b.world.tick << '\n'
        << "world.rng_seed = " << b.world.rng_seed << '\n'
        << "protocol.k_hops = " << b.world.k_hops << '\n'
        << "protocol.threshold_t = " << b.cluster.threshold_T << '\n'
        << "protocol.member_base_period = " << b.cluster.member_base_period << '\n'
        << "protocol.leader_beacon_period = " << b.cluster.leader_beacon_period << '\n'
        << "protocol.join_timeout = " << b.cluster.join_timeout << '\n'
        << "protocol.missed_beacons = " << b.cluster.missed_beacons << '\n'
        << "ants.alpha = " << b.tree.params.alpha << '\n'
        << "ants.beta = " << b.tree.params.beta << '\n'
        << "ants.rho = " << b.tree.params.rho << '\n'
        << "ants.q = " << b.tree.params.q << '\n'
        << "ants.n_ants = " << b.tree.params.n_ants << '\n'
        << "ants.max_iterations = " << b.tree.params.max_iterations << '\n'
        << "ants.time_limit = " << b.tree.params.time_limit << '\n'
        << "ants.k_paths = " << b.tree.params.backup_paths << '\n'
        << "ants.delay_bound = " << b.tree.params.delay_bound << '\n'
        << "ants.delay_penalty = " << b.tree.params.delay_penalty << '\n'
        << "ants.tau0 = " << b.tree.params.tau0 << '\n'
        << "ants.tau_min = " << b.tree.params.tau_min << '\n'
        << "ants.deposit = "
        << (b.tree.params.deposit == DepositPolicy::IterationBest ? "best" : "all") << '\n'
        << "ants.edge_metric = " << (b.tree.euclidean_cost ? "euclid" : "hop") << '\n'
        << "ants.persist_pheromone = " << (b.tree.persist_pheromone ? "true" : "false") << '\n'
        << "traffic.sources = " << b.traffic.sources << '\n'
        << "traffic.rate_pps = " << b.traffic.rate_pps << '\n'
        << "traffic.payload_bytes = " << b.traffic.payload_bytes << '\n'
        << "traffic.start = " << b.traffic.start << '\n'
        << "traffic.stop_margin = " << b.traffic.stop_margin << '\n'
        << "traffic.refresh_period = " << b.traffic.refresh_period << '\n'
        << "traffic.member_join_time = " << b.traffic.member_join_time << '\n'
        << "transport.per_hop_latency = " << b.transport.per_hop_latency << '\n'
        << "transport.loss_probability = " << b.transport.loss_probability << '\n'
        << "transport.density_loss = " << b.transport.density_loss << '\n'
        << "transport.max_loss = " << b.transport.max_loss << '\n'
        << "transport.bandwidth_bps = " << b.transport.bandwidth_bps << '\n'
        << "transport.control_bytes = " << b.transport.control_bytes << '\n';
    out << "sweep.node_counts = ";
    for (std::size_t i = 0; i < s.node_counts.size(); ++i)
        out << (i ? "," : "") << s.node_counts[i];
    out << "\nsweep.group_sizes = ";
    for (std::size_t i = 0; i < s.group_sizes.size(); ++i)
        out << (i ? "," : "") << s.group_sizes[i];
    out << "\nsweep.seeds = ";
    for (std::size_t i = 0; i < s.seeds.size(); ++i) out << (i ? "," : "") << s.seeds[i];
    out << "\nsweep.protocols = ";
    for (std::size_t i = 0; i < s.protocols.size(); ++i)
        out << (i ? "," : "") << to_string(s.protocols[i]);
    out << "\noutput.csv = " << s.csv_name << '\n'
        << "output.trace = " << (s.trace ? "true" : "false") << '\n'
        << "output.convergence = " << (s.convergence_dump ? "true" : "false") << '\n'
        << "output.figures = " << (s.figures ? "true" : "false") << '\n'
        << "output.sample_period = " << s.base.sample_period << '\n';
    return out.str();
}

void apply_seed_offset(Scenario& s, std::int64_t offset) {
    for (auto& seed : s.seeds) seed = static_cast<std::uint64_t>(static_cast<std::int64_t>(seed) + offset);
}

} // namespace aamrp
