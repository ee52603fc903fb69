#include "aamrp/ant.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace aamrp {

void PheromoneTable::evaporate(double rho) {
    assert(rho > 0.0 && rho < 1.0);
    for (auto& [edge, tau] : tau_) tau = std::max(tau_min_, (1.0 - rho) * tau);
}

std::string AntParams::validate() const {
    std::ostringstream bad;
    if (alpha < 0.0) bad << "ants.alpha must be >= 0; ";
    if (beta < 0.0) bad << "ants.beta must be >= 0; ";
    if (!(rho > 0.0 && rho < 1.0)) bad << "ants.rho must be in (0,1); ";
    if (q <= 0.0) bad << "ants.q must be > 0; ";
    if (n_ants == 0) bad << "ants.n_ants must be >= 1; ";
    if (max_iterations == 0) bad << "ants.max_iterations must be >= 1; ";
    if (backup_paths == 0) bad << "ants.k_paths must be >= 1; ";
    if (delay_penalty <= 1.0) bad << "ants.delay_penalty must be > 1; ";
    if (tau0 <= 0.0) bad << "ants.tau0 must be > 0; ";
    if (tau_min <= 0.0 || tau_min > tau0) bad << "ants.tau_min must be in (0, tau0]; ";
    if (delay_bound <= 0.0) bad << "ants.delay_bound must be > 0; ";
    if (time_limit < 0.0) bad << "ants.time_limit must be >= 0; ";
    return bad.str();
}

double next_node_probability(NodeId i, NodeId j, const PheromoneTable& tau,
                             const std::function<double(NodeId, NodeId)>& eta,
                             const AntParams& params, std::span<const NodeId> allowed) {
    bool j_allowed = false;
    double denom = 0.0;
    double num = 0.0;
    for (NodeId u : allowed) {
        const double w =
            std::pow(tau.get(i, u), params.alpha) * std::pow(eta(i, u), params.beta);
        denom += w;
        if (u == j) {
            j_allowed = true;
            num = w;
        }
    }
    if (!j_allowed) return 0.0;
    // tau >= tau_min > 0 and eta > 0 keep the denominator positive
    assert(denom > 0.0);
    return num / denom;
}

void deposit(PheromoneTable& tau, std::span<const NodeId> path_nodes,
             std::span<const double> node_costs, double q) {
    assert(path_nodes.size() == node_costs.size());
    for (std::size_t i = 0; i + 1 < path_nodes.size(); ++i) {
        const double diff = node_costs[i + 1] - node_costs[i];
        const double lm = diff * diff + 1.0;
        tau.deposit_edge(path_nodes[i], path_nodes[i + 1], q / lm);
    }
}

void deposit(PheromoneTable& tau, const WeightedGraph& g, const Path& ant_path, double q) {
    std::vector<double> costs(ant_path.nodes.size(), 0.0);
    for (std::size_t i = 0; i + 1 < ant_path.nodes.size(); ++i) {
        const auto* e = g.find_edge(ant_path.nodes[i], ant_path.nodes[i + 1]);
        costs[i + 1] = costs[i] + e->cost;
    }
    deposit(tau, ant_path.nodes, costs, q);
}

double tree_cost(const WeightedGraph& g, std::span<const Path> chosen, double delay_bound,
                 double delay_penalty) {
    std::set<std::pair<NodeId, NodeId>> edges;
    double cost = 0.0;
    for (const Path& p : chosen) {
        for (std::size_t i = 0; i + 1 < p.nodes.size(); ++i) {
            auto key = std::make_pair(p.nodes[i], p.nodes[i + 1]);
            if (!edges.insert(key).second) continue;
            cost += g.find_edge(key.first, key.second)->cost;
        }
        if (p.delay > delay_bound) cost += (delay_penalty - 1.0) * p.cost;
    }
    return cost;
}

namespace {

// Prefix trie over one destination's backup paths. An ant walks the trie,
// choosing among children with the pheromone/heuristic rule; every leaf is
// exactly one backup path.
struct PathTrie {
    struct Node {
        std::vector<std::pair<NodeId, std::uint32_t>> children; // (graph node, trie index)
        std::int32_t path_index = -1; // leaf: index into the PathSet
    };
    std::vector<Node> nodes{Node{}};

    void insert(const Path& p, std::uint32_t path_index) {
        std::uint32_t at = 0;
        for (std::size_t i = 1; i < p.nodes.size(); ++i) {
            const NodeId next = p.nodes[i];
            std::uint32_t child = 0;
            bool found = false;
            for (auto& [id, idx] : nodes[at].children)
                if (id == next) { child = idx; found = true; break; }
            if (!found) {
                child = static_cast<std::uint32_t>(nodes.size());
                nodes[at].children.emplace_back(next, child);
                nodes.push_back(Node{});
            }
            at = child;
        }
        nodes[at].path_index = static_cast<std::int32_t>(path_index);
    }
};

std::uint32_t walk_trie(const PathTrie& trie, NodeId source, const PheromoneTable& tau,
                        const std::function<double(NodeId, NodeId)>& eta, const AntParams& params,
                        Rng& rng, const DecisionProbe& probe) {
    std::uint32_t at = 0;
    NodeId here = source;
    while (trie.nodes[at].path_index < 0 || !trie.nodes[at].children.empty()) {
        const auto& children = trie.nodes[at].children;
        assert(!children.empty());
        if (children.size() == 1) {
            // no decision to make
            here = children[0].first;
            at = children[0].second;
            continue;
        }
        std::vector<NodeId> allowed;
        std::vector<double> weight;
        allowed.reserve(children.size());
        weight.reserve(children.size());
        double denom = 0.0;
        for (const auto& [id, idx] : children) {
            const double w =
                std::pow(tau.get(here, id), params.alpha) * std::pow(eta(here, id), params.beta);
            allowed.push_back(id);
            weight.push_back(w);
            denom += w;
        }
        for (double& w : weight) w /= denom;
        if (probe) probe(here, allowed, weight);
        double r = rng.uniform01();
        std::size_t pick = weight.size() - 1;
        for (std::size_t c = 0; c < weight.size(); ++c) {
            r -= weight[c];
            if (r < 0.0) { pick = c; break; }
        }
        here = children[pick].first;
        at = children[pick].second;
    }
    return static_cast<std::uint32_t>(trie.nodes[at].path_index);
}

} // namespace

MulticastTree construct_tree(const WeightedGraph& g, NodeId source,
                             std::span<const NodeId> destinations, const AntParams& params,
                             Rng& rng, const ConstructOptions& opts,
                             std::vector<NodeId>* dropped_out) {
    if (destinations.empty()) throw EmptyDestinationSet();

    // Step 1: backup path sets via K shortest paths; unreachable leaders are
    // dropped this round and retried at the next refresh.
    std::vector<PathSet> sets;
    for (NodeId m : destinations) {
        PathSet ps;
        ps.destination = m;
        ps.paths = k_shortest_paths(g, source, m, params.backup_paths);
        if (ps.paths.empty()) {
            if (dropped_out) dropped_out->push_back(m);
            continue;
        }
        sets.push_back(std::move(ps));
    }
    MulticastTree best;
    if (sets.empty()) return best; // every destination unreachable

    PheromoneTable local_tau(params.tau0, params.tau_min);
    PheromoneTable& tau = opts.persistent_tau ? *opts.persistent_tau : local_tau;
    std::vector<PathTrie> tries(sets.size());
    for (std::size_t d = 0; d < sets.size(); ++d) {
        for (std::uint32_t p = 0; p < sets[d].paths.size(); ++p) {
            tries[d].insert(sets[d].paths[p], p);
            const auto& nodes = sets[d].paths[p].nodes;
            for (std::size_t i = 0; i + 1 < nodes.size(); ++i) tau.touch(nodes[i], nodes[i + 1]);
        }
    }

    auto eta = [&g](NodeId i, NodeId j) {
        const auto* e = g.find_edge(i, j);
        assert(e != nullptr);
        return e->cost > 0.0 ? 1.0 / e->cost : 1.0;
    };

    double best_cost = std::numeric_limits<double>::infinity();
    std::vector<std::uint32_t> best_combo;
    const auto started = std::chrono::steady_clock::now();

    for (std::uint32_t iter = 0; iter < params.max_iterations; ++iter) {
        if (params.time_limit > 0.0) {
            const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - started;
            if (elapsed.count() > params.time_limit) break;
        }
        double iter_best_cost = std::numeric_limits<double>::infinity();
        std::vector<std::uint32_t> iter_best_combo;
        std::vector<std::vector<std::uint32_t>> ant_combos(params.n_ants);
        for (std::uint32_t ant = 0; ant < params.n_ants; ++ant) {
            std::vector<std::uint32_t> combo(sets.size());
            std::vector<Path> chosen(sets.size());
            for (std::size_t d = 0; d < sets.size(); ++d) {
                combo[d] = walk_trie(tries[d], source, tau, eta, params, rng, opts.probe);
                chosen[d] = sets[d].paths[combo[d]];
            }
            const double cost = tree_cost(g, chosen, params.delay_bound, params.delay_penalty);
            if (cost < iter_best_cost) {
                iter_best_cost = cost;
                iter_best_combo = combo;
            }
            ant_combos[ant] = std::move(combo);
        }
        tau.evaporate(params.rho);
        if (params.deposit == DepositPolicy::IterationBest) {
            for (std::size_t d = 0; d < sets.size(); ++d)
                deposit(tau, g, sets[d].paths[iter_best_combo[d]], params.q);
        } else {
            for (const auto& combo : ant_combos)
                for (std::size_t d = 0; d < sets.size(); ++d)
                    deposit(tau, g, sets[d].paths[combo[d]], params.q);
        }
        if (iter_best_cost < best_cost) {
            best_cost = iter_best_cost;
            best_combo = iter_best_combo;
        }
        if (opts.convergence) opts.convergence(iter, best_cost);
    }

    best.total_cost = best_cost;
    std::set<std::pair<NodeId, NodeId>> edge_set;
    for (std::size_t d = 0; d < sets.size(); ++d) {
        const Path& p = sets[d].paths[best_combo[d]];
        best.paths.push_back(p);
        best.destinations.push_back(sets[d].destination);
        best.delays.push_back(p.delay);
        for (std::size_t i = 0; i + 1 < p.nodes.size(); ++i)
            edge_set.insert({p.nodes[i], p.nodes[i + 1]});
    }
    best.edges.assign(edge_set.begin(), edge_set.end());
    return best;
}

} // namespace aamrp
