#include "oracles.hpp"

#include <algorithm>
#include <limits>
#include <set>

namespace aamrp::oracle {

namespace {

void dfs_paths(const WeightedGraph& g, NodeId at, NodeId t, std::vector<char>& on_path,
               Path& current, std::vector<Path>& out) {
    if (at == t) {
        out.push_back(current);
        return;
    }
    for (const auto& e : g.out[at]) {
        if (on_path[e.to]) continue;
        on_path[e.to] = 1;
        current.nodes.push_back(e.to);
        current.cost += e.cost;
        current.delay += e.delay;
        dfs_paths(g, e.to, t, on_path, current, out);
        current.delay -= e.delay;
        current.cost -= e.cost;
        current.nodes.pop_back();
        on_path[e.to] = 0;
    }
}

} // namespace

std::vector<Path> enumerate_simple_paths(const WeightedGraph& g, NodeId s, NodeId t) {
    std::vector<Path> out;
    std::vector<char> on_path(g.size(), 0);
    Path current;
    current.nodes.push_back(s);
    on_path[s] = 1;
    dfs_paths(g, s, t, on_path, current, out);
    std::sort(out.begin(), out.end(), [](const Path& a, const Path& b) {
        if (a.cost != b.cost) return a.cost < b.cost;
        return a.nodes < b.nodes;
    });
    return out;
}

std::vector<NodeId> reachable_within(NodeId id, const Adjacency& adj, std::uint32_t k) {
    const std::size_t n = adj.size();
    // boolean adjacency matrix
    std::vector<std::vector<char>> a(n, std::vector<char>(n, 0));
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j : adj[i]) a[i][j] = 1;

    // reach = union of a^1 .. a^k rows for id
    std::vector<std::vector<char>> power = a;
    std::vector<char> reach(n, 0);
    for (std::uint32_t step = 1; step <= k; ++step) {
        if (step > 1) {
            std::vector<std::vector<char>> next(n, std::vector<char>(n, 0));
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t m = 0; m < n; ++m)
                    if (power[i][m])
                        for (std::size_t j = 0; j < n; ++j)
                            if (a[m][j]) next[i][j] = 1;
            power = next;
        }
        for (std::size_t j = 0; j < n; ++j)
            if (power[id][j]) reach[j] = 1;
    }
    std::vector<NodeId> out;
    for (NodeId j = 0; j < n; ++j)
        if (reach[j] && j != id) out.push_back(j);
    return out;
}

double combo_cost(const WeightedGraph& g, const std::vector<Path>& chosen, double delay_bound,
                  double delay_penalty) {
    std::set<std::pair<NodeId, NodeId>> seen;
    double cost = 0.0;
    for (const Path& p : chosen) {
        for (std::size_t i = 0; i + 1 < p.nodes.size(); ++i) {
            if (!seen.insert({p.nodes[i], p.nodes[i + 1]}).second) continue;
            cost += g.find_edge(p.nodes[i], p.nodes[i + 1])->cost;
        }
        if (p.delay > delay_bound) cost += (delay_penalty - 1.0) * p.cost;
    }
    return cost;
}

BestCombo best_tree_exhaustive(const WeightedGraph& g,
                               const std::vector<std::vector<Path>>& path_sets,
                               double delay_bound, double delay_penalty) {
    BestCombo best;
    best.cost = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> pick(path_sets.size(), 0);
    while (true) {
        std::vector<Path> chosen;
        chosen.reserve(path_sets.size());
        for (std::size_t d = 0; d < path_sets.size(); ++d) chosen.push_back(path_sets[d][pick[d]]);
        const double cost = combo_cost(g, chosen, delay_bound, delay_penalty);
        if (cost < best.cost) {
            best.cost = cost;
            best.pick = pick;
        }
        // odometer increment
        std::size_t d = 0;
        for (; d < path_sets.size(); ++d) {
            if (++pick[d] < path_sets[d].size()) break;
            pick[d] = 0;
        }
        if (d == path_sets.size()) break;
    }
    return best;
}

WeightedGraph random_graph(std::uint32_t n, double edge_prob, Rng& rng, double max_cost,
                           double max_delay) {
    WeightedGraph g(n);
    for (NodeId i = 0; i < n; ++i) {
        for (NodeId j = i + 1; j < n; ++j) {
            if (!rng.bernoulli(edge_prob)) continue;
            const double cost = 1.0 + static_cast<double>(rng.uniform_index(
                                          static_cast<std::uint64_t>(max_cost)));
            const double delay = rng.uniform(0.0, max_delay);
            g.add_undirected(i, j, cost, delay);
        }
    }
    return g;
}

Adjacency random_adjacency(std::uint32_t n, double edge_prob, Rng& rng) {
    Adjacency adj(n);
    for (NodeId i = 0; i < n; ++i) {
        for (NodeId j = i + 1; j < n; ++j) {
            if (!rng.bernoulli(edge_prob)) continue;
            adj[i].push_back(j);
            adj[j].push_back(i);
        }
    }
    return adj;
}

} // namespace aamrp::oracle
