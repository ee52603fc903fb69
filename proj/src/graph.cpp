#include "aamrp/graph.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <queue>
#include <set>

namespace aamrp {

void WeightedGraph::add_edge(NodeId from, NodeId to, double cost, double delay) {
    assert(from != to);
    assert(std::isfinite(cost) && cost >= 0.0);
    out[from].push_back(Edge{to, cost, delay});
}

void WeightedGraph::add_undirected(NodeId a, NodeId b, double cost, double delay) {
    add_edge(a, b, cost, delay);
    add_edge(b, a, cost, delay);
}

const WeightedGraph::Edge* WeightedGraph::find_edge(NodeId from, NodeId to) const {
    for (const Edge& e : out[from])
        if (e.to == to) return &e;
    return nullptr;
}

WeightedGraph snapshot_graph(const std::vector<Position>& positions, const Adjacency& adj,
                             double radio_range, double per_hop_delay, bool euclidean_cost) {
    WeightedGraph g(static_cast<std::uint32_t>(adj.size()));
    for (NodeId i = 0; i < adj.size(); ++i) {
        for (NodeId j : adj[i]) {
            if (j < i) continue; // each undirected link once
            double cost = 1.0;
            if (euclidean_cost) cost = distance(positions[i], positions[j]) / radio_range;
            g.add_undirected(i, j, cost, per_hop_delay);
        }
    }
    return g;
}

bool path_less(const Path& a, const Path& b) {
    if (a.cost != b.cost) return a.cost < b.cost;
    return std::lexicographical_compare(a.nodes.begin(), a.nodes.end(), b.nodes.begin(),
                                        b.nodes.end());
}

namespace {

// Dijkstra returning the (cost, lex)-minimal path from src to dst, honoring
// banned nodes and banned directed edges. Paths ride the priority queue so
// equal-cost alternatives settle in lexicographic order.
struct QueueEntry {
    Path path;
    bool operator>(const QueueEntry& other) const { return path_less(other.path, path); }
};

std::optional<Path> dijkstra_lex(const WeightedGraph& g, NodeId src, NodeId dst,
                                 const std::set<std::pair<NodeId, NodeId>>& banned_edges,
                                 const std::vector<char>& banned_node) {
    if (banned_node[src]) return std::nullopt;
    std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<>> pq;
    std::vector<char> settled(g.size(), 0);
    pq.push(QueueEntry{Path{{src}, 0.0, 0.0}});
    while (!pq.empty()) {
        Path p = pq.top().path;
        pq.pop();
        const NodeId u = p.nodes.back();
        if (settled[u]) continue;
        settled[u] = 1;
        if (u == dst) return p;
        for (const auto& e : g.out[u]) {
            if (settled[e.to] || banned_node[e.to]) continue;
            if (banned_edges.count({u, e.to})) continue;
            QueueEntry next{p};
            next.path.nodes.push_back(e.to);
            next.path.cost += e.cost;
            next.path.delay += e.delay;
            pq.push(std::move(next));
        }
    }
    return std::nullopt;
}

} // namespace

std::vector<Path> k_shortest_paths(const WeightedGraph& g, NodeId s, NodeId m, std::uint32_t K) {
    std::vector<Path> found;
    if (K == 0) return found;

    const std::set<std::pair<NodeId, NodeId>> no_edges;
    std::vector<char> no_nodes(g.size(), 0);
    auto first = dijkstra_lex(g, s, m, no_edges, no_nodes);
    if (!first) return found;
    found.push_back(*first);

    // Yen: spur candidates ordered by the same (cost, lex) total order.
    auto cmp = [](const Path& a, const Path& b) {
        if (a.cost != b.cost) return a.cost < b.cost;
        return a.nodes < b.nodes;
    };
    std::set<Path, decltype(cmp)> candidates(cmp);

    while (found.size() < K) {
        const Path& prev = found.back();
        for (std::size_t i = 0; i + 1 < prev.nodes.size(); ++i) {
            const NodeId spur = prev.nodes[i];

            std::set<std::pair<NodeId, NodeId>> banned_edges;
            for (const Path& p : found) {
                if (p.nodes.size() > i &&
                    std::equal(p.nodes.begin(), p.nodes.begin() + i + 1, prev.nodes.begin())) {
                    if (p.nodes.size() > i + 1) banned_edges.insert({p.nodes[i], p.nodes[i + 1]});
                }
            }
            std::vector<char> banned_node(g.size(), 0);
            for (std::size_t j = 0; j < i; ++j) banned_node[prev.nodes[j]] = 1;

            auto spur_path = dijkstra_lex(g, spur, m, banned_edges, banned_node);
            if (!spur_path) continue;

            Path total;
            total.nodes.assign(prev.nodes.begin(), prev.nodes.begin() + i);
            total.nodes.insert(total.nodes.end(), spur_path->nodes.begin(),
                               spur_path->nodes.end());
            for (std::size_t j = 0; j < i; ++j) {
                const auto* e = g.find_edge(prev.nodes[j], prev.nodes[j + 1]);
                total.cost += e->cost;
                total.delay += e->delay;
            }
            total.cost += spur_path->cost;
            total.delay += spur_path->delay;

            bool dup = false;
            for (const Path& p : found)
                if (p.nodes == total.nodes) { dup = true; break; }
            if (!dup) candidates.insert(std::move(total));
        }
        if (candidates.empty()) break;
        found.push_back(*candidates.begin());
        candidates.erase(candidates.begin());
    }
    return found;
}

double apply_delay_penalty(const Path& path, double delay_bound, double penalty) {
    return path.delay > delay_bound ? path.cost * penalty : path.cost;
}

} // namespace aamrp
