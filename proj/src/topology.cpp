#include "aamrp/topology.hpp"

#include <algorithm>
#include <deque>

namespace aamrp {

std::vector<NodeId> neighbors(NodeId id, const std::vector<Position>& positions, double range) {
    std::vector<NodeId> out;
    for (NodeId j = 0; j < positions.size(); ++j) {
        if (j == id) continue;
        if (distance(positions[id], positions[j]) <= range) out.push_back(j);
    }
    return out;
}

Adjacency build_adjacency(const std::vector<Position>& positions, double range) {
    const NodeId n = static_cast<NodeId>(positions.size());
    Adjacency adj(n);
    for (NodeId i = 0; i < n; ++i) {
        for (NodeId j = i + 1; j < n; ++j) {
            if (distance(positions[i], positions[j]) <= range) {
                adj[i].push_back(j);
                adj[j].push_back(i);
            }
        }
    }
    return adj;
}

std::vector<NodeId> k_hop_set(NodeId id, const Adjacency& adj, std::uint32_t k) {
    std::vector<std::uint32_t> depth(adj.size(), kNoHops);
    std::deque<NodeId> frontier{id};
    depth[id] = 0;
    std::vector<NodeId> out;
    while (!frontier.empty()) {
        const NodeId u = frontier.front();
        frontier.pop_front();
        if (depth[u] == k) continue;
        for (NodeId v : adj[u]) {
            if (depth[v] != kNoHops) continue;
            depth[v] = depth[u] + 1;
            out.push_back(v);
            frontier.push_back(v);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::uint32_t connectivity(NodeId id, const Adjacency& adj, std::uint32_t k) {
    return static_cast<std::uint32_t>(k_hop_set(id, adj, k).size());
}

std::vector<std::uint32_t> hop_distances(NodeId src, const Adjacency& adj) {
    std::vector<std::uint32_t> dist(adj.size(), kNoHops);
    std::deque<NodeId> frontier{src};
    dist[src] = 0;
    while (!frontier.empty()) {
        const NodeId u = frontier.front();
        frontier.pop_front();
        for (NodeId v : adj[u]) {
            if (dist[v] != kNoHops) continue;
            dist[v] = dist[u] + 1;
            frontier.push_back(v);
        }
    }
    return dist;
}

} // namespace aamrp
