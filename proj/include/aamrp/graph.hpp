#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "aamrp/topology.hpp"
#include "aamrp/types.hpp"

namespace aamrp {

// Directed weighted graph snapshot used for tree construction.
struct WeightedGraph {
    struct Edge {
        NodeId to = kNoNode;
        double cost = 1.0;
        double delay = 0.0; // seconds
    };

    explicit WeightedGraph(std::uint32_t n) : out(n) {}

    std::uint32_t size() const { return static_cast<std::uint32_t>(out.size()); }

    // Self-loops are rejected; costs must be finite and non-negative.
    void add_edge(NodeId from, NodeId to, double cost, double delay);
    void add_undirected(NodeId a, NodeId b, double cost, double delay);

    const Edge* find_edge(NodeId from, NodeId to) const;

    std::vector<std::vector<Edge>> out;
};

// Builds the snapshot graph from a connectivity snapshot. cost 1 per hop by
// default; with euclidean_cost the cost is the link length in units of the
// radio range. delay is the transport's per-hop latency.
WeightedGraph snapshot_graph(const std::vector<Position>& positions, const Adjacency& adj,
                             double radio_range, double per_hop_delay, bool euclidean_cost);

struct Path {
    std::vector<NodeId> nodes; // starts at the source, ends at the destination
    double cost = 0.0;
    double delay = 0.0;

    std::size_t hops() const { return nodes.empty() ? 0 : nodes.size() - 1; }
};

// Total order used everywhere a deterministic tie-break is needed:
// by cost, then lexicographic node sequence.
bool path_less(const Path& a, const Path& b);

// K lowest-cost loop-free paths from s to m, sorted by (cost, lex node
// sequence); fewer when the graph admits fewer. Empty when m is unreachable.
std::vector<Path> k_shortest_paths(const WeightedGraph& g, NodeId s, NodeId m, std::uint32_t K);

// Effective cost after the delay constraint: violating paths keep flowing but
// cost penalty times more, so they are likely to be rejected downstream.
double apply_delay_penalty(const Path& path, double delay_bound, double penalty);

} // namespace aamrp
