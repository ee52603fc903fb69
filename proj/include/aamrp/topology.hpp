#pragma once

#include <vector>

#include "aamrp/types.hpp"

namespace aamrp {

// Undirected adjacency lists, index = NodeId.
using Adjacency = std::vector<std::vector<NodeId>>;

// All j != id within range of positions[id]. The boundary is inclusive:
// distance == range counts as connected.
std::vector<NodeId> neighbors(NodeId id, const std::vector<Position>& positions, double range);

// Pairwise snapshot of the whole network.
Adjacency build_adjacency(const std::vector<Position>& positions, double range);

// Nodes reachable from id within k edges, excluding id itself. Sorted.
std::vector<NodeId> k_hop_set(NodeId id, const Adjacency& adj, std::uint32_t k);

// Inter-connectivity of a node: the size of its k-hop neighborhood.
std::uint32_t connectivity(NodeId id, const Adjacency& adj, std::uint32_t k);

// BFS hop distance from src to every node; kNoHops where unreachable.
inline constexpr std::uint32_t kNoHops = 0xffffffffu;
std::vector<std::uint32_t> hop_distances(NodeId src, const Adjacency& adj);

} // namespace aamrp
