#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "aamrp/graph.hpp"
#include "aamrp/rng.hpp"

namespace aamrp {

// Per-directed-edge pheromone intensities. Missing edges read as tau0;
// evaporation keeps every stored value at or above the floor.
class PheromoneTable {
  public:
    PheromoneTable(double tau0, double tau_min) : tau0_(tau0), tau_min_(tau_min) {}

    double get(NodeId i, NodeId j) const {
        auto it = tau_.find({i, j});
        return it == tau_.end() ? tau0_ : it->second;
    }

    void set(NodeId i, NodeId j, double v) { tau_[{i, j}] = v; }

    void evaporate(double rho);                              // tau <- max(floor, (1-rho) tau)
    void deposit_edge(NodeId i, NodeId j, double amount) {   // tau <- tau + amount
        tau_[{i, j}] = get(i, j) + amount;
    }

    double tau0() const { return tau0_; }
    double tau_min() const { return tau_min_; }
    const std::map<std::pair<NodeId, NodeId>, double>& entries() const { return tau_; }

    // Registers an edge at tau0 so evaporation touches it.
    void touch(NodeId i, NodeId j) {
        tau_.emplace(std::pair<NodeId, NodeId>{i, j}, tau0_);
    }

  private:
    double tau0_;
    double tau_min_;
    std::map<std::pair<NodeId, NodeId>, double> tau_;
};

enum class DepositPolicy { IterationBest, AllAnts };

struct AntParams {
    double alpha = 1.0;          // pheromone exponent
    double beta = 2.0;           // heuristic exponent
    double rho = 0.1;            // evaporation rate in (0,1)
    double q = 1.0;              // deposit constant
    std::uint32_t n_ants = 10;
    std::uint32_t max_iterations = 50;
    double time_limit = 0.0;     // seconds of CPU budget; 0 disables
    std::uint32_t backup_paths = 3; // K backup paths per destination
    double delay_bound = 0.5;    // seconds
    double delay_penalty = 10.0; // multiplicative cost factor, > 1
    double tau0 = 1.0;
    double tau_min = 0.01;
    DepositPolicy deposit = DepositPolicy::IterationBest;

    std::string validate() const;
};

// One source-to-destination path per destination plus the union edge set.
struct MulticastTree {
    std::vector<Path> paths;       // one per destination, destination order
    std::vector<NodeId> destinations;
    std::vector<std::pair<NodeId, NodeId>> edges; // union of path edges, sorted
    double total_cost = 0.0;       // penalized cost of the union edge set
    std::vector<double> delays;    // per-destination path delay
};

// Backup path sets, one ordered list per destination (Step 1).
struct PathSet {
    NodeId destination = kNoNode;
    std::vector<Path> paths; // sorted by (cost, lex), at most K
};

struct EmptyDestinationSet : std::invalid_argument {
    EmptyDestinationSet() : std::invalid_argument("destination set is empty") {}
};

// Probability of an ant at node i stepping to j given the allowed next nodes.
// Zero when j is not allowed; over the allowed set the values sum to 1.
double next_node_probability(NodeId i, NodeId j, const PheromoneTable& tau,
                             const std::function<double(NodeId, NodeId)>& eta,
                             const AntParams& params, std::span<const NodeId> allowed);

// Retracing deposit along one ant path. node_costs[i] is the accumulated
// path cost at path_nodes[i]; each traversed edge gains
// q / ((C_j - C_i)^2 + 1).
void deposit(PheromoneTable& tau, std::span<const NodeId> path_nodes,
             std::span<const double> node_costs, double q);

// Convenience overload computing accumulated costs from the graph.
void deposit(PheromoneTable& tau, const WeightedGraph& g, const Path& ant_path, double q);

// Penalized cost of choosing one path per destination: union edge cost plus
// the delay surcharge of every violating chosen path.
double tree_cost(const WeightedGraph& g, std::span<const Path> chosen, double delay_bound,
                 double delay_penalty);

// Observer for every ant decision; used by the probability-normalization
// checks. Receives the allowed candidates and their probabilities.
using DecisionProbe =
    std::function<void(NodeId at, std::span<const NodeId> allowed, std::span<const double> prob)>;

// Optional per-iteration best-cost sink for convergence dumps.
using ConvergenceSink = std::function<void(std::uint32_t iteration, double best_cost)>;

struct ConstructOptions {
    DecisionProbe probe;           // may be empty
    ConvergenceSink convergence;   // may be empty
    PheromoneTable* persistent_tau = nullptr; // reused across refreshes when set
};

// Full ant loop: backup path sets, per-iteration ant path selection over the
// backup sets, evaporation, iteration-best deposit; returns the best tree
// seen. Unreachable destinations are dropped (reported via dropped_out).
// Throws EmptyDestinationSet when no destination was given.
MulticastTree construct_tree(const WeightedGraph& g, NodeId source,
                             std::span<const NodeId> destinations, const AntParams& params,
                             Rng& rng, const ConstructOptions& opts = {},
                             std::vector<NodeId>* dropped_out = nullptr);

} // namespace aamrp
