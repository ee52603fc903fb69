#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "aamrp/ant.hpp"
#include "aamrp/cluster.hpp"
#include "aamrp/events.hpp"
#include "aamrp/metrics.hpp"
#include "aamrp/rng.hpp"
#include "aamrp/topology.hpp"
#include "aamrp/trace.hpp"
#include "aamrp/transport.hpp"
#include "aamrp/world.hpp"

namespace aamrp {

enum class Protocol { Aamrp, Flooding, SharedTree };

const char* to_string(Protocol p);
std::optional<Protocol> protocol_from_string(const std::string& s);

struct TrafficConfig {
    std::uint32_t sources = 1;
    double rate_pps = 4.0;
    std::uint32_t payload_bytes = 512;
    double start = 2.0;           // first CBR packet
    double stop_margin = 1.0;     // CBR stops this long before sim_time (drain time)
    double refresh_period = 5.0;  // MCAST-REQ flood + tree refresh
    double member_join_time = 0.1;

    std::string validate() const;
};

struct TreeConfig {
    AntParams params;
    bool euclidean_cost = false;    // hop-count edge costs by default
    bool persist_pheromone = false; // keep tau across refreshes
};

// Everything one run needs.
struct RunConfig {
    Protocol protocol = Protocol::Aamrp;
    WorldConfig world;
    RangeConfig cluster;
    TreeConfig tree;
    TrafficConfig traffic;
    TransportModel transport;
    std::uint32_t group_size = 1;
    double sample_period = 0.0; // MetricSample cadence; 0 disables
    // Scripted membership (tests, hand-built layouts); overrides group_size
    // when nonempty.
    std::vector<NodeId> pinned_subscribers;
    bool collect_diagnostics = false; // per-packet delivery attribution

    std::string validate() const;
};

// Where expected receipts were lost (diagnostics mode only).
struct DeliveryDiagnostics {
    std::uint64_t missed_tree_leg = 0;    // the member's leader never got the packet
    std::uint64_t missed_local_leg = 0;   // the leader got it, the member did not
    std::uint64_t missed_as_leader = 0;   // the member led its own cluster and missed
    std::uint64_t missed_leader_stale = 0; // subset: that leader had no recent REP at source
};

// Periodic protocol-state sample (MetricSample events).
struct StateSample {
    double time = 0.0;
    std::uint32_t leaders = 0;
    std::uint32_t members = 0;
    std::uint32_t joining = 0;
};

// Per-refresh convergence points of the ant tree search.
struct ConvergencePoint {
    std::uint32_t round = 0;
    std::uint32_t iteration = 0;
    double best_cost = 0.0;
};

class Simulator {
  public:
    // Data-plane state of one node.
    struct ReverseEntry {
        NodeId upstream = kNoNode;
        std::uint32_t round = 0;
        std::uint32_t hops = 0;
    };
    struct ForwarderEntry {
        std::uint32_t round = 0;
        double refreshed = 0.0; // entries age out unless a newer REP renews them
        std::set<NodeId> children;
    };
    struct NodeState {
        MobilityState mobility;
        Rng mobility_rng{0};
        std::unique_ptr<NodeProtocol> proto;
        double busy_until = 0.0; // transmitter serialization

        std::map<NodeId, ReverseEntry> reverse_path;   // keyed by source
        std::map<NodeId, ForwarderEntry> forwarder;    // keyed by source
        std::set<std::pair<NodeId, std::uint32_t>> req_seen;
        std::set<std::uint64_t> data_seen;
        std::set<std::uint64_t> data_tree_forwarded;
        std::set<std::uint64_t> data_local_relayed;
        std::set<std::uint64_t> data_delivered_local;
        std::map<NodeProtocol::TimerKind, std::uint64_t> timer_epoch;
    };

    explicit Simulator(RunConfig cfg, TraceWriter* trace = nullptr);

    // Executes every event up to sim_time. Throws std::invalid_argument on
    // config violations before any event runs.
    void run();

    const RunCounters& counters() const { return counters_; }
    const std::vector<NodeState>& nodes() const { return nodes_; }
    const std::vector<NodeId>& subscribers() const { return subscribers_; }
    const std::vector<NodeId>& sources() const { return sources_; }
    const Adjacency& adjacency();
    const std::vector<StateSample>& samples() const { return samples_; }
    const std::vector<ConvergencePoint>& convergence() const { return convergence_; }
    const std::optional<MulticastTree>& last_tree(NodeId source) const;
    double now() const { return now_; }
    std::uint64_t route_drops() const { return route_drop_count_; }
    DeliveryDiagnostics diagnostics() const; // meaningful after run()

    // Mid-run churn for tests and scenario scripting.
    void schedule_join(NodeId node, double at);
    void schedule_leave(NodeId node, double at);

    // Scripted layout: pins every node's position (and waypoint, so zero-speed
    // worlds stay put). Call before run().
    void place_nodes(const std::vector<Position>& positions);

  private:
    bool is_subscriber(NodeId n) const { return subscriber_set_.count(n) > 0; }
    std::uint32_t own_connectivity(NodeId n);
    void invalidate_adjacency() { adj_valid_ = false; }

    void transmit_control(NodeId from, const ProtocolMessage& msg, bool broadcast,
                          NodeId unicast_to);
    void transmit_data(NodeId from, const DataPacket& p, std::uint32_t data_ttl, NodeId data_dest,
                       bool unicast, NodeId unicast_to);
    std::vector<NodeId> receivers_of(NodeId from, bool broadcast, NodeId unicast_to);
    double arrange_transmission(NodeId from, std::uint32_t bytes);

    void process_actions(NodeId node, NodeProtocol::Actions&& actions);
    void arm_timer(NodeId node, NodeProtocol::TimerKind kind, double period);

    void handle(const Event& e);
    void on_mobility_tick();
    void on_timer(const TimerFire& t);
    void on_traffic(const TrafficGeneration& t);
    void on_tree_refresh(const TreeRefresh& t);
    void on_delivery(const MessageDelivery& d);
    void on_control_delivery(const MessageDelivery& d);
    void on_data_delivery(const MessageDelivery& d);
    void on_sample();
    void on_start_join(NodeId node);

    void leader_local_delivery(NodeId leader, const DataPacket& p);
    void send_mcast_rep(NodeId leader, NodeId source, std::uint32_t round);

    static std::uint64_t data_key(NodeId source, std::uint32_t seq) {
        return (static_cast<std::uint64_t>(source) << 32) | seq;
    }

    RunConfig cfg_;
    TraceWriter* trace_;
    EventQueue queue_;
    double now_ = 0.0;
    std::vector<NodeState> nodes_;
    std::vector<NodeId> sources_;
    std::vector<NodeId> subscribers_;
    std::set<NodeId> subscriber_set_;

    Adjacency adj_;
    bool adj_valid_ = false;
    std::vector<Position> positions_;

    Rng traffic_rng_{0};
    Rng transport_rng_{0};
    Rng ants_rng_{0};

    RunCounters counters_;
    std::vector<StateSample> samples_;
    std::vector<ConvergencePoint> convergence_;

    // Source-side upper-tier state.
    struct SourceState {
        std::uint32_t data_seq = 0;
        std::uint32_t round = 0; // REQ round in flight
        std::map<NodeId, std::uint32_t> leader_last_rep_round;
        std::optional<MulticastTree> tree;
        std::optional<PheromoneTable> persistent_tau;
    };
    std::map<NodeId, SourceState> source_state_;

    // Expected receivers per in-flight packet, fixed at send time.
    std::map<std::uint64_t, std::set<NodeId>> expected_;

    // Diagnostics mode: member -> leader binding at send time and the set of
    // leaders that held each packet.
    std::map<std::uint64_t, std::map<NodeId, NodeId>> diag_bindings_;
    std::map<std::uint64_t, std::set<NodeId>> diag_leader_got_;
    std::map<std::uint64_t, std::set<NodeId>> diag_leader_fresh_; // REP'd in last 2 rounds

    std::uint64_t route_drop_count_ = 0;
};

// Convenience: construct, run, and summarize one run.
MetricsRow run_once(const RunConfig& cfg, std::uint64_t seed, TraceWriter* trace = nullptr);

} // namespace aamrp
