#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "aamrp/messages.hpp"
#include "aamrp/types.hpp"

namespace aamrp {

enum class Role : std::uint8_t { NonMember, Joining, Leader, Member };

const char* to_string(Role r);

// Row of the Group Member Table: what this node knows about one group member,
// learned from JOIN and LEADER floods.
struct GmtEntry {
    NodeId member = kNoNode;
    GroupId group = 0;
    std::uint32_t hop_count = 0;
    Role role_seen = Role::Joining;
    std::uint32_t connectivity = 0;
    double last_heard = 0.0;
};

// Row of a leader's Cluster Member Table.
struct CmtEntry {
    NodeId member = kNoNode;
    GroupId group = 0;
    std::uint32_t distance_hops = 1;
    double joined_at = 0.0;
    double last_heard = 0.0;
    bool is_new = true; // joined since the previous LEADER beacon
};

// Timer and threshold knobs of the cluster protocol.
struct RangeConfig {
    std::uint32_t threshold_T = 5;     // broadcast range threshold
    double member_base_period = 4.0;   // seconds, MEMBER report base period
    double leader_beacon_period = 2.0; // seconds
    double join_timeout = 1.0;         // seconds
    std::uint32_t missed_beacons = 3;  // beacon losses before leader is given up
    double tick = 0.1;                 // simulator tick, floors the report period

    std::string validate() const;
};

// Best leader among LEADER-role GMT entries: minimal hop_count, then maximal
// connectivity, then maximal node id. Empty input yields nullopt (no leader
// available; caller re-enters discovery).
std::optional<NodeId> select_best_leader(std::span<const GmtEntry> candidates);

// Adaptive broadcast range rule: 2 hops when old + new cluster members exceed
// the threshold, else 1 hop (strict inequality).
std::uint32_t broadcast_range(std::uint32_t n_ocm, std::uint32_t n_ncm, std::uint32_t threshold);

// MEMBER report period: base / distance, floored at one simulator tick.
// Closer members report less often.
double member_update_period(std::uint32_t distance_hops, double base_period, double tick);

// Per-node AAMRP state machine. It owns protocol state only; the hosting
// event loop delivers messages and timer fires, supplies the node's current
// k-hop connectivity where elections need it, and performs the sends this
// machine requests.
class NodeProtocol {
  public:
    // One requested transmission.
    struct Send {
        ProtocolMessage msg;
        bool broadcast = true;
        NodeId next_hop = kNoNode; // unicast hop when !broadcast
    };
    enum class TimerKind : std::uint8_t { JoinTimeout, Beacon, MemberReport, LeaderWatch };
    struct TimerReq {
        TimerKind kind;
        double period; // seconds from now
    };
    struct Actions {
        std::vector<Send> sends;
        std::vector<TimerReq> timers;
    };

    NodeProtocol(NodeId id, GroupId group, std::uint32_t k_hops, const RangeConfig& cfg)
        : id_(id), group_(group), k_hops_(k_hops), cfg_(cfg) {}

    Role role() const { return role_; }
    NodeId id() const { return id_; }
    std::optional<NodeId> leader() const {
        return role_ == Role::Member ? std::optional<NodeId>(leader_) : std::nullopt;
    }
    std::uint32_t leader_distance() const { return leader_distance_; }
    const std::map<NodeId, GmtEntry>& gmt() const { return gmt_; }
    const std::map<NodeId, CmtEntry>& cmt() const { return cmt_; }
    std::uint32_t reentrant_join_warnings() const { return reentrant_join_warnings_; }
    const std::vector<std::pair<Role, Role>>& transitions() const { return transitions_; }

    // Route learned from LEADER floods: next hop toward a leader.
    std::optional<NodeId> route_to_leader(NodeId leader) const;
    // Route learned from MEMBER relays: next hop toward a cluster member.
    std::optional<NodeId> route_to_member(NodeId member) const;

    std::uint32_t next_seq() { return ++seq_; }

    // Group join entry point. No-op (with a warning counter) while already
    // JOINING; members and leaders ignore it.
    Actions start_join(double now, std::uint32_t own_connectivity);

    // Discovery round has elapsed: join a known leader, elect self, or wait
    // another round and re-announce.
    Actions on_join_timeout(double now, std::uint32_t own_connectivity);

    // Leader beacon cadence: emit the periodic LEADER message scoped to the
    // cluster, age out silent members, reset is_new flags.
    Actions on_beacon_timer(double now, std::uint32_t own_connectivity);

    // Member report cadence: unicast a MEMBER distance report to the leader.
    Actions on_member_timer(double now);

    // Member-side leader liveness check.
    Actions on_watch_timer(double now, std::uint32_t own_connectivity);

    // JOIN / LEADER / MEMBER delivery. `from` is the transmitting neighbor.
    Actions on_message(const ProtocolMessage& msg, NodeId from, double now);

    // Silent departure: stop sourcing MEMBER or LEADER messages.
    Actions leave_group(double now);

    // Observation hook for tests: is this (origin, seq) already seen?
    bool seen(NodeId origin, std::uint32_t seq) const { return seen_.count({origin, seq}) > 0; }

  private:
    Actions join_now(double now);
    void set_role(Role next);
    std::vector<GmtEntry> fresh_leaders(double now, std::optional<NodeId> exclude) const;
    Send flood(MessageKind kind, std::uint32_t connectivity, std::uint32_t ttl);
    Send member_report(double now);

    NodeId id_;
    GroupId group_;
    std::uint32_t k_hops_;
    RangeConfig cfg_;

    Role role_ = Role::NonMember;
    std::map<NodeId, GmtEntry> gmt_;
    std::map<NodeId, CmtEntry> cmt_;
    NodeId leader_ = kNoNode;
    std::uint32_t leader_distance_ = 0;
    double leader_last_heard_ = 0.0;

    std::map<NodeId, NodeId> next_hop_to_leader_;
    std::map<NodeId, NodeId> next_hop_to_member_;
    std::set<std::pair<NodeId, std::uint32_t>> seen_;

    std::uint32_t seq_ = 0;
    std::uint32_t reentrant_join_warnings_ = 0;
    std::vector<std::pair<Role, Role>> transitions_;
};

} // namespace aamrp
