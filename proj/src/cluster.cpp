#include "aamrp/cluster.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace aamrp {

const char* to_string(MessageKind k) {
    switch (k) {
    case MessageKind::Join: return "JOIN";
    case MessageKind::Leader: return "LEADER";
    case MessageKind::Member: return "MEMBER";
    case MessageKind::McastReq: return "MCAST_REQ";
    case MessageKind::McastRep: return "MCAST_REP";
    }
    return "?";
}

const char* to_string(Role r) {
    switch (r) {
    case Role::NonMember: return "NON_MEMBER";
    case Role::Joining: return "JOINING";
    case Role::Leader: return "LEADER";
    case Role::Member: return "MEMBER";
    }
    return "?";
}

std::string RangeConfig::validate() const {
    std::ostringstream bad;
    if (member_base_period <= 0.0) bad << "protocol.member_base_period must be > 0; ";
    if (leader_beacon_period <= 0.0) bad << "protocol.leader_beacon_period must be > 0; ";
    if (join_timeout <= 0.0) bad << "protocol.join_timeout must be > 0; ";
    if (missed_beacons == 0) bad << "protocol.missed_beacons must be >= 1; ";
    if (tick <= 0.0) bad << "protocol.tick must be > 0; ";
    return bad.str();
}

std::optional<NodeId> select_best_leader(std::span<const GmtEntry> candidates) {
    if (candidates.empty()) return std::nullopt;
    const GmtEntry* best = &candidates[0];
    for (const GmtEntry& c : candidates) {
        assert(c.role_seen == Role::Leader);
        if (c.hop_count != best->hop_count) {
            if (c.hop_count < best->hop_count) best = &c;
        } else if (c.connectivity != best->connectivity) {
            if (c.connectivity > best->connectivity) best = &c;
        } else if (c.member > best->member) {
            best = &c;
        }
    }
    return best->member;
}

std::uint32_t broadcast_range(std::uint32_t n_ocm, std::uint32_t n_ncm, std::uint32_t threshold) {
    return n_ocm + n_ncm > threshold ? 2u : 1u;
}

double member_update_period(std::uint32_t distance_hops, double base_period, double tick) {
    assert(distance_hops >= 1);
    return std::max(tick, base_period / static_cast<double>(distance_hops));
}

void NodeProtocol::set_role(Role next) {
    if (next == role_) return;
    transitions_.emplace_back(role_, next);
    role_ = next;
}

NodeProtocol::Send NodeProtocol::flood(MessageKind kind, std::uint32_t connectivity,
                                       std::uint32_t ttl) {
    ProtocolMessage msg;
    msg.kind = kind;
    msg.origin = id_;
    msg.group = group_;
    msg.hop_count = 1;
    msg.connectivity = connectivity;
    msg.ttl_hops = ttl;
    msg.seq = next_seq();
    return Send{msg, true, kNoNode};
}

NodeProtocol::Send NodeProtocol::member_report(double now) {
    (void)now;
    ProtocolMessage msg;
    msg.kind = MessageKind::Member;
    msg.origin = id_;
    msg.group = group_;
    msg.hop_count = 1;
    msg.ttl_hops = k_hops_;
    msg.seq = next_seq();
    msg.target = leader_;
    Send s{msg, false, kNoNode};
    if (leader_distance_ <= 1) {
        s.next_hop = leader_;
    } else if (auto hop = route_to_leader(leader_)) {
        s.next_hop = *hop;
    }
    return s;
}

std::optional<NodeId> NodeProtocol::route_to_leader(NodeId leader) const {
    auto it = next_hop_to_leader_.find(leader);
    if (it == next_hop_to_leader_.end()) return std::nullopt;
    return it->second;
}

std::optional<NodeId> NodeProtocol::route_to_member(NodeId member) const {
    auto it = next_hop_to_member_.find(member);
    if (it == next_hop_to_member_.end()) return std::nullopt;
    return it->second;
}

std::vector<GmtEntry> NodeProtocol::fresh_leaders(double now, std::optional<NodeId> exclude) const {
    const double window = cfg_.missed_beacons * cfg_.leader_beacon_period;
    std::vector<GmtEntry> out;
    for (const auto& [nid, e] : gmt_) {
        if (e.role_seen != Role::Leader) continue;
        if (exclude && *exclude == nid) continue;
        if (e.hop_count > k_hops_) continue;
        if (now - e.last_heard > window) continue;
        out.push_back(e);
    }
    return out;
}

NodeProtocol::Actions NodeProtocol::join_now(double now) {
    (void)now;
    Actions a;
    a.timers.push_back(TimerReq{TimerKind::JoinTimeout, cfg_.join_timeout});
    return a;
}

NodeProtocol::Actions NodeProtocol::start_join(double now, std::uint32_t own_connectivity) {
    Actions a;
    if (role_ == Role::Joining) {
        ++reentrant_join_warnings_;
        return a;
    }
    if (role_ != Role::NonMember) return a;
    set_role(Role::Joining);
    a.sends.push_back(flood(MessageKind::Join, own_connectivity, k_hops_));
    a.timers.push_back(TimerReq{TimerKind::JoinTimeout, cfg_.join_timeout});
    (void)now;
    return a;
}

NodeProtocol::Actions NodeProtocol::on_join_timeout(double now, std::uint32_t own_connectivity) {
    Actions a;
    if (role_ != Role::Joining) return a;

    // Discovery settled: any leader heard recently within k hops wins.
    const auto leaders = fresh_leaders(now, std::nullopt);
    if (auto best = select_best_leader(leaders)) {
        set_role(Role::Member);
        leader_ = *best;
        for (const auto& l : leaders)
            if (l.member == *best) leader_distance_ = std::max(1u, l.hop_count);
        leader_last_heard_ = now;
        a.sends.push_back(member_report(now));
        a.timers.push_back(TimerReq{
            TimerKind::MemberReport,
            member_update_period(leader_distance_, cfg_.member_base_period, cfg_.tick)});
        a.timers.push_back(TimerReq{TimerKind::LeaderWatch, cfg_.leader_beacon_period});
        return a;
    }

    // Election: self-elect only while holding the strongest (connectivity,
    // id) pair among the joining peers announced within the last round.
    const double fresh_window = 2.0 * cfg_.join_timeout;
    bool strongest = true;
    for (const auto& [nid, e] : gmt_) {
        if (e.role_seen != Role::Joining || nid == id_) continue;
        if (now - e.last_heard > fresh_window) continue;
        if (e.connectivity > own_connectivity ||
            (e.connectivity == own_connectivity && nid > id_)) {
            strongest = false;
            break;
        }
    }
    if (strongest) {
        set_role(Role::Leader);
        a.sends.push_back(flood(MessageKind::Leader, own_connectivity, k_hops_));
        a.timers.push_back(TimerReq{TimerKind::Beacon, cfg_.leader_beacon_period});
        return a;
    }

    // Wait one more round; re-announce so peers keep seeing us as joining.
    a.sends.push_back(flood(MessageKind::Join, own_connectivity, k_hops_));
    a.timers.push_back(TimerReq{TimerKind::JoinTimeout, cfg_.join_timeout});
    return a;
}

NodeProtocol::Actions NodeProtocol::on_beacon_timer(double now, std::uint32_t own_connectivity) {
    Actions a;
    if (role_ != Role::Leader) return a;

    // Age out members whose reports stopped.
    for (auto it = cmt_.begin(); it != cmt_.end();) {
        const double period =
            member_update_period(it->second.distance_hops, cfg_.member_base_period, cfg_.tick);
        if (now - it->second.last_heard > 3.0 * period)
            it = cmt_.erase(it);
        else
            ++it;
    }

    // Beacon over the whole k-hop cluster scope: keeps drifting members bound
    // and invites joiners that are not yet associated.
    a.sends.push_back(flood(MessageKind::Leader, own_connectivity, k_hops_));
    for (auto& [nid, e] : cmt_) e.is_new = false;
    a.timers.push_back(TimerReq{TimerKind::Beacon, cfg_.leader_beacon_period});
    return a;
}

NodeProtocol::Actions NodeProtocol::on_member_timer(double now) {
    Actions a;
    if (role_ != Role::Member) return a;
    a.sends.push_back(member_report(now));
    a.timers.push_back(TimerReq{
        TimerKind::MemberReport,
        member_update_period(leader_distance_, cfg_.member_base_period, cfg_.tick)});
    return a;
}

NodeProtocol::Actions NodeProtocol::on_watch_timer(double now, std::uint32_t own_connectivity) {
    Actions a;
    if (role_ != Role::Member) return a;
    const double window = cfg_.missed_beacons * cfg_.leader_beacon_period;
    if (now - leader_last_heard_ <= window) {
        a.timers.push_back(TimerReq{TimerKind::LeaderWatch, cfg_.leader_beacon_period});
        return a;
    }

    // Leader lost. Re-home to another known leader when possible, otherwise
    // re-enter discovery.
    const NodeId lost = leader_;
    const auto others = fresh_leaders(now, lost);
    if (auto best = select_best_leader(others)) {
        leader_ = *best;
        for (const auto& l : others)
            if (l.member == *best) leader_distance_ = std::max(1u, l.hop_count);
        leader_last_heard_ = now;
        a.sends.push_back(member_report(now));
        a.timers.push_back(TimerReq{
            TimerKind::MemberReport,
            member_update_period(leader_distance_, cfg_.member_base_period, cfg_.tick)});
        a.timers.push_back(TimerReq{TimerKind::LeaderWatch, cfg_.leader_beacon_period});
        return a;
    }
    set_role(Role::Joining);
    leader_ = kNoNode;
    a.sends.push_back(flood(MessageKind::Join, own_connectivity, k_hops_));
    a.timers.push_back(TimerReq{TimerKind::JoinTimeout, cfg_.join_timeout});
    return a;
}

NodeProtocol::Actions NodeProtocol::on_message(const ProtocolMessage& msg, NodeId from,
                                               double now) {
    Actions a;
    if (msg.origin == id_) return a;

    if (msg.kind == MessageKind::Member) {
        // Unicast report traveling toward its leader; remember the reverse
        // hop so the leader can reach this member with R = 1 unicasts.
        next_hop_to_member_[msg.origin] = from;
        if (msg.target == id_) {
            if (role_ != Role::Leader) return a; // stale report, e.g. after leaving
            auto it = cmt_.find(msg.origin);
            if (it == cmt_.end()) {
                CmtEntry e;
                e.member = msg.origin;
                e.group = msg.group;
                e.distance_hops = std::max(1u, msg.hop_count);
                e.joined_at = now;
                e.last_heard = now;
                e.is_new = true;
                cmt_.emplace(msg.origin, e);
            } else {
                it->second.distance_hops = std::max(1u, msg.hop_count);
                it->second.last_heard = now;
            }
            return a;
        }
        if (msg.ttl_hops > 1) {
            if (auto hop = route_to_leader(msg.target)) {
                ProtocolMessage fwd = msg;
                ++fwd.hop_count;
                --fwd.ttl_hops;
                a.sends.push_back(Send{fwd, false, *hop});
            }
        }
        return a;
    }

    // Flooded kinds: dedup on (origin, seq), first arrival wins.
    if (!seen_.insert({msg.origin, msg.seq}).second) return a;

    GmtEntry& e = gmt_[msg.origin];
    e.member = msg.origin;
    e.group = msg.group;
    e.hop_count = msg.hop_count;
    e.last_heard = now;
    if (msg.kind == MessageKind::Join) {
        e.role_seen = Role::Joining;
        e.connectivity = msg.connectivity;
    } else if (msg.kind == MessageKind::Leader) {
        e.role_seen = Role::Leader;
        e.connectivity = msg.connectivity;
        next_hop_to_leader_[msg.origin] = from;
    }

    if (msg.kind == MessageKind::Leader && role_ == Role::Member) {
        if (msg.origin == leader_) {
            leader_last_heard_ = now;
            leader_distance_ = std::max(1u, msg.hop_count);
        } else if (msg.hop_count < leader_distance_) {
            // Strictly closer leader overheard: switch clusters. Ties stay.
            leader_ = msg.origin;
            leader_distance_ = std::max(1u, msg.hop_count);
            leader_last_heard_ = now;
            a.sends.push_back(member_report(now));
            a.timers.push_back(TimerReq{
                TimerKind::MemberReport,
                member_update_period(leader_distance_, cfg_.member_base_period, cfg_.tick)});
        }
    }

    if (msg.ttl_hops > 1) {
        ProtocolMessage fwd = msg;
        ++fwd.hop_count;
        --fwd.ttl_hops;
        a.sends.push_back(Send{fwd, true, kNoNode});
    }
    return a;
}

NodeProtocol::Actions NodeProtocol::leave_group(double now) {
    (void)now;
    Actions a;
    if (role_ != Role::Member && role_ != Role::Leader) return a;
    set_role(Role::NonMember);
    leader_ = kNoNode;
    leader_distance_ = 0;
    cmt_.clear();
    return a;
}

} // namespace aamrp
