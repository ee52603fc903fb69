#include "doctest.h"

#include <algorithm>

#include "aamrp/cluster.hpp"
#include "aamrp/rng.hpp"

using namespace aamrp;

namespace {

GmtEntry leader_entry(NodeId id, std::uint32_t hops, std::uint32_t conn) {
    GmtEntry e;
    e.member = id;
    e.hop_count = hops;
    e.connectivity = conn;
    e.role_seen = Role::Leader;
    return e;
}

RangeConfig test_cfg() {
    RangeConfig cfg;
    cfg.join_timeout = 1.0;
    cfg.leader_beacon_period = 2.0;
    cfg.member_base_period = 4.0;
    cfg.missed_beacons = 3;
    cfg.tick = 0.1;
    return cfg;
}

ProtocolMessage join_msg(NodeId origin, std::uint32_t conn, std::uint32_t seq,
                         std::uint32_t ttl = 2) {
    ProtocolMessage m;
    m.kind = MessageKind::Join;
    m.origin = origin;
    m.group = 1;
    m.hop_count = 1;
    m.connectivity = conn;
    m.ttl_hops = ttl;
    m.seq = seq;
    return m;
}

ProtocolMessage leader_msg(NodeId origin, std::uint32_t hops, std::uint32_t seq,
                           std::uint32_t conn = 5, std::uint32_t ttl = 2) {
    ProtocolMessage m;
    m.kind = MessageKind::Leader;
    m.origin = origin;
    m.group = 1;
    m.hop_count = hops;
    m.connectivity = conn;
    m.ttl_hops = ttl;
    m.seq = seq;
    return m;
}

} // namespace

TEST_SUITE("cluster") {

TEST_CASE("shortest distance dominates leader choice") {
    std::vector<GmtEntry> cands{leader_entry(2, 1, 5), leader_entry(9, 2, 9)};
    CHECK(select_best_leader(cands) == NodeId{2});
}

TEST_CASE("connectivity breaks distance ties") {
    std::vector<GmtEntry> cands{leader_entry(2, 1, 5), leader_entry(9, 1, 9)};
    CHECK(select_best_leader(cands) == NodeId{9});
}

TEST_CASE("node id breaks full ties") {
    std::vector<GmtEntry> cands{leader_entry(2, 1, 5), leader_entry(9, 1, 5)};
    CHECK(select_best_leader(cands) == NodeId{9});
}

TEST_CASE("empty candidate list reports no leader") {
    CHECK(!select_best_leader({}).has_value());
}

TEST_CASE("leader choice is invariant under permutation") {
    Rng rng(3);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<GmtEntry> cands;
        const std::size_t n = 1 + rng.uniform_index(6);
        for (std::size_t i = 0; i < n; ++i)
            cands.push_back(leader_entry(static_cast<NodeId>(rng.uniform_index(20)),
                                         1 + static_cast<std::uint32_t>(rng.uniform_index(3)),
                                         static_cast<std::uint32_t>(rng.uniform_index(8))));
        const auto first = select_best_leader(cands);
        for (int shuffle = 0; shuffle < 5; ++shuffle) {
            for (std::size_t i = cands.size(); i > 1; --i)
                std::swap(cands[i - 1], cands[rng.uniform_index(i)]);
            CHECK(select_best_leader(cands) == first);
        }
    }
}

TEST_CASE("broadcast range rule") {
    CHECK(broadcast_range(3, 2, 4) == 2); // 5 > 4
    CHECK(broadcast_range(2, 2, 4) == 1); // boundary is strict
    CHECK(broadcast_range(0, 0, 0) == 1); // empty table
    // exhaustive sweep against the rule as written
    for (std::uint32_t ocm = 0; ocm <= 10; ++ocm)
        for (std::uint32_t ncm = 0; ncm <= 10; ++ncm)
            for (std::uint32_t t = 0; t <= 10; ++t)
                CHECK(broadcast_range(ocm, ncm, t) == ((ocm + ncm > t) ? 2u : 1u));
}

TEST_CASE("member report period shrinks with distance and floors at the tick") {
    CHECK(member_update_period(1, 4.0, 0.1) == doctest::Approx(4.0));
    CHECK(member_update_period(2, 4.0, 0.1) == doctest::Approx(2.0));
    CHECK(member_update_period(4, 4.0, 0.1) == doctest::Approx(1.0));
    CHECK(member_update_period(100, 4.0, 0.1) == doctest::Approx(0.1));
    for (std::uint32_t d = 1; d < 9; ++d)
        CHECK(member_update_period(d + 1, 4.0, 0.1) <= member_update_period(d, 4.0, 0.1));
}

TEST_CASE("start_join floods and arms the timeout; re-entry only warns") {
    NodeProtocol node(3, 1, 2, test_cfg());
    auto a = node.start_join(0.0, 4);
    CHECK(node.role() == Role::Joining);
    REQUIRE(a.sends.size() == 1);
    CHECK(a.sends[0].msg.kind == MessageKind::Join);
    CHECK(a.sends[0].msg.ttl_hops == 2);
    CHECK(a.sends[0].msg.connectivity == 4);
    REQUIRE(a.timers.size() == 1);
    CHECK(a.timers[0].kind == NodeProtocol::TimerKind::JoinTimeout);

    auto again = node.start_join(0.2, 4);
    CHECK(again.sends.empty());
    CHECK(node.reentrant_join_warnings() == 1);
}

TEST_CASE("JOIN receipt updates the table and relays while ttl remains") {
    NodeProtocol node(1, 1, 2, test_cfg());
    auto a = node.on_message(join_msg(7, 3, 1, 2), 7, 0.5);
    REQUIRE(node.gmt().count(7) == 1);
    const GmtEntry& e = node.gmt().at(7);
    CHECK(e.connectivity == 3);
    CHECK(e.hop_count == 1);
    CHECK(e.role_seen == Role::Joining);
    REQUIRE(a.sends.size() == 1);
    CHECK(a.sends[0].msg.ttl_hops == 1);
    CHECK(a.sends[0].msg.hop_count == 2);

    // same (origin, seq) via another path: dropped, table unchanged
    auto dup = node.on_message(join_msg(7, 3, 1, 2), 4, 0.6);
    CHECK(dup.sends.empty());
    CHECK(node.gmt().size() == 1);

    // ttl exhausted: no relay
    auto edge = node.on_message(join_msg(8, 2, 1, 1), 8, 0.7);
    CHECK(edge.sends.empty());
    CHECK(node.gmt().count(8) == 1);
}

TEST_CASE("sole joining node elects itself at the timeout") {
    NodeProtocol node(3, 1, 2, test_cfg());
    node.start_join(0.0, 2);
    auto a = node.on_join_timeout(1.0, 2);
    CHECK(node.role() == Role::Leader);
    REQUIRE(a.sends.size() == 1);
    CHECK(a.sends[0].msg.kind == MessageKind::Leader);
    REQUIRE(a.timers.size() == 1);
    CHECK(a.timers[0].kind == NodeProtocol::TimerKind::Beacon);
}

TEST_CASE("higher connectivity wins the election; the loser joins") {
    NodeProtocol a(7, 1, 2, test_cfg()); // connectivity 3
    NodeProtocol b(4, 1, 2, test_cfg()); // connectivity 1
    auto ja = a.start_join(0.0, 3);
    auto jb = b.start_join(0.0, 1);
    b.on_message(ja.sends[0].msg, 7, 0.01);
    a.on_message(jb.sends[0].msg, 4, 0.01);

    auto ea = a.on_join_timeout(1.0, 3);
    CHECK(a.role() == Role::Leader);
    auto eb = b.on_join_timeout(1.0, 1);
    CHECK(b.role() == Role::Joining); // waits: a stronger fresh peer exists

    // a's LEADER flood arrives; next round b joins it
    b.on_message(ea.sends[0].msg, 7, 1.01);
    auto join2 = b.on_join_timeout(2.0, 1);
    CHECK(b.role() == Role::Member);
    CHECK(b.leader() == NodeId{7});
    REQUIRE(!join2.sends.empty());
    CHECK(join2.sends[0].msg.kind == MessageKind::Member);
    CHECK(join2.sends[0].msg.target == NodeId{7});
}

TEST_CASE("equal connectivity resolves by the higher node id") {
    NodeProtocol a(7, 1, 2, test_cfg());
    NodeProtocol b(4, 1, 2, test_cfg());
    auto ja = a.start_join(0.0, 2);
    auto jb = b.start_join(0.0, 2);
    b.on_message(ja.sends[0].msg, 7, 0.01);
    a.on_message(jb.sends[0].msg, 4, 0.01);
    a.on_join_timeout(1.0, 2);
    b.on_join_timeout(1.0, 2);
    CHECK(a.role() == Role::Leader);
    CHECK(b.role() == Role::Joining);
}

TEST_CASE("member reports build the leader's cluster table") {
    NodeProtocol leader(2, 1, 2, test_cfg());
    leader.start_join(0.0, 5);
    leader.on_join_timeout(1.0, 5);
    REQUIRE(leader.role() == Role::Leader);

    ProtocolMessage report;
    report.kind = MessageKind::Member;
    report.origin = 9;
    report.group = 1;
    report.hop_count = 1;
    report.ttl_hops = 2;
    report.seq = 1;
    report.target = 2;
    leader.on_message(report, 9, 1.5);
    REQUIRE(leader.cmt().count(9) == 1);
    CHECK(leader.cmt().at(9).distance_hops == 1);
    CHECK(leader.cmt().at(9).is_new);

    // beacon clears the is_new flag
    leader.on_beacon_timer(2.0, 5);
    CHECK_FALSE(leader.cmt().at(9).is_new);

    // three silent report periods expire the entry (distance 1 -> 4 s each)
    auto sweep = leader.on_beacon_timer(14.0, 5);
    (void)sweep;
    CHECK(leader.cmt().empty());
}

TEST_CASE("members switch only to strictly closer leaders") {
    NodeProtocol m(5, 1, 2, test_cfg());
    m.start_join(0.0, 1);
    m.on_message(leader_msg(10, 2, 1), 6, 0.5); // leader 10 at 2 hops
    m.on_join_timeout(1.0, 1);
    REQUIRE(m.role() == Role::Member);
    REQUIRE(m.leader() == NodeId{10});
    CHECK(m.leader_distance() == 2);

    // equally distant leader: stay
    m.on_message(leader_msg(11, 2, 1), 6, 1.2);
    CHECK(m.leader() == NodeId{10});
    // farther leader: stay
    m.on_message(leader_msg(12, 3, 1, 5, 3), 6, 1.3);
    CHECK(m.leader() == NodeId{10});
    // strictly closer leader: switch and report to it
    auto sw = m.on_message(leader_msg(13, 1, 1), 13, 1.4);
    CHECK(m.leader() == NodeId{13});
    REQUIRE(!sw.sends.empty());
    CHECK(sw.sends[0].msg.kind == MessageKind::Member);
    CHECK(sw.sends[0].msg.target == NodeId{13});
}

TEST_CASE("members survive leader loss by re-homing when possible") {
    NodeProtocol m(5, 1, 2, test_cfg());
    m.start_join(0.0, 1);
    m.on_message(leader_msg(10, 1, 1), 10, 0.5);
    m.on_join_timeout(1.0, 1);
    REQUIRE(m.leader() == NodeId{10});

    // an alternative leader is known and still fresh
    m.on_message(leader_msg(11, 2, 1), 6, 5.5);
    // leader 10 silent since 0.5; watch fires past 3 beacon periods
    auto a = m.on_watch_timer(9.0, 1);
    CHECK(m.role() == Role::Member);
    CHECK(m.leader() == NodeId{11});
    bool flooded_join = false;
    for (const auto& s : a.sends) flooded_join |= s.msg.kind == MessageKind::Join;
    CHECK_FALSE(flooded_join); // re-homed without re-entering discovery
}

TEST_CASE("members re-enter discovery when no other leader is known") {
    NodeProtocol m(5, 1, 2, test_cfg());
    m.start_join(0.0, 1);
    m.on_message(leader_msg(10, 1, 1), 10, 0.5);
    m.on_join_timeout(1.0, 1);
    REQUIRE(m.leader() == NodeId{10});

    auto a = m.on_watch_timer(9.0, 1);
    CHECK(m.role() == Role::Joining);
    REQUIRE(!a.sends.empty());
    CHECK(a.sends[0].msg.kind == MessageKind::Join);
}

TEST_CASE("leaving is silent for members and leaders") {
    NodeProtocol m(5, 1, 2, test_cfg());
    m.start_join(0.0, 1);
    m.on_message(leader_msg(10, 1, 1), 10, 0.5);
    m.on_join_timeout(1.0, 1);
    auto a = m.leave_group(2.0);
    CHECK(a.sends.empty());
    CHECK(m.role() == Role::NonMember);

    NodeProtocol l(6, 1, 2, test_cfg());
    l.start_join(0.0, 4);
    l.on_join_timeout(1.0, 4);
    REQUIRE(l.role() == Role::Leader);
    auto b = l.leave_group(2.0);
    CHECK(b.sends.empty());
    CHECK(l.role() == Role::NonMember);
    CHECK(l.cmt().empty());
}

TEST_CASE("role transitions stay within the allowed graph") {
    // exercise a node through join, lead, leave, rejoin, member, orphan
    NodeProtocol n(5, 1, 2, test_cfg());
    n.start_join(0.0, 3);
    n.on_join_timeout(1.0, 3);   // -> Leader
    n.leave_group(2.0);          // -> NonMember
    n.start_join(3.0, 1);        // -> Joining
    n.on_message(leader_msg(9, 1, 2), 9, 3.5);
    n.on_join_timeout(4.0, 1);   // -> Member
    n.on_watch_timer(12.0, 1);   // leader silent -> Joining again

    const auto allowed = [](Role from, Role to) {
        if (from == Role::NonMember && to == Role::Joining) return true;
        if (from == Role::Joining && (to == Role::Leader || to == Role::Member)) return true;
        if (from == Role::Member &&
            (to == Role::Joining || to == Role::Member || to == Role::NonMember))
            return true;
        if (from == Role::Leader && to == Role::NonMember) return true;
        return false;
    };
    for (const auto& [from, to] : n.transitions()) CHECK(allowed(from, to));
    CHECK(n.transitions().size() >= 5);
}

} // TEST_SUITE
