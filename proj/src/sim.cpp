#include "aamrp/sim.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>
#include <stdexcept>

namespace aamrp {

const char* to_string(Protocol p) {
    switch (p) {
    case Protocol::Aamrp: return "aamrp";
    case Protocol::Flooding: return "flooding";
    case Protocol::SharedTree: return "shared_tree";
    }
    return "?";
}

std::optional<Protocol> protocol_from_string(const std::string& s) {
    if (s == "aamrp") return Protocol::Aamrp;
    if (s == "flooding") return Protocol::Flooding;
    if (s == "shared_tree") return Protocol::SharedTree;
    return std::nullopt;
}

std::string TrafficConfig::validate() const {
    std::ostringstream bad;
    if (rate_pps <= 0.0) bad << "traffic.rate_pps must be > 0; ";
    if (payload_bytes == 0) bad << "traffic.payload_bytes must be >= 1; ";
    if (start < 0.0) bad << "traffic.start must be >= 0; ";
    if (stop_margin < 0.0) bad << "traffic.stop_margin must be >= 0; ";
    if (refresh_period <= 0.0) bad << "traffic.refresh_period must be > 0; ";
    if (member_join_time < 0.0) bad << "traffic.member_join_time must be >= 0; ";
    return bad.str();
}

std::string TransportModel::validate() const {
    std::ostringstream bad;
    if (per_hop_latency < 0.0) bad << "transport.per_hop_latency must be >= 0; ";
    if (loss_probability < 0.0 || loss_probability > 1.0)
        bad << "transport.loss_probability must be in [0,1]; ";
    if (density_loss < 0.0) bad << "transport.density_loss must be >= 0; ";
    if (max_loss < 0.0 || max_loss > 1.0) bad << "transport.max_loss must be in [0,1]; ";
    if (bandwidth_bps <= 0.0) bad << "transport.bandwidth_bps must be > 0; ";
    if (control_bytes == 0) bad << "transport.control_bytes must be >= 1; ";
    return bad.str();
}

std::string RunConfig::validate() const {
    std::string bad;
    bad += world.validate();
    bad += cluster.validate();
    bad += tree.params.validate();
    bad += traffic.validate();
    bad += transport.validate();
    if (pinned_subscribers.empty()) {
        if (traffic.sources + group_size > world.n_nodes)
            bad += "traffic.sources + group_size must not exceed world.n_nodes; ";
    } else {
        for (NodeId m : pinned_subscribers)
            if (m >= world.n_nodes || m < traffic.sources)
                bad += "pinned subscriber out of range or overlapping a source; ";
    }
    if (sample_period < 0.0) bad += "sample_period must be >= 0; ";
    return bad;
}

namespace {
constexpr GroupId kGroup = 1;
}

Simulator::Simulator(RunConfig cfg, TraceWriter* trace) : cfg_(std::move(cfg)), trace_(trace) {
    cfg_.cluster.tick = cfg_.world.tick;
    const std::string bad = cfg_.validate();
    if (!bad.empty()) throw std::invalid_argument(bad);

    const Rng root(cfg_.world.rng_seed);
    const Rng mobility_root = root.fork(rng_stream::kMobility);
    traffic_rng_ = root.fork(rng_stream::kTraffic);
    transport_rng_ = root.fork(rng_stream::kTransport);
    ants_rng_ = root.fork(rng_stream::kAnts);

    const std::uint32_t n = cfg_.world.n_nodes;
    nodes_.resize(n);
    positions_.resize(n);
    for (NodeId i = 0; i < n; ++i) {
        nodes_[i].mobility_rng = mobility_root.fork(i);
        nodes_[i].mobility = initial_mobility(cfg_.world, nodes_[i].mobility_rng);
        nodes_[i].proto =
            std::make_unique<NodeProtocol>(i, kGroup, cfg_.world.k_hops, cfg_.cluster);
        positions_[i] = nodes_[i].mobility.current;
    }

    for (std::uint32_t s = 0; s < cfg_.traffic.sources; ++s) {
        sources_.push_back(s);
        source_state_[s] = SourceState{};
    }
    if (!cfg_.pinned_subscribers.empty()) {
        for (NodeId m : cfg_.pinned_subscribers)
            if (subscriber_set_.insert(m).second) subscribers_.push_back(m);
        cfg_.group_size = static_cast<std::uint32_t>(subscribers_.size());
    } else {
        // Group members drawn from the traffic stream, never overlapping
        // sources.
        while (subscribers_.size() < cfg_.group_size) {
            const NodeId pick = static_cast<NodeId>(traffic_rng_.uniform_index(n));
            if (pick < cfg_.traffic.sources) continue;
            if (!subscriber_set_.insert(pick).second) continue;
            subscribers_.push_back(pick);
        }
    }
    std::sort(subscribers_.begin(), subscribers_.end());

    if (trace_) {
        std::ostringstream head;
        head << "aamrp-trace protocol=" << to_string(cfg_.protocol)
             << " n_nodes=" << cfg_.world.n_nodes << " group_size=" << cfg_.group_size
             << " seed=" << cfg_.world.rng_seed;
        trace_->comment(head.str());
    }
}

const Adjacency& Simulator::adjacency() {
    if (!adj_valid_) {
        for (NodeId i = 0; i < nodes_.size(); ++i) positions_[i] = nodes_[i].mobility.current;
        adj_ = build_adjacency(positions_, cfg_.world.radio_range);
        adj_valid_ = true;
    }
    return adj_;
}

std::uint32_t Simulator::own_connectivity(NodeId n) {
    return connectivity(n, adjacency(), cfg_.world.k_hops);
}

const std::optional<MulticastTree>& Simulator::last_tree(NodeId source) const {
    static const std::optional<MulticastTree> none;
    auto it = source_state_.find(source);
    return it == source_state_.end() ? none : it->second.tree;
}

void Simulator::schedule_join(NodeId node, double at) { queue_.push(at, StartJoin{node}); }

void Simulator::schedule_leave(NodeId node, double at) { queue_.push(at, LeaveGroup{node}); }

void Simulator::place_nodes(const std::vector<Position>& positions) {
    if (positions.size() != nodes_.size())
        throw std::invalid_argument("place_nodes: need one position per node");
    for (NodeId i = 0; i < nodes_.size(); ++i) {
        nodes_[i].mobility.current = positions[i];
        nodes_[i].mobility.waypoint = positions[i];
        nodes_[i].mobility.pause_remaining = 0.0;
    }
    invalidate_adjacency();
}

void Simulator::run() {
    queue_.push(cfg_.world.tick, MobilityTick{});

    if (cfg_.protocol == Protocol::Aamrp)
        for (NodeId m : subscribers_) queue_.push(cfg_.traffic.member_join_time, StartJoin{m});

    if (cfg_.protocol != Protocol::Flooding)
        for (NodeId s : sources_) queue_.push(0.0, TreeRefresh{s});

    const double traffic_stop = cfg_.world.sim_time - cfg_.traffic.stop_margin;
    if (cfg_.traffic.start <= traffic_stop)
        for (NodeId s : sources_) queue_.push(cfg_.traffic.start, TrafficGeneration{s});

    if (cfg_.sample_period > 0.0) queue_.push(cfg_.sample_period, MetricSample{});

    while (!queue_.empty() && queue_.top().time <= cfg_.world.sim_time) {
        const Event e = queue_.pop();
        now_ = e.time;
        handle(e);
    }
    now_ = cfg_.world.sim_time;
}

void Simulator::handle(const Event& e) {
    std::visit(
        [this](const auto& payload) {
            using T = std::decay_t<decltype(payload)>;
            if constexpr (std::is_same_v<T, MobilityTick>) {
                on_mobility_tick();
            } else if constexpr (std::is_same_v<T, MessageDelivery>) {
                on_delivery(payload);
            } else if constexpr (std::is_same_v<T, TimerFire>) {
                on_timer(payload);
            } else if constexpr (std::is_same_v<T, TrafficGeneration>) {
                on_traffic(payload);
            } else if constexpr (std::is_same_v<T, TreeRefresh>) {
                on_tree_refresh(payload);
            } else if constexpr (std::is_same_v<T, MetricSample>) {
                on_sample();
            } else if constexpr (std::is_same_v<T, StartJoin>) {
                on_start_join(payload.node);
            } else if constexpr (std::is_same_v<T, LeaveGroup>) {
                process_actions(payload.node, nodes_[payload.node].proto->leave_group(now_));
            }
        },
        e.payload);
}

void Simulator::on_mobility_tick() {
    for (NodeId i = 0; i < nodes_.size(); ++i)
        advance_mobility(nodes_[i].mobility, cfg_.world, cfg_.world.tick, nodes_[i].mobility_rng);
    invalidate_adjacency();
    const double next = now_ + cfg_.world.tick;
    if (next <= cfg_.world.sim_time) queue_.push(next, MobilityTick{});
}

void Simulator::on_start_join(NodeId node) {
    process_actions(node, nodes_[node].proto->start_join(now_, own_connectivity(node)));
}

void Simulator::arm_timer(NodeId node, NodeProtocol::TimerKind kind, double period) {
    const std::uint64_t epoch = ++nodes_[node].timer_epoch[kind];
    queue_.push(now_ + period, TimerFire{node, kind, epoch});
}

void Simulator::process_actions(NodeId node, NodeProtocol::Actions&& actions) {
    for (const auto& send : actions.sends) {
        if (!send.broadcast && send.next_hop == kNoNode) {
            ++route_drop_count_; // no route toward the unicast target
            continue;
        }
        transmit_control(node, send.msg, send.broadcast, send.next_hop);
    }
    for (const auto& t : actions.timers) arm_timer(node, t.kind, t.period);
}

void Simulator::on_timer(const TimerFire& t) {
    auto& node = nodes_[t.node];
    if (node.timer_epoch[t.kind] != t.epoch) return; // superseded
    NodeProtocol& proto = *node.proto;
    const Role before = proto.role();
    NodeProtocol::Actions actions;
    switch (t.kind) {
    case NodeProtocol::TimerKind::JoinTimeout:
        actions = proto.on_join_timeout(now_, own_connectivity(t.node));
        break;
    case NodeProtocol::TimerKind::Beacon:
        actions = proto.on_beacon_timer(now_, own_connectivity(t.node));
        break;
    case NodeProtocol::TimerKind::MemberReport:
        actions = proto.on_member_timer(now_);
        break;
    case NodeProtocol::TimerKind::LeaderWatch:
        actions = proto.on_watch_timer(now_, own_connectivity(t.node));
        break;
    }
    process_actions(t.node, std::move(actions));

    // A freshly elected leader answers the floods it already heard, so the
    // upper tier picks it up before the next refresh round.
    if (before != Role::Leader && proto.role() == Role::Leader)
        for (const auto& [source, rev] : node.reverse_path)
            send_mcast_rep(t.node, source, rev.round);
}

void Simulator::on_traffic(const TrafficGeneration& t) {
    auto& src = source_state_[t.source];
    DataPacket p;
    p.source = t.source;
    p.group = kGroup;
    p.seq = src.data_seq++;
    p.created_at = now_;
    p.payload_bytes = cfg_.traffic.payload_bytes;

    ++counters_.data_packets_sent_by_sources;
    nodes_[t.source].data_seen.insert(data_key(p.source, p.seq)); // own packet, drop echoes
    if (trace_) trace_->data_line(now_, p, t.source);

    // Delivery denominator: members live at send time.
    std::set<NodeId> live;
    for (NodeId m : subscribers_) {
        if (cfg_.protocol == Protocol::Aamrp) {
            const Role r = nodes_[m].proto->role();
            if (r != Role::Member && r != Role::Leader) continue;
        }
        live.insert(m);
        if (trace_) trace_->expect_line(now_, p, m);
    }
    if (cfg_.collect_diagnostics) {
        auto& bind = diag_bindings_[data_key(p.source, p.seq)];
        for (NodeId m : live) {
            const NodeProtocol& proto = *nodes_[m].proto;
            bind[m] = proto.role() == Role::Leader ? m : proto.leader().value_or(kNoNode);
        }
        auto& fresh = diag_leader_fresh_[data_key(p.source, p.seq)];
        for (const auto& [leader, round] : src.leader_last_rep_round)
            if (round + 2 >= src.round) fresh.insert(leader);
    }
    counters_.expected_receipts += live.size();
    if (!live.empty()) expected_[data_key(p.source, p.seq)] = std::move(live);

    transmit_data(t.source, p, 0, kNoNode, false, kNoNode);

    // A source that also leads a cluster serves its members directly.
    auto& node = nodes_[t.source];
    if (cfg_.protocol == Protocol::Aamrp && node.proto->role() == Role::Leader &&
        node.data_delivered_local.insert(data_key(p.source, p.seq)).second)
        leader_local_delivery(t.source, p);

    const double next = now_ + 1.0 / cfg_.traffic.rate_pps;
    if (next <= cfg_.world.sim_time - cfg_.traffic.stop_margin)
        queue_.push(next, TrafficGeneration{t.source});
}

void Simulator::on_tree_refresh(const TreeRefresh& t) {
    auto& node = nodes_[t.source];
    auto& src = source_state_[t.source];

    ProtocolMessage req;
    req.kind = MessageKind::McastReq;
    req.origin = t.source;
    req.group = kGroup;
    req.hop_count = 1;
    req.ttl_hops = cfg_.world.n_nodes; // network-wide
    req.seq = node.proto->next_seq();
    src.round = req.seq;

    if (cfg_.protocol == Protocol::Aamrp) {
        // Leaders that answered within the last two rounds form the
        // destination set of this round's tree.
        std::vector<NodeId> leaders;
        for (const auto& [leader, round] : src.leader_last_rep_round)
            if (round + 2 >= src.round) leaders.push_back(leader);
        if (!leaders.empty()) {
            const double per_hop_delay =
                cfg_.transport.per_hop_latency + cfg_.transport.tx_seconds(cfg_.traffic.payload_bytes);
            const WeightedGraph g = snapshot_graph(positions_, adjacency(), cfg_.world.radio_range,
                                                   per_hop_delay, cfg_.tree.euclidean_cost);
            Rng tree_rng = ants_rng_.fork(t.source).fork(src.round);
            ConstructOptions opts;
            const std::uint32_t round = src.round;
            opts.convergence = [this, round](std::uint32_t iter, double best) {
                convergence_.push_back(ConvergencePoint{round, iter, best});
            };
            if (cfg_.tree.persist_pheromone) {
                if (!src.persistent_tau)
                    src.persistent_tau.emplace(cfg_.tree.params.tau0, cfg_.tree.params.tau_min);
                opts.persistent_tau = &*src.persistent_tau;
            }
            src.tree = construct_tree(g, t.source, leaders, cfg_.tree.params, tree_rng, opts);
        }
    }

    transmit_control(t.source, req, true, kNoNode);

    const double next = now_ + cfg_.traffic.refresh_period;
    if (next <= cfg_.world.sim_time) queue_.push(next, TreeRefresh{t.source});
}

std::vector<NodeId> Simulator::receivers_of(NodeId from, bool broadcast, NodeId unicast_to) {
    const Adjacency& adj = adjacency(); // also refreshes positions_
    if (broadcast) return adj[from];
    if (unicast_to != kNoNode &&
        distance(positions_[from], positions_[unicast_to]) <= cfg_.world.radio_range)
        return {unicast_to};
    return {};
}

double Simulator::arrange_transmission(NodeId from, std::uint32_t bytes) {
    auto& node = nodes_[from];
    const double start = std::max(now_, node.busy_until);
    node.busy_until = start + cfg_.transport.tx_seconds(bytes);
    return node.busy_until + cfg_.transport.per_hop_latency;
}

void Simulator::transmit_control(NodeId from, const ProtocolMessage& msg, bool broadcast,
                                 NodeId unicast_to) {
    ++counters_.routing_packets_sent;
    if (trace_) trace_->control_tx(now_, msg, broadcast, unicast_to);
    const double deliver_at = arrange_transmission(from, cfg_.transport.control_bytes);
    for (NodeId r : receivers_of(from, broadcast, unicast_to)) {
        if (transport_rng_.bernoulli(cfg_.transport.reception_loss(adj_[r].size()))) continue;
        MessageDelivery d;
        d.is_data = false;
        d.msg = msg;
        d.from = from;
        d.at = r;
        queue_.push(deliver_at, std::move(d));
    }
}

void Simulator::transmit_data(NodeId from, const DataPacket& p, std::uint32_t data_ttl,
                              NodeId data_dest, bool unicast, NodeId unicast_to) {
    if (cfg_.protocol == Protocol::Flooding) ++counters_.routing_packets_sent;
    const double deliver_at = arrange_transmission(from, p.payload_bytes);
    // Data rides the air either way: a unicast is addressed to one hop but
    // every node in range hears the transmission.
    for (NodeId r : receivers_of(from, true, kNoNode)) {
        if (transport_rng_.bernoulli(cfg_.transport.reception_loss(adj_[r].size()))) continue;
        MessageDelivery d;
        d.is_data = true;
        d.packet = p;
        d.data_ttl = data_ttl;
        d.data_dest = data_dest;
        d.unicast_hop = unicast ? unicast_to : kNoNode;
        d.from = from;
        d.at = r;
        queue_.push(deliver_at, std::move(d));
    }
}

void Simulator::on_delivery(const MessageDelivery& d) {
    if (d.is_data)
        on_data_delivery(d);
    else
        on_control_delivery(d);
}

void Simulator::on_control_delivery(const MessageDelivery& d) {
    const ProtocolMessage& msg = d.msg;
    auto& node = nodes_[d.at];
    NodeProtocol& proto = *node.proto;

    if (msg.kind == MessageKind::McastReq) {
        if (d.at == msg.origin) return; // own flood echoed back
        if (!node.req_seen.insert({msg.origin, msg.seq}).second) return; // duplicate flood copy
        ++counters_.control_packets_received;
        ++counters_.received_by_kind[msg.kind];
        if (trace_) trace_->control_rx(now_, msg, d.at);

        auto& rev = node.reverse_path[msg.origin];
        if (msg.seq > rev.round || rev.upstream == kNoNode) {
            rev.upstream = d.from;
            rev.round = msg.seq;
            rev.hops = msg.hop_count;
        }

        if (msg.ttl_hops > 1) {
            ProtocolMessage relay = msg;
            ++relay.hop_count;
            --relay.ttl_hops;
            transmit_control(d.at, relay, true, kNoNode);
        }

        const bool answers = (cfg_.protocol == Protocol::SharedTree && is_subscriber(d.at)) ||
                             (cfg_.protocol == Protocol::Aamrp && proto.role() == Role::Leader);
        if (answers && d.at != msg.origin) send_mcast_rep(d.at, msg.origin, msg.seq);
        return;
    }

    if (msg.kind == MessageKind::McastRep) {
        ++counters_.control_packets_received;
        ++counters_.received_by_kind[msg.kind];
        if (trace_) trace_->control_rx(now_, msg, d.at);

        const NodeId source = msg.target;
        if (d.at == source) {
            source_state_[source].leader_last_rep_round[msg.origin] = msg.round;
            return;
        }
        // Old routes are replaced round by round: a newer reply resets the
        // child set, and entries left unrenewed age out at the data plane.
        auto& fwd = node.forwarder[source];
        if (fwd.round < msg.round) {
            fwd.round = msg.round;
            fwd.children.clear();
        }
        fwd.refreshed = now_;
        fwd.children.insert(d.from);

        auto rev = node.reverse_path.find(source);
        if (rev == node.reverse_path.end() || rev->second.round != msg.round) return;
        if (msg.ttl_hops <= 1) return;
        ProtocolMessage relay = msg;
        ++relay.hop_count;
        --relay.ttl_hops;
        transmit_control(d.at, relay, false, rev->second.upstream);
        return;
    }

    // JOIN / LEADER / MEMBER — the cluster state machine.
    if (cfg_.protocol != Protocol::Aamrp) return;
    if (msg.kind != MessageKind::Member && proto.seen(msg.origin, msg.seq))
        return; // duplicate flood copy, dropped before it counts
    if (msg.origin == d.at) return;
    ++counters_.control_packets_received;
    ++counters_.received_by_kind[msg.kind];
    if (trace_) trace_->control_rx(now_, msg, d.at);
    process_actions(d.at, proto.on_message(msg, d.from, now_));
}

void Simulator::send_mcast_rep(NodeId leader, NodeId source, std::uint32_t round) {
    auto& node = nodes_[leader];
    auto rev = node.reverse_path.find(source);
    if (rev == node.reverse_path.end() || rev->second.round != round) return;
    if (leader == source) return;

    ProtocolMessage rep;
    rep.kind = MessageKind::McastRep;
    rep.origin = leader;
    rep.group = kGroup;
    rep.hop_count = 1;
    rep.ttl_hops = cfg_.world.n_nodes;
    rep.seq = node.proto->next_seq();
    rep.target = source;
    rep.round = round;
    transmit_control(leader, rep, false, rev->second.upstream);
}

void Simulator::on_data_delivery(const MessageDelivery& d) {
    const DataPacket& p = d.packet;
    auto& node = nodes_[d.at];
    const std::uint64_t key = data_key(p.source, p.seq);
    const bool first_copy = node.data_seen.insert(key).second;

    if (first_copy) {
        if (cfg_.protocol == Protocol::Flooding) {
            // The flood is the routing structure: every reception is control
            // overhead as well as a data arrival.
            ++counters_.control_packets_received;
            if (trace_) trace_->data_line(now_, p, d.at);
        }
        if (is_subscriber(d.at)) {
            ++counters_.data_packets_received_total;
            if (trace_ && cfg_.protocol != Protocol::Flooding) trace_->data_line(now_, p, d.at);
            auto exp = expected_.find(key);
            if (exp != expected_.end() && exp->second.erase(d.at) > 0) {
                ++counters_.data_receipts_unique;
                counters_.delay_sum += now_ - p.created_at;
                ++counters_.delay_samples;
            }
        }
    }

    if (cfg_.protocol == Protocol::Flooding) {
        if (first_copy) transmit_data(d.at, p, 0, kNoNode, false, kNoNode);
        return;
    }

    // Member-addressed copy (R = 1 unicast leg). Only the addressed hop
    // relays; everyone else in range just overheard it.
    if (d.data_dest != kNoNode) {
        if (d.data_dest == d.at || d.unicast_hop != d.at || d.data_ttl <= 1) return;
        NodeId hop = kNoNode;
        if (auto next = node.proto->route_to_member(d.data_dest))
            hop = *next;
        else if (distance(positions_[d.at], positions_[d.data_dest]) <= cfg_.world.radio_range)
            hop = d.data_dest;
        if (hop == kNoNode) {
            ++route_drop_count_;
            return;
        }
        transmit_data(d.at, p, d.data_ttl - 1, d.data_dest, true, hop);
        return;
    }

    // Tree relay: forwarding nodes rebroadcast each packet once. Entries not
    // renewed within two refresh rounds have been superseded and stay quiet.
    auto fwd = node.forwarder.find(p.source);
    const bool forwarder_live =
        fwd != node.forwarder.end() &&
        now_ - fwd->second.refreshed <= 2.0 * cfg_.traffic.refresh_period;
    if (forwarder_live && node.data_tree_forwarded.insert(key).second)
        transmit_data(d.at, p, 0, kNoNode, false, kNoNode);

    // Scoped cluster broadcast relay.
    if (d.data_ttl > 1 && d.data_dest == kNoNode && node.data_local_relayed.insert(key).second)
        transmit_data(d.at, p, d.data_ttl - 1, kNoNode, false, kNoNode);

    // Cluster leaders hand the packet down to their members.
    if (cfg_.protocol == Protocol::Aamrp && node.proto->role() == Role::Leader &&
        node.data_delivered_local.insert(key).second) {
        if (cfg_.collect_diagnostics) diag_leader_got_[key].insert(d.at);
        leader_local_delivery(d.at, p);
    }
}

DeliveryDiagnostics Simulator::diagnostics() const {
    DeliveryDiagnostics diag;
    for (const auto& [key, members] : expected_) {
        auto bind = diag_bindings_.find(key);
        if (bind == diag_bindings_.end()) continue;
        auto got = diag_leader_got_.find(key);
        auto fresh = diag_leader_fresh_.find(key);
        for (NodeId m : members) { // still expected = never receipted
            auto leader = bind->second.find(m);
            const NodeId l = leader == bind->second.end() ? kNoNode : leader->second;
            if (l == m)
                ++diag.missed_as_leader;
            else if (l != kNoNode && got != diag_leader_got_.end() && got->second.count(l) > 0)
                ++diag.missed_local_leg;
            else
                ++diag.missed_tree_leg;
            if (l != kNoNode && l != m &&
                (fresh == diag_leader_fresh_.end() || fresh->second.count(l) == 0))
                ++diag.missed_leader_stale;
            if (l == m && (fresh == diag_leader_fresh_.end() || fresh->second.count(l) == 0))
                ++diag.missed_leader_stale;
        }
    }
    return diag;
}

void Simulator::leader_local_delivery(NodeId leader, const DataPacket& p) {
    auto& node = nodes_[leader];
    const auto& cmt = node.proto->cmt();
    if (cmt.empty()) return;

    std::uint32_t n_ocm = 0, n_ncm = 0, furthest = 1;
    for (const auto& [member, e] : cmt) {
        (e.is_new ? n_ncm : n_ocm) += 1;
        furthest = std::max(furthest, e.distance_hops);
    }
    const std::uint32_t range = broadcast_range(n_ocm, n_ncm, cfg_.cluster.threshold_T);

    if (range == 1) {
        for (const auto& [member, e] : cmt) {
            if (member == leader) continue;
            NodeId hop = kNoNode;
            if (e.distance_hops <= 1)
                hop = member;
            else if (auto next = node.proto->route_to_member(member))
                hop = *next;
            if (hop == kNoNode) {
                ++route_drop_count_;
                continue;
            }
            transmit_data(leader, p, cfg_.world.k_hops, member, true, hop);
        }
        return;
    }
    // Broadcast clamped to the furthest child on record.
    const std::uint32_t ttl = std::min(range, furthest);
    transmit_data(leader, p, ttl, kNoNode, false, kNoNode);
}

void Simulator::on_sample() {
    StateSample s;
    s.time = now_;
    for (const auto& node : nodes_) {
        switch (node.proto->role()) {
        case Role::Leader: ++s.leaders; break;
        case Role::Member: ++s.members; break;
        case Role::Joining: ++s.joining; break;
        default: break;
        }
    }
    samples_.push_back(s);
    const double next = now_ + cfg_.sample_period;
    if (next <= cfg_.world.sim_time) queue_.push(next, MetricSample{});
}

MetricsRow run_once(const RunConfig& cfg, std::uint64_t seed, TraceWriter* trace) {
    RunConfig seeded = cfg;
    seeded.world.rng_seed = seed;
    Simulator sim(seeded, trace);
    sim.run();
    return make_row(to_string(cfg.protocol), cfg.world.n_nodes, cfg.group_size, seed,
                    sim.counters());
}

} // namespace aamrp
