#pragma once

#include <cstdint>
#include <queue>
#include <variant>
#include <vector>

#include "aamrp/cluster.hpp"
#include "aamrp/messages.hpp"
#include "aamrp/types.hpp"

namespace aamrp {

// Event payloads. Simultaneous events execute in creation order (ordinal),
// which is stable and independent of the random streams.
struct MobilityTick {};

struct MessageDelivery {
    bool is_data = false;
    ProtocolMessage msg;  // when !is_data
    DataPacket packet;    // when is_data
    std::uint32_t data_ttl = 0;  // scoped broadcast / unicast hop budget
    NodeId data_dest = kNoNode;  // member-addressed data copies; kNoNode otherwise
    NodeId unicast_hop = kNoNode; // addressed relay of a data unicast; others overhear
    NodeId from = kNoNode;
    NodeId at = kNoNode;
};

struct TimerFire {
    NodeId node = kNoNode;
    NodeProtocol::TimerKind kind = NodeProtocol::TimerKind::JoinTimeout;
    std::uint64_t epoch = 0; // stale fires are dropped
};

struct TrafficGeneration {
    NodeId source = kNoNode;
};

struct TreeRefresh {
    NodeId source = kNoNode;
};

struct MetricSample {};

struct StartJoin {
    NodeId node = kNoNode;
};

struct LeaveGroup {
    NodeId node = kNoNode;
};

using EventPayload = std::variant<MobilityTick, MessageDelivery, TimerFire, TrafficGeneration,
                                  TreeRefresh, MetricSample, StartJoin, LeaveGroup>;

struct Event {
    double time = 0.0;
    std::uint64_t ordinal = 0;
    EventPayload payload;
};

struct EventAfter {
    bool operator()(const Event& a, const Event& b) const {
        if (a.time != b.time) return a.time > b.time;
        return a.ordinal > b.ordinal;
    }
};

class EventQueue {
  public:
    void push(double time, EventPayload payload) {
        heap_.push(Event{time, next_ordinal_++, std::move(payload)});
    }
    bool empty() const { return heap_.empty(); }
    const Event& top() const { return heap_.top(); }
    Event pop() {
        Event e = heap_.top();
        heap_.pop();
        return e;
    }

  private:
    std::priority_queue<Event, std::vector<Event>, EventAfter> heap_;
    std::uint64_t next_ordinal_ = 0;
};

} // namespace aamrp
