#pragma once

#include <cstdint>
#include <string>

#include "aamrp/types.hpp"

namespace aamrp {

enum class MessageKind : std::uint8_t { Join, Leader, Member, McastReq, McastRep };

const char* to_string(MessageKind k);

// Control message. hop_count counts the hops traveled by the carrying
// transmission (1 on the origin's own transmission); ttl_hops is decremented
// at each relay and a message is relayed only while ttl_hops > 1.
struct ProtocolMessage {
    MessageKind kind = MessageKind::Join;
    NodeId origin = kNoNode;
    GroupId group = 0;
    std::uint32_t hop_count = 1;
    std::uint32_t connectivity = 0; // JOIN/LEADER only
    std::uint32_t ttl_hops = 1;
    std::uint32_t seq = 0;
    // Routing subject: addressed leader for MEMBER, answered source for
    // MCAST_REP. kNoNode otherwise.
    NodeId target = kNoNode;
    // Flood round a MCAST_REP answers; ties the reply to one reverse path.
    std::uint32_t round = 0;
};

struct DataPacket {
    NodeId source = kNoNode;
    GroupId group = 0;
    std::uint32_t seq = 0;
    double created_at = 0.0;
    std::uint32_t payload_bytes = 512;
};

} // namespace aamrp
