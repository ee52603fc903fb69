#pragma once

#include <sstream>
#include <string>

#include "aamrp/messages.hpp"
#include "aamrp/types.hpp"

namespace aamrp {

// Tab-separated event log. Three line classes share the file:
//   control:  time  KIND[_RX]  origin  dest-or-BCAST  group  hop_count  ttl  seq
//   data:     time  DATA       source  holder         group  seq
//   expected: time  EXPECT     source  member         group  seq
// Control transmissions carry the bare message kind and the addressed next
// hop (or BCAST); receptions carry the _RX suffix and the receiving node, and
// are written only for receptions that count (first arrival per packet and
// node). EXPECT lines pin the delivery denominator at send time, so a trace
// replays to exactly the live run's metrics. Lines starting with '#' are
// comments.
class TraceWriter {
  public:
    void comment(const std::string& text) { buf_ << "# " << text << '\n'; }

    void control_tx(double t, const ProtocolMessage& msg, bool broadcast, NodeId dest);
    void control_rx(double t, const ProtocolMessage& msg, NodeId at);
    void data_line(double t, const DataPacket& p, NodeId holder);
    void expect_line(double t, const DataPacket& p, NodeId member);

    std::string str() const { return buf_.str(); }
    bool write_file(const std::string& path) const;

  private:
    std::ostringstream buf_;
};

} // namespace aamrp
