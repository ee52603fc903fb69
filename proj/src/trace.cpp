#include "aamrp/trace.hpp"

#include <cstdio>
#include <fstream>

namespace aamrp {

namespace {
// Fixed-width time keeps traces byte-stable across runs.
void put_time(std::ostringstream& out, double t) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", t);
    out << buf;
}
} // namespace

void TraceWriter::control_tx(double t, const ProtocolMessage& msg, bool broadcast, NodeId dest) {
    put_time(buf_, t);
    buf_ << '\t' << to_string(msg.kind) << '\t' << msg.origin << '\t';
    if (broadcast)
        buf_ << "BCAST";
    else
        buf_ << dest;
    buf_ << '\t' << msg.group << '\t' << msg.hop_count << '\t' << msg.ttl_hops << '\t' << msg.seq
         << '\n';
}

void TraceWriter::control_rx(double t, const ProtocolMessage& msg, NodeId at) {
    put_time(buf_, t);
    buf_ << '\t' << to_string(msg.kind) << "_RX\t" << msg.origin << '\t' << at << '\t' << msg.group
         << '\t' << msg.hop_count << '\t' << msg.ttl_hops << '\t' << msg.seq << '\n';
}

void TraceWriter::data_line(double t, const DataPacket& p, NodeId holder) {
    put_time(buf_, t);
    buf_ << "\tDATA\t" << p.source << '\t' << holder << '\t' << p.group << '\t' << p.seq << '\n';
}

void TraceWriter::expect_line(double t, const DataPacket& p, NodeId member) {
    put_time(buf_, t);
    buf_ << "\tEXPECT\t" << p.source << '\t' << member << '\t' << p.group << '\t' << p.seq << '\n';
}

bool TraceWriter::write_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) return false;
    out << buf_.str();
    return static_cast<bool>(out);
}

} // namespace aamrp
