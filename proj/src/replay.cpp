#include "aamrp/replay.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace aamrp {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, '\t')) out.push_back(f);
    return out;
}

[[noreturn]] void fail(std::size_t lineno, const std::string& what) {
    std::ostringstream err;
    err << "trace line " << lineno << ": " << what;
    throw std::runtime_error(err.str());
}

std::optional<MessageKind> control_kind(const std::string& s) {
    if (s == "JOIN") return MessageKind::Join;
    if (s == "LEADER") return MessageKind::Leader;
    if (s == "MEMBER") return MessageKind::Member;
    if (s == "MCAST_REQ") return MessageKind::McastReq;
    if (s == "MCAST_REP") return MessageKind::McastRep;
    return std::nullopt;
}

} // namespace

TraceReplay replay_trace_text(const std::string& text) {
    TraceReplay replay;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;

    using PacketKey = std::pair<std::uint64_t, std::uint64_t>; // (source, seq)
    std::map<PacketKey, double> created_at;
    std::map<PacketKey, std::set<std::uint64_t>> expected;
    std::map<PacketKey, std::set<std::uint64_t>> receipted;
    std::map<PacketKey, std::set<std::uint64_t>> holders; // flooding rebroadcast derivation
    std::set<std::uint64_t> subscribers;

    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto pos = line.find("protocol=");
            if (pos != std::string::npos) {
                std::string rest = line.substr(pos + 9);
                const auto sp = rest.find(' ');
                replay.protocol = sp == std::string::npos ? rest : rest.substr(0, sp);
            }
            continue;
        }
        ++replay.lines;
        const auto fields = split_tabs(line);
        if (fields.size() < 6) fail(lineno, "too few fields");
        const double t = std::stod(fields[0]);
        const std::string& kind = fields[1];

        if (kind == "DATA" || kind == "EXPECT") {
            if (fields.size() != 6) fail(lineno, "DATA/EXPECT lines take 6 fields");
            const std::uint64_t source = std::stoull(fields[2]);
            const std::uint64_t holder = std::stoull(fields[3]);
            const std::uint64_t seq = std::stoull(fields[5]);
            const PacketKey key{source, seq};
            if (kind == "EXPECT") {
                ++replay.counters.expected_receipts;
                expected[key].insert(holder);
                subscribers.insert(holder);
                continue;
            }
            if (holder == source && created_at.count(key) == 0) {
                created_at[key] = t;
                ++replay.counters.data_packets_sent_by_sources;
                continue;
            }
            holders[key].insert(holder);
            if (replay.protocol == "flooding") ++replay.counters.control_packets_received;
            if (subscribers.count(holder) > 0) {
                ++replay.counters.data_packets_received_total;
                auto exp = expected.find(key);
                if (exp != expected.end() && exp->second.count(holder) > 0 &&
                    receipted[key].insert(holder).second) {
                    ++replay.counters.data_receipts_unique;
                    ++replay.counters.delay_samples;
                    auto created = created_at.find(key);
                    if (created == created_at.end()) fail(lineno, "receipt before generation");
                    replay.counters.delay_sum += t - created->second;
                }
            }
            continue;
        }

        // Control lines.
        if (fields.size() != 8) fail(lineno, "control lines take 8 fields");
        if (kind.size() > 3 && kind.substr(kind.size() - 3) == "_RX") {
            const auto k = control_kind(kind.substr(0, kind.size() - 3));
            if (!k) fail(lineno, "unknown reception kind " + kind);
            ++replay.counters.control_packets_received;
            ++replay.counters.received_by_kind[*k];
        } else {
            if (!control_kind(kind)) fail(lineno, "unknown kind " + kind);
            ++replay.counters.routing_packets_sent;
        }
    }

    // Flooding relays every first reception once; the flood is the routing
    // structure, so those retransmissions count as routing sends.
    if (replay.protocol == "flooding")
        for (const auto& [key, hs] : holders)
            replay.counters.routing_packets_sent += 1 + hs.size();

    return replay;
}

TraceReplay replay_trace_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open trace file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return replay_trace_text(buf.str());
}

} // namespace aamrp
