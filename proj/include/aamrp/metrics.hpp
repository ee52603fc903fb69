#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "aamrp/messages.hpp"

namespace aamrp {

// Raw monotone counters accumulated by one run. Receptions are counted once
// per (packet, receiving node): copies of an already-seen flood are dropped
// at the dedup stage and are not "received packets".
struct RunCounters {
    std::uint64_t control_packets_received = 0;
    std::uint64_t routing_packets_sent = 0;
    std::uint64_t data_packets_sent_by_sources = 0;
    std::uint64_t data_receipts_unique = 0;       // expected (member, packet) pairs served
    std::uint64_t data_packets_received_total = 0; // data copies arriving at group members
    double delay_sum = 0.0;
    std::uint64_t delay_samples = 0;
    std::uint64_t expected_receipts = 0; // packets x live members at send time
    std::map<MessageKind, std::uint64_t> received_by_kind;
};

// Control overhead: total routing control packets received.
std::uint64_t overhead(const RunCounters& c);

// Normalized routing load: routing packets sent over data packets received.
// nullopt when no data was received.
std::optional<double> routing_load(const RunCounters& c);

// Mean end-to-end delay over unique receipts, seconds. nullopt without
// samples.
std::optional<double> avg_delay(const RunCounters& c);

// Packet delivery fraction, percent of expected (member, packet) receipts
// that occurred. nullopt when nothing was expected.
std::optional<double> pdf_percent(const RunCounters& c);

// One (protocol, n_nodes, group_size, seed) result row.
struct MetricsRow {
    std::string protocol;
    std::uint32_t n_nodes = 0;
    std::uint32_t group_size = 0;
    std::uint64_t seed = 0;
    std::uint64_t overhead = 0;
    std::optional<double> load;
    std::optional<double> delay_s;
    std::optional<double> pdf_pct;
};

MetricsRow make_row(const std::string& protocol, std::uint32_t n_nodes, std::uint32_t group_size,
                    std::uint64_t seed, const RunCounters& c);

// Serializes rows plus per-(protocol, nodes, group) mean rows, sorted by
// (protocol, n_nodes, group_size, seed). "N/A" marks undefined values.
std::string metrics_csv(std::vector<MetricsRow> rows);

// Formats a metric value the way the CSV does.
std::string format_metric(std::optional<double> v);

} // namespace aamrp
