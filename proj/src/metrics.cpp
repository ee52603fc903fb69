#include "aamrp/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace aamrp {

std::uint64_t overhead(const RunCounters& c) { return c.control_packets_received; }

std::optional<double> routing_load(const RunCounters& c) {
    if (c.data_packets_received_total == 0) return std::nullopt;
    return static_cast<double>(c.routing_packets_sent) /
           static_cast<double>(c.data_packets_received_total);
}

std::optional<double> avg_delay(const RunCounters& c) {
    if (c.delay_samples == 0) return std::nullopt;
    return c.delay_sum / static_cast<double>(c.delay_samples);
}

std::optional<double> pdf_percent(const RunCounters& c) {
    if (c.expected_receipts == 0) return std::nullopt;
    return 100.0 * static_cast<double>(c.data_receipts_unique) /
           static_cast<double>(c.expected_receipts);
}

MetricsRow make_row(const std::string& protocol, std::uint32_t n_nodes, std::uint32_t group_size,
                    std::uint64_t seed, const RunCounters& c) {
    MetricsRow r;
    r.protocol = protocol;
    r.n_nodes = n_nodes;
    r.group_size = group_size;
    r.seed = seed;
    r.overhead = overhead(c);
    r.load = routing_load(c);
    r.delay_s = avg_delay(c);
    r.pdf_pct = pdf_percent(c);
    return r;
}

std::string format_metric(std::optional<double> v) {
    if (!v) return "N/A";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", *v);
    return buf;
}

namespace {

struct GroupKey {
    std::string protocol;
    std::uint32_t n_nodes;
    std::uint32_t group_size;
    bool operator<(const GroupKey& o) const {
        if (protocol != o.protocol) return protocol < o.protocol;
        if (n_nodes != o.n_nodes) return n_nodes < o.n_nodes;
        return group_size < o.group_size;
    }
};

std::optional<double> mean_of(const std::vector<std::optional<double>>& vals) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& v : vals)
        if (v) { sum += *v; ++n; }
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
}

} // namespace

std::string metrics_csv(std::vector<MetricsRow> rows) {
    std::sort(rows.begin(), rows.end(), [](const MetricsRow& a, const MetricsRow& b) {
        if (a.protocol != b.protocol) return a.protocol < b.protocol;
        if (a.n_nodes != b.n_nodes) return a.n_nodes < b.n_nodes;
        if (a.group_size != b.group_size) return a.group_size < b.group_size;
        return a.seed < b.seed;
    });

    std::ostringstream out;
    out << "protocol,n_nodes,group_size,seed,overhead,load,delay_s,pdf_pct\n";

    std::map<GroupKey, std::vector<MetricsRow>> groups;
    for (const MetricsRow& r : rows) {
        out << r.protocol << ',' << r.n_nodes << ',' << r.group_size << ',' << r.seed << ','
            << r.overhead << ',' << format_metric(r.load) << ',' << format_metric(r.delay_s)
            << ',' << format_metric(r.pdf_pct) << '\n';
        groups[{r.protocol, r.n_nodes, r.group_size}].push_back(r);
    }
    for (const auto& [key, members] : groups) {
        double overhead_sum = 0.0;
        std::vector<std::optional<double>> loads, delays, pdfs;
        for (const MetricsRow& r : members) {
            overhead_sum += static_cast<double>(r.overhead);
            loads.push_back(r.load);
            delays.push_back(r.delay_s);
            pdfs.push_back(r.pdf_pct);
        }
        const double overhead_mean = overhead_sum / static_cast<double>(members.size());
        out << key.protocol << ',' << key.n_nodes << ',' << key.group_size << ",mean,"
            << format_metric(overhead_mean) << ',' << format_metric(mean_of(loads)) << ','
            << format_metric(mean_of(delays)) << ',' << format_metric(mean_of(pdfs)) << '\n';
    }
    return out.str();
}

} // namespace aamrp
