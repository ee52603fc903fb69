#pragma once

#include <string>

#include "aamrp/metrics.hpp"

namespace aamrp {

// Counters reconstructed from a trace file. Traces carry transmissions,
// counted receptions, data arrivals and the per-packet expectation set, so
// every metric replays to exactly the live run's value.
struct TraceReplay {
    std::string protocol;
    RunCounters counters;
    std::size_t lines = 0;
};

// Throws std::runtime_error on malformed lines (message carries the line
// number).
TraceReplay replay_trace_text(const std::string& text);
TraceReplay replay_trace_file(const std::string& path);

} // namespace aamrp
