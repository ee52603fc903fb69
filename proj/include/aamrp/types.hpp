#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace aamrp {

// Node ids are dense 0..N-1 within a scenario.
using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

using GroupId = std::uint32_t;

struct Position {
    double x = 0.0;
    double y = 0.0;
};

inline double distance(const Position& a, const Position& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}

} // namespace aamrp
