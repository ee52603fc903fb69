#pragma once

#include <string>
#include <vector>

#include "aamrp/rng.hpp"
#include "aamrp/types.hpp"

namespace aamrp {

// Area, radio and mobility parameters for one scenario.
struct WorldConfig {
    double area_width = 600.0;  // meters
    double area_height = 600.0; // meters
    double radio_range = 250.0; // meters
    std::uint32_t n_nodes = 50;
    std::uint32_t k_hops = 2; // scope of the k-hop neighborhood
    double min_speed = 1.0;   // m/s
    double max_speed = 10.0;  // m/s
    double pause_time = 5.0;  // seconds
    double sim_time = 50.0;   // seconds
    double tick = 0.1;        // mobility sampling interval, seconds
    std::uint64_t rng_seed = 1;

    // Returns a human-readable violation message, empty when valid.
    std::string validate() const;
};

// Random-waypoint state of one node. A node is paused while pause_remaining
// is positive; when current == waypoint and the pause has elapsed, the next
// tick draws a fresh waypoint and speed.
struct MobilityState {
    Position current;
    Position waypoint;
    double speed = 0.0; // m/s
    double pause_remaining = 0.0;
};

// Places a node uniformly in the area, initially ready to draw its first leg.
MobilityState initial_mobility(const WorldConfig& config, Rng& rng);

// Advances one node by dt seconds. Movement is linear toward the waypoint at
// the drawn speed; arrival clamps to the waypoint and starts the pause.
void advance_mobility(MobilityState& state, const WorldConfig& config, double dt, Rng& rng);

} // namespace aamrp
