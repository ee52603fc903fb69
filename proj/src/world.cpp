#include "aamrp/world.hpp"

#include <sstream>

namespace aamrp {

std::string WorldConfig::validate() const {
    std::ostringstream bad;
    if (area_width <= 0.0) bad << "world.area_width must be > 0; ";
    if (area_height <= 0.0) bad << "world.area_height must be > 0; ";
    if (radio_range <= 0.0) bad << "world.radio_range must be > 0; ";
    if (n_nodes == 0) bad << "world.n_nodes must be >= 1; ";
    if (k_hops < 1) bad << "protocol.k_hops must be >= 1; "; // scenario-facing field path
    if (min_speed < 0.0) bad << "world.min_speed must be >= 0; ";
    if (max_speed < min_speed) bad << "world.max_speed must be >= world.min_speed; ";
    if (pause_time < 0.0) bad << "world.pause_time must be >= 0; ";
    if (sim_time <= 0.0) bad << "world.sim_time must be > 0; ";
    if (tick <= 0.0) bad << "world.tick must be > 0; ";
    return bad.str();
}

MobilityState initial_mobility(const WorldConfig& config, Rng& rng) {
    MobilityState s;
    s.current.x = rng.uniform(0.0, config.area_width);
    s.current.y = rng.uniform(0.0, config.area_height);
    // waypoint == current forces a fresh draw on the first moving tick
    s.waypoint = s.current;
    s.speed = 0.0;
    s.pause_remaining = 0.0;
    return s;
}

void advance_mobility(MobilityState& state, const WorldConfig& config, double dt, Rng& rng) {
    if (state.pause_remaining > 0.0) {
        state.pause_remaining = std::max(0.0, state.pause_remaining - dt);
        return;
    }
    if (state.current.x == state.waypoint.x && state.current.y == state.waypoint.y) {
        state.waypoint.x = rng.uniform(0.0, config.area_width);
        state.waypoint.y = rng.uniform(0.0, config.area_height);
        state.speed = rng.uniform(config.min_speed, config.max_speed);
    }
    const double dist = distance(state.current, state.waypoint);
    const double step = state.speed * dt;
    if (dist <= step || dist == 0.0) {
        state.current = state.waypoint;
        state.pause_remaining = config.pause_time;
        return;
    }
    const double f = step / dist;
    state.current.x += (state.waypoint.x - state.current.x) * f;
    state.current.y += (state.waypoint.y - state.current.y) * f;
}

} // namespace aamrp
