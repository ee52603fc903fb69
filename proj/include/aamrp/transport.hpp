#pragma once

#include <cstdint>
#include <string>

namespace aamrp {

// Abstract contention-free wireless transport. A transmission reaches every
// node within radio range of the sender at decision time; each node owns one
// half-duplex transmitter, so back-to-back sends serialize at the configured
// bandwidth. Reception loss is an independent draw per receiver:
//   p = loss_probability + density_loss * (receiver neighbor count),
// clamped to [0, max_loss]. The density term is a one-parameter stand-in for
// the reception degradation crowded neighborhoods see on a shared channel.
struct TransportModel {
    double per_hop_latency = 0.002;  // seconds, propagation + processing
    double loss_probability = 0.0;   // base reception loss
    double density_loss = 0.004;     // extra loss per neighbor of the receiver
    double max_loss = 0.9;
    double bandwidth_bps = 2.0e6;    // channel capacity
    std::uint32_t control_bytes = 64;

    double tx_seconds(std::uint32_t payload_bytes) const {
        return static_cast<double>(payload_bytes) * 8.0 / bandwidth_bps;
    }

    double reception_loss(std::size_t receiver_degree) const {
        const double p =
            loss_probability + density_loss * static_cast<double>(receiver_degree);
        if (p < 0.0) return 0.0;
        return p > max_loss ? max_loss : p;
    }

    std::string validate() const;
};

} // namespace aamrp
