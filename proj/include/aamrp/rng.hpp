#pragma once

#include <cstdint>

namespace aamrp {

// Deterministic 64-bit generator (splitmix64). Streams are forked by mixing a
// tag into the parent seed, so each concern (mobility, ants, traffic,
// transport) draws from an independent sequence and never perturbs the others.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Uniform integer in [0, n). n must be > 0.
    std::uint64_t uniform_index(std::uint64_t n) { return next_u64() % n; }

    bool bernoulli(double p) { return uniform01() < p; }

    // Derive an independent stream; the child sequence shares no state with
    // the parent and is a pure function of (seed, tag).
    Rng fork(std::uint64_t tag) const {
        Rng mixer(state_ ^ (0xd1b54a32d192ed03ULL * (tag + 1)));
        return Rng(mixer.next_u64());
    }

  private:
    std::uint64_t state_;
};

// Stream tags, one per simulator concern.
namespace rng_stream {
inline constexpr std::uint64_t kMobility = 1;
inline constexpr std::uint64_t kAnts = 2;
inline constexpr std::uint64_t kTraffic = 3;
inline constexpr std::uint64_t kTransport = 4;
} // namespace rng_stream

} // namespace aamrp
