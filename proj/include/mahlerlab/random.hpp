#pragma once

#include <cstdint>

// Counter-based pseudo-random source (splitmix64 finalizer). The stateless
// form makes chunked/parallel sampling deterministic: draw k of a stream is a
// pure function of (seed, k).

namespace mahlerlab {

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t kRngGamma = 0x9e3779b97f4a7c15ULL;

/// Strictly inside (0,1); safe as a -log() argument.
inline double counter_uniform01(std::uint64_t seed, std::uint64_t counter) {
    const std::uint64_t z = mix64(seed + (counter + 1) * kRngGamma);
    return (static_cast<double>(z >> 11) + 0.5) * 0x1.0p-53;
}

/// Sequential convenience wrapper over the same stream.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += kRngGamma;
        return mix64(state_);
    }
    double uniform01() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
    int uniform_int(int lo, int hi) { // inclusive bounds
        return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }

private:
    std::uint64_t state_;
};

} // namespace mahlerlab
