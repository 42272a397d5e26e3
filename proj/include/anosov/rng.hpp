#pragma once

#include <cstdint>

namespace anosov {

// splitmix64: tiny deterministic generator with platform-independent output.
// Used for all sampling so that seeded runs reproduce byte-for-byte; the
// standard <random> distributions are implementation-defined and would not.
class rng64 {
public:
    explicit rng64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0,1), 53-bit resolution
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform in [-1,1]
    double next_signed_unit() { return 2.0 * next_unit() - 1.0; }

private:
    std::uint64_t state_;
};

// Derives an independent stream from (seed, a, b), e.g. (master, rate index,
// trial index). Mix constants are arbitrary odd numbers.
inline rng64 derived_stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
    rng64 mix(seed ^ (a * 0x9e3779b97f4a7c15ULL + 0x7f4a7c159e3779b9ULL) ^
              (b * 0xc2b2ae3d27d4eb4fULL + 0x165667b19e3779f9ULL));
    mix.next_u64();
    return mix;
}

} // namespace anosov
