#pragma once
#include <cstdint>
#include <numbers>

namespace pq {

// splitmix64. Each trial of a randomized check runs on its own substream
// derived from (master seed, trial index), so results do not depend on the
// order in which trials execute.
struct Rng {
    std::uint64_t state = 0;

    static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
        std::uint64_t z = a + 0x9E3779B97F4A7C15ull * (b + 1);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    static Rng substream(std::uint64_t master, std::uint64_t trial) {
        return Rng{mix(master, trial)};
    }

    std::uint64_t next_u64() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 random bits.
    double next_unit() { return double(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

    double angle() { return uniform(-std::numbers::pi, std::numbers::pi); }

    int pick(int n) { return int(next_u64() % std::uint64_t(n)); }
};

} // namespace pq
