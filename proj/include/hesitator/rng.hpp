#pragma once

#include <cstdint>
#include <cstddef>
#include <cmath>
#include <vector>

// Seeded PRNG for deterministic simulation runs.
//
// Standard-library distributions are not bit-stable across implementations,
// so uniform doubles are produced directly from the raw 64-bit stream
// (top 53 bits / 2^53). Generator state is xoshiro256**, seeded through
// splitmix64.
//
// Stream splitting rule: every logical random stream is derived as
//   split_seed(parent_seed, stream_index)
// where split_seed is one splitmix64 step of (parent ^ golden * (index+1)).
// Experiments derive session seeds as split_seed(base_seed, session_index),
// and sessions derive sub-streams (profile, catalog, agent, epsilon) from
// fixed indices, so results are independent of scheduling and worker count.

namespace hesitator {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline uint64_t split_seed(uint64_t parent, uint64_t stream) {
    return splitmix64(parent ^ (0x9E3779B97F4A7C15ULL * (stream + 1)));
}

class Rng {
public:
    explicit Rng(uint64_t seed = 0) {
        // splitmix64 expansion; guarantees a nonzero xoshiro state
        uint64_t x = seed;
        for (auto& word : state_) {
            x = splitmix64(x);
            word = x;
        }
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
    }

    uint64_t next_u64() {
        // xoshiro256**
        const uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // uniform double in [0, 1)
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + uniform() * (hi - lo);
    }

    // uniform integer in [0, n)
    size_t uniform_index(size_t n) {
        return n == 0 ? 0 : static_cast<size_t>(uniform() * static_cast<double>(n));
    }

    // point uniform on the unit simplex (normalized exponentials)
    std::vector<double> simplex_point(size_t n) {
        std::vector<double> w(n);
        double total = 0.0;
        for (auto& v : w) {
            double u = uniform();
            if (u < 1e-300) u = 1e-300;
            v = -std::log(u);
            total += v;
        }
        for (auto& v : w) v /= total;
        return w;
    }

private:
    static uint64_t rotl(uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    uint64_t state_[4];
};

} // namespace hesitator
