#pragma once

#include <cstdint>

namespace signspan {

// Counter-based splittable generator: draw i of stream s under seed k is
// mix64(key(k, s) + (i+1) * GAMMA), the splitmix64 output function over a
// per-stream key.  Streams share no state, so trials keyed by index produce
// the same draws under any worker partition.
struct CounterRng {
    std::uint64_t key = 0;
    std::uint64_t counter = 0;

    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

    static constexpr std::uint64_t mix64(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ULL;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return z;
    }

    static constexpr CounterRng stream(std::uint64_t seed, std::uint64_t stream_index) {
        return CounterRng{mix64(seed + kGamma) ^ mix64(stream_index * kGamma + 0x632BE59BD9B4E019ULL), 0};
    }

    constexpr std::uint64_t next() { return mix64(key + (++counter) * kGamma); }

    // Uniform in [0, bound) by rejection; bound >= 1.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t limit = bound * (~std::uint64_t{0} / bound);
        std::uint64_t v;
        do {
            v = next();
        } while (v >= limit);
        return v % bound;
    }
};

}  // namespace signspan
