#pragma once

#include <cstdint>
#include <random>

namespace swcc {

// Draw-order contract for everything seeded in this project:
//  * the engine is std::mt19937_64 (bit-exact across platforms per the standard),
//  * uniform doubles come from the top 53 bits of one engine output,
//  * bounded integers use rejection sampling on raw engine outputs.
// Nothing below depends on std::uniform_*_distribution, whose streams are
// implementation-defined.

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Pinned seed-derivation hash: replica/trial i of stream `a` uses seed_mix(a, i).
inline std::uint64_t seed_mix(std::uint64_t a, std::uint64_t b) {
    return splitmix64(a ^ (splitmix64(b) + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2)));
}

// Uniform in [0, 1), 53-bit resolution; consumes exactly one engine output.
inline double canonical_double(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

// Unbiased uniform integer in [0, bound); consumes >= 1 engine outputs.
inline std::uint64_t uniform_below(std::mt19937_64& gen, std::uint64_t bound) {
    const std::uint64_t threshold = -bound % bound;  // 2^64 mod bound
    for (;;) {
        const std::uint64_t r = gen();
        if (r >= threshold) return r % bound;
    }
}

}  // namespace swcc
