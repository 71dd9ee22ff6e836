#pragma once

#include <cstdint>
#include <random>

namespace gssa {

/// One round of the splitmix64 output function. Used to whiten and combine
/// seed material; successive calls on an incrementing counter give
/// well-distributed, uncorrelated 64-bit words.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Deterministic stream seed derived from a base seed plus identifying
/// indices (series, origin, replicate, ...). Mixing each component through
/// splitmix64 keeps streams independent of loop nesting and scheduling.
inline std::uint64_t deriveStreamSeed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0,
                                      std::uint64_t c = 0) {
    std::uint64_t s = splitmix64(base);
    s = splitmix64(s ^ a);
    s = splitmix64(s ^ b);
    s = splitmix64(s ^ c);
    return s;
}

/// Uniform index in [0, bound) by the multiply-shift method; bound must be > 0.
/// Unlike std::uniform_int_distribution the mapping is fully specified, so
/// resampled indices are identical across standard library implementations.
inline std::size_t boundedIndex(std::mt19937_64& gen, std::size_t bound) {
    const std::uint64_t word = gen();
    return static_cast<std::size_t>((static_cast<unsigned __int128>(word) * bound) >> 64);
}

} // namespace gssa
