#pragma once

#include <cstdint>
#include <random>

namespace wcorr {

/// Independent random streams used by one experiment draw.
enum class Stream : std::uint64_t {
    data = 1,
    tie_break = 2,
    permutation = 3,
};

/// SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed for (master seed, draw index, stream); a pure function of its inputs.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t draw, Stream stream) {
    return splitmix64(splitmix64(splitmix64(master) ^ draw) ^ static_cast<std::uint64_t>(stream));
}

inline std::mt19937_64 make_engine(std::uint64_t master, std::uint64_t draw, Stream stream) {
    return std::mt19937_64(derive_seed(master, draw, stream));
}

}  // namespace wcorr
