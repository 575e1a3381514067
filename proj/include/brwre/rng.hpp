#pragma once

#include <cstdint>

namespace brwre {

// SplitMix64 finalizer. Used as the avalanche stage of the keyed, stateless
// generators below: every random quantity in the project is a pure function
// of (seed, coordinates, time, counter), so any draw can be replayed without
// materializing generator state.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t key_combine(std::uint64_t h, std::uint64_t word) {
    return mix64(h ^ (word + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2)));
}

/// Accumulates key words and produces 64-bit variates. Copy-cheap value type.
///
/// Signed inputs are folded in as their two's-complement 64-bit image, so a
/// realization is reproducible across platforms with identical integer
/// semantics (any C++20 target).
class KeyedRng {
public:
    explicit KeyedRng(std::uint64_t seed) : h_(mix64(seed ^ 0x6A09E667F3BCC909ULL)) {}

    KeyedRng with(std::uint64_t word) const {
        KeyedRng r(*this);
        r.h_ = key_combine(r.h_, word);
        return r;
    }
    KeyedRng with_i64(std::int64_t word) const {
        return with(static_cast<std::uint64_t>(word));
    }

    std::uint64_t u64(std::uint64_t counter) const {
        return mix64(key_combine(h_, counter));
    }

    /// Uniform variate in [0,1) with 53 random bits.
    double uniform(std::uint64_t counter) const {
        return static_cast<double>(u64(counter) >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t h_;
};

} // namespace brwre
