#pragma once

#include <cstdint>
#include <random>

namespace greenforge {

/// Deterministic random stream. Built on std::mt19937_64 (fully specified by
/// the standard) with explicit mappings to doubles and ints, so the same
/// seed yields the same values on every platform and standard library.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1), 53-bit resolution.
    double uniform01() {
        return double(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    /// Uniform integer in [lo, hi], inclusive. Unbiased via bitmask rejection.
    int uniform_int(int lo, int hi) {
        const std::uint64_t span = std::uint64_t(hi - lo) + 1;
        std::uint64_t mask = span - 1;
        mask |= mask >> 1;
        mask |= mask >> 2;
        mask |= mask >> 4;
        mask |= mask >> 8;
        mask |= mask >> 16;
        mask |= mask >> 32;
        std::uint64_t v;
        do {
            v = next_u64() & mask;
        } while (v >= span);
        return lo + int(v);
    }

private:
    std::mt19937_64 engine_;
};

/// splitmix64 finalizer; decorrelates per-image streams derived from a
/// dataset seed and an entry index.
inline std::uint64_t mix_u64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    return mix_u64(base ^ mix_u64(index + 1));
}

} // namespace greenforge
