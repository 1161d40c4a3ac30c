#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "advreg/errors.hpp"

namespace advreg {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Seedable random source on top of std::mt19937_64. The engine's output is
// fully specified by the standard, so identical seeds give identical draw
// sequences on every platform. The distributions are implemented here rather
// than taken from <random>, whose mappings are implementation-defined.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform real on [a, b) with 53-bit resolution.
    double uniform(double a = 0.0, double b = 1.0) {
        const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        return a + (b - a) * u;
    }

    // Standard normal via Box-Muller (sine branch discarded).
    double normal() {
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        constexpr double two_pi = 6.283185307179586476925286766559;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
    }

    // Uniform integer on [0, n), rejection-sampled to avoid modulo bias.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) throw ValueError("below: n must be positive");
        const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
        const std::uint64_t limit = max - max % n;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    // Fisher-Yates.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // Deterministic derived seed for an independent stream.
    std::uint64_t derive_seed(std::uint64_t stream) const {
        return splitmix64(seed_ ^ splitmix64(stream + 0x51ED2701));
    }

    RandomSource split(std::uint64_t stream) const { return RandomSource(derive_seed(stream)); }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

}  // namespace advreg
