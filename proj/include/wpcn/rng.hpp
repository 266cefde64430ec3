#pragma once

#include <cstdint>
#include <random>

namespace wpcn {

// mt19937_64 output is fully pinned by the standard; the helpers below avoid
// std::uniform_real_distribution and friends, whose mappings are
// implementation-defined, so streams replay bit-exactly across platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform double in [0, 1), 53 random bits.
    double uniform01() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Unit-mean exponential (Rayleigh-envelope power fading).
    double exponential_unit_mean() { return -std::log1p(-uniform01()); }

private:
    std::mt19937_64 gen_;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Stable per-(stream, index) seed derivation from one master seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) {
    return splitmix64(splitmix64(master ^ splitmix64(stream)) ^ index);
}

}  // namespace wpcn
