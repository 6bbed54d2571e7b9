#ifndef SPACDC_RNG_HPP
#define SPACDC_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace spacdc {

// All randomness in the library flows through mt19937_64 generators seeded
// via the helpers below, so a run is fully determined by one base seed.
// Named streams keep the master, each worker, mask generation, ephemeral
// keys etc. statistically independent of each other.

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 14695981039346656037ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    return h;
}

constexpr std::uint64_t mix_seed(std::uint64_t base, std::string_view stream,
                                 std::uint64_t index = 0) {
    return splitmix64(splitmix64(base ^ fnv1a64(stream)) + index);
}

inline std::mt19937_64 make_rng(std::uint64_t base, std::string_view stream,
                                std::uint64_t index = 0) {
    return std::mt19937_64(mix_seed(base, stream, index));
}

// Uniform double in [0, 1) built from the top 53 bits of one draw; avoids
// std::uniform_real_distribution so streams are identical across standard
// library implementations.
inline double uniform_unit(std::mt19937_64& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

// Uniform on [-scale, scale].
inline double uniform_symmetric(std::mt19937_64& g, double scale) {
    return (2.0 * uniform_unit(g) - 1.0) * scale;
}

// Standard normal via Box-Muller on uniform_unit draws.
inline double normal_unit(std::mt19937_64& g) {
    double u1 = uniform_unit(g);
    while (u1 <= 0.0) u1 = uniform_unit(g);
    const double u2 = uniform_unit(g);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

}  // namespace spacdc

#endif
