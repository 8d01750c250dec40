#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string_view>

namespace abow {

// All randomized components draw from mt19937_64 streams derived from one
// master seed and a stream name, so sub-components stay independent and a
// run is reproducible from a single --seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t stream_seed(std::uint64_t master, std::string_view name) {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a over the stream name
    for (unsigned char c : name) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return splitmix64(master ^ h);
}

inline std::mt19937_64 named_stream(std::uint64_t master, std::string_view name) {
    return std::mt19937_64(stream_seed(master, name));
}

// Uniform double in [0,1). Hand-rolled from raw bits instead of
// std::uniform_real_distribution so that byte-identical artifacts do not
// depend on the standard library's distribution internals.
inline double canonical(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Unbiased integer in [0, n). Rejection sampling on the top of the range.
inline std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x = rng();
    while (x >= limit) x = rng();
    return x % n;
}

// Standard normal via Box-Muller; one value per call, second discarded.
inline double standard_normal(std::mt19937_64& rng) {
    double u1 = canonical(rng);
    while (u1 <= 0.0) u1 = canonical(rng);
    const double u2 = canonical(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace abow
