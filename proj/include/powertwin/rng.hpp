#pragma once

// Seeded randomness with platform-independent output: std::mt19937_64 is fully
// specified by the standard, the std distributions are not, so the conversions
// live here.

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace powertwin::rng {

using Engine = std::mt19937_64;

/// Derives an independent stream seed from a base seed and a stream tag.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream)
{
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Uniform in [0, 1) with 53 random bits.
inline double uniform01(Engine& g)
{
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

inline double uniform(Engine& g, double lo, double hi)
{
    return lo + (hi - lo) * uniform01(g);
}

/// Uniform integer in [0, n) without modulo bias. n must be > 0.
inline std::uint64_t uniform_below(Engine& g, std::uint64_t n)
{
    const std::uint64_t limit = Engine::max() - (Engine::max() % n);
    std::uint64_t x = g();
    while (x >= limit) {
        x = g();
    }
    return x % n;
}

template <typename T>
void shuffle(std::vector<T>& items, Engine& g)
{
    for (std::size_t i = items.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(uniform_below(g, i));
        std::swap(items[i - 1], items[j]);
    }
}

} // namespace powertwin::rng
