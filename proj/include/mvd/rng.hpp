#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace mvd {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Uniform double in [0, 1) from the top 53 bits; bit-stable across
/// platforms, unlike std::uniform_real_distribution.
inline double unit_double(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

inline double draw_unit(std::mt19937_64& g) { return unit_double(g()); }

/// Unbiased integer in [0, n) by rejection sampling.
inline std::uint64_t draw_below(std::mt19937_64& g, std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    while (true) {
        const std::uint64_t x = g();
        if (x >= threshold) return x % n;
    }
}

/// Partial Fisher-Yates: m distinct elements drawn uniformly from pool.
template <typename T>
std::vector<T> sample_without_replacement(std::vector<T> pool, std::size_t m,
                                          std::mt19937_64& g) {
    if (m > pool.size()) m = pool.size();
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(draw_below(g, pool.size() - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(m);
    return pool;
}

}  // namespace mvd
