#pragma once

#include <cstdint>

#include "fpp/lattice.hpp"

namespace fpp {

// 64-bit finalizer (splitmix64 / Stafford variant 13).
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Counter-based draw keyed on (seed, coordinates); independent of any box.
[[nodiscard]] inline std::uint64_t site_hash(std::uint64_t seed, const Vertex& v) noexcept {
    std::uint64_t h = mix64(seed);
    for (int i = 0; i < v.dim(); ++i) {
        const auto c = static_cast<std::uint64_t>(static_cast<std::uint32_t>(v[i]));
        h = mix64(h ^ (c + static_cast<std::uint64_t>(i + 1) * 0xD1B54A32D192ED03ULL));
    }
    return h;
}

// 53-bit draw mapped to [0, 1).
[[nodiscard]] constexpr double to_unit(std::uint64_t h) noexcept {
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

[[nodiscard]] inline double site_uniform(std::uint64_t seed, const Vertex& v) noexcept {
    return to_unit(site_hash(seed, v));
}

// Seed of replica `r` of an experiment with base seed `base`.
[[nodiscard]] constexpr std::uint64_t replica_seed(std::uint64_t base, std::uint64_t r) noexcept {
    return mix64(base ^ mix64(r + 0x5851F42D4C957F2DULL));
}

// Separates independent uses of the same seed (coloring vs Bernoulli vs animal weights).
enum class SeedDomain : std::uint64_t {
    coloring = 0,
    bernoulli = 0xB3E2A1C94F0D7765ULL,
    weights = 0x7A6C1E55D2B94F13ULL,
    paths = 0x1F83D9ABFB41BD6BULL,
};

[[nodiscard]] constexpr std::uint64_t domain_seed(std::uint64_t seed, SeedDomain d) noexcept {
    return d == SeedDomain::coloring ? seed : mix64(seed ^ static_cast<std::uint64_t>(d));
}

}  // namespace fpp
