#pragma once
// Seeded substreams. A run has one base seed; every source of randomness
// draws from its own stream keyed by (seed, stream, indices) so that adding
// iterations or companies never perturbs existing draws, and serial and
// parallel execution agree.

#include <cstdint>
#include <random>
#include <string_view>

namespace probitfuse {

using Rng = std::mt19937_64;

enum class Stream : std::uint64_t {
    Calibration = 1,
    Prior = 2,
    Employees = 3,
    Copula = 4,
    Realization = 5,
    Qmc = 6,
    Simulation = 7,
};

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// FNV-1a; stable across platforms, used to key per-company streams.
inline std::uint64_t stable_hash(std::string_view s) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t substream_seed(std::uint64_t seed, Stream stream, std::uint64_t a = 0, std::uint64_t b = 0,
                                    std::uint64_t c = 0) noexcept {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ static_cast<std::uint64_t>(stream));
    h = splitmix64(h ^ a);
    h = splitmix64(h ^ b);
    return splitmix64(h ^ c);
}

inline Rng substream(std::uint64_t seed, Stream stream, std::uint64_t a = 0, std::uint64_t b = 0,
                     std::uint64_t c = 0) {
    return Rng(substream_seed(seed, stream, a, b, c));
}

// Beta(alpha, beta) through the gamma ratio.
inline double sample_beta(Rng& rng, double alpha, double beta) {
    std::gamma_distribution<double> ga(alpha, 1.0);
    std::gamma_distribution<double> gb(beta, 1.0);
    const double x = ga(rng);
    const double y = gb(rng);
    if (x + y <= 0.0) return alpha / (alpha + beta);
    return x / (x + y);
}

} // namespace probitfuse
