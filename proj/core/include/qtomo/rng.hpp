#pragma once

#include <cstdint>
#include <random>

namespace qtomo::rng {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derives an independent stream seed from a master seed, e.g. one seed per
/// trial or per simulated detector run.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(splitmix64(seed) ^ splitmix64(stream * 0x9e3779b97f4a7c15ULL + 1));
}

/// Uniform double in [0, 1). Drawn straight from the engine so results do
/// not depend on the standard library's distribution implementations.
inline double uniform01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, n). Multiply-high mapping; bias is < 2^-64.
inline std::uint64_t uniform_below(std::mt19937_64& gen, std::uint64_t n) {
    return static_cast<std::uint64_t>((static_cast<__uint128_t>(gen()) * n) >> 64);
}

/// One Poisson draw. Inversion below mean 30, Atkinson's logistic-envelope
/// rejection above; both sample the exact distribution.
std::uint64_t poisson(std::mt19937_64& gen, double mean);

} // namespace qtomo::rng
