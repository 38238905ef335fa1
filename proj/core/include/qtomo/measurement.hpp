#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "qtomo/states.hpp"

namespace qtomo {

/// Nuisance parameters of the count model: pairs emitted per measurement
/// window, dark-count rate a in [0,1], constant background b >= 0 counts.
struct NoiseModel {
    double n_pairs;
    double dark_rate;
    double background;

    NoiseModel(double n_pairs, double dark_rate, double background);
};

/// 36 measured counts, ordered by pair_index. Counts are reals: exact
/// expected values are not integers and the estimators never need them to be.
struct CountSet {
    std::array<double, kNumPairs> counts{};
    std::string metadata; // free-form provenance, one entry per line
};

/// Throws MalformedCountsError unless every entry is finite and >= 0.
void validate_counts(const CountSet& counts);

enum class SamplingMode { Exact, Poisson };

/// Born-rule expected counts e_k = n_pairs * Re Tr(M_k rho).
std::array<double, kNumPairs> expected_ideal(const DensityMatrix& rho, double n_pairs);

/// Convex admixture of the maximally mixed state:
/// (1 - dark_rate) * rho + dark_rate * I/4.
DensityMatrix apply_dark_mixture(const DensityMatrix& rho, double dark_rate);

/// Dark-count-corrected expected counts
///   e_k = N (1-a) Tr(M_k rho) + a N / 4 + b.
std::array<double, kNumPairs> expected_noisy(const DensityMatrix& rho, const NoiseModel& noise);

/// Synthetic count generator. Exact mode returns the expected counts
/// verbatim; Poisson mode draws once per operator, deterministically for a
/// fixed seed. Concurrent simulations must use distinct seeds.
CountSet simulate_counts(const DensityMatrix& rho, const NoiseModel& noise, std::uint64_t seed,
                         SamplingMode sampling);

} // namespace qtomo
