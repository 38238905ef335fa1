#include "qtomo/measurement.hpp"

#include <cmath>

#include "qtomo/errors.hpp"
#include "qtomo/rng.hpp"

namespace qtomo {

NoiseModel::NoiseModel(double n_pairs_, double dark_rate_, double background_)
    : n_pairs(n_pairs_), dark_rate(dark_rate_), background(background_) {
    if (!(n_pairs > 0.0) || !std::isfinite(n_pairs))
        throw OutOfRangeError("NoiseModel: n_pairs must be finite and positive");
    if (!(dark_rate >= 0.0 && dark_rate <= 1.0))
        throw OutOfRangeError("NoiseModel: dark_rate must lie in [0, 1]");
    if (!(background >= 0.0) || !std::isfinite(background))
        throw OutOfRangeError("NoiseModel: background must be finite and non-negative");
}

void validate_counts(const CountSet& counts) {
    for (double m : counts.counts)
        if (!std::isfinite(m) || m < 0.0)
            throw MalformedCountsError("counts must be finite and non-negative");
}

std::array<double, kNumPairs> expected_ideal(const DensityMatrix& rho, double n_pairs) {
    if (!(n_pairs > 0.0) || !std::isfinite(n_pairs))
        throw OutOfRangeError("expected_ideal: n_pairs must be finite and positive");
    const ProjectorSet& set = projector_set();
    std::array<double, kNumPairs> expected{};
    for (std::size_t k = 0; k < kNumPairs; ++k)
        expected[k] = n_pairs * mat_trace(set.pairs[k] * rho.mat).real();
    return expected;
}

DensityMatrix apply_dark_mixture(const DensityMatrix& rho, double dark_rate) {
    if (!(dark_rate >= 0.0 && dark_rate <= 1.0))
        throw OutOfRangeError("apply_dark_mixture: dark_rate must lie in [0, 1]");
    CMatrix mixed = rho.mat;
    mixed *= Complex{1.0 - dark_rate, 0.0};
    CMatrix iso = CMatrix::identity(4);
    iso *= Complex{dark_rate / 4.0, 0.0};
    mixed += iso;
    return DensityMatrix{std::move(mixed)};
}

std::array<double, kNumPairs> expected_noisy(const DensityMatrix& rho, const NoiseModel& noise) {
    std::array<double, kNumPairs> expected = expected_ideal(rho, noise.n_pairs);
    const double signal = 1.0 - noise.dark_rate;
    const double floor = noise.n_pairs * noise.dark_rate / 4.0 + noise.background;
    for (double& e : expected) e = signal * e + floor;
    return expected;
}

CountSet simulate_counts(const DensityMatrix& rho, const NoiseModel& noise, std::uint64_t seed,
                         SamplingMode sampling) {
    const std::array<double, kNumPairs> expected = expected_noisy(rho, noise);
    CountSet out;
    if (sampling == SamplingMode::Exact) {
        out.counts = expected;
        return out;
    }
    std::mt19937_64 gen(rng::mix_seed(seed, 0));
    for (std::size_t k = 0; k < kNumPairs; ++k) {
        // Born probabilities can round a hair below zero; clamp before sampling.
        const double mean = expected[k] > 0.0 ? expected[k] : 0.0;
        out.counts[k] = static_cast<double>(rng::poisson(gen, mean));
    }
    return out;
}

} // namespace qtomo
