#include "qtomo/rng.hpp"

#include <cmath>
#include <numbers>

#include "qtomo/errors.hpp"

namespace qtomo::rng {

namespace {

// Knuth inversion; number of iterations grows with the mean, so it is only
// used below the rejection threshold.
std::uint64_t poisson_inversion(std::mt19937_64& gen, double mean) {
    const double limit = std::exp(-mean);
    double p = 1.0;
    std::uint64_t k = 0;
    do {
        ++k;
        p *= uniform01(gen);
    } while (p > limit);
    return k - 1;
}

// Atkinson's logistic-envelope rejection (exact for any mean, O(1) expected
// draws). Constants follow the published scheme.
std::uint64_t poisson_rejection(std::mt19937_64& gen, double mean) {
    const double c = 0.767 - 3.36 / mean;
    const double beta = std::numbers::pi / std::sqrt(3.0 * mean);
    const double alpha = beta * mean;
    const double k = std::log(c) - mean - std::log(beta);
    const double log_mean = std::log(mean);

    for (;;) {
        double u1 = uniform01(gen);
        if (u1 <= 0.0 || u1 >= 1.0) continue;
        const double x = (alpha - std::log((1.0 - u1) / u1)) / beta;
        const double n = std::floor(x + 0.5);
        if (n < 0.0) continue;
        const double u2 = uniform01(gen);
        if (u2 <= 0.0) continue;
        const double y = alpha - beta * x;
        const double t = 1.0 + std::exp(y);
        const double lhs = y + std::log(u2 / (t * t));
        const double rhs = k + n * log_mean - std::lgamma(n + 1.0);
        if (lhs <= rhs) return static_cast<std::uint64_t>(n);
    }
}

} // namespace

std::uint64_t poisson(std::mt19937_64& gen, double mean) {
    if (!(mean >= 0.0) || !std::isfinite(mean))
        throw OutOfRangeError("poisson: mean must be finite and non-negative");
    if (mean == 0.0) return 0;
    if (mean < 30.0) return poisson_inversion(gen, mean);
    return poisson_rejection(gen, mean);
}

} // namespace qtomo::rng
