#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qtomo/measurement.hpp"
#include "qtomo/states.hpp"

namespace qtomo {

enum class LossKind { Mle, Chi2, Ls };
enum class CountModel { Ideal, DarkCorrected };

/// One of the six estimator variants: {MLE, chi2, LS} x {ideal, dark-corrected}.
struct EstimatorSpec {
    LossKind loss_kind = LossKind::Mle;
    CountModel count_model = CountModel::DarkCorrected;
};

std::string loss_kind_name(LossKind kind);
std::string count_model_name(CountModel model);
LossKind parse_loss_kind(const std::string& name);       // "mle" | "chi2" | "ls"
CountModel parse_count_model(const std::string& name);   // "ideal" | "dark"

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

struct FitConfig {
    int iterations = 1600;
    int trials = 40;
    int population = 60;
    double de_weight = 0.7;    // DE differential weight F
    double de_crossover = 0.9; // DE crossover rate CR
    std::uint64_t seed = 0;
    std::vector<Interval> bounds; // empty: derive from the counts
};

struct TrialResult {
    DensityMatrix rho;
    double n_pairs_hat = 0.0;
    std::optional<double> dark_rate_hat;  // dark-corrected model only
    std::optional<double> background_hat; // dark-corrected model only
    double loss_value = 0.0;
    std::uint64_t trial_seed = 0;
};

struct TrialEnsemble {
    std::vector<TrialResult> trials;
};

/// 17 parameters (w1..w16, N) for the ideal model, 19 (.., a, b) for the
/// dark-corrected one.
std::size_t param_count(CountModel model);

inline constexpr std::size_t kNPairsIndex = 16;
inline constexpr std::size_t kDarkRateIndex = 17;
inline constexpr std::size_t kBackgroundIndex = 18;

CholeskyParams cholesky_from_params(std::span<const double> params);

/// Default search box: w in [-1,1]^16 (the normalization makes W scale-free),
/// N bracketing the per-basis count sums, a in [0,1], b in [0, max count].
std::vector<Interval> default_bounds(const CountSet& counts, CountModel model);

/// Loss of one parameter vector against measured counts. Expected counts are
/// floored at 1e-9 before any division or log.
///   MLE:  sum (m-e)^2/e + ln e
///   chi2: sum (m-e)^2/e
///   LS:   sum (m-e)^2
double loss(std::span<const double> params, const CountSet& counts, const EstimatorSpec& spec);

struct DeResult {
    std::vector<double> best;
    double best_value = 0.0;
    std::vector<double> best_history; // incumbent value per iteration, non-increasing
};

/// Bounded global minimization by differential evolution (rand/1/bin with
/// immediate replacement). Deterministic for a fixed config.seed; always
/// returns the incumbent after config.iterations generations.
DeResult minimize_de(const std::function<double(std::span<const double>)>& objective,
                     std::span<const Interval> bounds, const FitConfig& config);

/// Runs config.trials independent fits; trial t is seeded with
/// rng::mix_seed(config.seed, t). With jobs > 1 trials run in a worker pool;
/// results are identical to sequential execution.
TrialEnsemble estimate(const CountSet& counts, const EstimatorSpec& spec, const FitConfig& config,
                       unsigned jobs = 1);

/// Entrywise mean of the trial states (a physical state by convexity).
DensityMatrix average_state(const TrialEnsemble& ensemble);

struct Summary {
    double mean = 0.0;
    double sd = 0.0; // sample SD, n-1 denominator; 0 when n == 1
};

Summary summarize_values(std::span<const double> values);

/// Mean and sample SD of a state metric over the trials.
Summary summarize(const TrialEnsemble& ensemble,
                  const std::function<double(const DensityMatrix&)>& metric);

} // namespace qtomo
