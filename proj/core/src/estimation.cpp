#include "qtomo/estimation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include "qtomo/errors.hpp"
#include "qtomo/rng.hpp"

namespace qtomo {

namespace {

constexpr double kLossFloor = 1e-9; // expected-count floor before division/log
constexpr double kNormFloor = 1e-12;

void validate_config(const FitConfig& config) {
    if (config.iterations < 1) throw OutOfRangeError("FitConfig: iterations must be >= 1");
    if (config.trials < 1) throw OutOfRangeError("FitConfig: trials must be >= 1");
    if (config.population < 8) throw OutOfRangeError("FitConfig: population must be >= 8");
    if (!(config.de_weight > 0.0 && config.de_weight <= 2.0))
        throw OutOfRangeError("FitConfig: de_weight must lie in (0, 2]");
    if (!(config.de_crossover >= 0.0 && config.de_crossover <= 1.0))
        throw OutOfRangeError("FitConfig: de_crossover must lie in [0, 1]");
}

void validate_bounds(std::span<const Interval> bounds) {
    if (bounds.empty()) throw OutOfRangeError("bounds must not be empty");
    for (const Interval& b : bounds)
        if (!std::isfinite(b.lo) || !std::isfinite(b.hi) || b.lo > b.hi)
            throw OutOfRangeError("bounds must be finite intervals with lo <= hi");
}

// The 36 product kets, one per operator: all operators are rank one, so
// Tr(M_k rho) = <psi_k| rho |psi_k> = |W psi_k|^2 / Tr(W'W) and the loss
// never needs the 4x4 density matrix itself.
const std::array<std::array<Complex, 4>, kNumPairs>& pair_kets() {
    static const auto kets = [] {
        const double s = 1.0 / std::sqrt(2.0);
        const Complex i{0.0, 1.0};
        const std::array<std::array<Complex, 2>, kNumSingles> singles{{
            {1.0, 0.0},      // H
            {0.0, 1.0},      // V
            {s, -s},         // A
            {s, s},          // D
            {s, i * s},      // L
            {s, -i * s},     // R
        }};
        std::array<std::array<Complex, 4>, kNumPairs> out;
        for (int a = 1; a <= 6; ++a)
            for (int b = 1; b <= 6; ++b) {
                auto& psi = out[pair_index(a, b)];
                const auto& u = singles[a - 1];
                const auto& v = singles[b - 1];
                psi = {u[0] * v[0], u[0] * v[1], u[1] * v[0], u[1] * v[1]};
            }
        return out;
    }();
    return kets;
}

// Born probabilities p_k = Tr(M_k rho(w)) straight from the 16 triangular
// parameters.
void born_probabilities(std::span<const double> w, std::array<double, kNumPairs>& p) {
    double norm = 0.0;
    for (std::size_t d = 0; d < 16; ++d) norm += w[d] * w[d];
    if (!(norm > kNormFloor))
        throw DegenerateParamsError("loss: Tr(W'W) below 1e-12");

    const Complex w10{w[4], w[5]};
    const Complex w21{w[6], w[7]};
    const Complex w32{w[8], w[9]};
    const Complex w20{w[10], w[11]};
    const Complex w31{w[12], w[13]};
    const Complex w30{w[14], w[15]};
    const double inv = 1.0 / norm;

    const auto& kets = pair_kets();
    for (std::size_t k = 0; k < kNumPairs; ++k) {
        const auto& psi = kets[k];
        const Complex y0 = w[0] * psi[0];
        const Complex y1 = w10 * psi[0] + w[1] * psi[1];
        const Complex y2 = w20 * psi[0] + w21 * psi[1] + w[2] * psi[2];
        const Complex y3 = w30 * psi[0] + w31 * psi[1] + w32 * psi[2] + w[3] * psi[3];
        p[k] = (std::norm(y0) + std::norm(y1) + std::norm(y2) + std::norm(y3)) * inv;
    }
}

} // namespace

std::string loss_kind_name(LossKind kind) {
    switch (kind) {
    case LossKind::Mle: return "mle";
    case LossKind::Chi2: return "chi2";
    case LossKind::Ls: return "ls";
    }
    throw ValidationError("loss_kind_name: unknown loss kind");
}

std::string count_model_name(CountModel model) {
    switch (model) {
    case CountModel::Ideal: return "ideal";
    case CountModel::DarkCorrected: return "dark";
    }
    throw ValidationError("count_model_name: unknown count model");
}

LossKind parse_loss_kind(const std::string& name) {
    if (name == "mle") return LossKind::Mle;
    if (name == "chi2") return LossKind::Chi2;
    if (name == "ls") return LossKind::Ls;
    throw ValidationError("unknown estimator '" + name + "' (expected mle, chi2 or ls)");
}

CountModel parse_count_model(const std::string& name) {
    if (name == "ideal") return CountModel::Ideal;
    if (name == "dark") return CountModel::DarkCorrected;
    throw ValidationError("unknown count model '" + name + "' (expected ideal or dark)");
}

std::size_t param_count(CountModel model) {
    return model == CountModel::Ideal ? 17 : 19;
}

CholeskyParams cholesky_from_params(std::span<const double> params) {
    if (params.size() < 16)
        throw ValidationError("cholesky_from_params: need at least 16 parameters");
    CholeskyParams p;
    std::copy_n(params.begin(), 16, p.w.begin());
    return p;
}

std::vector<Interval> default_bounds(const CountSet& counts, CountModel model) {
    validate_counts(counts);
    const double max_count = *std::max_element(counts.counts.begin(), counts.counts.end());
    const double total = std::accumulate(counts.counts.begin(), counts.counts.end(), 0.0);

    std::vector<Interval> bounds(param_count(model));
    for (std::size_t d = 0; d < 16; ++d) bounds[d] = {-1.0, 1.0};
    bounds[kNPairsIndex] = {0.5 * max_count, 4.0 * total / 9.0};
    if (model == CountModel::DarkCorrected) {
        bounds[kDarkRateIndex] = {0.0, 1.0};
        bounds[kBackgroundIndex] = {0.0, max_count};
    }
    return bounds;
}

double loss(std::span<const double> params, const CountSet& counts, const EstimatorSpec& spec) {
    if (params.size() != param_count(spec.count_model))
        throw ValidationError("loss: parameter vector length does not match the count model");

    std::array<double, kNumPairs> p;
    born_probabilities(params, p);

    const double n_pairs = params[kNPairsIndex];
    double signal = n_pairs;
    double floor = 0.0;
    if (spec.count_model == CountModel::DarkCorrected) {
        const double a = params[kDarkRateIndex];
        signal = n_pairs * (1.0 - a);
        floor = n_pairs * a / 4.0 + params[kBackgroundIndex];
    }

    double sum = 0.0;
    const auto& m = counts.counts;
    switch (spec.loss_kind) {
    case LossKind::Mle:
        for (std::size_t k = 0; k < kNumPairs; ++k) {
            const double e = std::max(signal * p[k] + floor, kLossFloor);
            const double r = m[k] - e;
            sum += r * r / e + std::log(e);
        }
        break;
    case LossKind::Chi2:
        for (std::size_t k = 0; k < kNumPairs; ++k) {
            const double e = std::max(signal * p[k] + floor, kLossFloor);
            const double r = m[k] - e;
            sum += r * r / e;
        }
        break;
    case LossKind::Ls:
        for (std::size_t k = 0; k < kNumPairs; ++k) {
            const double r = m[k] - (signal * p[k] + floor);
            sum += r * r;
        }
        break;
    }
    return sum;
}

DeResult minimize_de(const std::function<double(std::span<const double>)>& objective,
                     std::span<const Interval> bounds, const FitConfig& config) {
    validate_config(config);
    validate_bounds(bounds);

    const std::size_t dim = bounds.size();
    const std::size_t np = static_cast<std::size_t>(config.population);
    std::mt19937_64 gen(config.seed);

    std::vector<std::vector<double>> pop(np, std::vector<double>(dim));
    std::vector<double> value(np);
    for (std::size_t i = 0; i < np; ++i) {
        for (std::size_t d = 0; d < dim; ++d)
            pop[i][d] = bounds[d].lo + rng::uniform01(gen) * (bounds[d].hi - bounds[d].lo);
        value[i] = objective(pop[i]);
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i < np; ++i)
        if (value[i] < value[best]) best = i;

    DeResult result;
    result.best_history.reserve(static_cast<std::size_t>(config.iterations));

    // rand/1/bin with in-place replacement: accepted trial vectors join the
    // population immediately and can serve as donors within the same
    // generation.
    std::vector<double> trial(dim);
    for (int iter = 0; iter < config.iterations; ++iter) {
        for (std::size_t i = 0; i < np; ++i) {
            std::size_t r1, r2, r3;
            do { r1 = rng::uniform_below(gen, np); } while (r1 == i);
            do { r2 = rng::uniform_below(gen, np); } while (r2 == i || r2 == r1);
            do { r3 = rng::uniform_below(gen, np); } while (r3 == i || r3 == r1 || r3 == r2);

            const std::size_t jrand = rng::uniform_below(gen, dim);
            for (std::size_t d = 0; d < dim; ++d) {
                if (d == jrand || rng::uniform01(gen) < config.de_crossover) {
                    double v = pop[r1][d] + config.de_weight * (pop[r2][d] - pop[r3][d]);
                    trial[d] = std::clamp(v, bounds[d].lo, bounds[d].hi);
                } else {
                    trial[d] = pop[i][d];
                }
            }

            const double tv = objective(trial);
            if (tv <= value[i]) {
                pop[i] = trial;
                value[i] = tv;
                if (tv < value[best]) best = i;
            }
        }
        result.best_history.push_back(value[best]);
    }

    result.best = pop[best];
    result.best_value = value[best];
    return result;
}

TrialEnsemble estimate(const CountSet& counts, const EstimatorSpec& spec, const FitConfig& config,
                       unsigned jobs) {
    validate_counts(counts);
    validate_config(config);

    const std::vector<Interval> bounds =
        config.bounds.empty() ? default_bounds(counts, spec.count_model) : config.bounds;
    if (bounds.size() != param_count(spec.count_model))
        throw OutOfRangeError("estimate: bounds length does not match the count model");
    validate_bounds(bounds);

    const std::size_t n_trials = static_cast<std::size_t>(config.trials);
    std::vector<TrialResult> results(n_trials);

    std::atomic<std::size_t> next{0};
    std::mutex failure_mutex;
    std::exception_ptr failure;

    auto run_trials = [&] {
        for (;;) {
            const std::size_t t = next.fetch_add(1);
            if (t >= n_trials) return;
            try {
                FitConfig trial_config = config;
                trial_config.seed = rng::mix_seed(config.seed, t);
                trial_config.trials = 1;
                auto objective = [&](std::span<const double> params) {
                    return loss(params, counts, spec);
                };
                DeResult de = minimize_de(objective, bounds, trial_config);

                TrialResult& out = results[t];
                out.rho = density_from_cholesky(cholesky_from_params(de.best));
                out.n_pairs_hat = de.best[kNPairsIndex];
                if (spec.count_model == CountModel::DarkCorrected) {
                    out.dark_rate_hat = de.best[kDarkRateIndex];
                    out.background_hat = de.best[kBackgroundIndex];
                }
                out.loss_value = de.best_value;
                out.trial_seed = trial_config.seed;
            } catch (...) {
                std::scoped_lock lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };

    const unsigned worker_count =
        std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n_trials)));
    if (worker_count == 1) {
        run_trials();
    } else {
        std::vector<std::thread> workers;
        workers.reserve(worker_count);
        for (unsigned w = 0; w < worker_count; ++w) workers.emplace_back(run_trials);
        for (auto& w : workers) w.join();
    }
    if (failure) std::rethrow_exception(failure);

    return TrialEnsemble{std::move(results)};
}

DensityMatrix average_state(const TrialEnsemble& ensemble) {
    if (ensemble.trials.empty()) throw EmptyEnsembleError("average_state: empty ensemble");
    CMatrix sum(4, 4);
    for (const TrialResult& t : ensemble.trials) sum += t.rho.mat;
    sum *= Complex{1.0 / static_cast<double>(ensemble.trials.size()), 0.0};
    return DensityMatrix::validated(std::move(sum));
}

Summary summarize_values(std::span<const double> values) {
    if (values.empty()) throw EmptyEnsembleError("summarize_values: no values");
    const double n = static_cast<double>(values.size());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double sd = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    return Summary{mean, sd};
}

Summary summarize(const TrialEnsemble& ensemble,
                  const std::function<double(const DensityMatrix&)>& metric) {
    if (ensemble.trials.empty()) throw EmptyEnsembleError("summarize: empty ensemble");
    std::vector<double> values;
    values.reserve(ensemble.trials.size());
    for (const TrialResult& t : ensemble.trials) values.push_back(metric(t.rho));
    return summarize_values(values);
}

} // namespace qtomo
