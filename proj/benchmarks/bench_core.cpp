#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "qtomo/estimation.hpp"
#include "qtomo/measurement.hpp"
#include "qtomo/metrics.hpp"
#include "qtomo/rng.hpp"
#include "qtomo/states.hpp"

namespace {

using namespace qtomo;

CholeskyParams sample_params(std::mt19937_64& gen) {
    CholeskyParams p;
    for (double& w : p.w) w = 2.0 * rng::uniform01(gen) - 1.0;
    return p;
}

void bm_kron(benchmark::State& state) {
    const auto singles = single_projectors();
    for (auto _ : state) benchmark::DoNotOptimize(kron(singles[4], singles[5]));
}
BENCHMARK(bm_kron);

void bm_hermitian_eig(benchmark::State& state) {
    std::mt19937_64 gen(11);
    const DensityMatrix rho = density_from_cholesky(sample_params(gen));
    for (auto _ : state) benchmark::DoNotOptimize(hermitian_eig(rho.mat));
}
BENCHMARK(bm_hermitian_eig);

void bm_sqrt_psd(benchmark::State& state) {
    std::mt19937_64 gen(12);
    const DensityMatrix rho = density_from_cholesky(sample_params(gen));
    for (auto _ : state) benchmark::DoNotOptimize(sqrt_psd(rho.mat));
}
BENCHMARK(bm_sqrt_psd);

void bm_concurrence(benchmark::State& state) {
    std::mt19937_64 gen(13);
    const DensityMatrix rho = density_from_cholesky(sample_params(gen));
    for (auto _ : state) benchmark::DoNotOptimize(concurrence(rho));
}
BENCHMARK(bm_concurrence);

void bm_loss_dark(benchmark::State& state) {
    const NoiseModel noise(1000.0, 0.2, 50.0);
    const CountSet counts = simulate_counts(bell_state(), noise, 7, SamplingMode::Poisson);
    const EstimatorSpec spec{LossKind::Mle, CountModel::DarkCorrected};
    std::mt19937_64 gen(14);
    std::vector<double> params(param_count(spec.count_model));
    for (std::size_t d = 0; d < 16; ++d) params[d] = 2.0 * rng::uniform01(gen) - 1.0;
    params[kNPairsIndex] = 900.0;
    params[kDarkRateIndex] = 0.15;
    params[kBackgroundIndex] = 40.0;
    for (auto _ : state) benchmark::DoNotOptimize(loss(params, counts, spec));
}
BENCHMARK(bm_loss_dark);

void bm_poisson(benchmark::State& state) {
    std::mt19937_64 gen(15);
    const double mean = static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(rng::poisson(gen, mean));
}
BENCHMARK(bm_poisson)->Arg(5)->Arg(100);

void bm_de_sphere(benchmark::State& state) {
    auto sphere = [](std::span<const double> x) {
        double s = 0.0;
        for (double v : x) s += v * v;
        return s;
    };
    std::vector<Interval> bounds(10, Interval{-5.0, 5.0});
    FitConfig config;
    config.iterations = static_cast<int>(state.range(0));
    config.seed = 3;
    for (auto _ : state) benchmark::DoNotOptimize(minimize_de(sphere, bounds, config));
}
BENCHMARK(bm_de_sphere)->Arg(100)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
