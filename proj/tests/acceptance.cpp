// Acceptance harness: one self-contained check per release criterion.
// Usage: acceptance [N]   (N = 1..9; no argument runs all criteria)
// Prints one [PASS]/[FAIL] line per criterion and exits nonzero on failure.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "qtomo/estimation.hpp"
#include "qtomo/measurement.hpp"
#include "qtomo/metrics.hpp"
#include "qtomo/rng.hpp"
#include "qtomo/states.hpp"

#ifdef QTEST_HAVE_EIGEN
#include <Eigen/Dense>
#endif

using namespace qtomo;
namespace fs = std::filesystem;

namespace {

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

std::string fmt(double v) {
    std::ostringstream out;
    out.precision(6);
    out << v;
    return out.str();
}

DensityMatrix werner(double p) {
    CMatrix m = bell_state().mat * Complex{p, 0.0};
    for (std::size_t d = 0; d < 4; ++d) m(d, d) += Complex{(1.0 - p) / 4.0, 0.0};
    return DensityMatrix::validated(m);
}

CholeskyParams random_params(std::mt19937_64& gen) {
    CholeskyParams params;
    for (double& w : params.w) w = 2.0 * rng::uniform01(gen) - 1.0;
    return params;
}

// Concurrence recomputed from scratch: the square roots of the eigenvalues of
// rho * rho_flipped, largest minus the rest.
#ifdef QTEST_HAVE_EIGEN
double concurrence_brute_force(const DensityMatrix& rho) {
    const CMatrix product = rho.mat * spin_flip(rho);
    Eigen::Matrix4cd m;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) m(r, c) = product(r, c);
    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> solver(m, false);
    std::array<double, 4> roots{};
    for (int k = 0; k < 4; ++k) roots[k] = std::sqrt(std::max(0.0, solver.eigenvalues()[k].real()));
    std::sort(roots.begin(), roots.end(), std::greater<>());
    return std::max(0.0, roots[0] - roots[1] - roots[2] - roots[3]);
}
#endif

bool criterion_1(std::string& detail) {
    Timer timer;
    if (std::abs(concurrence(bell_state()) - 1.0) > 1e-9) {
        detail = "C(bell) = " + fmt(concurrence(bell_state()));
        return false;
    }
    if (std::abs(concurrence(maximally_mixed())) > 1e-9) {
        detail = "C(I/4) = " + fmt(concurrence(maximally_mixed()));
        return false;
    }
    const double ps[] = {0.0, 0.2, 1.0 / 3.0, 0.5, 0.8, 1.0};
    for (double p : ps) {
        const DensityMatrix rho = werner(p);
        const double expected = std::max(0.0, (3.0 * p - 1.0) / 2.0);
        const double got = concurrence(rho);
        if (std::abs(got - expected) > 1e-6) {
            detail = "Werner p=" + fmt(p) + ": " + fmt(got) + " vs " + fmt(expected);
            return false;
        }
#ifdef QTEST_HAVE_EIGEN
        const double brute = concurrence_brute_force(rho);
        if (std::abs(got - brute) > 1e-6) {
            detail = "Werner p=" + fmt(p) + ": brute-force oracle gives " + fmt(brute);
            return false;
        }
#endif
    }
    const double elapsed = timer.seconds();
    if (elapsed >= 1.0) {
        detail = "took " + fmt(elapsed) + " s (limit 1 s)";
        return false;
    }
    detail = fmt(elapsed) + " s";
    return true;
}

bool criterion_2(std::string& detail) {
    Timer timer;
    std::mt19937_64 gen(rng::mix_seed(0x9d2c5680, 2));
    for (int rep = 0; rep < 10000; ++rep) {
        const DensityMatrix rho = density_from_cholesky(random_params(gen));
        const CMatrix& m = rho.mat;
        for (std::size_t r = 0; r < 4; ++r)
            for (std::size_t c = 0; c < 4; ++c)
                if (std::abs(m(r, c) - std::conj(m(c, r))) > 1e-9) {
                    detail = "rep " + std::to_string(rep) + ": not Hermitian";
                    return false;
                }
        if (std::abs(mat_trace(m) - Complex{1.0, 0.0}) > 1e-9) {
            detail = "rep " + std::to_string(rep) + ": trace " + fmt(mat_trace(m).real());
            return false;
        }
        const HermitianEig eig = hermitian_eig(m);
        for (double v : eig.eigenvalues)
            if (v < -1e-8) {
                detail = "rep " + std::to_string(rep) + ": eigenvalue " + fmt(v);
                return false;
            }
    }
    const double elapsed = timer.seconds();
    if (elapsed >= 10.0) {
        detail = "took " + fmt(elapsed) + " s (limit 10 s)";
        return false;
    }
    detail = "10000 states in " + fmt(elapsed) + " s";
    return true;
}

bool criterion_3(std::string& detail) {
    std::mt19937_64 gen(rng::mix_seed(0x9d2c5680, 3));
    for (int rep = 0; rep < 1000; ++rep) {
        const DensityMatrix rho = density_from_cholesky(random_params(gen));
        const double a = rng::uniform01(gen);
        const double b = 100.0 * rng::uniform01(gen);
        const double n = 100.0 + 99900.0 * rng::uniform01(gen);
        const auto direct = expected_noisy(rho, NoiseModel(n, a, b));
        const auto mixed = expected_ideal(apply_dark_mixture(rho, a), n);
        for (std::size_t k = 0; k < kNumPairs; ++k)
            if (std::abs(direct[k] - (mixed[k] + b)) > 1e-10) {
                detail = "rep " + std::to_string(rep) + ", k=" + std::to_string(k) + ": diff " +
                         fmt(direct[k] - (mixed[k] + b));
                return false;
            }
    }
    detail = "1000 random models";
    return true;
}

bool criterion_4(std::string& detail) {
    const CountSet counts = simulate_counts(bell_state(), NoiseModel(1000.0, 0.0, 0.0), 0,
                                            SamplingMode::Exact);
    const DensityMatrix truth = bell_state();
    for (LossKind kind : {LossKind::Mle, LossKind::Chi2, LossKind::Ls}) {
        for (CountModel model : {CountModel::Ideal, CountModel::DarkCorrected}) {
            const EstimatorSpec spec{kind, model};
            const TrialEnsemble ensemble = estimate(counts, spec, FitConfig{});
            const double fid = fidelity(average_state(ensemble), truth);
            double n_hat = 0.0;
            for (const TrialResult& trial : ensemble.trials) n_hat += trial.n_pairs_hat;
            n_hat /= static_cast<double>(ensemble.trials.size());
            const std::string name = loss_kind_name(kind) + "/" + count_model_name(model);
            if (fid < 0.999) {
                detail = name + ": fidelity " + fmt(fid);
                return false;
            }
            if (std::abs(n_hat - 1000.0) > 10.0) {
                detail = name + ": recovered n_pairs " + fmt(n_hat);
                return false;
            }
        }
    }
    detail = "six variants, fidelity >= 0.999, n_pairs within 1%";
    return true;
}

struct DarkBenefit {
    double mean_c_dark = 0.0;
    double mean_c_ideal = 0.0;
    double fid_dark = 0.0;
    double fid_ideal = 0.0;
};

DarkBenefit run_dark_benefit(std::uint64_t seed) {
    const CountSet counts = simulate_counts(bell_state(), NoiseModel(1000.0, 0.2, 50.0), seed,
                                            SamplingMode::Poisson);
    FitConfig config;
    config.seed = seed;
    const auto metric = [](const DensityMatrix& rho) { return concurrence(rho); };
    const TrialEnsemble dark = estimate(counts, {LossKind::Mle, CountModel::DarkCorrected}, config);
    const TrialEnsemble ideal = estimate(counts, {LossKind::Mle, CountModel::Ideal}, config);
    DarkBenefit out;
    out.mean_c_dark = summarize(dark, metric).mean;
    out.mean_c_ideal = summarize(ideal, metric).mean;
    out.fid_dark = fidelity(average_state(dark), bell_state());
    out.fid_ideal = fidelity(average_state(ideal), bell_state());
    return out;
}

bool criterion_5(std::string& detail) {
    int holds = 0;
    double min_gap = 1.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const DarkBenefit r = run_dark_benefit(seed);
        const double gap = r.mean_c_dark - r.mean_c_ideal;
        min_gap = std::min(min_gap, gap);
        if (gap >= 0.05 && r.fid_dark > r.fid_ideal) ++holds;
    }
    detail = std::to_string(holds) + "/10 seeds, smallest concurrence gap " + fmt(min_gap);
    return holds >= 9;
}

bool criterion_6(std::string& detail) {
    const CountSet counts = simulate_counts(bell_state(), NoiseModel(1000.0, 0.2, 50.0), 1,
                                            SamplingMode::Poisson);
    FitConfig config;
    config.seed = 1;
    const TrialEnsemble mle = estimate(counts, {LossKind::Mle, CountModel::DarkCorrected}, config);
    const TrialEnsemble chi2 =
        estimate(counts, {LossKind::Chi2, CountModel::DarkCorrected}, config);
    const double fid = fidelity(average_state(mle), average_state(chi2));
    detail = "fidelity " + fmt(fid);
    return fid >= 0.995;
}

bool criterion_7(std::string& detail) {
    const std::size_t grid = 360;
    const CoincidenceCurve bell_curve = coincidence_curve(bell_state(), 1000.0, grid);
    if (std::abs(bell_curve.values[90] - 500.0) > 1e-6) {
        detail = "n(pi/2) = " + fmt(bell_curve.values[90]);
        return false;
    }
    if (std::abs(bell_curve.values[0]) > 1e-6) {
        detail = "n(0) = " + fmt(bell_curve.values[0]);
        return false;
    }

    std::vector<DensityMatrix> states{bell_state(), maximally_mixed(), werner(0.5)};
    std::mt19937_64 gen(rng::mix_seed(0x9d2c5680, 7));
    for (int rep = 0; rep < 20; ++rep) states.push_back(density_from_cholesky(random_params(gen)));

    for (std::size_t s = 0; s < states.size(); ++s) {
        const CoincidenceCurve curve = coincidence_curve(states[s], 1000.0, grid);
        for (std::size_t g = 0; g < grid; ++g) {
            if (!(curve.values[g] >= 0.0)) {
                detail = "state " + std::to_string(s) + ": n(theta_" + std::to_string(g) +
                         ") = " + fmt(curve.values[g]);
                return false;
            }
            const std::size_t opposite = (g + grid / 2) % grid;
            if (std::abs(curve.values[g] - curve.values[opposite]) > 1e-9) {
                detail = "state " + std::to_string(s) + ": period gap " +
                         fmt(curve.values[g] - curve.values[opposite]);
                return false;
            }
        }
    }
    detail = "anchors exact, " + std::to_string(states.size()) + " states nonnegative and periodic";
    return true;
}

// --- criterion 8: byte-identical reruns through the installed CLI ---

const std::string kCli = QTOMO_CLI_PATH;

int run_cli(const fs::path& dir, const std::string& args) {
    const std::string cmd = kCli + " " + args + " > " + (dir / "stdout.txt").string() + " 2> " +
                            (dir / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    if (status == -1 || !WIFEXITED(status)) return -1;
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

std::string without_timestamps(const std::string& text) {
    std::istringstream lines(text);
    std::string line, out;
    while (std::getline(lines, line))
        if (line.find("generated_at") == std::string::npos) out += line + "\n";
    return out;
}

bool criterion_8(std::string& detail) {
    const fs::path dir =
        fs::temp_directory_path() / ("qtomo-accept-" + std::to_string(std::random_device{}()));
    fs::create_directories(dir);
    struct Cleanup {
        fs::path p;
        ~Cleanup() { std::error_code ec; fs::remove_all(p, ec); }
    } cleanup{dir};

    const auto file = [&](const char* name) { return (dir / name).string(); };

    struct Step {
        std::string label;
        std::string args;   // without --output
        bool timestamped;   // result carries a generated_at line
    };
    const std::string est_args = " --estimator mle --model dark --trials 3 --iterations 150 "
                                 "--population 24 --seed 12 --jobs 2";
    const std::vector<Step> steps = {
        {"simulate", "simulate --state bell --n-pairs 1000 --dark-rate 0.2 --background 50 "
                     "--mode poisson --seed 11", false},
        {"estimate", "estimate " + file("simulate-a.out") + est_args, true},
        {"metrics", "metrics " + file("estimate-a.out"), true},
        {"analyze", "analyze " + file("estimate-a.out") + " --grid 90 --bell-overlay", false},
    };

    for (const Step& step : steps) {
        const std::string out_a = file((step.label + "-a.out").c_str());
        const std::string out_b = file((step.label + "-b.out").c_str());
        if (run_cli(dir, step.args + " --output " + out_a) != 0 ||
            run_cli(dir, step.args + " --output " + out_b) != 0) {
            detail = step.label + ": nonzero exit";
            return false;
        }
        std::string a = slurp(out_a);
        std::string b = slurp(out_b);
        if (step.timestamped) {
            a = without_timestamps(a);
            b = without_timestamps(b);
        }
        if (a.empty() || a != b) {
            detail = step.label + ": reruns differ";
            return false;
        }
    }
    detail = "simulate/estimate/metrics/analyze reruns byte-identical";
    return true;
}

bool criterion_9(std::string& detail) {
    std::vector<Interval> bounds(10, Interval{-5.0, 5.0});
    const auto sphere = [](std::span<const double> x) {
        double sum = 0.0;
        for (double v : x) sum += v * v;
        return sum;
    };
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        FitConfig config;
        config.seed = seed;
        const DeResult result = minimize_de(sphere, bounds, config);
        worst = std::max(worst, result.best_value);
        if (!(result.best_value < 1e-10)) {
            detail = "seed " + std::to_string(seed) + ": best " + fmt(result.best_value);
            return false;
        }
    }
    detail = "5/5 seeds, worst best-value " + fmt(worst);
    return true;
}

struct Criterion {
    int id;
    const char* label;
    bool (*run)(std::string&);
};

const Criterion kCriteria[] = {
    {1, "concurrence anchors and Werner sweep match the oracle", criterion_1},
    {2, "random Cholesky states are Hermitian, trace-one, PSD", criterion_2},
    {3, "dark-count model equals mixture route plus background", criterion_3},
    {4, "noiseless Bell recovery by all six estimator variants", criterion_4},
    {5, "dark-count correction recovers concurrence and fidelity", criterion_5},
    {6, "corrected MLE and chi2 agree on the same dataset", criterion_6},
    {7, "coincidence curve anchors, nonnegativity, pi-periodicity", criterion_7},
    {8, "CLI reruns are byte-identical up to timestamps", criterion_8},
    {9, "differential evolution solves the 10-dim sphere", criterion_9},
};

} // namespace

int main(int argc, char** argv) {
    int selected = 0;
    if (argc > 1) {
        selected = std::atoi(argv[1]);
        if (selected < 1 || selected > 9) {
            std::cerr << "usage: " << argv[0] << " [criterion 1..9]\n";
            return 2;
        }
    }

    int failures = 0;
    for (const Criterion& criterion : kCriteria) {
        if (selected != 0 && criterion.id != selected) continue;
        std::string detail;
        bool ok = false;
        try {
            ok = criterion.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << criterion.id << ": "
                  << criterion.label;
        if (!detail.empty()) std::cout << " (" << detail << ")";
        std::cout << std::endl;
        if (!ok) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
