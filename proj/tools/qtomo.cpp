// qtomo: two-qubit polarization tomography from 36 coincidence counts.
// Verbs: simulate (synthetic datasets), estimate (ensemble fits),
// metrics (figures of merit), analyze (coincidence curves).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <optional>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "qtomo/errors.hpp"
#include "qtomo/estimation.hpp"
#include "qtomo/io.hpp"
#include "qtomo/measurement.hpp"
#include "qtomo/metrics.hpp"
#include "qtomo/rng.hpp"
#include "qtomo/states.hpp"
#include "qtomo/version.hpp"

namespace {

using namespace qtomo;

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

DensityMatrix resolve_state_spec(const std::string& spec) {
    if (spec == "bell") return bell_state();
    if (spec == "mixed") return maximally_mixed();
    if (std::filesystem::exists(spec)) return read_state_json(spec);
    throw InvalidStateSpecError("state spec '" + spec +
                                "' is neither a preset (bell, mixed) nor an existing file");
}

struct GlobalOpts {
    std::uint64_t seed = 0;
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    std::string output; // empty: per-verb default
};

std::string output_or(const GlobalOpts& global, const char* fallback) {
    return global.output.empty() ? fallback : global.output;
}

struct SimulateOpts {
    std::string state = "bell";
    double n_pairs = 1000.0;
    double dark_rate = 0.0;
    double background = 0.0;
    std::string mode = "exact";
};

int run_simulate(const GlobalOpts& global, const SimulateOpts& opt) {
    SamplingMode mode;
    if (opt.mode == "exact") mode = SamplingMode::Exact;
    else if (opt.mode == "poisson") mode = SamplingMode::Poisson;
    else throw ValidationError("unknown mode '" + opt.mode + "' (expected exact or poisson)");

    const DensityMatrix rho = resolve_state_spec(opt.state);
    const NoiseModel noise(opt.n_pairs, opt.dark_rate, opt.background);
    CountSet counts = simulate_counts(rho, noise, global.seed, mode);
    counts.metadata = "state=" + opt.state +
                      "\nn_pairs=" + format_double(opt.n_pairs) +
                      "\ndark_rate=" + format_double(opt.dark_rate) +
                      "\nbackground=" + format_double(opt.background) +
                      "\nmode=" + opt.mode +
                      "\nseed=" + std::to_string(global.seed) +
                      "\nversion=" + kVersion;

    const std::string output = output_or(global, "counts.csv");
    write_counts_csv(output, counts);
    std::printf("wrote %s (36 rows, state=%s, mode=%s)\n", output.c_str(), opt.state.c_str(),
                opt.mode.c_str());
    return 0;
}

struct EstimateOpts {
    std::string counts_file;
    std::string estimator = "mle";
    std::string model = "dark";
    FitConfig fit;
};

int run_estimate(const GlobalOpts& global, const EstimateOpts& opt) {
    const CountSet counts = read_counts_csv(opt.counts_file);
    const EstimatorSpec spec{parse_loss_kind(opt.estimator), parse_count_model(opt.model)};

    FitConfig config = opt.fit;
    config.seed = global.seed;
    const TrialEnsemble ensemble = estimate(counts, spec, config, global.jobs);

    ResultsDocument doc;
    doc.run = RunInfo{"estimate",        opt.counts_file,    opt.estimator,
                      opt.model,         config.iterations,  config.trials,
                      config.population, config.de_weight,   config.de_crossover,
                      config.seed,       global.jobs};
    doc.average_state = average_state(ensemble);
    doc.trials = ensemble.trials;

    const std::string output = output_or(global, "results.json");
    write_results_json(output, doc);
    std::printf("wrote %s (%d trials, estimator=%s, model=%s)\n", output.c_str(), config.trials,
                opt.estimator.c_str(), opt.model.c_str());
    return 0;
}

struct MetricsOpts {
    std::string results_file;
    std::string reference_file;
};

int run_metrics(const GlobalOpts& global, const MetricsOpts& opt) {
    const ResultsDocument doc = read_results_json(opt.results_file);
    const TrialEnsemble ensemble{doc.trials};

    std::optional<DensityMatrix> reference;
    if (!opt.reference_file.empty()) {
        try {
            reference = read_state_json(opt.reference_file);
        } catch (const MalformedStateError& e) {
            throw MalformedReferenceError(e.what());
        }
    }

    const MeritReport report = merit_report(ensemble, reference);
    std::fputs(render_report_table(report).c_str(), stdout);

    ReportContext context;
    context.results_file = opt.results_file;
    context.estimator = doc.run.estimator;
    context.model = doc.run.model;
    if (!opt.reference_file.empty()) context.reference_file = opt.reference_file;

    const std::string output = output_or(global, "report.json");
    write_report_json(output, report, context);
    std::printf("wrote %s\n", output.c_str());
    return 0;
}

struct AnalyzeOpts {
    std::string input_file;
    double n_pairs = 1000.0;
    bool n_pairs_given = false;
    std::size_t grid = 360;
    bool bell_overlay = false;
};

int run_analyze(const GlobalOpts& global, const AnalyzeOpts& opt) {
    DensityMatrix rho;
    double n_pairs = opt.n_pairs;

    nlohmann::json peek;
    {
        std::ifstream in(opt.input_file, std::ios::binary);
        if (!in) throw IoError("cannot open '" + opt.input_file + "' for reading");
        try {
            peek = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            throw MalformedStateError("input file '" + opt.input_file + "': " +
                                      std::string(e.what()));
        }
    }
    const std::string format = peek.is_object() ? peek.value("format", "") : "";
    if (format == "qtomo-results/1") {
        const ResultsDocument doc = read_results_json(opt.input_file);
        rho = doc.average_state;
        if (!opt.n_pairs_given) {
            double sum = 0.0;
            for (const TrialResult& t : doc.trials) sum += t.n_pairs_hat;
            n_pairs = sum / static_cast<double>(doc.trials.size());
        }
    } else if (format == "qtomo-state/1") {
        rho = read_state_json(opt.input_file);
    } else {
        throw MalformedStateError("input file '" + opt.input_file +
                                  "': expected a qtomo-state/1 or qtomo-results/1 document");
    }

    const CoincidenceCurve curve = coincidence_curve(rho, n_pairs, opt.grid);
    const std::string output = output_or(global, "curve.csv");
    if (opt.bell_overlay) {
        const CoincidenceCurve bell = coincidence_curve(bell_state(), n_pairs, opt.grid);
        write_curve_csv(output, curve, &bell.values);
    } else {
        write_curve_csv(output, curve);
    }
    std::printf("wrote %s (%zu rows, n_pairs=%s)\n", output.c_str(), curve.thetas.size(),
                format_double(n_pairs).c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-qubit state tomography from 36 polarization coincidence counts"};
    app.require_subcommand(1);
    app.set_version_flag("--version", qtomo::kVersion);
    app.set_config("--config", "", "Read options from an INI/TOML file");

    GlobalOpts global;
    app.add_option("--seed", global.seed, "Master seed for all randomness")->capture_default_str();
    app.add_option("--jobs", global.jobs, "Worker threads for estimation trials")
        ->capture_default_str();
    app.add_option("--output", global.output, "Output file (default depends on the verb)");

    SimulateOpts sim;
    CLI::App* sim_cmd = app.add_subcommand("simulate", "Generate a synthetic 36-count dataset");
    sim_cmd->fallthrough();
    sim_cmd->add_option("--state", sim.state, "Preset (bell, mixed) or a state JSON file")
        ->capture_default_str();
    sim_cmd->add_option("--n-pairs", sim.n_pairs, "Pairs emitted per measurement window")
        ->capture_default_str();
    sim_cmd->add_option("--dark-rate", sim.dark_rate, "Dark-count rate a in [0,1]")
        ->capture_default_str();
    sim_cmd->add_option("--background", sim.background, "Constant background counts b")
        ->capture_default_str();
    sim_cmd->add_option("--mode", sim.mode, "Sampling: exact or poisson")->capture_default_str();

    EstimateOpts est;
    CLI::App* est_cmd = app.add_subcommand("estimate", "Fit an ensemble of density matrices");
    est_cmd->fallthrough();
    est_cmd->add_option("counts", est.counts_file, "Counts CSV file")->required();
    est_cmd->add_option("--estimator", est.estimator, "Loss: mle, chi2 or ls")
        ->capture_default_str();
    est_cmd->add_option("--model", est.model, "Count model: ideal or dark")
        ->capture_default_str();
    est_cmd->add_option("--iterations", est.fit.iterations, "Optimizer iterations per trial")
        ->capture_default_str();
    est_cmd->add_option("--trials", est.fit.trials, "Independent fit trials")
        ->capture_default_str();
    est_cmd->add_option("--population", est.fit.population, "Optimizer population size")
        ->capture_default_str();
    est_cmd->add_option("--de-weight", est.fit.de_weight, "Differential weight F")
        ->capture_default_str();
    est_cmd->add_option("--de-crossover", est.fit.de_crossover, "Crossover rate CR")
        ->capture_default_str();

    MetricsOpts met;
    CLI::App* met_cmd = app.add_subcommand("metrics", "Figures of merit for a results file");
    met_cmd->fallthrough();
    met_cmd->add_option("results", met.results_file, "Results JSON file")->required();
    met_cmd->add_option("--reference", met.reference_file,
                        "Reference state JSON for an extra fidelity column");

    AnalyzeOpts ana;
    CLI::App* ana_cmd =
        app.add_subcommand("analyze", "Coincidence curve n(theta) for a state or results file");
    ana_cmd->fallthrough();
    ana_cmd->add_option("input", ana.input_file, "State or results JSON file")->required();
    CLI::Option* np_opt = ana_cmd->add_option(
        "--n-pairs", ana.n_pairs, "Pair rate (default: fitted mean, or 1000 for state files)");
    ana_cmd->add_option("--grid", ana.grid, "Grid points over [0, 2pi)")->capture_default_str();
    ana_cmd->add_flag("--bell-overlay", ana.bell_overlay, "Append the ideal Bell curve column");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    ana.n_pairs_given = np_opt->count() > 0;

    try {
        if (sim_cmd->parsed()) return run_simulate(global, sim);
        if (est_cmd->parsed()) return run_estimate(global, est);
        if (met_cmd->parsed()) return run_metrics(global, met);
        return run_analyze(global, ana);
    } catch (const qtomo::ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const qtomo::NumericalError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const qtomo::IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
