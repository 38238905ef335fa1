#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qtomo/estimation.hpp"
#include "qtomo/measurement.hpp"
#include "qtomo/metrics.hpp"

namespace qtomo {

// Count files are CSV with header `i,j,basis_signal,basis_idler,count` and
// exactly 36 data rows ordered by pair_index. `#`-prefixed lines carry
// free-form provenance and round-trip through CountSet::metadata.

void write_counts_csv(const std::filesystem::path& path, const CountSet& counts);

/// Throws MalformedCountsError on wrong row count, out-of-order or
/// inconsistent (i, j, label) columns, negative or non-finite counts;
/// IoError when the file cannot be read.
CountSet read_counts_csv(const std::filesystem::path& path);

// State files are JSON documents with a flat 16-entry row-major matrix of
// [re, im] pairs. Results files embed trial states in the same layout.

void write_state_json(const std::filesystem::path& path, const DensityMatrix& rho);
DensityMatrix read_state_json(const std::filesystem::path& path);

/// Echo of the run that produced a results document.
struct RunInfo {
    std::string command;
    std::string counts_file;
    std::string estimator; // "mle" | "chi2" | "ls"
    std::string model;     // "ideal" | "dark"
    int iterations = 0;
    int trials = 0;
    int population = 0;
    double de_weight = 0.0;
    double de_crossover = 0.0;
    std::uint64_t seed = 0;
    unsigned jobs = 1;
};

struct ResultsDocument {
    RunInfo run;
    DensityMatrix average_state;
    std::vector<TrialResult> trials;
};

void write_results_json(const std::filesystem::path& path, const ResultsDocument& doc);
ResultsDocument read_results_json(const std::filesystem::path& path);

struct ReportContext {
    std::string results_file;
    std::string estimator;
    std::string model;
    std::optional<std::string> reference_file;
};

void write_report_json(const std::filesystem::path& path, const MeritReport& report,
                       const ReportContext& context);

/// Fixed-width mean/SD table for terminal output.
std::string render_report_table(const MeritReport& report);

/// Curve CSV `theta,n_estimated[,n_bell]`; angles in radians with 12
/// significant digits.
void write_curve_csv(const std::filesystem::path& path, const CoincidenceCurve& curve,
                     const std::vector<double>* bell_overlay = nullptr);

} // namespace qtomo
