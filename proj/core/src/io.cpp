#include "qtomo/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <string_view>

#include "json.hpp"

#include "qtomo/errors.hpp"
#include "qtomo/version.hpp"

namespace qtomo {

namespace {

using nlohmann::json;

// Shortest representation that parses back to the same double.
std::string format_double(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, end);
}

double parse_double(std::string_view text, const char* context) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        throw MalformedCountsError(std::string(context) + ": bad number '" + std::string(text) +
                                   "'");
    return value;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    return out;
}

std::string read_whole_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw IoError("failed reading '" + path.string() + "'");
    return buffer.str();
}

void finish_write(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json matrix_to_json(const CMatrix& m) {
    json entries = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            entries.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
    return entries;
}

CMatrix matrix_from_json(const json& entries, const char* context) {
    if (!entries.is_array() || entries.size() != 16)
        throw ValidationError(std::string(context) + ": expected 16 [re, im] entries");
    CMatrix m(4, 4);
    for (std::size_t idx = 0; idx < 16; ++idx) {
        const json& e = entries[idx];
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
            throw ValidationError(std::string(context) + ": entry " + std::to_string(idx) +
                                  " is not a [re, im] pair");
        m(idx / 4, idx % 4) = Complex{e[0].get<double>(), e[1].get<double>()};
    }
    return m;
}

json meta_json() {
    return json{{"generated_at", utc_timestamp()}, {"version", kVersion}};
}

json summary_to_json(const Summary& s) {
    return json{{"mean", s.mean}, {"sd", s.sd}};
}

} // namespace

void write_counts_csv(const std::filesystem::path& path, const CountSet& counts) {
    validate_counts(counts);
    std::ofstream out = open_for_write(path);
    if (!counts.metadata.empty()) {
        std::istringstream lines(counts.metadata);
        std::string line;
        while (std::getline(lines, line)) out << "# " << line << "\n";
    }
    out << "i,j,basis_signal,basis_idler,count\n";
    for (int i = 1; i <= 6; ++i)
        for (int j = 1; j <= 6; ++j)
            out << i << ',' << j << ',' << kBasisLabels[i - 1] << ',' << kBasisLabels[j - 1] << ','
                << format_double(counts.counts[pair_index(i, j)]) << "\n";
    finish_write(out, path);
}

CountSet read_counts_csv(const std::filesystem::path& path) {
    const std::string text = read_whole_file(path);
    std::istringstream lines(text);
    std::string line;
    CountSet out;
    std::string metadata;
    bool saw_header = false;
    std::size_t row = 0;

    while (std::getline(lines, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.front() == '#') {
            std::string_view body(line);
            body.remove_prefix(1);
            if (!body.empty() && body.front() == ' ') body.remove_prefix(1);
            metadata.append(body);
            metadata.push_back('\n');
            continue;
        }
        if (!saw_header) {
            if (line != "i,j,basis_signal,basis_idler,count")
                throw MalformedCountsError("counts file: bad header '" + line + "'");
            saw_header = true;
            continue;
        }

        std::array<std::string_view, 5> fields;
        std::string_view rest(line);
        for (std::size_t f = 0; f < 5; ++f) {
            const std::size_t comma = rest.find(',');
            if (f < 4) {
                if (comma == std::string_view::npos)
                    throw MalformedCountsError("counts file: expected 5 columns in '" + line +
                                               "'");
                fields[f] = rest.substr(0, comma);
                rest.remove_prefix(comma + 1);
            } else {
                if (comma != std::string_view::npos)
                    throw MalformedCountsError("counts file: too many columns in '" + line + "'");
                fields[f] = rest;
            }
        }

        if (row >= kNumPairs)
            throw MalformedCountsError("counts file: more than 36 data rows");
        const int i = static_cast<int>(row / 6) + 1;
        const int j = static_cast<int>(row % 6) + 1;
        if (fields[0] != std::to_string(i) || fields[1] != std::to_string(j))
            throw MalformedCountsError("counts file: row " + std::to_string(row + 1) +
                                       " out of order (expected i=" + std::to_string(i) +
                                       ", j=" + std::to_string(j) + ")");
        if (fields[2].size() != 1 || fields[2][0] != kBasisLabels[i - 1] ||
            fields[3].size() != 1 || fields[3][0] != kBasisLabels[j - 1])
            throw MalformedCountsError("counts file: basis labels disagree with (i, j) in row " +
                                       std::to_string(row + 1));
        out.counts[row] = parse_double(fields[4], "counts file");
        ++row;
    }

    if (!saw_header) throw MalformedCountsError("counts file: missing header");
    if (row != kNumPairs)
        throw MalformedCountsError("counts file: expected 36 data rows, found " +
                                   std::to_string(row));
    validate_counts(out);
    if (!metadata.empty() && metadata.back() == '\n') metadata.pop_back();
    out.metadata = std::move(metadata);
    return out;
}

void write_state_json(const std::filesystem::path& path, const DensityMatrix& rho) {
    json doc{{"format", "qtomo-state/1"}, {"rho", matrix_to_json(rho.mat)}};
    std::ofstream out = open_for_write(path);
    out << doc.dump(2) << "\n";
    finish_write(out, path);
}

DensityMatrix read_state_json(const std::filesystem::path& path) {
    const std::string text = read_whole_file(path);
    try {
        const json doc = json::parse(text);
        if (!doc.is_object() || doc.value("format", "") != "qtomo-state/1")
            throw ValidationError("state file: missing format marker 'qtomo-state/1'");
        return DensityMatrix::validated(matrix_from_json(doc.at("rho"), "state file"));
    } catch (const json::exception& e) {
        throw MalformedStateError("state file '" + path.string() + "': " + e.what());
    } catch (const ValidationError& e) {
        throw MalformedStateError("state file '" + path.string() + "': " + e.what());
    }
}

void write_results_json(const std::filesystem::path& path, const ResultsDocument& doc) {
    json run{{"command", doc.run.command},
             {"counts_file", doc.run.counts_file},
             {"estimator", doc.run.estimator},
             {"model", doc.run.model},
             {"iterations", doc.run.iterations},
             {"trials", doc.run.trials},
             {"population", doc.run.population},
             {"de_weight", doc.run.de_weight},
             {"de_crossover", doc.run.de_crossover},
             {"seed", doc.run.seed},
             {"jobs", doc.run.jobs}};

    json trials = json::array();
    for (const TrialResult& t : doc.trials) {
        json entry{{"seed", t.trial_seed},
                   {"loss", t.loss_value},
                   {"n_pairs", t.n_pairs_hat},
                   {"rho", matrix_to_json(t.rho.mat)}};
        if (t.dark_rate_hat) entry["dark_rate"] = *t.dark_rate_hat;
        if (t.background_hat) entry["background"] = *t.background_hat;
        trials.push_back(std::move(entry));
    }

    json out_doc{{"format", "qtomo-results/1"},
                 {"meta", meta_json()},
                 {"run", std::move(run)},
                 {"average_state", matrix_to_json(doc.average_state.mat)},
                 {"trials", std::move(trials)}};
    std::ofstream out = open_for_write(path);
    out << out_doc.dump(2) << "\n";
    finish_write(out, path);
}

ResultsDocument read_results_json(const std::filesystem::path& path) {
    const std::string text = read_whole_file(path);
    try {
        const json doc = json::parse(text);
        if (!doc.is_object() || doc.value("format", "") != "qtomo-results/1")
            throw ValidationError("results file: missing format marker 'qtomo-results/1'");

        ResultsDocument out;
        const json& run = doc.at("run");
        out.run.command = run.at("command").get<std::string>();
        out.run.counts_file = run.at("counts_file").get<std::string>();
        out.run.estimator = run.at("estimator").get<std::string>();
        out.run.model = run.at("model").get<std::string>();
        out.run.iterations = run.at("iterations").get<int>();
        out.run.trials = run.at("trials").get<int>();
        out.run.population = run.at("population").get<int>();
        out.run.de_weight = run.at("de_weight").get<double>();
        out.run.de_crossover = run.at("de_crossover").get<double>();
        out.run.seed = run.at("seed").get<std::uint64_t>();
        out.run.jobs = run.at("jobs").get<unsigned>();

        out.average_state =
            DensityMatrix::validated(matrix_from_json(doc.at("average_state"), "results file"));

        const json& trials = doc.at("trials");
        if (!trials.is_array() || trials.empty())
            throw ValidationError("results file: 'trials' must be a nonempty array");
        for (const json& entry : trials) {
            TrialResult t;
            t.trial_seed = entry.at("seed").get<std::uint64_t>();
            t.loss_value = entry.at("loss").get<double>();
            t.n_pairs_hat = entry.at("n_pairs").get<double>();
            if (entry.contains("dark_rate")) t.dark_rate_hat = entry.at("dark_rate").get<double>();
            if (entry.contains("background"))
                t.background_hat = entry.at("background").get<double>();
            t.rho = DensityMatrix::validated(matrix_from_json(entry.at("rho"), "results file"));
            out.trials.push_back(std::move(t));
        }
        return out;
    } catch (const json::exception& e) {
        throw MalformedResultsError("results file '" + path.string() + "': " + e.what());
    } catch (const MalformedResultsError&) {
        throw;
    } catch (const ValidationError& e) {
        throw MalformedResultsError("results file '" + path.string() + "': " + e.what());
    }
}

void write_report_json(const std::filesystem::path& path, const MeritReport& report,
                       const ReportContext& context) {
    json source{{"results_file", context.results_file},
                {"estimator", context.estimator},
                {"model", context.model}};
    if (context.reference_file) source["reference_file"] = *context.reference_file;

    json metrics{{"concurrence", summary_to_json(report.concurrence)},
                 {"purity", summary_to_json(report.purity)},
                 {"fidelity_bell", summary_to_json(report.fidelity_bell)}};
    if (report.fidelity_reference)
        metrics["fidelity_reference"] = summary_to_json(*report.fidelity_reference);

    json doc{{"format", "qtomo-report/1"},
             {"meta", meta_json()},
             {"source", std::move(source)},
             {"metrics", std::move(metrics)}};
    std::ofstream out = open_for_write(path);
    out << doc.dump(2) << "\n";
    finish_write(out, path);
}

std::string render_report_table(const MeritReport& report) {
    std::string table;
    char line[96];
    std::snprintf(line, sizeof(line), "%-20s %14s %14s\n", "metric", "mean", "sd");
    table += line;
    auto add = [&](const char* name, const Summary& s) {
        std::snprintf(line, sizeof(line), "%-20s %14.9f %14.9f\n", name, s.mean, s.sd);
        table += line;
    };
    add("concurrence", report.concurrence);
    add("purity", report.purity);
    add("fidelity_bell", report.fidelity_bell);
    if (report.fidelity_reference) add("fidelity_reference", *report.fidelity_reference);
    return table;
}

void write_curve_csv(const std::filesystem::path& path, const CoincidenceCurve& curve,
                     const std::vector<double>* bell_overlay) {
    if (curve.thetas.size() != curve.values.size())
        throw ValidationError("curve: theta and value grids differ in length");
    if (bell_overlay && bell_overlay->size() != curve.thetas.size())
        throw ValidationError("curve: overlay grid differs in length");

    std::ofstream out = open_for_write(path);
    out << (bell_overlay ? "theta,n_estimated,n_bell\n" : "theta,n_estimated\n");
    char theta_buf[32];
    for (std::size_t g = 0; g < curve.thetas.size(); ++g) {
        std::snprintf(theta_buf, sizeof(theta_buf), "%.12g", curve.thetas[g]);
        out << theta_buf << ',' << format_double(curve.values[g]);
        if (bell_overlay) out << ',' << format_double((*bell_overlay)[g]);
        out << "\n";
    }
    finish_write(out, path);
}

} // namespace qtomo
