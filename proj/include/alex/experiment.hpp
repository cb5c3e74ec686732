#pragma once

#include "alex/config.hpp"
#include "alex/metrics.hpp"
#include "alex/simulate.hpp"

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace alex {

inline constexpr int manifest_schema_version = 1;
inline constexpr int trace_schema_version = 1;

/// Hex SHA-256 of a byte string / file.
std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& file);

struct RunResult {
    ScenarioRun run;
    MetricsReport metrics;
};

/// Solves, replays and writes the run directory:
///   manifest.json, config.json, metrics.json, trace.csv, convergence.csv, daily.csv,
///   monthly.csv, policies/<id>.csv, figures/*.csv
RunResult execute_run(const CommunityDataset& ds, const RunConfig& config,
                      const std::filesystem::path& out_dir);

/// E_B(t) from the community rows of a trace CSV.
std::vector<double> read_community_net_load(std::istream& in);

/// What compare needs from a finished run directory.
struct RunSummary {
    std::string label;
    Scenario scenario = Scenario::no_derms;
    bool converged = true;
    MetricsReport metrics;
    nlohmann::json calendar;
};

RunSummary load_run(const std::filesystem::path& dir);

/// a improves on or ties b for this metric: lower for non-negative metrics, smaller
/// magnitude for the signed export/valley metrics. Two missing (NaN) values tie.
bool improves_or_ties(const std::string& key, double a, double b, double tol = 1e-9);

struct CheckLine {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct Comparison {
    std::vector<std::string> labels;
    struct Row {
        std::string key;
        std::string label;
        std::vector<double> values;
        std::vector<bool> best;
    };
    std::vector<Row> rows;
    std::vector<CheckLine> checks;  // empty unless all three scenarios are present
};

/// Throws Error when the runs were made over different calendars.
Comparison compare_runs(std::span<const RunSummary> runs);

/// Ordering checks between the three scenarios' metrics.
std::vector<CheckLine> hypothesis_checks(const MetricsReport& alex, const MetricsReport& individual,
                                         const MetricsReport& none);

void write_comparison_csv(std::ostream& out, const Comparison& c);
void write_comparison_text(std::ostream& out, const Comparison& c);

}  // namespace alex
