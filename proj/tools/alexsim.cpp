#include "alex/config.hpp"
#include "alex/experiment.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

#include <fmt/format.h>

#include "CLI11.hpp"

namespace fs = std::filesystem;
using namespace alex;

namespace {

constexpr int exit_usage = 2;

struct Common {
    std::string config;
    std::string dataset;
};

RunConfig load_config(const Common& c) {
    RunConfig cfg;
    if (!c.config.empty()) cfg = load_run_config(c.config);
    if (!c.dataset.empty()) cfg.dataset.path = c.dataset;
    return cfg;
}

int cmd_run(const Common& common, const std::string& scenario, const std::optional<std::uint64_t>& seed,
            const std::string& out) {
    RunConfig cfg = load_config(common);
    if (!scenario.empty()) cfg.scenario = parse_scenario(scenario);
    if (seed) cfg.equilibrium.seed = *seed;
    const CommunityDataset ds = load_dataset(cfg);
    if (const auto v = validate_dataset(ds); !v.empty()) {
        for (const auto& line : v) std::cerr << line << '\n';
        return 1;
    }
    const RunResult r = execute_run(ds, cfg, out);
    const auto& eq = r.run.equilibrium.trace;
    fmt::print("{}: {} buildings, {} steps, {} round(s), {}\n", scenario_name(cfg.scenario),
               ds.buildings.size(), ds.step_count(), eq.round_count(),
               eq.converged ? "converged" : fmt::format("NOT converged (d_B = {:.4g})", eq.final_distance()));
    for (const auto& def : headline_metrics())
        fmt::print("  {:<34} {:>12.4f}\n", def.label, metric_value(r.metrics, def.key));
    fmt::print("  {:<34} {:>12.4f}\n", "avg daily ramping per step", r.metrics.ramping_per_step);
    fmt::print("run directory: {}\n", out);
    return 0;
}

int cmd_compare(const std::vector<std::string>& dirs, const std::string& csv) {
    std::vector<RunSummary> runs;
    for (const auto& d : dirs) runs.push_back(load_run(d));
    const Comparison c = compare_runs(runs);
    write_comparison_text(std::cout, c);
    if (!csv.empty()) {
        std::ofstream out(csv);
        if (!out) throw Error("cannot write " + csv);
        write_comparison_csv(out, c);
    }
    return 0;
}

int cmd_validate(const Common& common) {
    const CommunityDataset ds = load_dataset(load_config(common));
    const auto v = validate_dataset(ds);
    for (const auto& line : v) std::cout << line << '\n';
    if (v.empty())
        fmt::print("ok: {} buildings, {} steps, {} days, {} months\n", ds.buildings.size(), ds.step_count(),
                   ds.calendar.day_count(), ds.calendar.months().size());
    return v.empty() ? 0 : 1;
}

int cmd_ingest(const Common& common, const std::string& out) {
    const CommunityDataset ds = load_dataset(load_config(common));
    require_valid(ds);
    write_canonical(ds, out);
    fmt::print("wrote {} buildings to {}\n", ds.buildings.size(), out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Local energy market simulator"};
    app.require_subcommand(1);

    Common common;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("-c,--config", common.config, "JSON run config")->check(CLI::ExistingFile);
        sub->add_option("-d,--dataset", common.dataset, "dataset directory (overrides config)");
    };

    std::string scenario, out;
    std::optional<std::uint64_t> seed;
    auto* run = app.add_subcommand("run", "solve a scenario and write a run directory");
    add_common(run);
    run->add_option("-s,--scenario", scenario, "NoDERMS | IndividualDERMS | ALEX");
    run->add_option("--seed", seed, "override the config seed");
    run->add_option("-o,--out", out, "run directory")->required();

    std::vector<std::string> dirs;
    std::string csv;
    auto* compare = app.add_subcommand("compare", "side-by-side metrics of finished runs");
    compare->add_option("runs", dirs, "run directories")->required()->expected(2, -1);
    compare->add_option("--csv", csv, "also write the table as CSV");

    auto* validate = app.add_subcommand("validate", "check a dataset against every invariant");
    add_common(validate);

    std::string ingest_out;
    auto* ingest = app.add_subcommand("ingest", "translate a dataset into the canonical format");
    add_common(ingest);
    ingest->add_option("-o,--out", ingest_out, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : exit_usage;
    }

    try {
        if (*run) return cmd_run(common, scenario, seed, out);
        if (*compare) return cmd_compare(dirs, csv);
        if (*validate) return cmd_validate(common);
        if (*ingest) return cmd_ingest(common, ingest_out);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
