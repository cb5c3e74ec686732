#include "alex/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <openssl/evp.h>

namespace fs = std::filesystem;

namespace alex {

std::string sha256_hex(std::string_view bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw Error("SHA-256 failed");
    std::string out;
    for (unsigned int i = 0; i < len; ++i) out += fmt::format("{:02x}", md[i]);
    return out;
}

std::string sha256_file(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw Error("cannot read " + file.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return sha256_hex(ss.str());
}

namespace {

// Writes through a string so the hash is taken over exactly the bytes on disk.
class OutputDir {
public:
    explicit OutputDir(fs::path root) : root_(std::move(root)) { fs::create_directories(root_); }

    template <class Fn>
    void write(const std::string& rel, Fn&& fill) {
        std::ostringstream ss;
        fill(ss);
        const fs::path path = root_ / rel;
        fs::create_directories(path.parent_path());
        std::ofstream out(path, std::ios::binary);
        if (!out) throw Error("cannot write " + path.string());
        const std::string bytes = ss.str();
        out << bytes;
        hashes_[rel] = sha256_hex(bytes);
    }

    const std::map<std::string, std::string>& hashes() const { return hashes_; }

private:
    fs::path root_;
    std::map<std::string, std::string> hashes_;
};

std::string dataset_fingerprint(const CommunityDataset& ds) {
    std::string bytes;
    for (const auto& b : ds.buildings) {
        bytes += b.id + '\n' + battery_to_json(b.battery).dump() + '\n';
        for (std::size_t t = 0; t < b.load.size(); ++t)
            bytes += fmt::format("{},{}\n", b.load[t], b.generation[t]);
    }
    bytes += tariff_to_json(ds.tariff).dump();
    return sha256_hex(bytes);
}

nlohmann::ordered_json calendar_json(const Calendar& cal) {
    return {{"step_count", cal.step_count()},
            {"steps_per_day", cal.steps_per_day()},
            {"month_of_day", cal.month_of_day()}};
}

}  // namespace

RunResult execute_run(const CommunityDataset& ds, const RunConfig& config, const fs::path& out_dir) {
    RunResult res;
    res.run = run_scenario(ds, config.scenario, config.equilibrium);
    res.metrics = compute_metrics(res.run.trace.community_net_load, ds.calendar);
    const SimulationTrace& tr = res.run.trace;
    const Calendar& cal = ds.calendar;

    OutputDir dir(out_dir);
    dir.write("config.json", [&](std::ostream& o) { o << config.to_json().dump(2) << '\n'; });
    dir.write("trace.csv", [&](std::ostream& o) { write_trace_csv(o, tr); });
    dir.write("convergence.csv",
              [&](std::ostream& o) { write_convergence_csv(o, res.run.equilibrium.trace, ds); });
    for (std::size_t b = 0; b < ds.buildings.size(); ++b)
        dir.write("policies/" + ds.buildings[b].id + ".csv", [&](std::ostream& o) {
            write_policy_csv(o, res.run.equilibrium.joint.policies[b], res.run.equilibrium.values[b]);
        });
    dir.write("metrics.json", [&](std::ostream& o) { o << metrics_to_json(res.metrics).dump(2) << '\n'; });
    dir.write("daily.csv", [&](std::ostream& o) { write_daily_csv(o, res.metrics); });
    dir.write("monthly.csv", [&](std::ostream& o) { write_monthly_csv(o, res.metrics, cal); });

    auto profile = [&](const std::string& name, GroupBy g, ProfileQuantity q) {
        dir.write("figures/" + name + ".csv",
                  [&](std::ostream& o) { write_profile_csv(o, profile_series(tr, cal, g, q)); });
    };
    profile("net_load_by_hour", GroupBy::hour_of_day, ProfileQuantity::community_net_load);
    profile("soc_by_hour", GroupBy::hour_of_day, ProfileQuantity::mean_soc);
    profile("net_load_by_season_hour", GroupBy::hour_of_day_by_season, ProfileQuantity::community_net_load);
    profile("soc_by_season_hour", GroupBy::hour_of_day_by_season, ProfileQuantity::mean_soc);
    dir.write("figures/cumulative_bill.csv",
              [&](std::ostream& o) { write_profile_csv(o, cumulative_bill_profile(tr)); });

    const auto& eq = res.run.equilibrium.trace;
    nlohmann::ordered_json m;
    m["schema_version"] = manifest_schema_version;
    m["trace_schema"] = trace_schema_version;
    m["scenario"] = scenario_name(config.scenario);
    m["seed"] = config.equilibrium.seed;
    m["config"] = config.to_json();
    m["dataset"] = {{"source", dataset_source_name(config.dataset.source)},
                    {"building_count", ds.buildings.size()},
                    {"content_sha256", dataset_fingerprint(ds)}};
    m["calendar"] = calendar_json(cal);
    m["convergence"] = {{"converged", eq.converged},
                        {"rounds", eq.round_count()},
                        {"final_distance", eq.final_distance()}};
    m["files"] = dir.hashes();
    std::ofstream out(out_dir / "manifest.json", std::ios::binary);
    if (!out) throw Error("cannot write manifest");
    out << m.dump(2) << '\n';
    return res;
}

std::vector<double> read_community_net_load(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw Error("trace: empty file");
    std::vector<double> out;
    while (std::getline(in, line)) {
        std::vector<std::string_view> f;
        std::string_view sv(line);
        std::size_t start = 0;
        while (true) {
            const auto pos = sv.find(',', start);
            f.push_back(sv.substr(start, pos - start));
            if (pos == std::string_view::npos) break;
            start = pos + 1;
        }
        if (f.size() < 6) throw Error("trace: short row");
        if (f[1] != "community") continue;
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(f[5].data(), f[5].data() + f[5].size(), v);
        if (ec != std::errc() || ptr != f[5].data() + f[5].size())
            throw Error("trace: bad net_load '" + std::string(f[5]) + "'");
        out.push_back(v);
    }
    return out;
}

RunSummary load_run(const fs::path& dir) {
    auto read = [&](const char* name) {
        std::ifstream in(dir / name);
        if (!in) throw Error("not a run directory (missing " + std::string(name) + "): " + dir.string());
        try {
            return nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& ex) {
            throw Error((dir / name).string() + ": " + ex.what());
        }
    };
    const auto manifest = read("manifest.json");
    RunSummary s;
    try {
        s.label = dir.filename().empty() ? dir.parent_path().filename().string() : dir.filename().string();
        s.scenario = parse_scenario(manifest.at("scenario").get<std::string>());
        s.converged = manifest.at("convergence").at("converged").get<bool>();
        s.calendar = manifest.at("calendar");
    } catch (const nlohmann::json::exception& ex) {
        throw Error((dir / "manifest.json").string() + ": " + ex.what());
    }
    s.metrics = metrics_from_json(read("metrics.json"));
    return s;
}

bool improves_or_ties(const std::string& key, double a, double b, double tol) {
    if (std::isnan(a) || std::isnan(b)) return std::isnan(a) && std::isnan(b);
    if (key == "avg_daily_export" || key == "avg_daily_valley" || key == "min_valley")
        return std::abs(a) <= std::abs(b) + tol;
    return a <= b + tol;
}

Comparison compare_runs(std::span<const RunSummary> runs) {
    if (runs.size() < 2) throw Error("compare needs at least two runs");
    for (const auto& r : runs)
        if (r.calendar != runs.front().calendar)
            throw Error("incompatible calendars: " + r.label + " vs " + runs.front().label);

    Comparison c;
    for (const auto& r : runs) c.labels.push_back(r.label);
    for (const auto& def : headline_metrics()) {
        Comparison::Row row;
        row.key = def.key;
        row.label = def.label;
        for (const auto& r : runs) row.values.push_back(metric_value(r.metrics, def.key));
        for (double v : row.values) {
            bool best = true;
            for (double other : row.values) best = best && improves_or_ties(def.key, v, other);
            row.best.push_back(best);
        }
        c.rows.push_back(std::move(row));
    }

    const RunSummary *a = nullptr, *i = nullptr, *n = nullptr;
    for (const auto& r : runs) {
        if (r.scenario == Scenario::alex && !a) a = &r;
        if (r.scenario == Scenario::individual_derms && !i) i = &r;
        if (r.scenario == Scenario::no_derms && !n) n = &r;
    }
    if (a && i && n) c.checks = hypothesis_checks(a->metrics, i->metrics, n->metrics);
    return c;
}

std::vector<CheckLine> hypothesis_checks(const MetricsReport& alex, const MetricsReport& individual,
                                         const MetricsReport& none) {
    std::vector<CheckLine> out;
    for (const auto& def : headline_metrics()) {
        const double a = metric_value(alex, def.key);
        for (const auto& [name, other] : {std::pair{"NoDERMS", &none}, std::pair{"IndividualDERMS", &individual}}) {
            const double b = metric_value(*other, def.key);
            out.push_back({fmt::format("H1 ALEX vs {} {}", name, def.key), improves_or_ties(def.key, a, b),
                           fmt::format("{:.4f} vs {:.4f}", a, b)});
        }
    }
    const double ca = alex.daily_consumption(), ci = individual.daily_consumption(),
                 cn = none.daily_consumption();
    out.push_back({"H2 consumption ALEX >= IndividualDERMS >= NoDERMS", ca >= ci && ci >= cn,
                   fmt::format("{:.4f} >= {:.4f} >= {:.4f}", ca, ci, cn)});
    out.push_back({"H2 import ALEX < IndividualDERMS",
                   alex.avg_daily_import < individual.avg_daily_import,
                   fmt::format("{:.4f} < {:.4f}", alex.avg_daily_import, individual.avg_daily_import)});
    out.push_back({"H2 |export| ALEX < IndividualDERMS",
                   std::abs(alex.avg_daily_export) < std::abs(individual.avg_daily_export),
                   fmt::format("{:.4f} < {:.4f}", std::abs(alex.avg_daily_export),
                               std::abs(individual.avg_daily_export))});
    for (const auto& [label, pick] :
         {std::pair{"daily sum", &MetricsReport::avg_daily_ramping},
          std::pair{"per step", &MetricsReport::ramping_per_step}}) {
        const double a = alex.*pick, i = individual.*pick, n = none.*pick;
        out.push_back({fmt::format("ramping ({}) ALEX <= IndividualDERMS <= NoDERMS", label),
                       a <= i && i <= n, fmt::format("{:.4f} <= {:.4f} <= {:.4f}", a, i, n)});
    }
    return out;
}

void write_comparison_csv(std::ostream& out, const Comparison& c) {
    out << "metric";
    for (const auto& l : c.labels) out << ',' << l << ',' << l << "_best";
    out << '\n';
    for (const auto& row : c.rows) {
        out << row.key;
        for (std::size_t k = 0; k < row.values.size(); ++k)
            fmt::print(out, ",{},{}", row.values[k], row.best[k] ? 1 : 0);
        out << '\n';
    }
}

void write_comparison_text(std::ostream& out, const Comparison& c) {
    std::size_t w0 = 6;
    for (const auto& row : c.rows) w0 = std::max(w0, row.label.size());
    std::size_t w = 10;
    for (const auto& l : c.labels) w = std::max(w, l.size() + 1);
    fmt::print(out, "{:<{}}", "metric", w0);
    for (const auto& l : c.labels) fmt::print(out, "  {:>{}}", l, w);
    out << '\n';
    for (const auto& row : c.rows) {
        fmt::print(out, "{:<{}}", row.label, w0);
        for (std::size_t k = 0; k < row.values.size(); ++k) {
            const std::string cell = fmt::format("{:.2f}{}", row.values[k], row.best[k] ? "*" : " ");
            fmt::print(out, "  {:>{}}", cell, w);
        }
        out << '\n';
    }
    out << "(* best or tied)\n";
    for (const auto& chk : c.checks)
        fmt::print(out, "{} {}: {}\n", chk.passed ? "PASS" : "FAIL", chk.name, chk.detail);
}

}  // namespace alex
