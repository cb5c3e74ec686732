#include "alex/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace alex {

namespace {

void require_series(std::span<const double> series, const Calendar& cal) {
    if (series.empty()) throw Error("metrics: empty series");
    if (series.size() != cal.step_count())
        throw Error(fmt::format("metrics: series has {} steps, calendar {}", series.size(),
                                cal.step_count()));
}

template <class F>
double mean_over_days(std::span<const double> series, const Calendar& cal, F per_day) {
    double acc = 0.0;
    for (const auto& d : cal.days()) acc += per_day(series.subspan(d.begin, d.size()));
    return acc / static_cast<double>(cal.day_count());
}

double window_max(std::span<const double> w) { return *std::max_element(w.begin(), w.end()); }
double window_min(std::span<const double> w) { return *std::min_element(w.begin(), w.end()); }

double window_mean(std::span<const double> w) {
    double s = 0.0;
    for (double v : w) s += v;
    return s / static_cast<double>(w.size());
}

}  // namespace

double avg_daily_energy(std::span<const double> series, const Calendar& cal, EnergySign sign) {
    require_series(series, cal);
    return mean_over_days(series, cal, [sign](std::span<const double> day) {
        double s = 0.0;
        for (double v : day) s += sign == EnergySign::import ? std::max(v, 0.0) : std::min(v, 0.0);
        return s;
    });
}

double avg_daily_extreme(std::span<const double> series, const Calendar& cal, Extreme which) {
    require_series(series, cal);
    return mean_over_days(series, cal, [which](std::span<const double> day) {
        return which == Extreme::peak ? window_max(day) : window_min(day);
    });
}

double absolute_extreme(std::span<const double> series, Extreme which) {
    if (series.empty()) throw Error("metrics: empty series");
    return which == Extreme::peak ? window_max(series) : window_min(series);
}

RampingStats avg_daily_ramping(std::span<const double> series, const Calendar& cal) {
    require_series(series, cal);
    RampingStats r;
    double total = 0.0;
    for (const auto& d : cal.days()) {
        double s = 0.0;
        for (std::size_t t = std::max<std::size_t>(d.begin, 1); t < d.end; ++t)
            s += std::abs(series[t] - series[t - 1]);
        r.per_day.push_back(s);
        total += s;
    }
    r.daily_sum = total / static_cast<double>(cal.day_count());
    r.per_step_mean = series.size() > 1 ? total / static_cast<double>(series.size() - 1) : 0.0;
    return r;
}

LoadFactorStats load_factor_complement(std::span<const double> series,
                                       std::span<const StepRange> windows) {
    LoadFactorStats out;
    double acc = 0.0;
    std::size_t counted = 0;
    std::size_t expect = 0;
    for (const auto& w : windows) {
        if (w.begin != expect || w.end <= w.begin || w.end > series.size())
            throw Error("load_factor_complement: windows must partition the series");
        expect = w.end;
        const auto sub = series.subspan(w.begin, w.size());
        const double peak = window_max(sub);
        if (peak <= 0.0) {
            ++out.skipped;
            out.per_window.push_back(std::numeric_limits<double>::quiet_NaN());
            continue;
        }
        const double v = 1.0 - window_mean(sub) / peak;
        out.per_window.push_back(v);
        acc += v;
        ++counted;
    }
    if (expect != series.size())
        throw Error("load_factor_complement: windows must partition the series");
    if (counted == 0) throw Error("load_factor_complement: every window has a non-positive peak");
    out.value = acc / static_cast<double>(counted);
    return out;
}

namespace {

// A fully balanced or exporting series has no positive window; report NaN instead of failing.
LoadFactorStats load_factor_or_nan(std::span<const double> e, std::span<const StepRange> windows) {
    for (const auto& w : windows)
        if (w.end <= e.size() && w.size() > 0 &&
            *std::max_element(e.begin() + w.begin, e.begin() + w.end) > 0.0)
            return load_factor_complement(e, windows);
    LoadFactorStats out;
    out.value = std::numeric_limits<double>::quiet_NaN();
    out.skipped = windows.size();
    out.per_window.assign(windows.size(), out.value);
    return out;
}

double number_or_nan(const nlohmann::json& j, const char* key) {
    const auto& v = j.at(key);
    return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
}

}  // namespace

MetricsReport compute_metrics(std::span<const double> e, const Calendar& cal) {
    require_series(e, cal);
    MetricsReport m;
    m.day_count = cal.day_count();
    m.month_count = cal.months().size();
    m.avg_daily_import = avg_daily_energy(e, cal, EnergySign::import);
    m.avg_daily_export = avg_daily_energy(e, cal, EnergySign::export_);
    m.avg_daily_peak = avg_daily_extreme(e, cal, Extreme::peak);
    m.avg_daily_valley = avg_daily_extreme(e, cal, Extreme::valley);
    m.max_peak = absolute_extreme(e, Extreme::peak);
    m.min_valley = absolute_extreme(e, Extreme::valley);

    const auto ramp = avg_daily_ramping(e, cal);
    m.avg_daily_ramping = ramp.daily_sum;
    m.ramping_per_step = ramp.per_step_mean;
    m.daily_ramping = ramp.per_day;

    const auto daily_lf = load_factor_or_nan(e, cal.days());
    m.daily_load_factor_complement = daily_lf.value;
    m.daily_windows_skipped = daily_lf.skipped;
    m.daily_load_factor = daily_lf.per_window;

    std::vector<StepRange> months;
    for (const auto& w : cal.months()) months.push_back(w.steps);
    const auto monthly_lf = load_factor_or_nan(e, months);
    m.monthly_load_factor_complement = monthly_lf.value;
    m.monthly_windows_skipped = monthly_lf.skipped;
    m.monthly_load_factor = monthly_lf.per_window;

    for (const auto& d : cal.days()) {
        const auto day = e.subspan(d.begin, d.size());
        double imp = 0.0, exp = 0.0;
        for (double v : day) {
            imp += std::max(v, 0.0);
            exp += std::min(v, 0.0);
        }
        m.daily_import.push_back(imp);
        m.daily_export.push_back(exp);
        m.daily_peak.push_back(window_max(day));
        m.daily_valley.push_back(window_min(day));
    }
    return m;
}

namespace {

constexpr std::array<MetricDef, 9> kHeadline{{
    {"avg_daily_import", "E_d+ avg daily import [kWh]"},
    {"avg_daily_export", "E_d- avg daily export [kWh]"},
    {"avg_daily_peak", "P_d+ avg daily peak [kWh]"},
    {"avg_daily_valley", "P_d- avg daily valley [kWh]"},
    {"max_peak", "P+ max peak [kWh]"},
    {"min_valley", "P- min valley [kWh]"},
    {"avg_daily_ramping", "R_d avg daily ramping [kWh]"},
    {"daily_load_factor_complement", "1-L_d"},
    {"monthly_load_factor_complement", "1-L_m"},
}};

}  // namespace

std::span<const MetricDef> headline_metrics() { return kHeadline; }

double metric_value(const MetricsReport& m, const std::string& key) {
    static const std::map<std::string, double MetricsReport::*> fields{
        {"avg_daily_import", &MetricsReport::avg_daily_import},
        {"avg_daily_export", &MetricsReport::avg_daily_export},
        {"avg_daily_peak", &MetricsReport::avg_daily_peak},
        {"avg_daily_valley", &MetricsReport::avg_daily_valley},
        {"max_peak", &MetricsReport::max_peak},
        {"min_valley", &MetricsReport::min_valley},
        {"avg_daily_ramping", &MetricsReport::avg_daily_ramping},
        {"ramping_per_step", &MetricsReport::ramping_per_step},
        {"daily_load_factor_complement", &MetricsReport::daily_load_factor_complement},
        {"monthly_load_factor_complement", &MetricsReport::monthly_load_factor_complement},
    };
    if (key == "daily_consumption") return m.daily_consumption();
    const auto it = fields.find(key);
    if (it == fields.end()) throw Error("unknown metric '" + key + "'");
    return m.*(it->second);
}

nlohmann::ordered_json metrics_to_json(const MetricsReport& m) {
    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    j["avg_daily_import"] = m.avg_daily_import;
    j["avg_daily_export"] = m.avg_daily_export;
    j["avg_daily_peak"] = m.avg_daily_peak;
    j["avg_daily_valley"] = m.avg_daily_valley;
    j["max_peak"] = m.max_peak;
    j["min_valley"] = m.min_valley;
    j["avg_daily_ramping"] = m.avg_daily_ramping;
    j["ramping_per_step"] = m.ramping_per_step;
    j["daily_load_factor_complement"] = m.daily_load_factor_complement;
    j["monthly_load_factor_complement"] = m.monthly_load_factor_complement;
    j["daily_consumption"] = m.daily_consumption();
    j["day_count"] = m.day_count;
    j["month_count"] = m.month_count;
    j["daily_windows_skipped"] = m.daily_windows_skipped;
    j["monthly_windows_skipped"] = m.monthly_windows_skipped;
    return j;
}

MetricsReport metrics_from_json(const nlohmann::json& j) {
    MetricsReport m;
    try {
        m.avg_daily_import = j.at("avg_daily_import").get<double>();
        m.avg_daily_export = j.at("avg_daily_export").get<double>();
        m.avg_daily_peak = j.at("avg_daily_peak").get<double>();
        m.avg_daily_valley = j.at("avg_daily_valley").get<double>();
        m.max_peak = j.at("max_peak").get<double>();
        m.min_valley = j.at("min_valley").get<double>();
        m.avg_daily_ramping = j.at("avg_daily_ramping").get<double>();
        m.ramping_per_step = j.at("ramping_per_step").get<double>();
        m.daily_load_factor_complement = number_or_nan(j, "daily_load_factor_complement");
        m.monthly_load_factor_complement = number_or_nan(j, "monthly_load_factor_complement");
        m.day_count = j.at("day_count").get<std::size_t>();
        m.month_count = j.at("month_count").get<std::size_t>();
        m.daily_windows_skipped = j.value("daily_windows_skipped", std::size_t{0});
        m.monthly_windows_skipped = j.value("monthly_windows_skipped", std::size_t{0});
    } catch (const nlohmann::json::exception& ex) {
        throw Error(std::string("metrics JSON: ") + ex.what());
    }
    return m;
}

void write_daily_csv(std::ostream& out, const MetricsReport& m) {
    out << "day,import,export,peak,valley,ramping,load_factor_complement\n";
    for (std::size_t d = 0; d < m.daily_import.size(); ++d)
        fmt::print(out, "{},{},{},{},{},{},{}\n", d, m.daily_import[d], m.daily_export[d],
                   m.daily_peak[d], m.daily_valley[d], m.daily_ramping[d], m.daily_load_factor[d]);
}

void write_monthly_csv(std::ostream& out, const MetricsReport& m, const Calendar& cal) {
    out << "month,begin,end,month_of_year,load_factor_complement\n";
    for (std::size_t k = 0; k < cal.months().size(); ++k) {
        const auto& w = cal.months()[k];
        fmt::print(out, "{},{},{},{},{}\n", k, w.steps.begin, w.steps.end, w.month_of_year,
                   m.monthly_load_factor[k]);
    }
}

std::vector<ProfilePoint> profile_series(std::span<const double> series, const Calendar& cal,
                                         GroupBy groupby) {
    require_series(series, cal);
    const std::size_t hours = cal.steps_per_day();
    const std::size_t n_groups = groupby == GroupBy::hour_of_day ? hours : 4 * hours;
    std::vector<double> sum(n_groups, 0.0), sq(n_groups, 0.0);
    std::vector<std::size_t> count(n_groups, 0);
    for (const auto& w : cal.seasons()) {
        for (std::size_t t = w.steps.begin; t < w.steps.end; ++t) {
            std::size_t g = cal.hour_of_day(t);
            if (groupby == GroupBy::hour_of_day_by_season)
                g += static_cast<std::size_t>(w.season) * hours;
            sum[g] += series[t];
            ++count[g];
        }
    }
    std::vector<double> mean(n_groups, 0.0);
    for (std::size_t g = 0; g < n_groups; ++g)
        if (count[g] > 0) mean[g] = sum[g] / static_cast<double>(count[g]);
    for (const auto& w : cal.seasons()) {
        for (std::size_t t = w.steps.begin; t < w.steps.end; ++t) {
            std::size_t g = cal.hour_of_day(t);
            if (groupby == GroupBy::hour_of_day_by_season)
                g += static_cast<std::size_t>(w.season) * hours;
            const double d = series[t] - mean[g];
            sq[g] += d * d;
        }
    }

    std::vector<ProfilePoint> out;
    for (std::size_t g = 0; g < n_groups; ++g) {
        if (count[g] == 0) continue;
        ProfilePoint p;
        const std::size_t hour = g % hours;
        p.group = groupby == GroupBy::hour_of_day
                      ? fmt::format("{:02}", hour)
                      : fmt::format("{}:{:02}", season_name(static_cast<Season>(g / hours)), hour);
        p.mean = mean[g];
        p.stddev = std::sqrt(sq[g] / static_cast<double>(count[g]));
        p.count = count[g];
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<ProfilePoint> profile_series(const SimulationTrace& trace, const Calendar& cal,
                                         GroupBy groupby, ProfileQuantity quantity) {
    switch (quantity) {
        case ProfileQuantity::community_net_load:
            return profile_series(trace.community_net_load, cal, groupby);
        case ProfileQuantity::mean_soc: return profile_series(trace.mean_soc(), cal, groupby);
        case ProfileQuantity::cumulative_mean_bill:
            return profile_series(trace.mean_cumulative_bill(), cal, groupby);
    }
    return {};
}

std::vector<ProfilePoint> cumulative_bill_profile(const SimulationTrace& trace) {
    std::vector<ProfilePoint> out;
    out.reserve(trace.step_count());
    const auto n = static_cast<double>(trace.building_count());
    for (std::size_t t = 0; t < trace.step_count(); ++t) {
        double s = 0.0;
        for (const auto& b : trace.steps[t]) s += b.cumulative_bill;
        const double mean = s / n;
        double sq = 0.0;
        for (const auto& b : trace.steps[t]) sq += (b.cumulative_bill - mean) * (b.cumulative_bill - mean);
        out.push_back({std::to_string(t), mean, std::sqrt(sq / n), trace.building_count()});
    }
    return out;
}

void write_profile_csv(std::ostream& out, std::span<const ProfilePoint> points) {
    out << "group,mean,std\n";
    for (const auto& p : points) fmt::print(out, "{},{},{}\n", p.group, p.mean, p.stddev);
}

}  // namespace alex
