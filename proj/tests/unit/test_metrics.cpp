#include "doctest.h"

#include "alex/metrics.hpp"

#include <cmath>
#include <map>
#include <random>
#include <sstream>

using namespace alex;

TEST_CASE("daily energy") {
    const auto cal = Calendar::uniform(24);
    const std::vector<double> ones(24, 1.0), neg(24, -1.0);
    CHECK(avg_daily_energy(ones, cal, EnergySign::import) == 24.0);
    CHECK(avg_daily_energy(ones, cal, EnergySign::export_) == 0.0);
    CHECK(avg_daily_energy(neg, cal, EnergySign::export_) == -24.0);
    CHECK_THROWS_AS(avg_daily_energy(std::vector<double>{}, cal, EnergySign::import), Error);
}

TEST_CASE("daily and absolute extremes") {
    const auto cal = Calendar::uniform(48);
    std::vector<double> s(48, 0.0);
    s[5] = 5.0;
    s[30] = 3.0;
    s[40] = -2.0;
    CHECK(avg_daily_extreme(s, cal, Extreme::peak) == 4.0);
    CHECK(avg_daily_extreme(s, cal, Extreme::valley) == -1.0);
    CHECK(absolute_extreme(s, Extreme::peak) == 5.0);
    CHECK(absolute_extreme(s, Extreme::valley) == -2.0);
    const std::vector<double> c(10, 2.5);
    CHECK(absolute_extreme(c, Extreme::peak) == 2.5);
    CHECK(absolute_extreme(c, Extreme::valley) == 2.5);
}

TEST_CASE("ramping") {
    const auto cal = Calendar::uniform(24);
    CHECK(avg_daily_ramping(std::vector<double>(24, 3.0), cal).daily_sum == 0.0);
    std::vector<double> alt(24);
    for (std::size_t t = 0; t < 24; ++t) alt[t] = t % 2 ? -1.0 : 1.0;
    const auto r = avg_daily_ramping(alt, cal);
    CHECK(r.daily_sum == 46.0);
    CHECK(r.per_step_mean == 2.0);

    // The first step of day 2 differences against the last step of day 1.
    std::vector<double> two(48, 0.0);
    for (std::size_t t = 24; t < 48; ++t) two[t] = 1.0;
    const auto g = avg_daily_ramping(two, Calendar::uniform(48));
    CHECK(g.per_day == std::vector<double>{0.0, 1.0});
}

TEST_CASE("load factor complement") {
    const std::vector<StepRange> w{{0, 4}, {4, 8}};
    const std::vector<double> flat(8, 2.0);
    CHECK(load_factor_complement(flat, w).value == 0.0);
    std::vector<double> s{1, 1, 1, 1, -1, -2, -1, -1};
    const auto lf = load_factor_complement(s, w);
    CHECK(lf.skipped == 1);
    CHECK(std::isnan(lf.per_window[1]));
    s = {0, 0, 0, 4, 1, 1, 1, 1};
    CHECK(load_factor_complement(s, w).value == doctest::Approx(0.375));
    const std::vector<double> neg(8, -1.0);
    CHECK_THROWS_AS(load_factor_complement(neg, w), Error);
    const std::vector<StepRange> gap{{0, 3}, {4, 8}};
    CHECK_THROWS_AS(load_factor_complement(flat, gap), Error);
}

TEST_CASE("report invariants on random series") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> n(2.0, 5.0);
    const auto cal = Calendar::from_day_months(24 * 9, 24, {1, 1, 2, 2, 2, 3, 3, 4, 4});
    std::vector<double> s(cal.step_count());
    for (auto& v : s) v = n(rng);
    const auto m = compute_metrics(s, cal);
    CHECK(m.avg_daily_import >= 0.0);
    CHECK(m.avg_daily_export <= 0.0);
    CHECK(m.max_peak >= m.avg_daily_peak);
    CHECK(m.min_valley <= m.avg_daily_valley);
    double total = 0;
    for (double v : s) total += v;
    CHECK(m.daily_consumption() == doctest::Approx(total / 9));
    CHECK(m.month_count == 4);

    // Permuting buildings does not matter: metrics only see E_B. Sub-window peaks never exceed the full one.
    std::vector<double> half(s.begin(), s.begin() + 24 * 4);
    CHECK(absolute_extreme(half, Extreme::peak) <= m.max_peak);
}

TEST_CASE("metrics json round trip and headline keys") {
    std::vector<double> s(48);
    for (std::size_t t = 0; t < 48; ++t) s[t] = std::sin(0.3 * double(t)) * 4 + 1;
    const auto cal = Calendar::uniform(48);
    const auto m = compute_metrics(s, cal);
    const auto j = metrics_to_json(m);
    CHECK(j.at("schema_version") == 1);
    const auto back = metrics_from_json(nlohmann::json::parse(j.dump()));
    REQUIRE(headline_metrics().size() == 9);
    for (const auto& def : headline_metrics()) CHECK(metric_value(back, def.key) == metric_value(m, def.key));
    CHECK(back.ramping_per_step == m.ramping_per_step);
    CHECK_THROWS_AS(metric_value(m, "nope"), Error);

    std::ostringstream d, mo;
    write_daily_csv(d, m);
    write_monthly_csv(mo, m, cal);
    CHECK(d.str().rfind("day,import,export,peak,valley,ramping,load_factor_complement\n", 0) == 0);
    CHECK(mo.str().rfind("month,begin,end,month_of_year,load_factor_complement\n", 0) == 0);
}

TEST_CASE("hour-of-day profiles") {
    const auto cal = Calendar::uniform(72);
    const std::vector<double> flat(72, 3.0);
    const auto p = profile_series(flat, cal, GroupBy::hour_of_day);
    REQUIRE(p.size() == 24);
    for (const auto& g : p) {
        CHECK(g.mean == 3.0);
        CHECK(g.stddev == 0.0);
        CHECK(g.count == 3);
    }
    CHECK(p[7].group == "07");
}

TEST_CASE("seasonal profiles match a direct recomputation") {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(-3, 3);
    const std::vector<int> months{1, 1, 4, 4, 4, 7, 10, 10};
    const auto cal = Calendar::from_day_months(24 * 8, 24, months);
    std::vector<double> s(cal.step_count());
    for (auto& v : s) v = u(rng);
    const auto prof = profile_series(s, cal, GroupBy::hour_of_day_by_season);
    REQUIRE(prof.size() == 4 * 24);

    // Independent groupby.
    std::map<std::string, std::vector<double>> groups;
    const char* names[] = {"winter", "spring", "summer", "fall"};
    for (std::size_t t = 0; t < s.size(); ++t) {
        const int m = months[t / 24];
        const int season = (m == 12 || m <= 2) ? 0 : m <= 5 ? 1 : m <= 8 ? 2 : 3;
        char hh[3];
        std::snprintf(hh, sizeof hh, "%02zu", t % 24);
        groups[std::string(names[season]) + ":" + hh].push_back(s[t]);
    }
    for (const auto& pt : prof) {
        const auto& g = groups.at(pt.group);
        double mean = 0;
        for (double v : g) mean += v;
        mean /= double(g.size());
        double var = 0;
        for (double v : g) var += (v - mean) * (v - mean);
        CHECK(pt.mean == doctest::Approx(mean));
        CHECK(pt.stddev == doctest::Approx(std::sqrt(var / double(g.size()))));
        CHECK(pt.count == g.size());
    }
    std::ostringstream out;
    write_profile_csv(out, prof);
    CHECK(out.str().rfind("group,mean,std\n", 0) == 0);
}

TEST_CASE("balanced community reports load factor as missing") {
    const auto cal = Calendar::uniform(48);
    const std::vector<double> zero(48, 0.0);
    const auto m = compute_metrics(zero, cal);
    CHECK(std::isnan(m.daily_load_factor_complement));
    CHECK(m.daily_windows_skipped == 2);
    CHECK(m.monthly_windows_skipped == 1);
    const auto text = metrics_to_json(m).dump();
    CHECK(text.find("\"daily_load_factor_complement\":null") != std::string::npos);
    CHECK(std::isnan(metrics_from_json(nlohmann::json::parse(text)).monthly_load_factor_complement));
}
