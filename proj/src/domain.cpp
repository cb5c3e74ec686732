#include "alex/domain.hpp"

#include <cmath>
#include <sstream>

namespace alex {

const char* season_name(Season s) {
    switch (s) {
        case Season::winter: return "winter";
        case Season::spring: return "spring";
        case Season::summer: return "summer";
        case Season::fall: return "fall";
    }
    return "?";
}

Season season_of_month(int month_of_year) {
    if (month_of_year < 1 || month_of_year > 12)
        throw Error("month_of_year out of range: " + std::to_string(month_of_year));
    if (month_of_year == 12 || month_of_year <= 2) return Season::winter;
    if (month_of_year <= 5) return Season::spring;
    if (month_of_year <= 8) return Season::summer;
    return Season::fall;
}

Calendar Calendar::uniform(std::size_t step_count, std::size_t steps_per_day, int month_of_year) {
    if (steps_per_day == 0) throw Error("steps_per_day must be positive");
    const std::size_t n_days = (step_count + steps_per_day - 1) / steps_per_day;
    return from_day_months(step_count, steps_per_day, std::vector<int>(n_days, month_of_year));
}

Calendar Calendar::from_day_months(std::size_t step_count, std::size_t steps_per_day,
                                   const std::vector<int>& month_of_day) {
    if (steps_per_day == 0) throw Error("steps_per_day must be positive");
    if (step_count == 0) throw Error("calendar needs at least one step");
    const std::size_t n_days = (step_count + steps_per_day - 1) / steps_per_day;
    if (month_of_day.size() != n_days)
        throw Error("expected " + std::to_string(n_days) + " day month labels, got " +
                    std::to_string(month_of_day.size()));

    Calendar cal;
    cal.step_count_ = step_count;
    cal.steps_per_day_ = steps_per_day;
    for (std::size_t d = 0; d < n_days; ++d)
        cal.days_.push_back({d * steps_per_day, std::min((d + 1) * steps_per_day, step_count)});

    for (std::size_t d = 0; d < n_days; ++d) {
        const int m = month_of_day[d];
        const Season s = season_of_month(m);
        const StepRange day = cal.days_[d];
        if (cal.months_.empty() || cal.months_.back().month_of_year != m)
            cal.months_.push_back({day, m});
        else
            cal.months_.back().steps.end = day.end;
        if (cal.seasons_.empty() || cal.seasons_.back().season != s)
            cal.seasons_.push_back({day, s});
        else
            cal.seasons_.back().steps.end = day.end;
    }
    return cal;
}

Season Calendar::season_of_step(std::size_t t) const {
    for (const auto& w : seasons_)
        if (w.steps.contains(t)) return w.season;
    throw Error("step " + std::to_string(t) + " outside calendar");
}

std::vector<int> Calendar::month_of_day() const {
    std::vector<int> out;
    out.reserve(days_.size());
    std::size_t m = 0;
    for (const auto& d : days_) {
        while (m + 1 < months_.size() && !months_[m].steps.contains(d.begin)) ++m;
        out.push_back(months_.empty() ? 1 : months_[m].month_of_year);
    }
    return out;
}

namespace {

void check_partition(std::vector<std::string>& out, const std::string& what,
                     const std::vector<StepRange>& ranges, std::size_t step_count) {
    std::size_t expect = 0;
    for (const auto& r : ranges) {
        if (r.begin != expect || r.end <= r.begin) {
            out.push_back("calendar: " + what + " windows do not partition [0, T) at step " +
                          std::to_string(expect));
            return;
        }
        expect = r.end;
    }
    if (expect != step_count)
        out.push_back("calendar: " + what + " windows end at " + std::to_string(expect) +
                      " but T = " + std::to_string(step_count));
}

void check_series(std::vector<std::string>& out, const BuildingRecord& b, const char* name,
                  const std::vector<double>& series, std::size_t step_count) {
    if (series.size() != step_count) {
        out.push_back("building " + b.id + ": series \"" + name + "\" has length " +
                      std::to_string(series.size()) + ", expected " + std::to_string(step_count));
        return;
    }
    for (std::size_t t = 0; t < series.size(); ++t) {
        const double v = series[t];
        if (!std::isfinite(v))
            out.push_back("building " + b.id + ": series \"" + name + "\" index " +
                          std::to_string(t) + " is not finite");
        else if (v < 0.0)
            out.push_back("building " + b.id + ": series \"" + name + "\" index " +
                          std::to_string(t) + " is negative (" + std::to_string(v) + ")");
    }
}

void check_battery(std::vector<std::string>& out, const BuildingRecord& b) {
    const BatterySpec& s = b.battery;
    const std::string who = "building " + b.id + ": battery ";
    auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(s.capacity) || s.capacity < 0.0) out.push_back(who + "capacity must be >= 0");
    if (!finite(s.max_charge_power) || s.max_charge_power < 0.0)
        out.push_back(who + "max_charge_power must be >= 0");
    if (!finite(s.max_discharge_power) || s.max_discharge_power < 0.0)
        out.push_back(who + "max_discharge_power must be >= 0");
    if (!(s.charge_efficiency > 0.0 && s.charge_efficiency <= 1.0))
        out.push_back(who + "charge_efficiency must be in (0, 1]");
    if (!(s.discharge_efficiency > 0.0 && s.discharge_efficiency <= 1.0))
        out.push_back(who + "discharge_efficiency must be in (0, 1]");
    if (!(s.self_discharge >= 0.0 && s.self_discharge < 1.0))
        out.push_back(who + "self_discharge must be in [0, 1)");
    if (!(s.initial_soc >= 0.0 && s.initial_soc <= s.capacity))
        out.push_back(who + "initial_soc must be in [0, capacity]");
}

}  // namespace

std::vector<std::string> validate_dataset(const CommunityDataset& ds) {
    std::vector<std::string> out;
    const Calendar& cal = ds.calendar;
    const std::size_t T = cal.step_count();
    if (T == 0) out.push_back("calendar: step count is zero");
    check_partition(out, "day", cal.days(), T);
    {
        std::vector<StepRange> months;
        for (const auto& m : cal.months()) months.push_back(m.steps);
        check_partition(out, "month", months, T);
        std::vector<StepRange> seasons;
        for (const auto& s : cal.seasons()) seasons.push_back(s.steps);
        check_partition(out, "season", seasons, T);
    }

    const GridTariff& p = ds.tariff;
    const bool finite = std::isfinite(p.grid_buy) && std::isfinite(p.grid_sell) &&
                        std::isfinite(p.market_min) && std::isfinite(p.market_max) &&
                        std::isfinite(p.fees_per_step);
    if (!finite || !(p.grid_sell < p.market_min && p.market_min <= p.market_max &&
                     p.market_max < p.grid_buy)) {
        std::ostringstream msg;
        msg << "tariff: profitability gap violated, need grid_sell < market_min <= market_max "
               "< grid_buy (got "
            << p.grid_sell << ", " << p.market_min << ", " << p.market_max << ", " << p.grid_buy
            << ")";
        out.push_back(msg.str());
    }

    if (ds.buildings.empty()) out.push_back("community has no buildings");
    for (const auto& b : ds.buildings) {
        check_series(out, b, "load", b.load, T);
        check_series(out, b, "generation", b.generation, T);
        check_battery(out, b);
    }
    return out;
}

void require_valid(const CommunityDataset& ds) {
    const auto violations = validate_dataset(ds);
    if (violations.empty()) return;
    std::string msg = "invalid dataset:";
    for (const auto& v : violations) msg += "\n  " + v;
    throw Error(msg);
}

}  // namespace alex
