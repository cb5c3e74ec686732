#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace alex {

/// Thrown for malformed input: configs, datasets, preconditions on public calls.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Half-open range of step indices [begin, end).
struct StepRange {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t size() const { return end - begin; }
    bool contains(std::size_t t) const { return t >= begin && t < end; }
    bool operator==(const StepRange&) const = default;
};

enum class Season { winter = 0, spring = 1, summer = 2, fall = 3 };

const char* season_name(Season s);

/// Meteorological season of a calendar month (1..12): DJF, MAM, JJA, SON.
Season season_of_month(int month_of_year);

struct MonthWindow {
    StepRange steps;
    int month_of_year = 1;  // 1..12
    bool operator==(const MonthWindow&) const = default;
};

struct SeasonWindow {
    StepRange steps;
    Season season = Season::winter;
    bool operator==(const SeasonWindow&) const = default;
};

/// Hourly calendar. Days are consecutive blocks of `steps_per_day` steps starting at
/// step 0; the last day may be partial. Months and seasons are contiguous windows.
class Calendar {
public:
    Calendar() = default;

    /// Single-month calendar covering all steps, labelled with `month_of_year`.
    static Calendar uniform(std::size_t step_count, std::size_t steps_per_day = 24,
                            int month_of_year = 1);

    /// Calendar from one month label per day. Consecutive days with equal labels form
    /// one month window; seasons are derived from the month labels.
    static Calendar from_day_months(std::size_t step_count, std::size_t steps_per_day,
                                    const std::vector<int>& month_of_day);

    std::size_t step_count() const { return step_count_; }
    std::size_t steps_per_day() const { return steps_per_day_; }
    std::size_t day_count() const { return days_.size(); }

    const std::vector<StepRange>& days() const { return days_; }
    const std::vector<MonthWindow>& months() const { return months_; }
    const std::vector<SeasonWindow>& seasons() const { return seasons_; }

    std::size_t hour_of_day(std::size_t t) const { return t % steps_per_day_; }
    Season season_of_step(std::size_t t) const;
    /// Month label of every day; inverse of from_day_months.
    std::vector<int> month_of_day() const;

    bool operator==(const Calendar&) const = default;

private:
    std::size_t step_count_ = 0;
    std::size_t steps_per_day_ = 24;
    std::vector<StepRange> days_;
    std::vector<MonthWindow> months_;
    std::vector<SeasonWindow> seasons_;
};

/// Prices in money/kWh. Valid tariffs satisfy the profitability gap
/// grid_sell < market_min <= market_max < grid_buy.
struct GridTariff {
    double grid_buy = 0.25;
    double grid_sell = 0.05;
    double market_min = 0.07;
    double market_max = 0.23;
    double fees_per_step = 0.0;  // per building, charged every step

    bool operator==(const GridTariff&) const = default;
};

/// Energies in kWh, powers in kW over one-hour steps.
struct BatterySpec {
    double capacity = 0.0;
    double max_charge_power = 0.0;
    double max_discharge_power = 0.0;
    double charge_efficiency = 1.0;
    double discharge_efficiency = 1.0;
    double self_discharge = 0.0;  // fraction lost per step, applied before the action
    double initial_soc = 0.0;

    bool operator==(const BatterySpec&) const = default;
};

struct BuildingRecord {
    std::string id;
    std::vector<double> load;        // kWh per step, >= 0
    std::vector<double> generation;  // kWh per step, >= 0
    BatterySpec battery;

    bool operator==(const BuildingRecord&) const = default;
};

struct CommunityDataset {
    Calendar calendar;
    GridTariff tariff;
    std::vector<BuildingRecord> buildings;

    std::size_t step_count() const { return calendar.step_count(); }
    bool operator==(const CommunityDataset&) const = default;
};

/// Every violated invariant of the dataset, one human-readable line each. Empty means
/// the dataset is acceptable to every downstream module.
std::vector<std::string> validate_dataset(const CommunityDataset& ds);

/// Throws Error listing the violations when validate_dataset is non-empty.
void require_valid(const CommunityDataset& ds);

}  // namespace alex
