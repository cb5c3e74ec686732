#pragma once

#include "alex/domain.hpp"
#include "alex/simulate.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace alex {

enum class EnergySign { import, export_ };
enum class Extreme { peak, valley };

/// Mean over days of the daily sum of max(E, 0) (import) or of min(E, 0) (export).
/// Export is reported negative.
double avg_daily_energy(std::span<const double> series, const Calendar& cal, EnergySign sign);

/// Mean over days of the daily maximum (peak) or minimum (valley).
double avg_daily_extreme(std::span<const double> series, const Calendar& cal, Extreme which);

double absolute_extreme(std::span<const double> series, Extreme which);

struct RampingStats {
    double daily_sum = 0.0;      // mean over days of the summed |dE| within the day
    double per_step_mean = 0.0;  // mean |dE| over every step that has a predecessor
    std::vector<double> per_day; // summed |dE| for each day
};

/// dE(t) = E(t) - E(t-1) with global differencing: the first step of a day uses the
/// previous day's last value and only step 0 has no predecessor.
RampingStats avg_daily_ramping(std::span<const double> series, const Calendar& cal);

struct LoadFactorStats {
    double value = 0.0;               // mean over counted windows of 1 - mean / max
    std::size_t skipped = 0;          // windows whose max <= 0
    std::vector<double> per_window;   // NaN for skipped windows
};

/// Throws Error when every window is skipped.
LoadFactorStats load_factor_complement(std::span<const double> series,
                                       std::span<const StepRange> windows);

struct MetricsReport {
    double avg_daily_import = 0.0;
    double avg_daily_export = 0.0;
    double avg_daily_peak = 0.0;
    double avg_daily_valley = 0.0;
    double max_peak = 0.0;
    double min_valley = 0.0;
    double avg_daily_ramping = 0.0;
    double ramping_per_step = 0.0;
    double daily_load_factor_complement = 0.0;
    double monthly_load_factor_complement = 0.0;

    std::size_t day_count = 0;
    std::size_t month_count = 0;
    std::size_t daily_windows_skipped = 0;
    std::size_t monthly_windows_skipped = 0;

    std::vector<double> daily_import, daily_export, daily_peak, daily_valley, daily_ramping,
        daily_load_factor;
    std::vector<double> monthly_load_factor;

    /// Average daily net consumption, import + export.
    double daily_consumption() const { return avg_daily_import + avg_daily_export; }
};

/// Load-factor complements are NaN (null in JSON) when every window is skipped.
MetricsReport compute_metrics(std::span<const double> community_net_load, const Calendar& cal);

/// Stable key order; used for metrics.json.
nlohmann::ordered_json metrics_to_json(const MetricsReport& m);
MetricsReport metrics_from_json(const nlohmann::json& j);

/// The nine headline metrics, in the order used by comparison tables.
struct MetricDef {
    const char* key;
    const char* label;
};
std::span<const MetricDef> headline_metrics();
double metric_value(const MetricsReport& m, const std::string& key);

/// day,import,export,peak,valley,ramping,load_factor_complement
void write_daily_csv(std::ostream& out, const MetricsReport& m);
/// month,begin,end,month_of_year,load_factor_complement
void write_monthly_csv(std::ostream& out, const MetricsReport& m, const Calendar& cal);

enum class GroupBy { hour_of_day, hour_of_day_by_season };

struct ProfilePoint {
    std::string group;
    double mean = 0.0;
    double stddev = 0.0;  // population standard deviation
    std::size_t count = 0;
};

/// Groups a per-step series and returns mean and standard deviation per group, groups in
/// ascending order (seasons winter..fall, then hour).
std::vector<ProfilePoint> profile_series(std::span<const double> series, const Calendar& cal,
                                         GroupBy groupby);

enum class ProfileQuantity { community_net_load, mean_soc, cumulative_mean_bill };

std::vector<ProfilePoint> profile_series(const SimulationTrace& trace, const Calendar& cal,
                                         GroupBy groupby, ProfileQuantity quantity);

/// Mean and standard deviation across buildings of the cumulative bill at every step.
std::vector<ProfilePoint> cumulative_bill_profile(const SimulationTrace& trace);

/// group,mean,std
void write_profile_csv(std::ostream& out, std::span<const ProfilePoint> points);

}  // namespace alex
