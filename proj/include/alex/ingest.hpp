#pragma once

#include "alex/domain.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "json.hpp"

namespace alex {

/// How the CityLearn directory layout maps onto a CommunityDataset. Lives in config so a
/// dataset revision that renames columns needs no code change.
struct CityLearnMapping {
    std::string schema_file = "schema.json";
    std::string load_column = "Equipment Electric Power [kWh]";
    std::string generation_column = "Solar Generation [W/kW]";
    std::string month_column = "Month";
    /// Solar column unit is W per kW of installed PV; multiplied by the PV nominal power
    /// (kW) and this factor it becomes kWh per hourly step.
    double generation_scale = 0.001;
    std::size_t steps_per_day = 24;
    bool included_only = true;  // skip buildings with "include": false

    // JSON pointers relative to each building's schema entry.
    std::string pv_power_pointer = "/pv/attributes/nominal_power";
    std::string capacity_pointer = "/electrical_storage/attributes/capacity";
    std::string efficiency_pointer = "/electrical_storage/attributes/efficiency";
    std::string power_pointer = "/electrical_storage/attributes/nominal_power";
    std::string self_discharge_pointer = "/electrical_storage/attributes/loss_coefficient";
    std::string initial_soc_pointer = "/electrical_storage/attributes/initial_soc";
    /// The schema's efficiency is a round-trip figure split as sqrt per direction.
    bool efficiency_is_round_trip = true;

    /// Fallbacks for missing schema fields, keyed by field name: pv_power, capacity,
    /// efficiency, power, self_discharge, initial_soc. A field that is missing from both
    /// the schema and this map is an error.
    std::map<std::string, double> defaults{{"self_discharge", 0.0}, {"initial_soc", 0.0}};

    static CityLearnMapping from_json(const nlohmann::json& j);
    nlohmann::ordered_json to_json() const;
};

/// Loads a CityLearn directory. Errors name the missing file, column, field or the
/// building whose series length disagrees.
CommunityDataset load_citylearn(const std::filesystem::path& dir, const CityLearnMapping& mapping,
                                const GridTariff& tariff);

/// Canonical format: <dir>/community.json (calendar, tariff, batteries, file names) plus
/// <dir>/<id>.csv with columns t,load_kWh,generation_kWh.
void write_canonical(const CommunityDataset& ds, const std::filesystem::path& dir);
CommunityDataset read_canonical(const std::filesystem::path& dir);

enum class ProfileShape { constant, step, sinusoid, mirror_pair, random };

ProfileShape parse_profile_shape(const std::string& name);
const char* profile_shape_name(ProfileShape shape);

/// Parameters for synthetic communities.
struct ProfileSpec {
    ProfileShape shape = ProfileShape::random;
    double load_level = 1.0;   // kWh; baseline (or maximum for random)
    double generation_level = 1.0;
    double amplitude = 1.0;    // step height / sinusoid amplitude / mirror magnitude
    std::size_t period = 24;   // sinusoid period in steps
    double noise = 0.0;        // uniform +-noise added to load and generation, clipped at 0
    std::size_t steps_per_day = 24;
    BatterySpec battery{1.0, 1.0, 1.0, 1.0, 1.0, 0.0, 0.0};
    GridTariff tariff{};

    static ProfileSpec from_json(const nlohmann::json& j);
    nlohmann::ordered_json to_json() const;
};

/// Deterministic for a given seed. Building ids are "b1".."bN".
CommunityDataset generate_synthetic(std::uint64_t seed, std::size_t n_buildings, std::size_t step_count,
                                    const ProfileSpec& spec);

GridTariff tariff_from_json(const nlohmann::json& j, const GridTariff& base = {});
nlohmann::ordered_json tariff_to_json(const GridTariff& t);
BatterySpec battery_from_json(const nlohmann::json& j, const BatterySpec& base = {});
nlohmann::ordered_json battery_to_json(const BatterySpec& b);

}  // namespace alex
