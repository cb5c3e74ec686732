#include "alex/ingest.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string_view>
#include <vector>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace fs = std::filesystem;

namespace alex {

namespace {

std::vector<std::string_view> split_csv_line(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        out.push_back(line.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

double parse_double(std::string_view s, const std::string& where) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw Error(fmt::format("{}: cannot parse '{}' as a number", where, s));
    return v;
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name, const std::string& where) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        throw Error(fmt::format("{}: unmapped column '{}'", where, name));
    }
};

CsvTable read_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("missing file: " + path.string());
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) throw Error("empty CSV file: " + path.string());
    for (auto f : split_csv_line(line)) table.header.emplace_back(f);
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        std::vector<std::string> row;
        for (auto f : split_csv_line(line)) row.emplace_back(f);
        table.rows.push_back(std::move(row));
    }
    return table;
}

std::vector<double> numeric_column(const CsvTable& table, std::size_t col, const std::string& where) {
    std::vector<double> out;
    out.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        if (col >= row.size()) throw Error(fmt::format("{}: row {} is too short", where, r + 2));
        out.push_back(parse_double(row[col], fmt::format("{} row {}", where, r + 2)));
    }
    return out;
}

nlohmann::json read_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("missing file: " + path.string());
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& ex) {
        throw Error(fmt::format("{}: {}", path.string(), ex.what()));
    }
}

// Schema field with fallback to the mapping defaults; error when neither has it.
double schema_field(const nlohmann::ordered_json& entry, const std::string& pointer,
                    const CityLearnMapping& mapping, const std::string& field, const std::string& building) {
    const nlohmann::json::json_pointer ptr(pointer);
    if (entry.contains(ptr) && entry.at(ptr).is_number()) return entry.at(ptr).get<double>();
    const auto it = mapping.defaults.find(field);
    if (it != mapping.defaults.end()) return it->second;
    throw Error(fmt::format("building {}: unmapped field '{}' (schema pointer {} missing, no default)",
                            building, field, pointer));
}

template <class T>
void maybe_get(const nlohmann::json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

CityLearnMapping CityLearnMapping::from_json(const nlohmann::json& j) {
    CityLearnMapping m;
    try {
        maybe_get(j, "schema_file", m.schema_file);
        maybe_get(j, "load_column", m.load_column);
        maybe_get(j, "generation_column", m.generation_column);
        maybe_get(j, "month_column", m.month_column);
        maybe_get(j, "generation_scale", m.generation_scale);
        maybe_get(j, "steps_per_day", m.steps_per_day);
        maybe_get(j, "included_only", m.included_only);
        maybe_get(j, "pv_power_pointer", m.pv_power_pointer);
        maybe_get(j, "capacity_pointer", m.capacity_pointer);
        maybe_get(j, "efficiency_pointer", m.efficiency_pointer);
        maybe_get(j, "power_pointer", m.power_pointer);
        maybe_get(j, "self_discharge_pointer", m.self_discharge_pointer);
        maybe_get(j, "initial_soc_pointer", m.initial_soc_pointer);
        maybe_get(j, "efficiency_is_round_trip", m.efficiency_is_round_trip);
        if (j.contains("defaults")) m.defaults = j.at("defaults").get<std::map<std::string, double>>();
    } catch (const nlohmann::json::exception& ex) {
        throw Error(std::string("CityLearn mapping: ") + ex.what());
    }
    return m;
}

nlohmann::ordered_json CityLearnMapping::to_json() const {
    nlohmann::ordered_json j;
    j["schema_file"] = schema_file;
    j["load_column"] = load_column;
    j["generation_column"] = generation_column;
    j["month_column"] = month_column;
    j["generation_scale"] = generation_scale;
    j["steps_per_day"] = steps_per_day;
    j["included_only"] = included_only;
    j["pv_power_pointer"] = pv_power_pointer;
    j["capacity_pointer"] = capacity_pointer;
    j["efficiency_pointer"] = efficiency_pointer;
    j["power_pointer"] = power_pointer;
    j["self_discharge_pointer"] = self_discharge_pointer;
    j["initial_soc_pointer"] = initial_soc_pointer;
    j["efficiency_is_round_trip"] = efficiency_is_round_trip;
    j["defaults"] = defaults;
    return j;
}

CommunityDataset load_citylearn(const fs::path& dir, const CityLearnMapping& mapping,
                                const GridTariff& tariff) {
    nlohmann::ordered_json schema;
    {
        const fs::path path = dir / mapping.schema_file;
        std::ifstream in(path);
        if (!in) throw Error("missing file: " + path.string());
        try {
            schema = nlohmann::ordered_json::parse(in);
        } catch (const nlohmann::json::exception& ex) {
            throw Error(fmt::format("{}: {}", path.string(), ex.what()));
        }
    }
    if (!schema.contains("buildings") || !schema["buildings"].is_object())
        throw Error("schema has no 'buildings' object");

    CommunityDataset ds;
    ds.tariff = tariff;
    std::vector<double> months;
    std::size_t T = 0;
    for (const auto& [name, entry] : schema["buildings"].items()) {
        if (mapping.included_only && entry.contains("include") && !entry["include"].get<bool>())
            continue;
        if (!entry.contains("energy_simulation"))
            throw Error("building " + name + ": schema entry has no energy_simulation file");
        const fs::path file = dir / entry["energy_simulation"].get<std::string>();
        const CsvTable table = read_csv(file);
        const std::string where = file.filename().string();

        BuildingRecord b;
        b.id = name;
        b.load = numeric_column(table, table.column(mapping.load_column, where), where);
        const double pv = schema_field(entry, mapping.pv_power_pointer, mapping, "pv_power", name);
        b.generation = numeric_column(table, table.column(mapping.generation_column, where), where);
        for (double& g : b.generation) g *= pv * mapping.generation_scale;

        if (ds.buildings.empty()) {
            T = b.load.size();
            months = numeric_column(table, table.column(mapping.month_column, where), where);
        } else if (b.load.size() != T) {
            throw Error(fmt::format("building {}: length mismatch, {} steps but {} has {}", name,
                                    b.load.size(), ds.buildings.front().id, T));
        }

        BatterySpec& bat = b.battery;
        bat.capacity = schema_field(entry, mapping.capacity_pointer, mapping, "capacity", name);
        const double eff = schema_field(entry, mapping.efficiency_pointer, mapping, "efficiency", name);
        const double per_direction = mapping.efficiency_is_round_trip ? std::sqrt(eff) : eff;
        bat.charge_efficiency = per_direction;
        bat.discharge_efficiency = per_direction;
        bat.max_charge_power = schema_field(entry, mapping.power_pointer, mapping, "power", name);
        bat.max_discharge_power = bat.max_charge_power;
        bat.self_discharge =
            schema_field(entry, mapping.self_discharge_pointer, mapping, "self_discharge", name);
        bat.initial_soc = schema_field(entry, mapping.initial_soc_pointer, mapping, "initial_soc", name);
        ds.buildings.push_back(std::move(b));
    }
    if (ds.buildings.empty()) throw Error("schema lists no included buildings");
    if (T == 0) throw Error("building series are empty");

    // Each day takes the month label held by most of its rows.
    const std::size_t d = mapping.steps_per_day;
    std::vector<int> month_of_day;
    for (std::size_t begin = 0; begin < T; begin += d) {
        std::map<int, std::size_t> votes;
        for (std::size_t t = begin; t < std::min(begin + d, T); ++t)
            ++votes[static_cast<int>(std::lround(months[t]))];
        int best = votes.begin()->first;
        for (const auto& [m, n] : votes)
            if (n > votes[best]) best = m;
        month_of_day.push_back(best);
    }
    ds.calendar = Calendar::from_day_months(T, d, month_of_day);
    return ds;
}

GridTariff tariff_from_json(const nlohmann::json& j, const GridTariff& base) {
    GridTariff t = base;
    try {
        maybe_get(j, "grid_buy", t.grid_buy);
        maybe_get(j, "grid_sell", t.grid_sell);
        maybe_get(j, "market_min", t.market_min);
        maybe_get(j, "market_max", t.market_max);
        maybe_get(j, "fees_per_step", t.fees_per_step);
    } catch (const nlohmann::json::exception& ex) {
        throw Error(std::string("tariff: ") + ex.what());
    }
    return t;
}

nlohmann::ordered_json tariff_to_json(const GridTariff& t) {
    return {{"grid_buy", t.grid_buy},
            {"grid_sell", t.grid_sell},
            {"market_min", t.market_min},
            {"market_max", t.market_max},
            {"fees_per_step", t.fees_per_step}};
}

BatterySpec battery_from_json(const nlohmann::json& j, const BatterySpec& base) {
    BatterySpec b = base;
    try {
        maybe_get(j, "capacity", b.capacity);
        maybe_get(j, "max_charge_power", b.max_charge_power);
        maybe_get(j, "max_discharge_power", b.max_discharge_power);
        maybe_get(j, "charge_efficiency", b.charge_efficiency);
        maybe_get(j, "discharge_efficiency", b.discharge_efficiency);
        maybe_get(j, "self_discharge", b.self_discharge);
        maybe_get(j, "initial_soc", b.initial_soc);
        if (j.contains("round_trip_efficiency")) {
            const double rt = j.at("round_trip_efficiency").get<double>();
            b.charge_efficiency = b.discharge_efficiency = std::sqrt(rt);
        }
    } catch (const nlohmann::json::exception& ex) {
        throw Error(std::string("battery: ") + ex.what());
    }
    return b;
}

nlohmann::ordered_json battery_to_json(const BatterySpec& b) {
    return {{"capacity", b.capacity},
            {"max_charge_power", b.max_charge_power},
            {"max_discharge_power", b.max_discharge_power},
            {"charge_efficiency", b.charge_efficiency},
            {"discharge_efficiency", b.discharge_efficiency},
            {"self_discharge", b.self_discharge},
            {"initial_soc", b.initial_soc}};
}

void write_canonical(const CommunityDataset& ds, const fs::path& dir) {
    fs::create_directories(dir);
    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    j["calendar"] = {{"step_count", ds.calendar.step_count()},
                     {"steps_per_day", ds.calendar.steps_per_day()},
                     {"month_of_day", ds.calendar.month_of_day()}};
    j["tariff"] = tariff_to_json(ds.tariff);
    j["buildings"] = nlohmann::ordered_json::array();
    for (const auto& b : ds.buildings) {
        const std::string file = b.id + ".csv";
        j["buildings"].push_back({{"id", b.id}, {"file", file}, {"battery", battery_to_json(b.battery)}});
        std::ofstream out(dir / file);
        if (!out) throw Error("cannot write " + (dir / file).string());
        out << "t,load_kWh,generation_kWh\n";
        for (std::size_t t = 0; t < b.load.size(); ++t)
            fmt::print(out, "{},{},{}\n", t, b.load[t], b.generation[t]);
    }
    std::ofstream out(dir / "community.json");
    if (!out) throw Error("cannot write " + (dir / "community.json").string());
    out << j.dump(2) << '\n';
}

CommunityDataset read_canonical(const fs::path& dir) {
    const auto j = read_json(dir / "community.json");
    CommunityDataset ds;
    try {
        const auto& cal = j.at("calendar");
        ds.calendar = Calendar::from_day_months(cal.at("step_count").get<std::size_t>(),
                                                cal.at("steps_per_day").get<std::size_t>(),
                                                cal.at("month_of_day").get<std::vector<int>>());
        ds.tariff = tariff_from_json(j.at("tariff"));
        for (const auto& entry : j.at("buildings")) {
            BuildingRecord b;
            b.id = entry.at("id").get<std::string>();
            b.battery = battery_from_json(entry.at("battery"));
            const fs::path file = dir / entry.at("file").get<std::string>();
            const CsvTable table = read_csv(file);
            const std::string where = file.filename().string();
            b.load = numeric_column(table, table.column("load_kWh", where), where);
            b.generation = numeric_column(table, table.column("generation_kWh", where), where);
            if (b.load.size() != ds.calendar.step_count())
                throw Error(fmt::format("building {}: length mismatch, {} steps but calendar has {}",
                                        b.id, b.load.size(), ds.calendar.step_count()));
            ds.buildings.push_back(std::move(b));
        }
    } catch (const nlohmann::json::exception& ex) {
        throw Error(std::string("community.json: ") + ex.what());
    }
    return ds;
}

ProfileShape parse_profile_shape(const std::string& name) {
    if (name == "constant") return ProfileShape::constant;
    if (name == "step") return ProfileShape::step;
    if (name == "sinusoid") return ProfileShape::sinusoid;
    if (name == "mirror_pair") return ProfileShape::mirror_pair;
    if (name == "random") return ProfileShape::random;
    throw Error("unknown profile shape '" + name + "'");
}

const char* profile_shape_name(ProfileShape shape) {
    switch (shape) {
        case ProfileShape::constant: return "constant";
        case ProfileShape::step: return "step";
        case ProfileShape::sinusoid: return "sinusoid";
        case ProfileShape::mirror_pair: return "mirror_pair";
        case ProfileShape::random: return "random";
    }
    return "?";
}

ProfileSpec ProfileSpec::from_json(const nlohmann::json& j) {
    ProfileSpec p;
    try {
        if (j.contains("shape")) p.shape = parse_profile_shape(j.at("shape").get<std::string>());
        maybe_get(j, "load_level", p.load_level);
        maybe_get(j, "generation_level", p.generation_level);
        maybe_get(j, "amplitude", p.amplitude);
        maybe_get(j, "period", p.period);
        maybe_get(j, "noise", p.noise);
        maybe_get(j, "steps_per_day", p.steps_per_day);
        if (j.contains("battery")) p.battery = battery_from_json(j.at("battery"), p.battery);
        if (j.contains("tariff")) p.tariff = tariff_from_json(j.at("tariff"), p.tariff);
    } catch (const nlohmann::json::exception& ex) {
        throw Error(std::string("synthetic profile: ") + ex.what());
    }
    return p;
}

nlohmann::ordered_json ProfileSpec::to_json() const {
    return {{"shape", profile_shape_name(shape)},
            {"load_level", load_level},
            {"generation_level", generation_level},
            {"amplitude", amplitude},
            {"period", period},
            {"noise", noise},
            {"steps_per_day", steps_per_day},
            {"battery", battery_to_json(battery)},
            {"tariff", tariff_to_json(tariff)}};
}

CommunityDataset generate_synthetic(std::uint64_t seed, std::size_t n_buildings, std::size_t step_count,
                                    const ProfileSpec& spec) {
    if (n_buildings == 0) throw Error("synthetic community needs at least one building");
    if (step_count == 0) throw Error("synthetic community needs at least one step");
    if (spec.shape == ProfileShape::sinusoid && spec.period == 0)
        throw Error("sinusoid period must be positive");
    if (spec.load_level < 0.0 || spec.generation_level < 0.0 || spec.noise < 0.0)
        throw Error("synthetic levels and noise must be non-negative");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    CommunityDataset ds;
    ds.calendar = Calendar::uniform(step_count, spec.steps_per_day);
    ds.tariff = spec.tariff;

    for (std::size_t k = 0; k < n_buildings; ++k) {
        BuildingRecord b;
        b.id = "b" + std::to_string(k + 1);
        b.battery = spec.battery;
        b.load.resize(step_count);
        b.generation.resize(step_count);
        const double phase = 2.0 * std::numbers::pi * unit(rng);
        for (std::size_t t = 0; t < step_count; ++t) {
            double l = spec.load_level, g = spec.generation_level;
            switch (spec.shape) {
                case ProfileShape::constant: break;
                case ProfileShape::step:
                    if (2 * t >= step_count) l += spec.amplitude;
                    break;
                case ProfileShape::sinusoid: {
                    const double x = 2.0 * std::numbers::pi * static_cast<double>(t) /
                                         static_cast<double>(spec.period) + phase;
                    l += spec.amplitude * std::sin(x);
                    g *= std::max(0.0, std::sin(x + std::numbers::pi));
                    break;
                }
                case ProfileShape::mirror_pair: {
                    // Even-indexed buildings: surplus on even steps; odd-indexed: the reverse.
                    const bool surplus = (t % 2 == 0) == (k % 2 == 0);
                    const double net = surplus ? -spec.amplitude : spec.amplitude;
                    l = std::max(net, 0.0);
                    g = std::max(-net, 0.0);
                    break;
                }
                case ProfileShape::random:
                    l = spec.load_level * unit(rng);
                    g = spec.generation_level * unit(rng);
                    break;
            }
            if (spec.noise > 0.0) {
                l += spec.noise * (2.0 * unit(rng) - 1.0);
                g += spec.noise * (2.0 * unit(rng) - 1.0);
            }
            b.load[t] = std::max(l, 0.0);
            b.generation[t] = std::max(g, 0.0);
        }
        ds.buildings.push_back(std::move(b));
    }
    return ds;
}

}  // namespace alex
