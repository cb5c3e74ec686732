#include "doctest.h"

#include "alex/ingest.hpp"

#include <filesystem>
#include <fstream>
#include <random>

using namespace alex;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("alex_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

// Two-building miniature in the CityLearn layout.
fs::path write_mini_citylearn(const std::string& name, bool with_capacity = true, std::size_t rows_b2 = 48) {
    const auto dir = fresh_dir(name);
    nlohmann::ordered_json schema;
    for (const char* id : {"Building_1", "Building_2"}) {
        nlohmann::ordered_json b;
        b["include"] = true;
        b["energy_simulation"] = std::string(id) + ".csv";
        b["pv"]["attributes"]["nominal_power"] = 4.0;
        if (with_capacity) b["electrical_storage"]["attributes"]["capacity"] = 6.4;
        b["electrical_storage"]["attributes"]["efficiency"] = 0.81;
        b["electrical_storage"]["attributes"]["nominal_power"] = 5.0;
        b["electrical_storage"]["attributes"]["loss_coefficient"] = 0.0;
        schema["buildings"][id] = b;
    }
    schema["buildings"]["Building_3"] = {{"include", false}, {"energy_simulation", "missing.csv"}};
    std::ofstream(dir / "schema.json") << schema.dump(2);
    for (const auto& [id, rows] : {std::pair{"Building_1", std::size_t{48}}, std::pair{"Building_2", rows_b2}}) {
        std::ofstream out(dir / (std::string(id) + ".csv"));
        out << "Month,Hour,Equipment Electric Power [kWh],Solar Generation [W/kW]\n";
        for (std::size_t r = 0; r < rows; ++r)
            out << (r == 0 ? 7 : 8) << ".0," << (r % 24 + 1) << ".0," << 1.5 + 0.01 * double(r) << ","
                << (r % 24 >= 8 && r % 24 <= 16 ? 500.0 : 0.0) << "\n";
    }
    return dir;
}

}  // namespace

TEST_CASE("CityLearn layout is translated") {
    const auto dir = write_mini_citylearn("ok");
    const auto ds = load_citylearn(dir, {}, {});
    REQUIRE(ds.buildings.size() == 2);
    CHECK(ds.buildings[0].id == "Building_1");
    CHECK(ds.step_count() == 48);
    CHECK(ds.buildings[0].load[2] == doctest::Approx(1.52));
    CHECK(ds.buildings[0].generation[10] == doctest::Approx(2.0));  // 500 W/kW * 4 kW
    CHECK(ds.buildings[0].battery.capacity == 6.4);
    CHECK(ds.buildings[0].battery.charge_efficiency == doctest::Approx(0.9));
    CHECK(ds.buildings[0].battery.max_discharge_power == 5.0);
    CHECK(ds.buildings[0].battery.initial_soc == 0.0);
    REQUIRE(ds.calendar.months().size() == 1);
    CHECK(ds.calendar.months()[0].month_of_year == 8);
    CHECK(validate_dataset(ds).empty());
}

TEST_CASE("CityLearn errors") {
    CHECK_THROWS_WITH_AS(load_citylearn(write_mini_citylearn("short", true, 40), {}, {}),
                         doctest::Contains("Building_2"), Error);
    CHECK_THROWS_WITH_AS(load_citylearn(write_mini_citylearn("nocap", false), {}, {}),
                         doctest::Contains("capacity"), Error);
    CityLearnMapping m;
    m.capacity_pointer = "/electrical_storage/attributes/missing";
    m.defaults["capacity"] = 3.0;
    CHECK(load_citylearn(write_mini_citylearn("default"), m, {}).buildings[1].battery.capacity == 3.0);
    m.load_column = "Nope";
    CHECK_THROWS_WITH_AS(load_citylearn(write_mini_citylearn("col"), m, {}), doctest::Contains("Nope"), Error);
    CHECK_THROWS_AS(load_citylearn(fresh_dir("empty"), {}, {}), Error);
}

TEST_CASE("mapping json round trip") {
    CityLearnMapping m;
    m.generation_scale = 0.5;
    m.defaults["capacity"] = 2.0;
    const auto back = CityLearnMapping::from_json(nlohmann::json::parse(m.to_json().dump()));
    CHECK(back.generation_scale == 0.5);
    CHECK(back.defaults == m.defaults);
    CHECK(back.load_column == m.load_column);
}

TEST_CASE("canonical round trip is exact") {
    ProfileSpec spec;
    spec.noise = 0.37;
    spec.shape = ProfileShape::sinusoid;
    spec.battery.self_discharge = 0.013;
    auto ds = generate_synthetic(5, 3, 24 * 3 + 5, spec);
    ds.calendar = Calendar::from_day_months(ds.step_count(), 24, {11, 12, 1, 1});
    ds.tariff.fees_per_step = 0.001;
    const auto dir = fresh_dir("canonical");
    write_canonical(ds, dir);
    CHECK(fs::exists(dir / "community.json"));
    CHECK(fs::exists(dir / "b1.csv"));
    CHECK(read_canonical(dir) == ds);
}

TEST_CASE("synthetic generation") {
    ProfileSpec spec;
    CHECK(generate_synthetic(3, 2, 30, spec) == generate_synthetic(3, 2, 30, spec));
    CHECK_FALSE(generate_synthetic(3, 2, 30, spec) == generate_synthetic(4, 2, 30, spec));
    CHECK_THROWS_AS(generate_synthetic(3, 0, 30, spec), Error);
    CHECK_THROWS_AS(generate_synthetic(3, 1, 0, spec), Error);

    spec.shape = ProfileShape::mirror_pair;
    const auto m = generate_synthetic(0, 2, 2, spec);
    auto net = [&](std::size_t b, std::size_t t) { return m.buildings[b].load[t] - m.buildings[b].generation[t]; };
    CHECK(net(0, 0) == -1.0);
    CHECK(net(0, 1) == 1.0);
    CHECK(net(1, 0) == 1.0);
    CHECK(net(1, 1) == -1.0);
    CHECK(m.buildings[1].id == "b2");

    spec.shape = ProfileShape::step;
    spec.amplitude = 2.0;
    const auto s = generate_synthetic(0, 1, 4, spec);
    CHECK(s.buildings[0].load == std::vector<double>{1, 1, 3, 3});

    spec.shape = ProfileShape::constant;
    for (const auto& b : generate_synthetic(0, 2, 5, spec).buildings) CHECK(b.load == std::vector<double>(5, 1.0));
    CHECK(validate_dataset(generate_synthetic(9, 3, 50, ProfileSpec{})).empty());
}

TEST_CASE("profile spec json") {
    ProfileSpec p;
    p.shape = ProfileShape::sinusoid;
    p.period = 12;
    const auto back = ProfileSpec::from_json(nlohmann::json::parse(p.to_json().dump()));
    CHECK(back.shape == ProfileShape::sinusoid);
    CHECK(back.period == 12);
    CHECK(back.battery == p.battery);
    CHECK_THROWS_AS(parse_profile_shape("zigzag"), Error);
    const auto rt = battery_from_json(nlohmann::json{{"round_trip_efficiency", 0.81}});
    CHECK(rt.charge_efficiency == doctest::Approx(0.9));
}
