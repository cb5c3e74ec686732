#include "doctest.h"

#include "alex/domain.hpp"
#include "alex/ingest.hpp"

using namespace alex;

namespace {

CommunityDataset two_building_set() {
    ProfileSpec spec;
    spec.shape = ProfileShape::constant;
    return generate_synthetic(1, 2, 48, spec);
}

bool mentions(const std::vector<std::string>& v, const std::string& needle) {
    for (const auto& s : v)
        if (s.find(needle) != std::string::npos) return true;
    return false;
}

}  // namespace

TEST_CASE("well-formed dataset has no violations") {
    CHECK(validate_dataset(two_building_set()).empty());
}

TEST_CASE("negative generation is reported with building, series and index") {
    auto ds = two_building_set();
    ds.buildings[1].generation[5] = -1.0;
    const auto v = validate_dataset(ds);
    REQUIRE(v.size() == 1);
    CHECK(v[0].find("b2") != std::string::npos);
    CHECK(v[0].find("\"generation\"") != std::string::npos);
    CHECK(v[0].find("index 5") != std::string::npos);
}

TEST_CASE("profitability gap must be strict") {
    auto ds = two_building_set();
    ds.tariff.market_max = ds.tariff.grid_buy;
    const auto v = validate_dataset(ds);
    REQUIRE(v.size() == 1);
    CHECK(v[0].find("profitability gap") != std::string::npos);

    ds = two_building_set();
    ds.tariff.market_min = ds.tariff.grid_sell;
    CHECK(validate_dataset(ds).size() == 1);
}

TEST_CASE("other invariants") {
    auto ds = two_building_set();
    ds.buildings[0].load.pop_back();
    ds.buildings[1].load[3] = std::numeric_limits<double>::quiet_NaN();
    ds.buildings[1].battery.initial_soc = 5.0;
    ds.buildings[1].battery.charge_efficiency = 0.0;
    const auto v = validate_dataset(ds);
    CHECK(mentions(v, "has length 47"));
    CHECK(mentions(v, "not finite"));
    CHECK(mentions(v, "initial_soc"));
    CHECK(mentions(v, "charge_efficiency"));
    CHECK_THROWS_AS(require_valid(ds), Error);

    ds.buildings.clear();
    CHECK(mentions(validate_dataset(ds), "no buildings"));
}

TEST_CASE("validation is pure") {
    auto ds = two_building_set();
    ds.buildings[0].load[0] = -2.0;
    CHECK(validate_dataset(ds) == validate_dataset(ds));
}

TEST_CASE("calendar from day months") {
    const std::vector<int> months{11, 12, 12, 1, 3};
    const auto cal = Calendar::from_day_months(24 * 4 + 10, 24, months);
    CHECK(cal.day_count() == 5);
    CHECK(cal.days().back() == StepRange{96, 106});
    REQUIRE(cal.months().size() == 4);
    CHECK(cal.months()[1].steps == StepRange{24, 72});
    CHECK(cal.months()[1].month_of_year == 12);
    REQUIRE(cal.seasons().size() == 3);
    CHECK(cal.seasons()[0].season == Season::fall);
    CHECK(cal.seasons()[1].steps == StepRange{24, 96});
    CHECK(cal.seasons()[1].season == Season::winter);
    CHECK(cal.season_of_step(100) == Season::spring);
    CHECK(cal.hour_of_day(50) == 2);
    CHECK(cal.month_of_day() == months);

    CHECK_THROWS_AS(Calendar::from_day_months(48, 24, {1}), Error);
    CHECK_THROWS_AS(Calendar::from_day_months(24, 24, {13}), Error);
}

TEST_CASE("meteorological seasons") {
    CHECK(season_of_month(12) == Season::winter);
    CHECK(season_of_month(2) == Season::winter);
    CHECK(season_of_month(3) == Season::spring);
    CHECK(season_of_month(8) == Season::summer);
    CHECK(season_of_month(11) == Season::fall);
}
