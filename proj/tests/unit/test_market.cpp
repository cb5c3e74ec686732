#include "doctest.h"

#include "alex/market.hpp"

#include <random>
#include <sstream>

using namespace alex;

namespace {
const GridTariff tariff{0.25, 0.05, 0.07, 0.23, 0.0};

std::vector<BidAsk> orders(std::initializer_list<double> nets) {
    std::vector<BidAsk> v;
    std::size_t k = 0;
    for (double e : nets) v.push_back(make_bid_ask(e, 0.15, k++));
    return v;
}
}  // namespace

TEST_CASE("price curve") {
    CHECK(price_curve(4, 4, tariff) == doctest::Approx(0.15));
    CHECK(price_curve(1, 0, tariff) == doctest::Approx(0.23));
    CHECK(price_curve(0, 1, tariff) == doctest::Approx(0.07));
    CHECK(price_curve(0, 0, tariff) == doctest::Approx(0.15));
    CHECK(price_curve(3, 1, tariff) == doctest::Approx(0.20));
    CHECK_THROWS_AS(price_curve(-1, 1, tariff), Error);
}

TEST_CASE("price curve monotone") {
    for (double d = 0; d < 5; d += 0.5)
        for (double s = 0; s < 5; s += 0.5) {
            CHECK(price_curve(d + 0.5, s, tariff) >= price_curve(d, s, tariff) - 1e-15);
            CHECK(price_curve(d, s + 0.5, tariff) <= price_curve(d, s, tariff) + 1e-15);
        }
}

TEST_CASE("pro-rata settlement") {
    const auto r = settle_round(orders({6, 4, -6}), tariff, 0);
    CHECK(r.cleared_quantity == doctest::Approx(6));
    CHECK(r.allocations[0].market_buy == doctest::Approx(3.6));
    CHECK(r.allocations[0].grid_buy == doctest::Approx(2.4));
    CHECK(r.allocations[1].market_buy == doctest::Approx(2.4));
    CHECK(r.allocations[1].grid_buy == doctest::Approx(1.6));
    CHECK(r.allocations[2].market_sell == doctest::Approx(6));
    CHECK(r.allocations[2].grid_sell == 0.0);
    CHECK(r.market_price == doctest::Approx(0.05 + 0.2 * 10.0 / 16.0));
}

TEST_CASE("empty and balanced rounds") {
    const auto e = settle_round(orders({5}), tariff, 3);
    CHECK(e.step == 3);
    CHECK(e.cleared_quantity == 0.0);
    CHECK(e.allocations[0].grid_buy == 5.0);

    const auto b = settle_round(orders({3, -3}), tariff, 0);
    CHECK(b.cleared_quantity == 3.0);
    CHECK(b.allocations[0].grid_buy == 0.0);
    CHECK(b.allocations[1].grid_sell == 0.0);
    CHECK(b.market_price == doctest::Approx(0.15));
}

TEST_CASE("settlement rejects bad orders") {
    std::vector<BidAsk> v{{0, {0.1, 1.0}, {0.1, 1.0}}};
    CHECK_THROWS_AS(settle_round(v, tariff, 0), Error);
    v = {{0, {0.1, -1.0}, {0.1, 0.0}}};
    CHECK_THROWS_AS(settle_round(v, tariff, 0), Error);
}

TEST_CASE("random rounds conserve energy and never beat the grid") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-5, 5);
    for (int k = 0; k < 500; ++k) {
        std::vector<BidAsk> v;
        const int n = 1 + k % 7;
        for (int b = 0; b < n; ++b) v.push_back(make_bid_ask(k % 11 == 0 ? 0.0 : u(rng), 0.15, b));
        const auto r = settle_round(v, tariff, 0);
        double mb = 0, ms = 0, money = 0;
        for (std::size_t b = 0; b < v.size(); ++b) {
            const auto& a = r.allocations[b];
            mb += a.market_buy;
            ms += a.market_sell;
            money += (a.market_buy - a.market_sell) * r.market_price;
            CHECK(a.market_buy + a.grid_buy == doctest::Approx(v[b].bid.quantity));
            CHECK(a.market_sell + a.grid_sell == doctest::Approx(v[b].ask.quantity));
            const double grid_only = v[b].bid.quantity * tariff.grid_buy - v[b].ask.quantity * tariff.grid_sell;
            CHECK(building_bill(a, r.market_price, tariff) <= grid_only + 1e-12);
        }
        CHECK(mb == doctest::Approx(ms));
        CHECK(mb == doctest::Approx(std::min(r.total_bid, r.total_ask)));
        CHECK(money == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(r.market_price >= tariff.market_min);
        CHECK(r.market_price <= tariff.market_max);
    }
}

TEST_CASE("bill arithmetic") {
    GridTariff p{0.20, 0.05, 0.07, 0.15, 0.0};
    CHECK(building_bill({3, 0, 2, 0}, 0.10, p) == doctest::Approx(0.70));
    CHECK(building_bill({0, 4, 0, 1}, 0.10, p) == doctest::Approx(-0.45));
    CHECK(building_bill({}, 0.10, p) == 0.0);
    p.fees_per_step = 0.01;
    CHECK(building_bill({}, 0.10, p) == doctest::Approx(0.01));
}

TEST_CASE("bid/ask from residual net load") {
    CHECK(make_bid_ask(5, 0.1).bid.quantity == 5);
    CHECK(make_bid_ask(5, 0.1).ask.quantity == 0);
    CHECK(make_bid_ask(-3, 0.1).ask.quantity == 3);
    CHECK(make_bid_ask(-3, 0.1).bid.quantity == 0);
    CHECK(make_bid_ask(0, 0.1).bid.quantity == 0);
    CHECK(make_bid_ask(0, 0.1).ask.quantity == 0);
}

TEST_CASE("bill against background matches a full round") {
    const auto r = settle_round(orders({2.5, 1.5, -3}), tariff, 0);
    CHECK(bill_against_background(2.5, 1.5, 3, tariff) ==
          doctest::Approx(building_bill(r.allocations[0], r.market_price, tariff)));
    CHECK(bill_against_background(-3, 4, 0, tariff) ==
          doctest::Approx(building_bill(r.allocations[2], r.market_price, tariff)));
    CHECK(bill_against_background(2, 0, 0, tariff) == doctest::Approx(0.5));
}

TEST_CASE("grid-only settlement") {
    const auto r = settle_grid_only(orders({2, -1}), 4);
    CHECK_FALSE(r.market_open);
    CHECK(r.cleared_quantity == 0.0);
    CHECK(r.allocations[0].grid_buy == 2);
    CHECK(r.allocations[1].grid_sell == 1);
}

TEST_CASE("settlement csv") {
    const std::vector<SettlementRound> rounds{settle_round(orders({1, -1}), tariff, 0)};
    const std::vector<std::string> ids{"a", "b"};
    std::ostringstream out;
    write_settlement_csv(out, rounds, ids, tariff);
    CHECK(out.str().rfind("step,building,market_open,price,", 0) == 0);
    CHECK(out.str().find("\n0,b,1,") != std::string::npos);
}
