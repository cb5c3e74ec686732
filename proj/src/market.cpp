#include "alex/market.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace alex {

double price_curve(double total_bid, double total_ask, const GridTariff& tariff) {
    if (total_bid < 0.0 || total_ask < 0.0)
        throw Error("price_curve: negative order quantity");
    const double total = total_bid + total_ask;
    if (total == 0.0) return 0.5 * (tariff.market_min + tariff.market_max);
    const double raw =
        tariff.grid_sell + (tariff.grid_buy - tariff.grid_sell) * (total_bid / total);
    return std::clamp(raw, tariff.market_min, tariff.market_max);
}

namespace {

// Pro-rata rationing of `cleared` over the quantities in `qty`. The largest order (first
// on ties) absorbs the rounding remainder so the shares sum to `cleared`.
void ration(const std::vector<double>& qty, double total, double cleared,
            std::vector<double>& share) {
    share.assign(qty.size(), 0.0);
    if (cleared <= 0.0 || total <= 0.0) return;
    if (cleared >= total) {
        share = qty;
        return;
    }
    const double ratio = cleared / total;
    std::size_t largest = 0;
    for (std::size_t i = 0; i < qty.size(); ++i) {
        share[i] = qty[i] * ratio;
        if (qty[i] > qty[largest]) largest = i;
    }
    double others = 0.0;
    for (std::size_t i = 0; i < qty.size(); ++i)
        if (i != largest) others += share[i];
    share[largest] = std::clamp(cleared - others, 0.0, qty[largest]);
}

}  // namespace

SettlementRound settle_round(std::span<const BidAsk> orders, const GridTariff& tariff,
                             std::size_t step) {
    SettlementRound round;
    round.step = step;
    round.market_open = true;

    std::vector<double> bids(orders.size()), asks(orders.size());
    for (std::size_t i = 0; i < orders.size(); ++i) {
        const auto& o = orders[i];
        if (o.bid.quantity < 0.0 || o.ask.quantity < 0.0)
            throw Error("settle_round: negative order quantity");
        if (o.bid.quantity > 0.0 && o.ask.quantity > 0.0)
            throw Error("settle_round: building both bids and asks in one round");
        bids[i] = o.bid.quantity;
        asks[i] = o.ask.quantity;
        round.total_bid += bids[i];
        round.total_ask += asks[i];
    }
    round.market_price = price_curve(round.total_bid, round.total_ask, tariff);
    round.cleared_quantity = std::min(round.total_bid, round.total_ask);

    std::vector<double> buy, sell;
    ration(bids, round.total_bid, round.cleared_quantity, buy);
    ration(asks, round.total_ask, round.cleared_quantity, sell);

    round.allocations.resize(orders.size());
    for (std::size_t i = 0; i < orders.size(); ++i) {
        auto& a = round.allocations[i];
        a.market_buy = buy[i];
        a.market_sell = sell[i];
        a.grid_buy = bids[i] - buy[i];
        a.grid_sell = asks[i] - sell[i];
    }
    return round;
}

SettlementRound settle_grid_only(std::span<const BidAsk> orders, std::size_t step) {
    SettlementRound round;
    round.step = step;
    round.market_open = false;
    round.allocations.resize(orders.size());
    for (std::size_t i = 0; i < orders.size(); ++i) {
        round.total_bid += orders[i].bid.quantity;
        round.total_ask += orders[i].ask.quantity;
        round.allocations[i].grid_buy = orders[i].bid.quantity;
        round.allocations[i].grid_sell = orders[i].ask.quantity;
    }
    return round;
}

double building_bill(const Allocation& a, double market_price, const GridTariff& tariff) {
    return (a.market_buy - a.market_sell) * market_price + a.grid_buy * tariff.grid_buy -
           a.grid_sell * tariff.grid_sell + tariff.fees_per_step;
}

BidAsk make_bid_ask(double net_load, double price, std::size_t building) {
    BidAsk o;
    o.building = building;
    o.bid = {price, std::max(net_load, 0.0)};
    o.ask = {price, std::max(-net_load, 0.0)};
    return o;
}

double bill_against_background(double net_load, double others_bid, double others_ask,
                               const GridTariff& tariff) {
    const double bid = std::max(net_load, 0.0);
    const double ask = std::max(-net_load, 0.0);
    const double demand = others_bid + bid;
    const double supply = others_ask + ask;
    const double price = price_curve(demand, supply, tariff);
    Allocation a;
    if (bid > 0.0) {
        a.market_buy = supply >= demand ? bid : bid * (supply / demand);
        a.grid_buy = bid - a.market_buy;
    } else if (ask > 0.0) {
        a.market_sell = demand >= supply ? ask : ask * (demand / supply);
        a.grid_sell = ask - a.market_sell;
    }
    return building_bill(a, price, tariff);
}

void write_settlement_csv(std::ostream& out, std::span<const SettlementRound> rounds,
                          std::span<const std::string> building_ids, const GridTariff& tariff) {
    out << "step,building,market_open,price,market_buy,market_sell,grid_buy,grid_sell,bill\n";
    for (const auto& r : rounds) {
        for (std::size_t b = 0; b < r.allocations.size(); ++b) {
            const auto& a = r.allocations[b];
            fmt::print(out, "{},{},{},{},{},{},{},{},{}\n", r.step, building_ids[b],
                       r.market_open ? 1 : 0, r.market_price, a.market_buy, a.market_sell,
                       a.grid_buy, a.grid_sell, building_bill(a, r.market_price, tariff));
        }
    }
}

}  // namespace alex
