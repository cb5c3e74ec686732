#pragma once

#include "alex/domain.hpp"

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace alex {

struct Order {
    double price = 0.0;     // money/kWh
    double quantity = 0.0;  // kWh, >= 0
};

/// One building's orders for one settlement step. At most one side is non-zero.
struct BidAsk {
    std::size_t building = 0;  // index into the community
    Order bid;
    Order ask;
};

struct Allocation {
    double market_buy = 0.0;
    double market_sell = 0.0;
    double grid_buy = 0.0;
    double grid_sell = 0.0;

    /// Net energy taken by the building (equals its net load).
    double net() const { return market_buy + grid_buy - market_sell - grid_sell; }
};

struct SettlementRound {
    std::size_t step = 0;
    bool market_open = true;  // false for grid-only (net billing) settlement
    double market_price = 0.0;
    double total_bid = 0.0;
    double total_ask = 0.0;
    double cleared_quantity = 0.0;
    std::vector<Allocation> allocations;  // parallel to the orders passed in
};

/// Demand-share price heuristic: the grid spread scaled by D / (D + S), clamped to the
/// market band. Midpoint of the band for an empty round.
double price_curve(double total_bid, double total_ask, const GridTariff& tariff);

/// Blind double auction at a single uniform price. The short side is matched in full,
/// the long side pro-rata by quantity, and residuals go to the grid.
SettlementRound settle_round(std::span<const BidAsk> orders, const GridTariff& tariff,
                             std::size_t step);

/// Net billing only: every order settles with the grid.
SettlementRound settle_grid_only(std::span<const BidAsk> orders, std::size_t step);

double building_bill(const Allocation& alloc, double market_price, const GridTariff& tariff);

/// Residual net-load rule: positive net load becomes a bid, negative an ask.
BidAsk make_bid_ask(double net_load, double price, std::size_t building = 0);

/// Bill of one building that trades `net_load` against aggregate order flow from the
/// rest of the community. Same arithmetic as settle_round restricted to one participant.
double bill_against_background(double net_load, double others_bid, double others_ask,
                               const GridTariff& tariff);

/// Writes one CSV row per (step, building): step, building, market_open, price,
/// market_buy, market_sell, grid_buy, grid_sell, bill.
void write_settlement_csv(std::ostream& out, std::span<const SettlementRound> rounds,
                          std::span<const std::string> building_ids, const GridTariff& tariff);

}  // namespace alex
