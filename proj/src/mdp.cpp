#include "alex/mdp.hpp"

#include "alex/market.hpp"

#include <algorithm>
#include <cctype>

namespace alex {

namespace {

double individual_score(double e, const GridTariff& tariff, double w_sq) {
    const double cost = std::max(e, 0.0) * tariff.grid_buy - std::max(-e, 0.0) * tariff.grid_sell;
    return -cost - w_sq * e * e;
}

double net_billing_score(double e, const GridTariff& tariff) {
    return -(std::max(e, 0.0) * tariff.grid_buy - std::max(-e, 0.0) * tariff.grid_sell +
             tariff.fees_per_step);
}

}  // namespace

const char* scenario_name(Scenario s) {
    switch (s) {
        case Scenario::no_derms: return "NoDERMS";
        case Scenario::individual_derms: return "IndividualDERMS";
        case Scenario::alex: return "ALEX";
    }
    return "?";
}

Scenario parse_scenario(const std::string& name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "noderms") return Scenario::no_derms;
    if (lower == "individualderms") return Scenario::individual_derms;
    if (lower == "alex") return Scenario::alex;
    throw Error("unknown scenario '" + name + "' (expected NoDERMS, IndividualDERMS or ALEX)");
}

MarketBackground MarketBackground::empty(std::size_t step_count) {
    return {std::vector<double>(step_count, 0.0), std::vector<double>(step_count, 0.0)};
}

double net_load(const BuildingRecord& b, std::size_t t, const BatteryTransition& action) {
    return b.load[t] - b.generation[t] + action.grid_side_energy;
}

double reward_alex(const BuildingRecord& b, const MarketBackground& background, std::size_t t,
                   const BatteryTransition& action, const GridTariff& tariff) {
    return -bill_against_background(net_load(b, t, action), background.others_bid[t],
                                    background.others_ask[t], tariff);
}

double reward_individual(const BuildingRecord& b, std::size_t t, const BatteryTransition& action,
                         const GridTariff& tariff, double w_sq) {
    return individual_score(net_load(b, t, action), tariff, w_sq);
}

double reward_net_billing(const BuildingRecord& b, std::size_t t, const BatteryTransition& action,
                          const GridTariff& tariff) {
    return net_billing_score(net_load(b, t, action), tariff);
}

BuildingMdp::BuildingMdp(const BuildingRecord& building, TransitionTable table, Scenario scenario,
                         GridTariff tariff, double w_sq,
                         std::optional<MarketBackground> background)
    : scenario_(scenario),
      table_(std::move(table)),
      tariff_(tariff),
      w_sq_(w_sq),
      background_(std::move(background)) {
    const std::size_t T = building.load.size();
    if (building.generation.size() != T) throw Error("load and generation lengths differ");
    base_net_.resize(T);
    for (std::size_t t = 0; t < T; ++t) base_net_[t] = building.load[t] - building.generation[t];

    if (scenario_ == Scenario::alex) {
        if (!background_) throw Error("ALEX scenario requires a market background");
        if (background_->others_bid.size() != T || background_->others_ask.size() != T)
            throw Error("market background length does not match the building series");
    } else {
        background_.reset();
    }
    if (scenario_ == Scenario::no_derms) {
        for (std::size_t i = 0; i < table_.state_count(); ++i)
            hold_only_.push_back({i, table_.hold(i), 0.0});
    }
}

std::span<const BatteryTransition> BuildingMdp::actions(std::size_t soc_index) const {
    if (scenario_ == Scenario::no_derms) return {&hold_only_[soc_index], 1};
    return table_.from(soc_index);
}

double BuildingMdp::reward(std::size_t t, const BatteryTransition& action) const {
    const double e = base_net_[t] + action.grid_side_energy;
    switch (scenario_) {
        case Scenario::alex:
            return -bill_against_background(e, background_->others_bid[t],
                                            background_->others_ask[t], tariff_);
        case Scenario::individual_derms: return individual_score(e, tariff_, w_sq_);
        case Scenario::no_derms: return net_billing_score(e, tariff_);
    }
    return 0.0;
}

BuildingMdp build_mdp(const BuildingRecord& building, const std::optional<MarketBackground>& background,
                      Scenario scenario, const SocGrid& grid, double w_sq, const GridTariff& tariff) {
    return BuildingMdp(building, TransitionTable(building.battery, grid), scenario, tariff, w_sq,
                       background);
}

BuildingMdp build_mdp(const BuildingRecord& building, const std::optional<MarketBackground>& background,
                      Scenario scenario, const MdpConfig& config, const GridTariff& tariff) {
    return build_mdp(building, background, scenario, make_soc_grid(building.battery, config.n_quant),
                     config.w_sq, tariff);
}

}  // namespace alex
