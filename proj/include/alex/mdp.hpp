#pragma once

#include "alex/battery.hpp"
#include "alex/domain.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace alex {

enum class Scenario { no_derms, individual_derms, alex };

const char* scenario_name(Scenario s);
/// Accepts "NoDERMS", "IndividualDERMS", "ALEX" (case-insensitive).
Scenario parse_scenario(const std::string& name);

/// Aggregate order flow of every building except the one being optimized.
struct MarketBackground {
    std::vector<double> others_bid;  // kWh per step
    std::vector<double> others_ask;  // kWh per step

    static MarketBackground empty(std::size_t step_count);
    std::size_t step_count() const { return others_bid.size(); }
};

/// E_b(t) = l(t) - g(t) + grid-side battery energy.
double net_load(const BuildingRecord& b, std::size_t t, const BatteryTransition& action);

/// Negative bill of the building when its residual net load is settled against the
/// background at step t.
double reward_alex(const BuildingRecord& b, const MarketBackground& background, std::size_t t,
                   const BatteryTransition& action, const GridTariff& tariff);

/// Self-sufficiency surrogate: negative net-billing cost minus w_sq * E_b^2.
double reward_individual(const BuildingRecord& b, std::size_t t, const BatteryTransition& action,
                         const GridTariff& tariff, double w_sq);

/// Negative net-billing bill (grid-only settlement, fees included).
double reward_net_billing(const BuildingRecord& b, std::size_t t, const BatteryTransition& action,
                          const GridTariff& tariff);

struct MdpConfig {
    std::size_t n_quant = 40;
    double w_sq = 0.01;  // IndividualDERMS quadratic net-load weight, money/kWh^2
};

/// One building's finite-horizon deterministic MDP. States are (t, soc_index) for
/// t < T plus a terminal layer at t = T valued 0. Action (t, i, a) leads to
/// (t + 1, actions(i)[a].to_index) with probability 1.
class BuildingMdp {
public:
    BuildingMdp(const BuildingRecord& building, TransitionTable table, Scenario scenario,
                GridTariff tariff, double w_sq, std::optional<MarketBackground> background);

    Scenario scenario() const { return scenario_; }
    std::size_t horizon() const { return base_net_.size(); }
    std::size_t soc_count() const { return table_.state_count(); }
    std::size_t live_state_count() const { return horizon() * soc_count(); }
    const TransitionTable& table() const { return table_; }
    const SocGrid& grid() const { return table_.grid(); }

    std::span<const BatteryTransition> actions(std::size_t soc_index) const;

    double base_net_load(std::size_t t) const { return base_net_[t]; }
    double reward(std::size_t t, const BatteryTransition& action) const;

private:
    Scenario scenario_;
    TransitionTable table_;
    GridTariff tariff_;
    double w_sq_;
    std::vector<double> base_net_;
    std::optional<MarketBackground> background_;
    std::vector<BatteryTransition> hold_only_;
};

/// Builds the MDP for one building. ALEX requires a background of matching length; the
/// other scenarios ignore it. NoDERMS offers only the hold action in every state.
BuildingMdp build_mdp(const BuildingRecord& building, const std::optional<MarketBackground>& background,
                      Scenario scenario, const MdpConfig& config, const GridTariff& tariff);

/// MDP on an explicit grid, for callers that need a non-standard quantization.
BuildingMdp build_mdp(const BuildingRecord& building, const std::optional<MarketBackground>& background,
                      Scenario scenario, const SocGrid& grid, double w_sq, const GridTariff& tariff);

}  // namespace alex
