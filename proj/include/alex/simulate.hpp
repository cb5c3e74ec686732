#pragma once

#include "alex/equilibrium.hpp"
#include "alex/market.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace alex {

struct BuildingStep {
    std::size_t soc_index = 0;  // index at the start of the step
    double soc_before = 0.0;    // kWh
    double soc_after = 0.0;     // kWh
    double battery_energy = 0.0;
    double net_load = 0.0;
    double bill = 0.0;
    double cumulative_bill = 0.0;
};

/// Canonical per-step record of one scenario run.
struct SimulationTrace {
    Scenario scenario = Scenario::no_derms;
    std::vector<std::string> building_ids;
    std::vector<std::vector<BuildingStep>> steps;  // [t][building]
    std::vector<SettlementRound> rounds;           // [t]
    std::vector<double> community_net_load;        // E_B(t)

    std::size_t step_count() const { return steps.size(); }
    std::size_t building_count() const { return building_ids.size(); }

    std::vector<double> mean_soc() const;                 // per step, mean soc_after
    std::vector<double> mean_cumulative_bill() const;     // per step
};

/// Replays a joint policy. ALEX settles every step through the double auction; the
/// baselines settle with the grid only. NoDERMS ignores the policies and keeps every
/// battery idle (SoC only self-discharges).
SimulationTrace replay(const CommunityDataset& ds, Scenario scenario,
                       const std::vector<TransitionTable>& tables, const JointPolicy& joint);

struct ScenarioRun {
    SimulationTrace trace;
    EquilibriumResult equilibrium;
    bool converged = true;
};

/// Solves the scenario's policies and replays them.
ScenarioRun run_scenario(const CommunityDataset& ds, Scenario scenario, const EquilibriumConfig& config);

/// One row per (step, building) followed by one "community" row per step holding the
/// sums over buildings.
void write_trace_csv(std::ostream& out, const SimulationTrace& trace);

}  // namespace alex
