#pragma once

#include "alex/domain.hpp"
#include "alex/mdp.hpp"
#include "alex/solver.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace alex {

enum class SolverEngine { backward_induction, value_iteration };
enum class PolicyInit { hold, random };

struct EquilibriumConfig {
    MdpConfig mdp;
    SolverOptions solver;
    SolverEngine engine = SolverEngine::backward_induction;
    double vi_tolerance = 1e-9;
    double gamma = 1.0;
    std::uint64_t seed = 0;
    std::size_t max_outer_rounds = 100;
    double distance_threshold = 0.01;
    PolicyInit init = PolicyInit::hold;
};

/// Per-building transition tables on the configured SoC grid.
std::vector<TransitionTable> make_tables(const CommunityDataset& ds, std::size_t n_quant);

struct JointPolicy {
    std::vector<QuantizedPolicy> policies;  // parallel to ds.buildings
};

/// Net load of building b when it follows `policy` from its initial SoC.
std::vector<double> policy_net_load(const BuildingRecord& b, const TransitionTable& table,
                                    const QuantizedPolicy& policy);

/// Aggregated bid/ask quantities of every building except `exclude`, each rolled out
/// under its own policy.
MarketBackground compute_background(const CommunityDataset& ds,
                                    const std::vector<TransitionTable>& tables,
                                    const JointPolicy& joint, std::size_t exclude);

/// Mean over live states of |target fraction (new) - target fraction (old)|.
double policy_distance(const QuantizedPolicy& next, const QuantizedPolicy& prev);

struct BestResponseRecord {
    std::size_t building = 0;
    double distance = 0.0;
    double return_before = 0.0;  // previous policy against the current background
    double return_after = 0.0;   // new policy against the same background
};

struct RoundRecord {
    std::vector<std::size_t> order;
    std::vector<BestResponseRecord> updates;  // in visit order
    double max_distance = 0.0;
};

struct ConvergenceTrace {
    std::vector<RoundRecord> rounds;
    bool converged = false;
    std::size_t round_count() const { return rounds.size(); }
    double final_distance() const { return rounds.empty() ? 0.0 : rounds.back().max_distance; }
};

struct EquilibriumResult {
    JointPolicy joint;
    std::vector<ValueTable> values;  // from each building's most recent best response
    ConvergenceTrace trace;
};

/// Solves one building's MDP with the configured engine.
SolveResult solve_building(const BuildingMdp& mdp, const EquilibriumConfig& config);

/// Iterative best response: each outer round shuffles the buildings with the seeded
/// generator and replaces one policy at a time by its best response to the others.
/// Stops once every building's policy distance is below the threshold, or after
/// max_outer_rounds (trace.converged = false).
EquilibriumResult solve_equilibrium(const CommunityDataset& ds, Scenario scenario,
                                    const EquilibriumConfig& config);

/// CSV with header round,position,building,distance,return_before,return_after.
void write_convergence_csv(std::ostream& out, const ConvergenceTrace& trace,
                           const CommunityDataset& ds);

}  // namespace alex
