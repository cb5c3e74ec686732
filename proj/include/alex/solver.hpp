#pragma once

#include "alex/mdp.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace alex {

/// State values for layers t = 0..T; layer T is terminal and always 0.
class ValueTable {
public:
    ValueTable() = default;
    ValueTable(std::size_t horizon, std::size_t soc_count)
        : horizon_(horizon), soc_count_(soc_count), v_((horizon + 1) * soc_count, 0.0) {}

    std::size_t horizon() const { return horizon_; }
    std::size_t soc_count() const { return soc_count_; }
    double& at(std::size_t t, std::size_t i) { return v_[t * soc_count_ + i]; }
    double at(std::size_t t, std::size_t i) const { return v_[t * soc_count_ + i]; }
    const double* layer(std::size_t t) const { return v_.data() + t * soc_count_; }

    bool operator==(const ValueTable&) const = default;

private:
    std::size_t horizon_ = 0;
    std::size_t soc_count_ = 0;
    std::vector<double> v_;
};

/// Deterministic policy: target SoC index for every live state (t, soc_index).
class QuantizedPolicy {
public:
    QuantizedPolicy() = default;
    /// `fractions[i]` is grid level i as a fraction of capacity (used by distances).
    QuantizedPolicy(std::size_t horizon, std::vector<double> fractions);

    std::size_t horizon() const { return horizon_; }
    std::size_t soc_count() const { return fractions_.size(); }
    std::size_t state_count() const { return target_.size(); }
    std::size_t target(std::size_t t, std::size_t i) const { return target_[t * soc_count() + i]; }
    void set_target(std::size_t t, std::size_t i, std::size_t j);
    double fraction(std::size_t i) const { return fractions_[i]; }

    bool operator==(const QuantizedPolicy&) const = default;

private:
    std::size_t horizon_ = 0;
    std::vector<double> fractions_;
    std::vector<std::uint32_t> target_;
};

/// Policy that holds (self-discharge only) in every state.
QuantizedPolicy hold_policy(const TransitionTable& table, std::size_t horizon);

struct SolverOptions {
    /// Actions whose value lies within this many money units of the incumbent are
    /// ties; ties prefer the smaller |grid_side_energy|, then the lower target index.
    double tie_tolerance = 1e-9;
};

struct SolveResult {
    ValueTable values;
    QuantizedPolicy policy;
    std::size_t sweeps = 0;  // value-iteration sweeps including the final δ ≤ tol sweep
};

/// Gauss-Seidel value iteration in natural state order (t ascending). Each state's value
/// is the value of its tie-broken greedy action. Throws on non-finite rewards.
SolveResult value_iteration(const BuildingMdp& mdp, double tol, double gamma,
                            const SolverOptions& options = {});

/// Exact single backward pass over t (γ = 1). Same tie-break as value_iteration.
SolveResult backward_induction(const BuildingMdp& mdp, const SolverOptions& options = {});

/// Return collected by following `policy` from (0, start_index).
struct Rollout {
    double total_return = 0.0;
    std::vector<std::size_t> soc_path;  // length T + 1
    std::vector<double> rewards;        // length T
};
Rollout rollout(const BuildingMdp& mdp, const QuantizedPolicy& policy, std::size_t start_index);

/// CSV with header t,soc_index,target_index,value; one row per live state.
void write_policy_csv(std::ostream& out, const QuantizedPolicy& policy, const ValueTable& values);

/// Reads targets back; values are ignored. `fractions` must match the building's grid.
QuantizedPolicy read_policy_csv(std::istream& in, std::size_t horizon, std::vector<double> fractions);

}  // namespace alex
