#include "alex/solver.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace alex {

QuantizedPolicy::QuantizedPolicy(std::size_t horizon, std::vector<double> fractions)
    : horizon_(horizon), fractions_(std::move(fractions)), target_(horizon * fractions_.size(), 0) {}

void QuantizedPolicy::set_target(std::size_t t, std::size_t i, std::size_t j) {
    if (j >= soc_count()) throw Error("policy target index out of range");
    target_[t * soc_count() + i] = static_cast<std::uint32_t>(j);
}

namespace {

std::vector<double> grid_fractions(const SocGrid& grid) {
    std::vector<double> f(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) f[i] = grid.fraction(i);
    return f;
}

struct Choice {
    double value = -std::numeric_limits<double>::infinity();
    const BatteryTransition* action = nullptr;
};

// Greedy action at (t, i) given next-layer values. Shared by both solvers so that equal
// inputs give bit-identical choices.
Choice select_action(const BuildingMdp& mdp, std::size_t t, std::size_t i, const double* next,
                     double gamma, double tie_tolerance) {
    Choice best;
    for (const auto& a : mdp.actions(i)) {
        const double r = mdp.reward(t, a);
        if (!std::isfinite(r))
            throw Error(fmt::format("non-finite reward at t={} soc_index={} target={}", t, i,
                                    a.to_index));
        const double q = r + gamma * next[a.to_index];
        if (best.action == nullptr || q > best.value + tie_tolerance) {
            best = {q, &a};
            continue;
        }
        if (q < best.value - tie_tolerance) continue;
        const double mag = std::abs(a.grid_side_energy);
        const double best_mag = std::abs(best.action->grid_side_energy);
        if (mag < best_mag || (mag == best_mag && a.to_index < best.action->to_index))
            best = {q, &a};
    }
    return best;
}

}  // namespace

QuantizedPolicy hold_policy(const TransitionTable& table, std::size_t horizon) {
    QuantizedPolicy p(horizon, grid_fractions(table.grid()));
    for (std::size_t t = 0; t < horizon; ++t)
        for (std::size_t i = 0; i < table.state_count(); ++i) p.set_target(t, i, table.hold(i));
    return p;
}

SolveResult value_iteration(const BuildingMdp& mdp, double tol, double gamma,
                            const SolverOptions& options) {
    if (!(tol > 0.0)) throw Error("value_iteration: tol must be positive");
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw Error("value_iteration: gamma must be in [0, 1]");
    const std::size_t T = mdp.horizon();
    const std::size_t n = mdp.soc_count();

    SolveResult res{ValueTable(T, n), QuantizedPolicy(T, grid_fractions(mdp.grid())), 0};
    double delta = std::numeric_limits<double>::infinity();
    while (delta > tol) {
        delta = 0.0;
        for (std::size_t t = 0; t < T; ++t) {
            for (std::size_t i = 0; i < n; ++i) {
                const double old = res.values.at(t, i);
                const double v =
                    select_action(mdp, t, i, res.values.layer(t + 1), gamma, options.tie_tolerance)
                        .value;
                res.values.at(t, i) = v;
                delta = std::max(delta, std::abs(v - old));
            }
        }
        ++res.sweeps;
    }
    for (std::size_t t = 0; t < T; ++t)
        for (std::size_t i = 0; i < n; ++i)
            res.policy.set_target(
                t, i,
                select_action(mdp, t, i, res.values.layer(t + 1), gamma, options.tie_tolerance)
                    .action->to_index);
    return res;
}

SolveResult backward_induction(const BuildingMdp& mdp, const SolverOptions& options) {
    const std::size_t T = mdp.horizon();
    const std::size_t n = mdp.soc_count();
    SolveResult res{ValueTable(T, n), QuantizedPolicy(T, grid_fractions(mdp.grid())), 1};
    for (std::size_t t = T; t-- > 0;) {
        const double* next = res.values.layer(t + 1);
        for (std::size_t i = 0; i < n; ++i) {
            const Choice c = select_action(mdp, t, i, next, 1.0, options.tie_tolerance);
            res.values.at(t, i) = c.value;
            res.policy.set_target(t, i, c.action->to_index);
        }
    }
    return res;
}

Rollout rollout(const BuildingMdp& mdp, const QuantizedPolicy& policy, std::size_t start_index) {
    Rollout r;
    std::size_t i = start_index;
    r.soc_path.push_back(i);
    for (std::size_t t = 0; t < mdp.horizon(); ++t) {
        const std::size_t j = policy.target(t, i);
        const BatteryTransition* a = nullptr;
        for (const auto& cand : mdp.actions(i))
            if (cand.to_index == j) a = &cand;
        if (a == nullptr)
            throw Error(fmt::format("policy prescribes infeasible transition {}->{} at t={}", i, j, t));
        const double reward = mdp.reward(t, *a);
        r.rewards.push_back(reward);
        r.total_return += reward;
        i = j;
        r.soc_path.push_back(i);
    }
    return r;
}

void write_policy_csv(std::ostream& out, const QuantizedPolicy& policy, const ValueTable& values) {
    out << "t,soc_index,target_index,value\n";
    for (std::size_t t = 0; t < policy.horizon(); ++t)
        for (std::size_t i = 0; i < policy.soc_count(); ++i)
            fmt::print(out, "{},{},{},{}\n", t, i, policy.target(t, i), values.at(t, i));
}

QuantizedPolicy read_policy_csv(std::istream& in, std::size_t horizon, std::vector<double> fractions) {
    QuantizedPolicy p(horizon, std::move(fractions));
    std::vector<bool> seen(p.state_count(), false);
    std::string line;
    if (!std::getline(in, line) || line.rfind("t,soc_index,target_index", 0) != 0)
        throw Error("policy CSV: missing header");
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::size_t t = 0, i = 0, j = 0;
        char c1 = 0, c2 = 0;
        if (!(ss >> t >> c1 >> i >> c2 >> j) || c1 != ',' || c2 != ',')
            throw Error(fmt::format("policy CSV: malformed row {}", row));
        if (t >= horizon || i >= p.soc_count())
            throw Error(fmt::format("policy CSV: state ({}, {}) out of range at row {}", t, i, row));
        p.set_target(t, i, j);
        seen[t * p.soc_count() + i] = true;
    }
    for (bool s : seen)
        if (!s) throw Error("policy CSV: not every state has a row");
    return p;
}

}  // namespace alex
