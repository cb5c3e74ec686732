#include "alex/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace alex {

std::vector<TransitionTable> make_tables(const CommunityDataset& ds, std::size_t n_quant) {
    std::vector<TransitionTable> tables;
    tables.reserve(ds.buildings.size());
    for (const auto& b : ds.buildings)
        tables.emplace_back(b.battery, make_soc_grid(b.battery, n_quant));
    return tables;
}

std::vector<double> policy_net_load(const BuildingRecord& b, const TransitionTable& table,
                                    const QuantizedPolicy& policy) {
    const std::size_t T = b.load.size();
    std::vector<double> e(T);
    std::size_t i = table.initial_index();
    for (std::size_t t = 0; t < T; ++t) {
        const std::size_t j = policy.target(t, i);
        const BatteryTransition* a = table.find(i, j);
        if (a == nullptr)
            throw Error(fmt::format("building {}: infeasible policy step {}->{} at t={}", b.id, i, j, t));
        e[t] = net_load(b, t, *a);
        i = j;
    }
    return e;
}

MarketBackground compute_background(const CommunityDataset& ds,
                                    const std::vector<TransitionTable>& tables,
                                    const JointPolicy& joint, std::size_t exclude) {
    auto bg = MarketBackground::empty(ds.step_count());
    for (std::size_t b = 0; b < ds.buildings.size(); ++b) {
        if (b == exclude) continue;
        const auto e = policy_net_load(ds.buildings[b], tables[b], joint.policies[b]);
        for (std::size_t t = 0; t < e.size(); ++t) {
            if (e[t] > 0.0)
                bg.others_bid[t] += e[t];
            else
                bg.others_ask[t] += -e[t];
        }
    }
    return bg;
}

double policy_distance(const QuantizedPolicy& next, const QuantizedPolicy& prev) {
    if (next.horizon() != prev.horizon() || next.soc_count() != prev.soc_count())
        throw Error("policy_distance: policies cover different state spaces");
    if (next.state_count() == 0) return 0.0;
    double sum = 0.0;
    for (std::size_t t = 0; t < next.horizon(); ++t)
        for (std::size_t i = 0; i < next.soc_count(); ++i)
            sum += std::abs(next.fraction(next.target(t, i)) - prev.fraction(prev.target(t, i)));
    return sum / static_cast<double>(next.state_count());
}

SolveResult solve_building(const BuildingMdp& mdp, const EquilibriumConfig& config) {
    if (config.engine == SolverEngine::value_iteration)
        return value_iteration(mdp, config.vi_tolerance, config.gamma, config.solver);
    return backward_induction(mdp, config.solver);
}

namespace {

QuantizedPolicy random_policy(const TransitionTable& table, std::size_t horizon, std::mt19937_64& rng) {
    QuantizedPolicy p = hold_policy(table, horizon);
    for (std::size_t t = 0; t < horizon; ++t) {
        for (std::size_t i = 0; i < table.state_count(); ++i) {
            const auto acts = table.from(i);
            std::uniform_int_distribution<std::size_t> pick(0, acts.size() - 1);
            p.set_target(t, i, acts[pick(rng)].to_index);
        }
    }
    return p;
}

}  // namespace

EquilibriumResult solve_equilibrium(const CommunityDataset& ds, Scenario scenario,
                                    const EquilibriumConfig& config) {
    require_valid(ds);
    const std::size_t T = ds.step_count();
    const std::size_t n_b = ds.buildings.size();
    const auto tables = make_tables(ds, config.mdp.n_quant);
    std::mt19937_64 rng(config.seed);

    EquilibriumResult res;
    res.values.resize(n_b);
    for (std::size_t b = 0; b < n_b; ++b) {
        if (config.init == PolicyInit::random && scenario != Scenario::no_derms)
            res.joint.policies.push_back(random_policy(tables[b], T, rng));
        else
            res.joint.policies.push_back(hold_policy(tables[b], T));
    }

    std::vector<std::size_t> order(n_b);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t round = 0; round < config.max_outer_rounds; ++round) {
        std::shuffle(order.begin(), order.end(), rng);
        RoundRecord rec;
        rec.order = order;
        for (std::size_t b : order) {
            const auto& building = ds.buildings[b];
            std::optional<MarketBackground> bg;
            if (scenario == Scenario::alex) bg = compute_background(ds, tables, res.joint, b);
            const BuildingMdp mdp(building, tables[b], scenario, ds.tariff, config.mdp.w_sq,
                                  std::move(bg));
            SolveResult sol = solve_building(mdp, config);

            BestResponseRecord up;
            up.building = b;
            up.return_before = rollout(mdp, res.joint.policies[b], tables[b].initial_index()).total_return;
            up.return_after = rollout(mdp, sol.policy, tables[b].initial_index()).total_return;
            up.distance = policy_distance(sol.policy, res.joint.policies[b]);
            rec.max_distance = std::max(rec.max_distance, up.distance);
            rec.updates.push_back(up);

            res.joint.policies[b] = std::move(sol.policy);
            res.values[b] = std::move(sol.values);
        }
        res.trace.rounds.push_back(std::move(rec));
        if (res.trace.rounds.back().max_distance < config.distance_threshold) {
            res.trace.converged = true;
            break;
        }
    }
    return res;
}

void write_convergence_csv(std::ostream& out, const ConvergenceTrace& trace,
                           const CommunityDataset& ds) {
    out << "round,position,building,distance,return_before,return_after\n";
    for (std::size_t r = 0; r < trace.rounds.size(); ++r) {
        const auto& rec = trace.rounds[r];
        for (std::size_t k = 0; k < rec.updates.size(); ++k) {
            const auto& u = rec.updates[k];
            fmt::print(out, "{},{},{},{},{},{}\n", r + 1, k, ds.buildings[u.building].id, u.distance,
                       u.return_before, u.return_after);
        }
    }
}

}  // namespace alex
