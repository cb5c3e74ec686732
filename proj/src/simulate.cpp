#include "alex/simulate.hpp"

#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace alex {

std::vector<double> SimulationTrace::mean_soc() const {
    std::vector<double> out(step_count(), 0.0);
    for (std::size_t t = 0; t < step_count(); ++t) {
        for (const auto& s : steps[t]) out[t] += s.soc_after;
        out[t] /= static_cast<double>(building_count());
    }
    return out;
}

std::vector<double> SimulationTrace::mean_cumulative_bill() const {
    std::vector<double> out(step_count(), 0.0);
    for (std::size_t t = 0; t < step_count(); ++t) {
        for (const auto& s : steps[t]) out[t] += s.cumulative_bill;
        out[t] /= static_cast<double>(building_count());
    }
    return out;
}

SimulationTrace replay(const CommunityDataset& ds, Scenario scenario,
                       const std::vector<TransitionTable>& tables, const JointPolicy& joint) {
    const std::size_t T = ds.step_count();
    const std::size_t n_b = ds.buildings.size();
    if (tables.size() != n_b || joint.policies.size() != n_b)
        throw Error("replay: tables/policies do not match the community");

    SimulationTrace tr;
    tr.scenario = scenario;
    for (const auto& b : ds.buildings) tr.building_ids.push_back(b.id);
    tr.steps.assign(T, std::vector<BuildingStep>(n_b));
    tr.rounds.reserve(T);
    tr.community_net_load.assign(T, 0.0);

    std::vector<std::size_t> index(n_b);
    std::vector<double> soc(n_b);
    for (std::size_t b = 0; b < n_b; ++b) {
        index[b] = tables[b].initial_index();
        soc[b] = scenario == Scenario::no_derms ? ds.buildings[b].battery.initial_soc
                                                 : tables[b].grid().level(index[b]);
    }
    std::vector<double> cumulative(n_b, 0.0);
    std::vector<BidAsk> orders(n_b);

    for (std::size_t t = 0; t < T; ++t) {
        auto& row = tr.steps[t];
        double demand = 0.0, supply = 0.0;
        for (std::size_t b = 0; b < n_b; ++b) {
            const auto& building = ds.buildings[b];
            auto& s = row[b];
            s.soc_index = index[b];
            s.soc_before = soc[b];
            if (scenario == Scenario::no_derms) {
                s.battery_energy = 0.0;
                s.soc_after = step_soc(building.battery, soc[b], 0.0);
            } else {
                const std::size_t j = joint.policies[b].target(t, index[b]);
                const BatteryTransition* a = tables[b].find(index[b], j);
                if (a == nullptr)
                    throw Error(fmt::format("building {}: infeasible policy step {}->{} at t={}",
                                            building.id, index[b], j, t));
                s.battery_energy = a->grid_side_energy;
                s.soc_after = tables[b].grid().level(j);
                index[b] = j;
            }
            soc[b] = s.soc_after;
            s.net_load = building.load[t] - building.generation[t] + s.battery_energy;
            tr.community_net_load[t] += s.net_load;
            if (s.net_load > 0.0)
                demand += s.net_load;
            else
                supply -= s.net_load;
        }

        const double price = price_curve(demand, supply, ds.tariff);
        for (std::size_t b = 0; b < n_b; ++b) orders[b] = make_bid_ask(row[b].net_load, price, b);
        tr.rounds.push_back(scenario == Scenario::alex ? settle_round(orders, ds.tariff, t)
                                                       : settle_grid_only(orders, t));
        const auto& round = tr.rounds.back();
        for (std::size_t b = 0; b < n_b; ++b) {
            row[b].bill = building_bill(round.allocations[b], round.market_price, ds.tariff);
            cumulative[b] += row[b].bill;
            row[b].cumulative_bill = cumulative[b];
        }
    }
    return tr;
}

ScenarioRun run_scenario(const CommunityDataset& ds, Scenario scenario, const EquilibriumConfig& config) {
    ScenarioRun run;
    run.equilibrium = solve_equilibrium(ds, scenario, config);
    run.converged = run.equilibrium.trace.converged;
    run.trace = replay(ds, scenario, make_tables(ds, config.mdp.n_quant), run.equilibrium.joint);
    return run;
}

void write_trace_csv(std::ostream& out, const SimulationTrace& tr) {
    out << "step,building,soc_before,soc_after,battery_energy,net_load,market_open,price,"
           "market_buy,market_sell,grid_buy,grid_sell,bill,cumulative_bill\n";
    for (std::size_t t = 0; t < tr.step_count(); ++t) {
        const auto& round = tr.rounds[t];
        BuildingStep sum;
        Allocation flows;
        for (std::size_t b = 0; b < tr.building_count(); ++b) {
            const auto& s = tr.steps[t][b];
            const auto& a = round.allocations[b];
            fmt::print(out, "{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", t, tr.building_ids[b],
                       s.soc_before, s.soc_after, s.battery_energy, s.net_load,
                       round.market_open ? 1 : 0, round.market_price, a.market_buy, a.market_sell,
                       a.grid_buy, a.grid_sell, s.bill, s.cumulative_bill);
            sum.soc_before += s.soc_before;
            sum.soc_after += s.soc_after;
            sum.battery_energy += s.battery_energy;
            sum.bill += s.bill;
            sum.cumulative_bill += s.cumulative_bill;
            flows.market_buy += a.market_buy;
            flows.market_sell += a.market_sell;
            flows.grid_buy += a.grid_buy;
            flows.grid_sell += a.grid_sell;
        }
        fmt::print(out, "{},community,{},{},{},{},{},{},{},{},{},{},{},{}\n", t, sum.soc_before,
                   sum.soc_after, sum.battery_energy, tr.community_net_load[t],
                   round.market_open ? 1 : 0, round.market_price, flows.market_buy,
                   flows.market_sell, flows.grid_buy, flows.grid_sell, sum.bill, sum.cumulative_bill);
    }
}

}  // namespace alex
