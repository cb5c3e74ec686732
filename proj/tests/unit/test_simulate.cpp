#include "doctest.h"

#include "alex/ingest.hpp"
#include "alex/simulate.hpp"
#include "oracles.hpp"

#include <random>
#include <sstream>

using namespace alex;

namespace {
EquilibriumConfig config(std::size_t n_quant, double w_sq = 0.01) {
    EquilibriumConfig c;
    c.mdp.n_quant = n_quant;
    c.mdp.w_sq = w_sq;
    return c;
}
}  // namespace

TEST_CASE("NoDERMS replay keeps batteries idle") {
    std::mt19937_64 rng(1);
    auto ds = oracle::random_community(rng, 3, 6);
    ds.buildings[0].battery.initial_soc = 1.0;
    ds.buildings[0].battery.self_discharge = 0.1;
    const auto run = run_scenario(ds, Scenario::no_derms, config(3));
    for (std::size_t t = 0; t < 6; ++t) {
        double sum = 0;
        for (std::size_t b = 0; b < 3; ++b) {
            const auto& s = run.trace.steps[t][b];
            CHECK(s.net_load == ds.buildings[b].load[t] - ds.buildings[b].generation[t]);
            CHECK(s.battery_energy == 0.0);
            sum += s.net_load;
        }
        CHECK(run.trace.steps[t][0].soc_after == doctest::Approx(std::pow(0.9, double(t + 1))));
        CHECK_FALSE(run.trace.rounds[t].market_open);
        CHECK(run.trace.community_net_load[t] == doctest::Approx(sum));
    }
    CHECK(oracle::check_trace(ds, run.trace).empty());
}

TEST_CASE("IndividualDERMS on the two-step instance") {
    CommunityDataset ds;
    ds.calendar = Calendar::uniform(2);
    ds.tariff = {0.20, 0.05, 0.07, 0.15, 0.0};
    ds.buildings.push_back({"b1", {0, 1}, {1, 0}, {1.0, 1.0, 1.0, 1.0, 1.0, 0.0, 0.0}});
    const auto run = run_scenario(ds, Scenario::individual_derms, config(2, 0.0));
    CHECK(run.trace.steps[0][0].soc_after == 1.0);
    CHECK(run.trace.steps[1][0].soc_after == 0.0);
    CHECK(run.trace.steps[1][0].cumulative_bill == doctest::Approx(0.0));
    for (const auto& r : run.trace.rounds) CHECK(r.cleared_quantity == 0.0);
}

TEST_CASE("ALEX on the mirror pair trades through the market") {
    ProfileSpec spec;
    spec.shape = ProfileShape::mirror_pair;
    spec.battery = {1.0, 1.0, 1.0, 0.9, 0.9, 0.0, 0.0};
    const auto ds = generate_synthetic(0, 2, 2, spec);
    const auto run = run_scenario(ds, Scenario::alex, config(2));
    CHECK(run.converged);
    for (std::size_t t = 0; t < 2; ++t) {
        const auto& r = run.trace.rounds[t];
        CHECK(r.market_open);
        CHECK(r.cleared_quantity == 1.0);
        for (const auto& a : r.allocations) {
            CHECK(a.grid_buy == 0.0);
            CHECK(a.grid_sell == 0.0);
        }
    }
    CHECK(run.trace.rounds[0].allocations[0].market_sell == run.trace.rounds[0].allocations[1].market_buy);
    CHECK(oracle::check_trace(ds, run.trace).empty());
}

TEST_CASE("scenario traces satisfy the accounting invariants") {
    std::mt19937_64 rng(33);
    for (int k = 0; k < 6; ++k) {
        const auto ds = oracle::random_community(rng, 3, 8);
        for (auto sc : {Scenario::no_derms, Scenario::individual_derms, Scenario::alex}) {
            const auto run = run_scenario(ds, sc, config(4));
            const auto bad = oracle::check_trace(ds, run.trace);
            CHECK_MESSAGE(bad.empty(), (bad.empty() ? "" : bad.front()));
            if (sc != Scenario::alex)
                for (const auto& r : run.trace.rounds) CHECK(r.cleared_quantity == 0.0);
        }
    }
}

TEST_CASE("replaying the solved policies reproduces the trace") {
    std::mt19937_64 rng(12);
    const auto ds = oracle::random_community(rng, 3, 6);
    const auto run = run_scenario(ds, Scenario::alex, config(4));
    const auto again = replay(ds, Scenario::alex, make_tables(ds, 4), run.equilibrium.joint);
    std::ostringstream a, b;
    write_trace_csv(a, run.trace);
    write_trace_csv(b, again);
    CHECK(a.str() == b.str());
    CHECK(a.str().rfind("step,building,soc_before,soc_after,battery_energy,net_load,market_open,price,", 0) == 0);
    CHECK(a.str().find(",community,") != std::string::npos);
}

TEST_CASE("trace helper series") {
    std::mt19937_64 rng(13);
    const auto ds = oracle::random_community(rng, 2, 4);
    const auto run = run_scenario(ds, Scenario::individual_derms, config(3));
    const auto soc = run.trace.mean_soc();
    const auto bill = run.trace.mean_cumulative_bill();
    REQUIRE(soc.size() == 4);
    for (std::size_t t = 0; t < 4; ++t) {
        CHECK(soc[t] == doctest::Approx((run.trace.steps[t][0].soc_after + run.trace.steps[t][1].soc_after) / 2));
        CHECK(bill[t] == doctest::Approx(
                             (run.trace.steps[t][0].cumulative_bill + run.trace.steps[t][1].cumulative_bill) / 2));
    }
}
