#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <set>

#include "microgrid/env.hpp"
#include "microgrid/errors.hpp"

using namespace microgrid;

namespace {

MicrogridParams table_params() { return MicrogridParams{}; }

Spaces table_spaces(const MicrogridParams& p = table_params()) {
    return build_spaces(p, {0, 10, 20, 30}, {40, 50, 60, 70, 80, 90, 100, 110},
                        {70, 130, 140});
}

State make_state(double prev_dg, double demand, double pv, double price, double soc) {
    State s;
    s.prev_dg = prev_dg;
    s.exog = {demand, pv, price};
    s.soc = soc;
    return s;
}

// Independent transliteration of the operating constraints, kept separate
// from action_feasible on purpose.
bool feasible_oracle(const State& s, const Action& a, const MicrogridParams& p) {
    const double tol = 1e-9;
    const bool dg_bounds = a.dg >= p.p_dg_min - tol && a.dg <= p.p_dg_max + tol;
    const bool ramp = std::fabs(a.dg - s.prev_dg) <= p.ramp * p.dt + tol;
    const double lo = -std::min((p.ess_storage_cap - s.soc) / p.ess_efficiency,
                                p.ess_power_cap * p.dt);
    const double hi = std::min(p.ess_efficiency * s.soc, p.ess_power_cap * p.dt);
    const bool ess = a.ess >= lo - tol && a.ess <= hi + tol;
    const bool dr = a.dr >= -tol && a.dr <= p.dr_rate * s.exog.demand + tol;
    return dg_bounds && ramp && ess && dr;
}

}  // namespace

TEST_SUITE("env") {

TEST_CASE("hourly cost matches hand-evaluated values") {
    const auto p = table_params();
    const State s1 = make_state(0, 110, 0, 140, 0);
    CHECK(cost_of(s1, balanced_action(60, 0, 0, s1.exog), p) == doctest::Approx(37000).epsilon(1e-12));

    const State s2 = make_state(0, 40, 30, 70, 0);
    CHECK(cost_of(s2, balanced_action(0, 0, 0, s2.exog), p) == doctest::Approx(700).epsilon(1e-12));

    // selling: dg 20 pushes grid to -10, revenue offsets generation cost
    const State s3 = make_state(0, 40, 30, 140, 0);
    CHECK(cost_of(s3, balanced_action(20, 0, 0, s3.exog), p) == doctest::Approx(8600).epsilon(1e-12));
}

TEST_CASE("discharge cost applies only to positive ess flow") {
    const auto p = table_params();
    const State s = make_state(0, 100, 0, 100, 50);
    const double with_discharge = cost_of(s, balanced_action(0, 10, 0, s.exog), p);
    const double with_charge = cost_of(s, balanced_action(0, -10, 0, s.exog), p);
    // discharge: grid 90, plus c_b*10; charge: grid 110, no c_b term
    CHECK(with_discharge == doctest::Approx(100.0 * 90 + 50.0 * 10));
    CHECK(with_charge == doctest::Approx(100.0 * 110));
}

TEST_CASE("worst-case baseline") {
    const auto p = table_params();
    CHECK(worst_case_cost(make_state(0, 100, 0, 70, 0), p) == doctest::Approx(50000));
    CHECK(worst_case_cost(make_state(0, 40, 30, 70, 0), p) == doctest::Approx(5000));
    CHECK_THROWS_AS(worst_case_cost(make_state(0, 30, 30, 70, 0), p), DegenerateBaseline);
}

TEST_CASE("reward anchors at the baseline and at zero cost") {
    const auto p = table_params();
    // all-generator dispatch reproduces the baseline exactly
    const State s = make_state(30, 60, 0, 70, 0);
    const Action baseline_action = balanced_action(60, 0, 0, s.exog);
    CHECK(reward_of(s, baseline_action, p) == doctest::Approx(0.0).epsilon(1e-15));

    // demand fully covered by pv at zero price: dg 0, grid = demand - pv
    const State s2 = make_state(0, 40, 30, 140, 0);
    // pick the known-cost action and verify against the formula instead
    CHECK(reward_of(s2, balanced_action(0, 0, 0, s2.exog), p) ==
          doctest::Approx(-(1400.0 - 5000.0) / 5000.0));

    const State s3 = make_state(0, 100, 0, 140, 0);
    CHECK(reward_of(s3, balanced_action(60, 0, 0, s3.exog), p) ==
          doctest::Approx(0.26).epsilon(1e-12));
}

TEST_CASE("degenerate baseline propagates or substitutes zero") {
    auto p = table_params();
    const State s = make_state(0, 30, 30, 70, 0);
    CHECK_THROWS_AS(reward_of(s, balanced_action(0, 0, 0, s.exog), p), DegenerateBaseline);
    p.zero_reward_on_degenerate_baseline = true;
    CHECK(reward_of(s, balanced_action(0, 0, 0, s.exog), p) == 0.0);
}

TEST_CASE("reward strictly decreases in cost") {
    const auto p = table_params();
    const State s = make_state(0, 100, 0, 140, 50);
    const Action cheap = balanced_action(0, 50, 0, s.exog);
    const Action mid = balanced_action(0, 0, 0, s.exog);
    const Action dear = balanced_action(60, 0, 0, s.exog);
    REQUIRE(cost_of(s, cheap, p) < cost_of(s, mid, p));
    REQUIRE(cost_of(s, mid, p) < cost_of(s, dear, p));
    CHECK(reward_of(s, cheap, p) > reward_of(s, mid, p));
    CHECK(reward_of(s, mid, p) > reward_of(s, dear, p));
}

TEST_CASE("storage dynamics") {
    auto p = table_params();
    CHECK(soc_next(20, -10, p) == doctest::Approx(30));

    p.ess_efficiency = 0.9;
    CHECK(soc_next(20, -10, p) == doctest::Approx(29));
    CHECK(soc_next(20, 10, p) == doctest::Approx(20.0 - 10.0 / 0.9));

    p.ess_efficiency = 1.0;
    CHECK_THROWS_AS(soc_next(45, -10, p), SocBoundsViolation);
    CHECK_THROWS_AS(soc_next(5, 10, p), SocBoundsViolation);
    // drift within tolerance clamps instead of throwing
    CHECK(soc_next(50, -1e-12, p) == 50.0);
}

TEST_CASE("round trip with perfect efficiency restores soc") {
    const auto p = table_params();
    for (const double amount : {10.0, 20.0, 50.0}) {
        const double charged = soc_next(0, -amount, p);
        CHECK(soc_next(charged, amount, p) == doctest::Approx(0.0).epsilon(1e-15));
    }
}

TEST_CASE("feasible set respects storage state") {
    const auto p = table_params();
    const auto spaces = table_spaces(p);

    const auto empty_battery = feasible_actions(make_state(0, 70, 0, 70, 0), p, spaces.action);
    REQUIRE(!empty_battery.empty());
    for (const auto idx : empty_battery)
        CHECK(action_from_index(idx, spaces.action, {70, 0, 70}).ess <= 0.0);

    const auto full_battery = feasible_actions(make_state(0, 70, 0, 70, 50), p, spaces.action);
    REQUIRE(!full_battery.empty());
    for (const auto idx : full_battery)
        CHECK(action_from_index(idx, spaces.action, {70, 0, 70}).ess >= 0.0);
}

TEST_CASE("feasible set respects ramp and curtailment bounds") {
    const auto p = table_params();
    const auto spaces = table_spaces(p);

    const State s = make_state(0, 40, 0, 70, 0);
    std::set<double> dg_seen, dr_seen;
    for (const auto idx : feasible_actions(s, p, spaces.action)) {
        const Action a = action_from_index(idx, spaces.action, s.exog);
        dg_seen.insert(a.dg);
        dr_seen.insert(a.dr);
    }
    CHECK(dg_seen == std::set<double>{0, 10, 20, 30});
    // dr_rate * 40 = 8, below the first nonzero grid point
    CHECK(dr_seen == std::set<double>{0});
}

TEST_CASE("feasibility matches an independent constraint check") {
    const auto p = table_params();
    const auto spaces = table_spaces(p);
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::size_t> pick_state(0, spaces.state.size() - 1);

    for (int trial = 0; trial < 50; ++trial) {
        const State s = state_from_index(pick_state(rng), spaces.state);
        const auto feasible = feasible_actions(s, p, spaces.action);
        REQUIRE(!feasible.empty());
        std::set<std::uint32_t> members(feasible.begin(), feasible.end());
        for (std::size_t idx = 0; idx < spaces.action.size(); ++idx) {
            const Action a = action_from_index(idx, spaces.action, s.exog);
            CHECK(feasible_oracle(s, a, p) == (members.count(static_cast<std::uint32_t>(idx)) > 0));
        }
    }
}

TEST_CASE("grid balance holds exactly for every constructed action") {
    const auto spaces = table_spaces();
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::size_t> pick_state(0, spaces.state.size() - 1);
    std::uniform_int_distribution<std::size_t> pick_action(0, spaces.action.size() - 1);
    for (int trial = 0; trial < 1000; ++trial) {
        const State s = state_from_index(pick_state(rng), spaces.state);
        const Action a = action_from_index(pick_action(rng), spaces.action, s.exog);
        CHECK(s.exog.demand == a.grid + a.dg + a.ess + a.dr + s.exog.pv);
    }
}

TEST_CASE("step composes cost, reward and dynamics") {
    const auto p = table_params();

    SUBCASE("identity transition") {
        const State s = make_state(0, 70, 0, 70, 20);
        const StepResult r = step(s, balanced_action(0, 0, 0, s.exog), s.exog, p);
        CHECK(r.next_state.soc == 20);
        CHECK(r.next_state.prev_dg == 0);
    }

    SUBCASE("charging raises soc per the dynamics") {
        const State s = make_state(0, 70, 0, 70, 20);
        const StepResult r = step(s, balanced_action(0, -10, 0, s.exog), {80, 10, 130}, p);
        CHECK(r.next_state.soc == doctest::Approx(30));
        CHECK(r.next_state.exog.demand == 80);
    }

    SUBCASE("infeasible action is rejected") {
        const State s = make_state(0, 70, 0, 70, 0);
        CHECK_THROWS_AS(step(s, balanced_action(0, 10, 0, s.exog), s.exog, p),
                        InfeasibleAction);
        CHECK_THROWS_AS(step(s, balanced_action(60, 0, 0, s.exog), s.exog, p),
                        InfeasibleAction);
    }

    SUBCASE("replay is bitwise identical") {
        const State s = make_state(10, 90, 10, 140, 30);
        const Action a = balanced_action(20, 10, 10, s.exog);
        const StepResult r1 = step(s, a, {100, 20, 130}, p);
        const StepResult r2 = step(s, a, {100, 20, 130}, p);
        CHECK(std::memcmp(&r1.cost, &r2.cost, sizeof(double)) == 0);
        CHECK(std::memcmp(&r1.reward, &r2.reward, sizeof(double)) == 0);
        CHECK(std::memcmp(&r1.next_state.soc, &r2.next_state.soc, sizeof(double)) == 0);
    }
}

TEST_CASE("soc stays within bounds along random feasible trajectories") {
    const auto p = table_params();
    const auto spaces = table_spaces(p);
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<std::size_t> pick_exog(0, 3);

    const Exogenous pool[4] = {{70, 0, 70}, {40, 30, 140}, {110, 10, 130}, {90, 20, 70}};
    State s = make_state(0, 70, 0, 70, 0);
    for (int t = 0; t < 300; ++t) {
        const auto feasible = feasible_actions(s, p, spaces.action);
        REQUIRE(!feasible.empty());
        std::uniform_int_distribution<std::size_t> pick(0, feasible.size() - 1);
        const Action a = action_from_index(feasible[pick(rng)], spaces.action, s.exog);
        const StepResult r = step(s, a, pool[pick_exog(rng)], p);
        CHECK(r.next_state.soc >= 0.0);
        CHECK(r.next_state.soc <= p.ess_storage_cap);
        s = r.next_state;
    }
}

TEST_CASE("reset state starts empty at the lowest generator level") {
    const auto spaces = table_spaces();
    const State s = reset_state({70, 0, 70}, spaces);
    CHECK(s.soc == 0);
    CHECK(s.prev_dg == 0);
    CHECK(s.exog.demand == 70);
}

}  // TEST_SUITE
