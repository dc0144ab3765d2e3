#include <doctest.h>

#include <random>
#include <vector>

#include "microgrid/env.hpp"
#include "microgrid/errors.hpp"
#include "microgrid/spaces.hpp"

using namespace microgrid;

namespace {

const std::vector<double> kPvBins{0, 10, 20, 30};
const std::vector<double> kDemandBins{40, 50, 60, 70, 80, 90, 100, 110};
const std::vector<double> kPriceBins{70, 130, 140};

Spaces reference_spaces() {
    return build_spaces(MicrogridParams{}, kPvBins, kDemandBins, kPriceBins);
}

}  // namespace

TEST_SUITE("spaces") {

TEST_CASE("reference cardinalities") {
    const auto spaces = reference_spaces();
    CHECK(spaces.state.size() == 3024);   // 7 * 4 * 8 * 6 * 3
    CHECK(spaces.action.size() == 231);   // 7 * 11 * 3
    CHECK(spaces.state.prev_dg_levels.size() == 7);
    CHECK(spaces.state.soc_levels.size() == 6);
    CHECK(spaces.action.dg_levels.size() == 7);
    CHECK(spaces.action.ess_levels.size() == 11);
    CHECK(spaces.action.dr_levels == std::vector<double>{0, 10, 20});
    CHECK(spaces.action.ess_levels.front() == -50);
    CHECK(spaces.action.ess_levels.back() == 50);
}

TEST_CASE("degenerate storage collapses the ess grid") {
    MicrogridParams p;
    p.ess_power_cap = 0;
    p.ess_storage_cap = 0;
    const auto spaces = build_spaces(p, kPvBins, kDemandBins, kPriceBins);
    CHECK(spaces.action.ess_levels == std::vector<double>{0});
    CHECK(spaces.state.soc_levels == std::vector<double>{0});
}

TEST_CASE("bin validation") {
    const MicrogridParams p;
    CHECK_THROWS_AS(build_spaces(p, {}, kDemandBins, kPriceBins), InvalidBins);
    CHECK_THROWS_AS(build_spaces(p, {10, 10}, kDemandBins, kPriceBins), InvalidBins);
    CHECK_THROWS_AS(build_spaces(p, kPvBins, {50, 40}, kPriceBins), InvalidBins);
}

TEST_CASE("observation snapping") {
    const auto spaces = reference_spaces();
    CHECK(discretize_observation({40, 14.9, 70}, spaces.state).pv == 10);
    CHECK(discretize_observation({40, 0, 70}, spaces.state).demand == 40);
    // 135 sits halfway between 130 and 140; ties round up
    CHECK(discretize_observation({40, 0, 135}, spaces.state).price == 140);
    CHECK(discretize_observation({44.9, 0, 70}, spaces.state).demand == 40);
    CHECK(discretize_observation({45.0, 0, 70}, spaces.state).demand == 50);
}

TEST_CASE("snapping is idempotent") {
    const auto spaces = reference_spaces();
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> demand(0, 150), pv(0, 40), price(0, 200);
    for (int i = 0; i < 200; ++i) {
        const Exogenous raw{demand(rng), pv(rng), price(rng)};
        const Exogenous once = discretize_observation(raw, spaces.state);
        const Exogenous twice = discretize_observation(once, spaces.state);
        CHECK(once.demand == twice.demand);
        CHECK(once.pv == twice.pv);
        CHECK(once.price == twice.price);
    }
}

TEST_CASE("state indexing is a bijection") {
    const auto spaces = reference_spaces();

    State lowest;
    lowest.prev_dg = 0;
    lowest.exog = {40, 0, 70};
    lowest.soc = 0;
    CHECK(state_index(lowest, spaces.state) == 0);

    State highest;
    highest.prev_dg = 60;
    highest.exog = {110, 30, 140};
    highest.soc = 50;
    CHECK(state_index(highest, spaces.state) == 3023);

    std::mt19937_64 rng(3);
    std::uniform_int_distribution<std::size_t> pick(0, spaces.state.size() - 1);
    for (int i = 0; i < 100; ++i) {
        const std::size_t idx = pick(rng);
        CHECK(state_index(state_from_index(idx, spaces.state), spaces.state) == idx);
    }

    State off = lowest;
    off.soc = 5;
    CHECK_THROWS_AS(state_index(off, spaces.state), OffGridState);
}

TEST_CASE("action indexing is a bijection") {
    const auto spaces = reference_spaces();
    const Exogenous exog{70, 0, 70};

    CHECK(action_index(balanced_action(0, -50, 0, exog), spaces.action) == 0);
    CHECK(action_index(balanced_action(60, 50, 20, exog), spaces.action) == 230);

    for (std::size_t idx = 0; idx < spaces.action.size(); ++idx) {
        const Action a = action_from_index(idx, spaces.action, exog);
        CHECK(action_index(a, spaces.action) == idx);
    }

    CHECK_THROWS_AS(action_index(balanced_action(5, 0, 0, exog), spaces.action),
                    OffGridAction);
    CHECK_THROWS_AS(action_from_index(231, spaces.action, exog), OffGridAction);
}

TEST_CASE("state snapping covers all five components") {
    const auto spaces = reference_spaces();
    State raw;
    raw.prev_dg = 12.0;
    raw.exog = {57.0, 24.9, 100.0};
    raw.soc = 33.3;
    const State snapped = discretize_state(raw, spaces.state);
    CHECK(snapped.prev_dg == 10);
    CHECK(snapped.exog.demand == 60);
    CHECK(snapped.exog.pv == 20);
    CHECK(snapped.exog.price == 130);
    CHECK(snapped.soc == 30);
    CHECK_NOTHROW(state_index(snapped, spaces.state));
}

}  // TEST_SUITE
