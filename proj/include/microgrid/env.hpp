#pragma once

#include <cstdint>
#include <vector>

#include "microgrid/spaces.hpp"
#include "microgrid/types.hpp"

namespace microgrid {

// Hourly operation cost: c_dg*dg + c_b*max(ess,0) + price*grid + c_dr*dr.
// Negative when selling revenue dominates.
double cost_of(const State& state, const Action& action, const MicrogridParams& params);

// Cost of covering the whole net demand with the dispatchable generator,
// c_dg*(demand - pv). Not required to be feasible. Throws DegenerateBaseline
// when demand - pv <= 0.
double worst_case_cost(const State& state, const MicrogridParams& params);

// Negated change rate of the hourly cost relative to the worst-case baseline:
// 0 at the baseline, 1 at zero cost. Throws DegenerateBaseline unless the
// params opt into substituting 0.
double reward_of(const State& state, const Action& action, const MicrogridParams& params);

// Storage dynamics: soc - ess/eff on discharge, soc - eff*ess on charge.
// Clamps drift within kGridTol; throws SocBoundsViolation beyond it.
double soc_next(double soc, double ess, const MicrogridParams& params);

// Checks generator bounds, ramp, storage bounds and curtailment bound with
// absolute tolerance kGridTol. The balance constraint holds by construction.
bool action_feasible(const State& state, const Action& action, const MicrogridParams& params);

// Indices of all feasible grid actions for this state, ascending. Never empty
// for states satisfying their invariants.
std::vector<std::uint32_t> feasible_actions(const State& state,
                                            const MicrogridParams& params,
                                            const ActionSpace& aspace);

// Executes a feasible action: cost, reward and the successor state with the
// supplied next-hour observations. Throws InfeasibleAction.
StepResult step(const State& state, const Action& action, const Exogenous& next_exog,
                const MicrogridParams& params);

// Episode reset state: empty storage, generator at its lowest level.
State reset_state(const Exogenous& first, const Spaces& spaces);

// Feasible-action lists precomputed for every on-grid state, keyed by state
// index. Immutable after construction and safe to share across threads.
class FeasibilityCache {
  public:
    FeasibilityCache(const Spaces& spaces, const MicrogridParams& params);

    const std::vector<std::uint32_t>& feasible(std::size_t state_idx) const {
        return sets_[state_idx];
    }

  private:
    std::vector<std::vector<std::uint32_t>> sets_;
};

}  // namespace microgrid
