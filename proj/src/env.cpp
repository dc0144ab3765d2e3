#include "microgrid/env.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

#include "microgrid/errors.hpp"

namespace microgrid {

void MicrogridParams::validate() const {
    if (dt <= 0.0) throw std::invalid_argument("dt must be positive");
    if (p_dg_min > p_dg_max) throw std::invalid_argument("p_dg_min exceeds p_dg_max");
    if (ramp <= 0.0) throw std::invalid_argument("ramp must be positive");
    if (ess_power_cap < 0.0) throw std::invalid_argument("ess_power_cap must be >= 0");
    if (ess_storage_cap < 0.0) throw std::invalid_argument("ess_storage_cap must be >= 0");
    if (dr_rate < 0.0 || dr_rate > 1.0) throw std::invalid_argument("dr_rate must be in [0, 1]");
    if (ess_efficiency <= 0.0 || ess_efficiency > 1.0)
        throw std::invalid_argument("ess_efficiency must be in (0, 1]");
}

Action balanced_action(double dg, double ess, double dr, const Exogenous& exog) {
    Action a;
    a.dg = dg;
    a.ess = ess;
    a.dr = dr;
    a.grid = exog.demand - exog.pv - dg - ess - dr;
    return a;
}

double cost_of(const State& state, const Action& action, const MicrogridParams& params) {
    assert(std::fabs(state.exog.demand - state.exog.pv - action.dg - action.ess -
                     action.dr - action.grid) <= kGridTol);
    return params.c_dg * action.dg + params.c_b * std::max(action.ess, 0.0) +
           state.exog.price * action.grid + params.c_dr * action.dr;
}

double worst_case_cost(const State& state, const MicrogridParams& params) {
    const double net = state.exog.demand - state.exog.pv;
    if (net <= 0.0)
        throw DegenerateBaseline("demand does not exceed pv; worst-case baseline is degenerate");
    return params.c_dg * net;
}

double reward_of(const State& state, const Action& action, const MicrogridParams& params) {
    if (params.zero_reward_on_degenerate_baseline &&
        state.exog.demand - state.exog.pv <= 0.0) {
        return 0.0;
    }
    const double baseline = worst_case_cost(state, params);
    return -(cost_of(state, action, params) - baseline) / baseline;
}

double soc_next(double soc, double ess, const MicrogridParams& params) {
    const double next = ess >= 0.0 ? soc - ess / params.ess_efficiency
                                   : soc - params.ess_efficiency * ess;
    if (next < -kGridTol || next > params.ess_storage_cap + kGridTol)
        throw SocBoundsViolation("storage dynamics left [0, ess_storage_cap]");
    return std::clamp(next, 0.0, params.ess_storage_cap);
}

bool action_feasible(const State& state, const Action& action, const MicrogridParams& params) {
    if (action.dg < params.p_dg_min - kGridTol || action.dg > params.p_dg_max + kGridTol)
        return false;
    if (std::fabs(action.dg - state.prev_dg) > params.ramp * params.dt + kGridTol)
        return false;
    const double power_bound = params.ess_power_cap * params.dt;
    const double charge_bound =
        std::min((params.ess_storage_cap - state.soc) / params.ess_efficiency, power_bound);
    const double discharge_bound = std::min(params.ess_efficiency * state.soc, power_bound);
    if (action.ess < -charge_bound - kGridTol || action.ess > discharge_bound + kGridTol)
        return false;
    if (action.dr < -kGridTol || action.dr > params.dr_rate * state.exog.demand + kGridTol)
        return false;
    return true;
}

std::vector<std::uint32_t> feasible_actions(const State& state, const MicrogridParams& params,
                                            const ActionSpace& aspace) {
    std::vector<std::uint32_t> out;
    const std::size_t n = aspace.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Action a = action_from_index(i, aspace, state.exog);
        if (action_feasible(state, a, params)) out.push_back(static_cast<std::uint32_t>(i));
    }
    return out;
}

StepResult step(const State& state, const Action& action, const Exogenous& next_exog,
                const MicrogridParams& params) {
    if (!action_feasible(state, action, params))
        throw InfeasibleAction("action violates an operating constraint for this state");
    StepResult result;
    result.cost = cost_of(state, action, params);
    result.reward = reward_of(state, action, params);
    result.next_state.prev_dg = action.dg;
    result.next_state.exog = next_exog;
    result.next_state.soc = soc_next(state.soc, action.ess, params);
    return result;
}

State reset_state(const Exogenous& first, const Spaces& spaces) {
    State s;
    s.prev_dg = spaces.state.prev_dg_levels.front();
    s.exog = first;
    s.soc = spaces.state.soc_levels.front();
    return s;
}

FeasibilityCache::FeasibilityCache(const Spaces& spaces, const MicrogridParams& params) {
    const std::size_t n = spaces.state.size();
    sets_.resize(n);
    for (std::size_t s = 0; s < n; ++s)
        sets_[s] = feasible_actions(state_from_index(s, spaces.state), params, spaces.action);
}

}  // namespace microgrid
