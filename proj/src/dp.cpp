#include "microgrid/dp.hpp"

#include <cassert>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <string>

#include "microgrid/errors.hpp"

namespace microgrid {

DpPolicy::DpPolicy(std::size_t horizon, std::size_t num_soc, std::size_t num_prev_dg)
    : horizon_(horizon),
      num_soc_(num_soc),
      num_prev_dg_(num_prev_dg),
      value_((horizon + 1) * num_soc * num_prev_dg, 0.0),
      action_(horizon * num_soc * num_prev_dg, 0) {}

double DpPolicy::cost_to_go(std::size_t t, std::size_t soc_idx,
                            std::size_t prev_dg_idx) const {
    return value_[(t * num_soc_ + soc_idx) * num_prev_dg_ + prev_dg_idx];
}

double& DpPolicy::cost_to_go(std::size_t t, std::size_t soc_idx, std::size_t prev_dg_idx) {
    return value_[(t * num_soc_ + soc_idx) * num_prev_dg_ + prev_dg_idx];
}

std::uint32_t DpPolicy::action_at(std::size_t t, std::size_t soc_idx,
                                  std::size_t prev_dg_idx) const {
    return action_[(t * num_soc_ + soc_idx) * num_prev_dg_ + prev_dg_idx];
}

std::uint32_t& DpPolicy::action_at(std::size_t t, std::size_t soc_idx,
                                   std::size_t prev_dg_idx) {
    return action_[(t * num_soc_ + soc_idx) * num_prev_dg_ + prev_dg_idx];
}

DpPolicy backward_induction(const ExogenousTrace& trace, const Spaces& spaces,
                            const MicrogridParams& params) {
    if (trace.size() < 1) throw ConfigMismatch("backward induction needs a horizon >= 1");
    const auto& soc_levels = spaces.state.soc_levels;
    const auto& dg_levels = spaces.state.prev_dg_levels;
    const std::size_t horizon = trace.size();

    const FeasibilityCache cache(spaces, params);
    DpPolicy policy(horizon, soc_levels.size(), dg_levels.size());

    for (std::size_t back = 0; back < horizon; ++back) {
        const std::size_t t = horizon - 1 - back;
        for (std::size_t i_soc = 0; i_soc < soc_levels.size(); ++i_soc) {
            for (std::size_t i_dg = 0; i_dg < dg_levels.size(); ++i_dg) {
                State state;
                state.prev_dg = dg_levels[i_dg];
                state.exog = trace.exog(t);
                state.soc = soc_levels[i_soc];

                double best = std::numeric_limits<double>::infinity();
                std::uint32_t best_action = 0;
                for (const std::uint32_t a :
                     cache.feasible(state_index(state, spaces.state))) {
                    const Action action = action_from_index(a, spaces.action, state.exog);
                    const double soc_after = soc_next(state.soc, action.ess, params);
                    const std::size_t i_soc_next = find_level(soc_levels, soc_after);
                    if (i_soc_next == kNoLevel)
                        throw OffGridState(
                            "storage dynamics leave the soc grid; exact backward induction "
                            "requires grid-preserving transitions");
                    const std::size_t i_dg_next = find_level(dg_levels, action.dg);
                    const double candidate = cost_of(state, action, params) +
                                             policy.cost_to_go(t + 1, i_soc_next, i_dg_next);
                    // strict < keeps the lowest feasible index on ties
                    if (candidate < best) {
                        best = candidate;
                        best_action = a;
                    }
                }
                policy.cost_to_go(t, i_soc, i_dg) = best;
                policy.action_at(t, i_soc, i_dg) = best_action;
            }
        }
    }
    return policy;
}

namespace {

struct OracleSearch {
    const ExogenousTrace& trace;
    const Spaces& spaces;
    const MicrogridParams& params;
    std::size_t horizon;
    std::vector<std::uint32_t> current;
    OracleResult best;

    void run(const State& state, std::size_t t, double cost_so_far) {
        if (t == horizon) {
            if (cost_so_far < best.min_cost) {
                best.min_cost = cost_so_far;
                best.actions = current;
            }
            return;
        }
        for (const std::uint32_t a : feasible_actions(state, params, spaces.action)) {
            const Action action = action_from_index(a, spaces.action, state.exog);
            State next;
            next.prev_dg = action.dg;
            next.exog = t + 1 < horizon ? trace.exog(t + 1) : state.exog;
            next.soc = soc_next(state.soc, action.ess, params);
            current.push_back(a);
            run(next, t + 1, cost_so_far + cost_of(state, action, params));
            current.pop_back();
        }
    }
};

}  // namespace

OracleResult brute_force_oracle(const ExogenousTrace& trace, const Spaces& spaces,
                                const MicrogridParams& params, const State& initial) {
    const double sequences = std::pow(static_cast<double>(spaces.action.size()),
                                      static_cast<double>(trace.size()));
    if (sequences > 1e7)
        throw InstanceTooLarge("brute-force enumeration above the 10^7 sequence guard");
    OracleSearch search{trace, spaces, params, trace.size(), {}, {}};
    search.best.min_cost = std::numeric_limits<double>::infinity();
    search.run(initial, 0, 0.0);
    return search.best;
}

double Trajectory::total_cost() const {
    double total = 0.0;
    for (const auto& s : steps) total += s.cost;
    return total;
}

namespace {

std::size_t greedy_feasible_action(const QTable& q, std::size_t s,
                                   const std::vector<std::uint32_t>& feasible) {
    if (feasible.empty()) throw EmptyFeasibleSet("no feasible action for state");
    std::size_t best = feasible.front();
    double best_value = q(s, best);
    for (std::size_t i = 1; i < feasible.size(); ++i) {
        const double v = q(s, feasible[i]);
        if (v > best_value) {
            best_value = v;
            best = feasible[i];
        }
    }
    return best;
}

}  // namespace

Trajectory evaluate_policy(const QTable& q, const ExogenousTrace& trace,
                           const Spaces& spaces, const MicrogridParams& params,
                           const FeasibilityCache* cache, std::optional<State> initial) {
    Trajectory trajectory;
    if (trace.size() == 0) return trajectory;
    State state = initial.value_or(reset_state(trace.exog(0), spaces));
    std::vector<std::uint32_t> scratch;
    for (std::size_t t = 0; t < trace.size(); ++t) {
        const State observed = discretize_state(state, spaces.state);
        const std::size_t s_idx = state_index(observed, spaces.state);
        const std::vector<std::uint32_t>* feasible;
        if (cache != nullptr) {
            feasible = &cache->feasible(s_idx);
        } else {
            scratch = feasible_actions(state, params, spaces.action);
            feasible = &scratch;
        }
        const std::size_t a_idx = greedy_feasible_action(q, s_idx, *feasible);
        const Action action = action_from_index(a_idx, spaces.action, state.exog);
        const Exogenous next_exog = t + 1 < trace.size() ? trace.exog(t + 1) : state.exog;
        const StepResult outcome = step(state, action, next_exog, params);
        trajectory.steps.push_back({state, action, outcome.cost, outcome.reward});
        state = outcome.next_state;
    }
    return trajectory;
}

Trajectory evaluate_policy(const DpPolicy& policy, const ExogenousTrace& trace,
                           const Spaces& spaces, const MicrogridParams& params,
                           std::optional<State> initial) {
    if (trace.size() != policy.horizon())
        throw ConfigMismatch("trace length does not match the policy horizon");
    Trajectory trajectory;
    if (trace.size() == 0) return trajectory;
    State state = initial.value_or(reset_state(trace.exog(0), spaces));
    for (std::size_t t = 0; t < trace.size(); ++t) {
        const std::size_t i_soc = find_level(spaces.state.soc_levels, state.soc);
        const std::size_t i_dg = find_level(spaces.state.prev_dg_levels, state.prev_dg);
        if (i_soc == kNoLevel || i_dg == kNoLevel)
            throw OffGridState("rollout state off the dp policy grid");
        const std::uint32_t a_idx = policy.action_at(t, i_soc, i_dg);
        const Action action = action_from_index(a_idx, spaces.action, state.exog);
        const Exogenous next_exog = t + 1 < trace.size() ? trace.exog(t + 1) : state.exog;
        const StepResult outcome = step(state, action, next_exog, params);
        trajectory.steps.push_back({state, action, outcome.cost, outcome.reward});
        state = outcome.next_state;
    }
    return trajectory;
}

void save_dp_policy(const DpPolicy& policy, const ExogenousTrace& trace,
                    const Spaces& spaces, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "t,soc,prev_dg,dg,ess,dr,grid,cost_to_go\n";
    char buf[256];
    for (std::size_t t = 0; t < policy.horizon(); ++t) {
        for (std::size_t i_soc = 0; i_soc < policy.num_soc(); ++i_soc) {
            for (std::size_t i_dg = 0; i_dg < policy.num_prev_dg(); ++i_dg) {
                const Action action = action_from_index(policy.action_at(t, i_soc, i_dg),
                                                        spaces.action, trace.exog(t));
                std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                              t, spaces.state.soc_levels[i_soc],
                              spaces.state.prev_dg_levels[i_dg], action.dg, action.ess,
                              action.dr, action.grid, policy.cost_to_go(t, i_soc, i_dg));
                out << buf;
            }
        }
    }
}

}  // namespace microgrid
