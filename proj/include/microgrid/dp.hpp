#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "microgrid/env.hpp"
#include "microgrid/qtable.hpp"
#include "microgrid/trace.hpp"

namespace microgrid {

// Exact finite-horizon policy on a fixed trace. Stage state is
// (soc level, prev_dg level); the exogenous components are pinned by the
// trace. Terminal cost-to-go is 0: leftover stored energy earns nothing.
class DpPolicy {
  public:
    DpPolicy(std::size_t horizon, std::size_t num_soc, std::size_t num_prev_dg);

    std::size_t horizon() const { return horizon_; }
    std::size_t num_soc() const { return num_soc_; }
    std::size_t num_prev_dg() const { return num_prev_dg_; }

    // Minimal total cost from stage t onward; t == horizon() is terminal.
    double cost_to_go(std::size_t t, std::size_t soc_idx, std::size_t prev_dg_idx) const;
    double& cost_to_go(std::size_t t, std::size_t soc_idx, std::size_t prev_dg_idx);

    std::uint32_t action_at(std::size_t t, std::size_t soc_idx, std::size_t prev_dg_idx) const;
    std::uint32_t& action_at(std::size_t t, std::size_t soc_idx, std::size_t prev_dg_idx);

  private:
    std::size_t horizon_;
    std::size_t num_soc_;
    std::size_t num_prev_dg_;
    std::vector<double> value_;          // (horizon+1) layers
    std::vector<std::uint32_t> action_;  // horizon layers
};

// Backward induction over the trace horizon. Requires storage dynamics that
// stay on the soc grid (holds for the 10-unit grids with efficiency 1);
// throws OffGridState otherwise. Ties break to the lowest action index.
DpPolicy backward_induction(const ExogenousTrace& trace, const Spaces& spaces,
                            const MicrogridParams& params);

struct OracleResult {
    double min_cost = 0.0;
    std::vector<std::uint32_t> actions;
};

// Exhaustive enumeration of feasible action sequences; exact optimum for tiny
// horizons. Guarded by |A|^T <= 10^7; throws InstanceTooLarge beyond it.
OracleResult brute_force_oracle(const ExogenousTrace& trace, const Spaces& spaces,
                                const MicrogridParams& params, const State& initial);

struct TrajectoryStep {
    State state;
    Action action;
    double cost = 0.0;
    double reward = 0.0;
};

struct Trajectory {
    std::vector<TrajectoryStep> steps;
    double total_cost() const;
};

// Deterministic greedy rollout of a Q-table over the trace, starting from
// soc 0, prev_dg 0 unless an initial state is given. Unvisited rows fall back
// to the lowest feasible index. Pass a cache built on the same spaces/params
// to skip per-step feasibility enumeration.
Trajectory evaluate_policy(const QTable& q, const ExogenousTrace& trace,
                           const Spaces& spaces, const MicrogridParams& params,
                           const FeasibilityCache* cache = nullptr,
                           std::optional<State> initial = {});

// Deterministic rollout of a DP policy over its trace.
Trajectory evaluate_policy(const DpPolicy& policy, const ExogenousTrace& trace,
                           const Spaces& spaces, const MicrogridParams& params,
                           std::optional<State> initial = {});

// CSV dump: t, soc, prev_dg, action components and cost-to-go per entry.
void save_dp_policy(const DpPolicy& policy, const ExogenousTrace& trace,
                    const Spaces& spaces, const std::string& path);

}  // namespace microgrid
