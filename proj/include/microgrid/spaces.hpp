#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "microgrid/types.hpp"

namespace microgrid {

// Absolute tolerance for matching values against grid levels and for
// constraint checks. On the 10-unit grids this never changes any set.
inline constexpr double kGridTol = 1e-9;

inline constexpr std::size_t kNoLevel = static_cast<std::size_t>(-1);

// Index of the level matching v within tolerance, or kNoLevel.
std::size_t find_level(const std::vector<double>& levels, double v);

// Nearest level to v; ties round up to the larger level.
double snap_to_levels(const std::vector<double>& levels, double v);

// Discretized observation grid for the five state components. Index order is
// row-major over (prev_dg, pv, demand, soc, price).
struct StateSpace {
    std::vector<double> prev_dg_levels;
    std::vector<double> pv_levels;
    std::vector<double> demand_levels;
    std::vector<double> soc_levels;
    std::vector<double> price_levels;

    std::size_t size() const {
        return prev_dg_levels.size() * pv_levels.size() * demand_levels.size() *
               soc_levels.size() * price_levels.size();
    }
};

// Discrete control grid. Index order is row-major over (dg, ess, dr); the
// grid exchange is derived per state and not enumerated.
struct ActionSpace {
    std::vector<double> dg_levels;
    std::vector<double> ess_levels;
    std::vector<double> dr_levels;

    std::size_t size() const {
        return dg_levels.size() * ess_levels.size() * dr_levels.size();
    }
};

struct Spaces {
    StateSpace state;
    ActionSpace action;
};

// Builds both spaces from the parameters and the observed exogenous bins.
// soc and dg levels use the 10-unit rule; ess spans -storage_cap..power_cap;
// dr spans 0..floor(max(dr_rate*demand)/10)*10. Throws InvalidBins on empty
// or non-increasing bins.
Spaces build_spaces(const MicrogridParams& params,
                    const std::vector<double>& pv_bins,
                    const std::vector<double>& demand_bins,
                    const std::vector<double>& price_bins);

// Snaps each component to its nearest bin (ties round up). Idempotent.
Exogenous discretize_observation(const Exogenous& raw, const StateSpace& space);

// Snaps all five state components to their grids. Idempotent.
State discretize_state(const State& raw, const StateSpace& space);

// Bijective row-major index of an on-grid state. Throws OffGridState.
std::size_t state_index(const State& state, const StateSpace& space);
State state_from_index(std::size_t index, const StateSpace& space);

// Bijective row-major index over (dg, ess, dr). Throws OffGridAction.
std::size_t action_index(const Action& action, const ActionSpace& space);

// Reconstructs the action at `index`, closing the grid balance against exog.
Action action_from_index(std::size_t index, const ActionSpace& space,
                         const Exogenous& exog);

}  // namespace microgrid
