#include "microgrid/spaces.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "microgrid/errors.hpp"

namespace microgrid {

namespace {

constexpr double kUnit = 10.0;  // discretization step for all control grids

std::vector<double> stepped_levels(double lo, double hi) {
    const auto count = static_cast<std::size_t>(std::llround((hi - lo) / kUnit)) + 1;
    std::vector<double> levels(count);
    for (std::size_t i = 0; i < count; ++i) levels[i] = lo + kUnit * static_cast<double>(i);
    return levels;
}

void check_bins(const std::vector<double>& bins, const std::string& name) {
    if (bins.empty()) throw InvalidBins(name + " bins are empty");
    for (std::size_t i = 1; i < bins.size(); ++i) {
        if (!(bins[i] > bins[i - 1]))
            throw InvalidBins(name + " bins are not strictly increasing");
    }
}

}  // namespace

std::size_t find_level(const std::vector<double>& levels, double v) {
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (std::fabs(levels[i] - v) <= kGridTol) return i;
    }
    return kNoLevel;
}

double snap_to_levels(const std::vector<double>& levels, double v) {
    double best = levels.front();
    double best_dist = std::fabs(v - best);
    for (std::size_t i = 1; i < levels.size(); ++i) {
        const double dist = std::fabs(v - levels[i]);
        // <= prefers the larger level on ties
        if (dist <= best_dist) {
            best = levels[i];
            best_dist = dist;
        }
    }
    return best;
}

Spaces build_spaces(const MicrogridParams& params, const std::vector<double>& pv_bins,
                    const std::vector<double>& demand_bins,
                    const std::vector<double>& price_bins) {
    params.validate();
    check_bins(pv_bins, "pv");
    check_bins(demand_bins, "demand");
    check_bins(price_bins, "price");

    Spaces spaces;
    spaces.state.prev_dg_levels = stepped_levels(params.p_dg_min, params.p_dg_max);
    spaces.state.pv_levels = pv_bins;
    spaces.state.demand_levels = demand_bins;
    spaces.state.soc_levels = stepped_levels(0.0, params.ess_storage_cap);
    spaces.state.price_levels = price_bins;

    spaces.action.dg_levels = spaces.state.prev_dg_levels;
    spaces.action.ess_levels =
        stepped_levels(-params.ess_storage_cap, params.ess_power_cap * params.dt);
    const double max_dr = params.dr_rate * demand_bins.back();
    spaces.action.dr_levels =
        stepped_levels(0.0, kUnit * std::floor(max_dr / kUnit + kGridTol));
    return spaces;
}

Exogenous discretize_observation(const Exogenous& raw, const StateSpace& space) {
    Exogenous out;
    out.demand = snap_to_levels(space.demand_levels, raw.demand);
    out.pv = snap_to_levels(space.pv_levels, raw.pv);
    out.price = snap_to_levels(space.price_levels, raw.price);
    return out;
}

State discretize_state(const State& raw, const StateSpace& space) {
    State out;
    out.prev_dg = snap_to_levels(space.prev_dg_levels, raw.prev_dg);
    out.exog = discretize_observation(raw.exog, space);
    out.soc = snap_to_levels(space.soc_levels, raw.soc);
    return out;
}

std::size_t state_index(const State& state, const StateSpace& space) {
    const std::size_t i_dg = find_level(space.prev_dg_levels, state.prev_dg);
    const std::size_t i_pv = find_level(space.pv_levels, state.exog.pv);
    const std::size_t i_d = find_level(space.demand_levels, state.exog.demand);
    const std::size_t i_soc = find_level(space.soc_levels, state.soc);
    const std::size_t i_p = find_level(space.price_levels, state.exog.price);
    if (i_dg == kNoLevel || i_pv == kNoLevel || i_d == kNoLevel || i_soc == kNoLevel ||
        i_p == kNoLevel) {
        throw OffGridState("state component off the discretization grid");
    }
    std::size_t idx = i_dg;
    idx = idx * space.pv_levels.size() + i_pv;
    idx = idx * space.demand_levels.size() + i_d;
    idx = idx * space.soc_levels.size() + i_soc;
    idx = idx * space.price_levels.size() + i_p;
    return idx;
}

State state_from_index(std::size_t index, const StateSpace& space) {
    if (index >= space.size()) throw OffGridState("state index out of range");
    const std::size_t i_p = index % space.price_levels.size();
    index /= space.price_levels.size();
    const std::size_t i_soc = index % space.soc_levels.size();
    index /= space.soc_levels.size();
    const std::size_t i_d = index % space.demand_levels.size();
    index /= space.demand_levels.size();
    const std::size_t i_pv = index % space.pv_levels.size();
    index /= space.pv_levels.size();
    const std::size_t i_dg = index;

    State s;
    s.prev_dg = space.prev_dg_levels[i_dg];
    s.exog.pv = space.pv_levels[i_pv];
    s.exog.demand = space.demand_levels[i_d];
    s.soc = space.soc_levels[i_soc];
    s.exog.price = space.price_levels[i_p];
    return s;
}

std::size_t action_index(const Action& action, const ActionSpace& space) {
    const std::size_t i_dg = find_level(space.dg_levels, action.dg);
    const std::size_t i_ess = find_level(space.ess_levels, action.ess);
    const std::size_t i_dr = find_level(space.dr_levels, action.dr);
    if (i_dg == kNoLevel || i_ess == kNoLevel || i_dr == kNoLevel)
        throw OffGridAction("action component off the discretization grid");
    return (i_dg * space.ess_levels.size() + i_ess) * space.dr_levels.size() + i_dr;
}

Action action_from_index(std::size_t index, const ActionSpace& space,
                         const Exogenous& exog) {
    if (index >= space.size()) throw OffGridAction("action index out of range");
    const std::size_t i_dr = index % space.dr_levels.size();
    index /= space.dr_levels.size();
    const std::size_t i_ess = index % space.ess_levels.size();
    index /= space.ess_levels.size();
    return balanced_action(space.dg_levels[index], space.ess_levels[i_ess],
                           space.dr_levels[i_dr], exog);
}

}  // namespace microgrid
