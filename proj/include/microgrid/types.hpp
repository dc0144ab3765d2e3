#pragma once

namespace microgrid {

// Physical and economic constants of the grid-connected microgrid.
// Defaults are the reference system the learner and solver are tuned on.
// All energies are kWh per period, all unit costs are money per kWh.
struct MicrogridParams {
    double dt = 1.0;  // hours per period

    double c_dg = 500.0;  // dispatchable generation unit cost
    double c_dr = 200.0;  // load curtailment unit cost
    double c_b = 50.0;    // ESS discharging unit cost

    double p_dg_max = 60.0;  // generator capacity
    double p_dg_min = 0.0;   // generator minimum output
    double ramp = 30.0;      // generator ramp up/down limit, kW

    double ess_power_cap = 50.0;    // ESS charge/discharge capacity, kW
    double ess_storage_cap = 50.0;  // ESS storage capacity, kWh

    double dr_rate = 0.2;        // curtailable fraction of demand, in [0, 1]
    double ess_efficiency = 1.0;  // ESS efficiency, in (0, 1]

    // When true, states with demand <= pv yield reward 0 instead of raising
    // DegenerateBaseline. Off by default so corrupted data is surfaced.
    bool zero_reward_on_degenerate_baseline = false;

    void validate() const;  // throws std::invalid_argument
};

// One hour of exogenous observations.
struct Exogenous {
    double demand = 0.0;  // electricity demand, kWh
    double pv = 0.0;      // renewable generation, kWh
    double price = 0.0;   // grid price, money per kWh
};

struct State {
    double prev_dg = 0.0;  // generator output of the previous period
    Exogenous exog;
    double soc = 0.0;  // ESS state of charge, kWh
};

// Dispatch decision for one period. ess > 0 discharges, ess < 0 charges;
// grid > 0 buys, grid < 0 sells. grid is derived from the balance constraint
// and is never chosen independently.
struct Action {
    double dg = 0.0;
    double ess = 0.0;
    double dr = 0.0;
    double grid = 0.0;
};

// Builds an action whose grid component closes the supply/demand balance.
Action balanced_action(double dg, double ess, double dr, const Exogenous& exog);

struct StepResult {
    State next_state;
    double cost = 0.0;    // hourly operation cost, may be negative when selling
    double reward = 0.0;  // relative improvement over the worst-case baseline
};

}  // namespace microgrid
