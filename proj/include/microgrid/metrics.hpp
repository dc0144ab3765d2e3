#pragma once

#include <cstddef>
#include <vector>

#include "microgrid/dp.hpp"
#include "microgrid/qtable.hpp"

namespace microgrid {

// Per-step series of a rollout over the validation period [start, end).
struct EvalWindow {
    std::size_t start = 0;
    std::size_t end = 0;
    std::vector<double> costs;
    std::vector<double> rewards;
    std::vector<double> ess_flows;
    std::vector<double> prices;

    std::size_t length() const { return costs.size(); }
    void validate() const;  // throws std::invalid_argument
};

EvalWindow make_window(const Trajectory& trajectory, std::size_t start_index);

// Mean per-hour operation cost over the window.
double average_cost(const EvalWindow& window);

// Mean of price * ess flow: discharge revenue minus charging outlay.
double ess_benefit(const EvalWindow& window);

// RMS difference between two tables of equal dimensions.
double q_value_difference(const QTable& current, const QTable& previous);

struct RegretPair {
    double ac = 0.0;  // AC(policy) - AC(optimal)
    double eb = 0.0;  // EB(optimal) - EB(policy)
};

RegretPair regrets(double ac_policy, double eb_policy, double ac_optimal,
                   double eb_optimal);

}  // namespace microgrid
