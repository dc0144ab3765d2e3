#include "microgrid/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include "microgrid/errors.hpp"

namespace microgrid {

void EvalWindow::validate() const {
    if (end <= start) throw std::invalid_argument("window end must exceed start");
    const std::size_t n = costs.size();
    if (n == 0 || rewards.size() != n || ess_flows.size() != n || prices.size() != n)
        throw std::invalid_argument("window series must be non-empty and equal length");
}

EvalWindow make_window(const Trajectory& trajectory, std::size_t start_index) {
    EvalWindow window;
    window.start = start_index;
    window.end = start_index + trajectory.steps.size();
    for (const auto& step : trajectory.steps) {
        window.costs.push_back(step.cost);
        window.rewards.push_back(step.reward);
        window.ess_flows.push_back(step.action.ess);
        window.prices.push_back(step.state.exog.price);
    }
    return window;
}

double average_cost(const EvalWindow& window) {
    window.validate();
    double sum = 0.0;
    for (const double c : window.costs) sum += c;
    return sum / static_cast<double>(window.length());
}

double ess_benefit(const EvalWindow& window) {
    window.validate();
    double sum = 0.0;
    for (std::size_t t = 0; t < window.length(); ++t)
        sum += window.prices[t] * window.ess_flows[t];
    return sum / static_cast<double>(window.length());
}

double q_value_difference(const QTable& current, const QTable& previous) {
    if (current.num_states() != previous.num_states() ||
        current.num_actions() != previous.num_actions())
        throw DimensionMismatch("q-tables have different dimensions");
    const auto& a = current.values();
    const auto& b = previous.values();
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sum += d * d;
    }
    return std::sqrt(sum / static_cast<double>(a.size()));
}

RegretPair regrets(double ac_policy, double eb_policy, double ac_optimal,
                   double eb_optimal) {
    return {ac_policy - ac_optimal, eb_optimal - eb_policy};
}

}  // namespace microgrid
