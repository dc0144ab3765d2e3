#include "microgrid/learner.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "microgrid/dp.hpp"
#include "microgrid/errors.hpp"
#include "microgrid/metrics.hpp"

namespace microgrid {

void Hyperparams::validate() const {
    if (episodes < 1) throw std::invalid_argument("episodes must be >= 1");
    if (learning_rate <= 0.0 || learning_rate > 1.0)
        throw std::invalid_argument("learning_rate must be in (0, 1]");
    if (adaptation_rate < 0.0) throw std::invalid_argument("adaptation_rate must be >= 0");
    if (discount < 0.0 || discount > 1.0)
        throw std::invalid_argument("discount must be in [0, 1]");
    if (eps_start < 0.0 || eps_start > 1.0 || eps_end < 0.0 || eps_end > 1.0)
        throw std::invalid_argument("epsilon bounds must be in [0, 1]");
    if (eps_decay_fraction <= 0.0 || eps_decay_fraction > 1.0)
        throw std::invalid_argument("eps_decay_fraction must be in (0, 1]");
}

double epsilon_schedule(std::size_t k, const Hyperparams& hp) {
    assert(k >= 1 && k <= hp.episodes);
    const auto decay_end = std::max<std::size_t>(
        2, static_cast<std::size_t>(
               std::llround(hp.eps_decay_fraction * static_cast<double>(hp.episodes))));
    if (k >= decay_end) return hp.eps_end;
    const double progress =
        static_cast<double>(k - 1) / static_cast<double>(decay_end - 1);
    return hp.eps_start + (hp.eps_end - hp.eps_start) * progress;
}

std::size_t select_action(const QTable& q, std::size_t s,
                          const std::vector<std::uint32_t>& feasible, double epsilon,
                          std::mt19937_64& rng) {
    if (feasible.empty()) throw EmptyFeasibleSet("no feasible action for state");
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (unit(rng) < epsilon) {
        std::uniform_int_distribution<std::size_t> pick(0, feasible.size() - 1);
        return feasible[pick(rng)];
    }
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

namespace {

double max_feasible_q(const QTable& q, std::size_t s,
                      const std::vector<std::uint32_t>& feasible) {
    double best = q(s, feasible.front());
    for (std::size_t i = 1; i < feasible.size(); ++i)
        best = std::max(best, q(s, feasible[i]));
    return best;
}

}  // namespace

void td_update(QTable& q, std::size_t s, std::size_t a, double r, std::size_t s_next,
               const std::vector<std::uint32_t>& feasible_next, double alpha,
               double gamma) {
    if (feasible_next.empty()) throw EmptyFeasibleSet("no feasible action in next state");
    const double target = r + gamma * max_feasible_q(q, s_next, feasible_next);
    q(s, a) = (1.0 - alpha) * q(s, a) + alpha * target;
}

void on_charge(ChargeQueue& queue, std::size_t s, std::size_t a, double ess,
               std::size_t t, double price) {
    if (ess >= 0.0) throw std::invalid_argument("on_charge requires ess < 0");
    ChargeRecord record;
    record.state_index = s;
    record.action_index = a;
    record.remaining = -ess;
    record.period = t;
    record.price = price;
    queue.push_back(record);
}

std::vector<MatchedCharge> on_discharge(QTable& q, ChargeQueue& queue, double ess,
                                        std::size_t t, double price, double beta,
                                        double gamma) {
    if (ess <= 0.0) throw std::invalid_argument("on_discharge requires ess > 0");
    std::vector<MatchedCharge> matched;
    double remaining = ess;
    while (remaining > kGridTol && !queue.empty()) {
        ChargeRecord& front = queue.front();
        const double amount = std::min(remaining, front.remaining);
        q(front.state_index, front.action_index) +=
            beta * std::pow(gamma, static_cast<double>(t - front.period)) *
            (price - front.price) * amount;
        matched.push_back({front.period, amount});
        remaining -= amount;
        front.remaining -= amount;
        if (front.remaining <= kGridTol) queue.pop_front();
    }
    return matched;
}

TrainResult train(const ExogenousTrace& training, const ExogenousTrace& validation,
                  const Spaces& spaces, const MicrogridParams& params,
                  const Hyperparams& hp, const TrainOptions& options) {
    params.validate();
    hp.validate();
    if (training.size() < 2) throw ConfigMismatch("training trace needs >= 2 records");
    if (validation.size() < 1) throw ConfigMismatch("validation trace is empty");
    for (const auto& trace : {&training, &validation}) {
        for (std::size_t t = 0; t < trace->size(); ++t) {
            const Exogenous& e = trace->exog(t);
            if (find_level(spaces.state.demand_levels, e.demand) == kNoLevel ||
                find_level(spaces.state.pv_levels, e.pv) == kNoLevel ||
                find_level(spaces.state.price_levels, e.price) == kNoLevel)
                throw ConfigMismatch("trace record off the observation grid; discretize first");
        }
    }

    const FeasibilityCache cache(spaces, params);
    // With efficiency 1 every reachable state stays on the grid and the
    // cached feasibility lookup applies verbatim; otherwise the true soc can
    // leave the grid, so feasibility is computed from the exact state and
    // only the Q-index uses the snapped observation.
    const bool grid_dynamics = params.ess_efficiency == 1.0;

    TrainResult result{QTable(spaces.state.size(), spaces.action.size()), {}, 0, 0.0};
    QTable& q = result.q;
    ChargeQueue queue;
    std::mt19937_64 rng(hp.seed);
    const std::size_t steps = training.size() - 1;

    std::vector<std::uint32_t> scratch_now, scratch_next;
    auto observe = [&](const State& state) -> std::size_t {
        return grid_dynamics ? state_index(state, spaces.state)
                             : state_index(discretize_state(state, spaces.state), spaces.state);
    };
    auto feasible_of = [&](const State& state, std::size_t s_idx,
                           std::vector<std::uint32_t>& buf)
        -> const std::vector<std::uint32_t>& {
        if (grid_dynamics) return cache.feasible(s_idx);
        buf = feasible_actions(state, params, spaces.action);
        return buf;
    };

    for (std::size_t k = 1; k <= hp.episodes; ++k) {
        q.take_snapshot();
        queue.clear();
        State state = reset_state(training.exog(0), spaces);
        const double epsilon = epsilon_schedule(k, hp);

        std::size_t s_idx = observe(state);
        for (std::size_t t = 0; t < steps; ++t) {
            const auto& feasible = feasible_of(state, s_idx, scratch_now);
            const std::size_t a_idx = select_action(q, s_idx, feasible, epsilon, rng);
            const Action action = action_from_index(a_idx, spaces.action, state.exog);
            assert(action_feasible(state, action, params));
            const StepResult outcome = step(state, action, training.exog(t + 1), params);

            if (options.delayed_update) {
                if (action.ess < 0.0) {
                    on_charge(queue, s_idx, a_idx, action.ess, t, state.exog.price);
                } else if (action.ess > 0.0) {
                    const auto matched = on_discharge(q, queue, action.ess, t,
                                                      state.exog.price, hp.adaptation_rate,
                                                      hp.discount);
                    double total = 0.0;
                    for (const auto& m : matched) total += m.amount;
                    if (total < action.ess - kGridTol) {
                        ++result.unmatched_discharges;
                        result.unmatched_energy += action.ess - total;
                    }
                }
            }

            const std::size_t next_idx = observe(outcome.next_state);
            const auto& feasible_next = feasible_of(outcome.next_state, next_idx, scratch_next);
            td_update(q, s_idx, a_idx, outcome.reward, next_idx, feasible_next,
                      hp.learning_rate, hp.discount);

            state = outcome.next_state;
            s_idx = next_idx;
        }

        EpisodeCurve curve;
        curve.q_diff = q.rms_change_since_snapshot();
        const Trajectory greedy = evaluate_policy(q, validation, spaces, params,
                                                  grid_dynamics ? &cache : nullptr);
        const EvalWindow window = make_window(greedy, training.size());
        curve.avg_cost = average_cost(window);
        curve.ess_benefit = ess_benefit(window);
        result.curves.push_back(curve);
    }
    return result;
}

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void save_qtable(const QTable& q, const Spaces& spaces, const Hyperparams& hp,
                 const std::string& path) {
    nlohmann::json header;
    header["num_states"] = q.num_states();
    header["num_actions"] = q.num_actions();
    header["state_index_order"] = {"prev_dg", "pv", "demand", "soc", "price"};
    header["action_index_order"] = {"dg", "ess", "dr"};
    header["levels"] = {{"prev_dg", spaces.state.prev_dg_levels},
                        {"pv", spaces.state.pv_levels},
                        {"demand", spaces.state.demand_levels},
                        {"soc", spaces.state.soc_levels},
                        {"price", spaces.state.price_levels},
                        {"dg", spaces.action.dg_levels},
                        {"ess", spaces.action.ess_levels},
                        {"dr", spaces.action.dr_levels}};
    header["hyperparams"] = {{"episodes", hp.episodes},
                             {"learning_rate", hp.learning_rate},
                             {"adaptation_rate", hp.adaptation_rate},
                             {"discount", hp.discount},
                             {"eps_start", hp.eps_start},
                             {"eps_end", hp.eps_end},
                             {"eps_decay_fraction", hp.eps_decay_fraction},
                             {"seed", hp.seed}};

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << header.dump() << "\n";
    for (std::size_t s = 0; s < q.num_states(); ++s) {
        for (std::size_t a = 0; a < q.num_actions(); ++a) {
            if (a) out << ',';
            out << format_double(q(s, a));
        }
        out << "\n";
    }
}

QTable load_qtable(const std::string& path, const Spaces& expected) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty q-table file " + path);
    const auto header = nlohmann::json::parse(line);
    const auto num_states = header.at("num_states").get<std::size_t>();
    const auto num_actions = header.at("num_actions").get<std::size_t>();
    if (num_states != expected.state.size() || num_actions != expected.action.size())
        throw ConfigMismatch("q-table dimensions do not match the configured spaces");
    if (header.at("levels").at("soc").get<std::vector<double>>() !=
        expected.state.soc_levels)
        throw ConfigMismatch("q-table soc levels do not match the configured spaces");

    QTable q(num_states, num_actions);
    for (std::size_t s = 0; s < num_states; ++s) {
        if (!std::getline(in, line))
            throw std::runtime_error("q-table file truncated at state " + std::to_string(s));
        std::size_t pos = 0;
        for (std::size_t a = 0; a < num_actions; ++a) {
            std::size_t consumed = 0;
            q(s, a) = std::stod(line.substr(pos), &consumed);
            pos += consumed;
            if (a + 1 < num_actions) {
                if (pos >= line.size() || line[pos] != ',')
                    throw std::runtime_error("malformed q-table row " + std::to_string(s));
                ++pos;
            }
        }
    }
    return q;
}

}  // namespace microgrid
