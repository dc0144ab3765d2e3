#pragma once

#include <cstdint>
#include <deque>
#include <random>
#include <string>
#include <vector>

#include "microgrid/env.hpp"
#include "microgrid/qtable.hpp"
#include "microgrid/trace.hpp"

namespace microgrid {

struct Hyperparams {
    std::size_t episodes = 3000;     // M
    double learning_rate = 0.3;      // alpha
    double adaptation_rate = 1e-5;   // beta, scale of the retroactive update
    double discount = 0.9;           // gamma
    double eps_start = 1.0;
    double eps_end = 0.01;
    double eps_decay_fraction = 0.8;  // share of episodes epsilon decays over
    std::uint64_t seed = 1;

    void validate() const;  // throws std::invalid_argument
};

// Outstanding charged energy awaiting a matching discharge.
struct ChargeRecord {
    std::size_t state_index = 0;
    std::size_t action_index = 0;
    double remaining = 0.0;   // unmatched charged amount, kWh
    std::size_t period = 0;   // time index of the charge within the episode
    double price = 0.0;       // grid price at the charging period
};

// FIFO of charge records; periods are strictly increasing front to back.
using ChargeQueue = std::deque<ChargeRecord>;

// Epsilon for 1-based episode k: linear from eps_start to eps_end over the
// first eps_decay_fraction of episodes, then constant.
double epsilon_schedule(std::size_t k, const Hyperparams& hp);

// Epsilon-greedy over the feasible set; greedy ties break to the lowest
// action index. Throws EmptyFeasibleSet.
std::size_t select_action(const QTable& q, std::size_t s,
                          const std::vector<std::uint32_t>& feasible, double epsilon,
                          std::mt19937_64& rng);

// Q(s,a) <- (1-alpha) Q(s,a) + alpha (r + gamma max over feasible_next).
void td_update(QTable& q, std::size_t s, std::size_t a, double r, std::size_t s_next,
               const std::vector<std::uint32_t>& feasible_next, double alpha,
               double gamma);

// Appends a charge record (ess < 0) at the back of the queue.
void on_charge(ChargeQueue& queue, std::size_t s, std::size_t a, double ess,
               std::size_t t, double price);

struct MatchedCharge {
    std::size_t period = 0;
    double amount = 0.0;
};

// Matches a discharge (ess > 0) against queued charges front to back and
// applies the retroactive update beta * gamma^(t-tau) * (p_t - p_tau) * amount
// to each matched charging pair. Fully consumed records are popped, a partial
// match decrements the front. Returns the matched pairs; their total is less
// than ess when the queue runs dry.
std::vector<MatchedCharge> on_discharge(QTable& q, ChargeQueue& queue, double ess,
                                        std::size_t t, double price, double beta,
                                        double gamma);

struct EpisodeCurve {
    double avg_cost = 0.0;     // greedy policy on the validation window
    double ess_benefit = 0.0;  // greedy policy on the validation window
    double q_diff = 0.0;       // RMS table change against the previous episode
};

struct TrainResult {
    QTable q;
    std::vector<EpisodeCurve> curves;
    std::size_t unmatched_discharges = 0;  // discharges that drained the queue
    double unmatched_energy = 0.0;
};

struct TrainOptions {
    // When false the charge queue is never consulted: plain Q-learning.
    bool delayed_update = true;
};

// Runs hp.episodes episodes over the training trace, each starting from
// soc 0, prev_dg 0 with a cleared queue, and evaluates the greedy policy on
// the validation trace after every episode. Reproducible from hp.seed.
TrainResult train(const ExogenousTrace& training, const ExogenousTrace& validation,
                  const Spaces& spaces, const MicrogridParams& params,
                  const Hyperparams& hp, const TrainOptions& options = {});

// Text serialization: one JSON header line with dimensions, level grids,
// index order and hyperparameters, then one CSV row of Q-values per state.
// Values round-trip exactly.
void save_qtable(const QTable& q, const Spaces& spaces, const Hyperparams& hp,
                 const std::string& path);
QTable load_qtable(const std::string& path, const Spaces& expected);

}  // namespace microgrid
