#pragma once

#include <string>
#include <vector>

#include "microgrid/config.hpp"
#include "microgrid/dp.hpp"
#include "microgrid/learner.hpp"
#include "microgrid/metrics.hpp"

namespace microgrid {

// Trace acquired, scaled, discretized and split per the configuration.
struct PreparedData {
    Spaces spaces;
    ExogenousTrace full;        // discretized
    ExogenousTrace training;    // first size-validation_hours records
    ExogenousTrace validation;  // trailing validation_hours records
};

PreparedData prepare_data(const RunConfig& config);

struct PolicyEval {
    double avg_cost = 0.0;
    double ess_benefit = 0.0;
    double ac_regret = 0.0;
    double eb_regret = 0.0;
    std::size_t unmatched_discharges = 0;
    double unmatched_energy = 0.0;
};

PolicyEval evaluate_trajectory(const Trajectory& trajectory, std::size_t window_start,
                               double dp_avg_cost, double dp_ess_benefit);

struct SeedOutcome {
    std::uint64_t seed = 0;
    PolicyEval delayed;
    PolicyEval vanilla;
    std::vector<EpisodeCurve> delayed_curves;
    std::vector<EpisodeCurve> vanilla_curves;
};

struct ExperimentResult {
    double dp_avg_cost = 0.0;
    double dp_ess_benefit = 0.0;
    std::vector<SeedOutcome> seeds;
    std::string summary_path;
    std::string summary_json;  // exact bytes written to summary_path
};

// Full comparative run: trains the delayed-update and plain policies for each
// seed, solves the exact baseline on the validation window, and writes
// curves, dispatch traces, Q-tables and summary.json under config.out_dir.
ExperimentResult run_experiment(const RunConfig& config);

void write_curves_csv(const std::vector<EpisodeCurve>& curves, const std::string& path);
void write_dispatch_csv(const Trajectory& trajectory, const std::string& path);

}  // namespace microgrid
