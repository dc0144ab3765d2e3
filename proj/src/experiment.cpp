#include "microgrid/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "microgrid/errors.hpp"

namespace microgrid {

namespace fs = std::filesystem;
using nlohmann::json;

PreparedData prepare_data(const RunConfig& config) {
    config.validate();
    PreparedData data;
    data.spaces = build_spaces(config.params, config.pv_bins, config.demand_bins,
                               config.price_bins);

    ExogenousTrace raw;
    if (!config.trace_path.empty()) {
        raw = load_trace(config.trace_path);
    } else {
        SynthBins bins{config.pv_bins, config.demand_bins, config.price_bins};
        raw = synth_trace(config.synth.seed, config.synth.hours, bins);
    }
    raw = scale_prices(std::move(raw), config.price_scale);
    data.full = discretize_trace(raw, data.spaces.state);

    const std::size_t total = data.full.size();
    if (total < config.validation_hours + 2)
        throw ConfigMismatch("trace too short for the configured validation split");
    data.training = data.full.slice(0, total - config.validation_hours);
    data.validation = data.full.slice(total - config.validation_hours,
                                      config.validation_hours);
    return data;
}

PolicyEval evaluate_trajectory(const Trajectory& trajectory, std::size_t window_start,
                               double dp_avg_cost, double dp_ess_benefit) {
    const EvalWindow window = make_window(trajectory, window_start);
    PolicyEval eval;
    eval.avg_cost = average_cost(window);
    eval.ess_benefit = ess_benefit(window);
    const RegretPair r = regrets(eval.avg_cost, eval.ess_benefit, dp_avg_cost,
                                 dp_ess_benefit);
    eval.ac_regret = r.ac;
    eval.eb_regret = r.eb;
    return eval;
}

void write_curves_csv(const std::vector<EpisodeCurve>& curves, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "episode,avg_cost,ess_benefit,q_diff\n";
    char buf[160];
    for (std::size_t i = 0; i < curves.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g\n", i + 1,
                      curves[i].avg_cost, curves[i].ess_benefit, curves[i].q_diff);
        out << buf;
    }
}

void write_dispatch_csv(const Trajectory& trajectory, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "t,demand,pv,price,dg,ess,dr,grid,soc,cost,reward\n";
    char buf[320];
    for (std::size_t t = 0; t < trajectory.steps.size(); ++t) {
        const auto& s = trajectory.steps[t];
        std::snprintf(buf, sizeof(buf),
                      "%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      t, s.state.exog.demand, s.state.exog.pv, s.state.exog.price,
                      s.action.dg, s.action.ess, s.action.dr, s.action.grid, s.state.soc,
                      s.cost, s.reward);
        out << buf;
    }
}

namespace {

json eval_to_json(const PolicyEval& e) {
    return {{"avg_cost", e.avg_cost},
            {"ess_benefit", e.ess_benefit},
            {"ac_regret", e.ac_regret},
            {"eb_regret", e.eb_regret},
            {"unmatched_discharges", e.unmatched_discharges},
            {"unmatched_energy", e.unmatched_energy}};
}

struct Moments {
    double mean = 0.0;
    double stddev = 0.0;
};

Moments moments(const std::vector<double>& xs) {
    Moments m;
    if (xs.empty()) return m;
    for (const double x : xs) m.mean += x;
    m.mean /= static_cast<double>(xs.size());
    if (xs.size() < 2) return m;
    double ss = 0.0;
    for (const double x : xs) ss += (x - m.mean) * (x - m.mean);
    m.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    return m;
}

json aggregate_json(const std::vector<SeedOutcome>& seeds, bool delayed) {
    std::vector<double> ac, eb, rac, reb;
    for (const auto& s : seeds) {
        const PolicyEval& e = delayed ? s.delayed : s.vanilla;
        ac.push_back(e.avg_cost);
        eb.push_back(e.ess_benefit);
        rac.push_back(e.ac_regret);
        reb.push_back(e.eb_regret);
    }
    const Moments mac = moments(ac), meb = moments(eb), mrac = moments(rac),
                  mreb = moments(reb);
    return {{"avg_cost_mean", mac.mean},         {"avg_cost_std", mac.stddev},
            {"ess_benefit_mean", meb.mean},      {"ess_benefit_std", meb.stddev},
            {"ac_regret_mean", mrac.mean},       {"ac_regret_std", mrac.stddev},
            {"eb_regret_mean", mreb.mean},       {"eb_regret_std", mreb.stddev}};
}

double pct_change(double with_value, double without_value) {
    if (without_value == 0.0) return 0.0;
    return (with_value - without_value) / std::fabs(without_value) * 100.0;
}

}  // namespace

ExperimentResult run_experiment(const RunConfig& config) {
    const PreparedData data = prepare_data(config);
    const fs::path out_dir(config.out_dir);
    fs::create_directories(out_dir);
    save_config(config, (out_dir / "config.json").string());
    save_trace(data.full, (out_dir / "trace_discretized.csv").string());

    const std::size_t window_start = data.training.size();

    // exact baseline on the validation window
    const DpPolicy dp_policy = backward_induction(data.validation, data.spaces,
                                                  config.params);
    const Trajectory dp_traj = evaluate_policy(dp_policy, data.validation, data.spaces,
                                               config.params);
    save_dp_policy(dp_policy, data.validation, data.spaces,
                   (out_dir / "dp_policy.csv").string());
    write_dispatch_csv(dp_traj, (out_dir / "dispatch_dp.csv").string());

    ExperimentResult result;
    const EvalWindow dp_window = make_window(dp_traj, window_start);
    result.dp_avg_cost = average_cost(dp_window);
    result.dp_ess_benefit = ess_benefit(dp_window);

    const FeasibilityCache cache(data.spaces, config.params);
    const bool grid_dynamics = config.params.ess_efficiency == 1.0;

    for (const std::uint64_t seed : config.seeds) {
        SeedOutcome outcome;
        outcome.seed = seed;
        Hyperparams hp = config.hyperparams;
        hp.seed = seed;

        const fs::path seed_dir = out_dir / ("seed_" + std::to_string(seed));
        fs::create_directories(seed_dir);

        for (const bool delayed : {true, false}) {
            TrainOptions options;
            options.delayed_update = delayed;
            TrainResult trained = train(data.training, data.validation, data.spaces,
                                        config.params, hp, options);
            const Trajectory traj =
                evaluate_policy(trained.q, data.validation, data.spaces, config.params,
                                grid_dynamics ? &cache : nullptr);
            PolicyEval eval = evaluate_trajectory(traj, window_start, result.dp_avg_cost,
                                                  result.dp_ess_benefit);
            eval.unmatched_discharges = trained.unmatched_discharges;
            eval.unmatched_energy = trained.unmatched_energy;

            const std::string tag = delayed ? "delayed" : "vanilla";
            write_curves_csv(trained.curves,
                             (seed_dir / ("curves_" + tag + ".csv")).string());
            write_dispatch_csv(traj, (seed_dir / ("dispatch_" + tag + ".csv")).string());
            save_qtable(trained.q, data.spaces, hp,
                        (seed_dir / ("qtable_" + tag + ".csv")).string());

            if (delayed) {
                outcome.delayed = eval;
                outcome.delayed_curves = std::move(trained.curves);
            } else {
                outcome.vanilla = eval;
                outcome.vanilla_curves = std::move(trained.curves);
            }
        }
        result.seeds.push_back(std::move(outcome));
    }

    json summary;
    summary["config"] = json::parse(config_to_json(config, /*include_out_dir=*/false));
    summary["window"] = {{"start", window_start},
                         {"end", window_start + config.validation_hours}};
    summary["dp"] = {{"avg_cost", result.dp_avg_cost},
                     {"ess_benefit", result.dp_ess_benefit},
                     {"ac_regret", 0.0},
                     {"eb_regret", 0.0}};
    summary["seeds"] = json::array();
    for (const auto& s : result.seeds) {
        summary["seeds"].push_back({{"seed", s.seed},
                                    {"delayed", eval_to_json(s.delayed)},
                                    {"vanilla", eval_to_json(s.vanilla)}});
    }
    summary["aggregate"] = {{"delayed", aggregate_json(result.seeds, true)},
                            {"vanilla", aggregate_json(result.seeds, false)}};

    const json delayed_agg = summary["aggregate"]["delayed"];
    const json vanilla_agg = summary["aggregate"]["vanilla"];
    summary["table"] = {
        {"columns", {"average_cost", "ess_benefit", "ac_regret", "eb_regret"}},
        {"without_delayed_update",
         {vanilla_agg["avg_cost_mean"], vanilla_agg["ess_benefit_mean"],
          vanilla_agg["ac_regret_mean"], vanilla_agg["eb_regret_mean"]}},
        {"with_delayed_update",
         {delayed_agg["avg_cost_mean"], delayed_agg["ess_benefit_mean"],
          delayed_agg["ac_regret_mean"], delayed_agg["eb_regret_mean"]}},
        {"dp_optimal", {result.dp_avg_cost, result.dp_ess_benefit, 0.0, 0.0}},
        {"difference_pct",
         {pct_change(delayed_agg["avg_cost_mean"], vanilla_agg["avg_cost_mean"]),
          pct_change(delayed_agg["ess_benefit_mean"], vanilla_agg["ess_benefit_mean"]),
          pct_change(delayed_agg["ac_regret_mean"], vanilla_agg["ac_regret_mean"]),
          pct_change(delayed_agg["eb_regret_mean"], vanilla_agg["eb_regret_mean"])}}};

    result.summary_json = summary.dump(2) + "\n";
    result.summary_path = (out_dir / "summary.json").string();
    std::ofstream out(result.summary_path);
    if (!out) throw std::runtime_error("cannot open " + result.summary_path);
    out << result.summary_json;
    return result;
}

}  // namespace microgrid
