#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "microgrid/experiment.hpp"

namespace fs = std::filesystem;
using namespace microgrid;

namespace {

RunConfig load_or_default(const std::string& path) {
    if (path.empty()) return RunConfig{};
    return load_config(path);
}

nlohmann::json eval_json(const PolicyEval& e) {
    return {{"avg_cost", e.avg_cost},
            {"ess_benefit", e.ess_benefit},
            {"ac_regret", e.ac_regret},
            {"eb_regret", e.eb_regret}};
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << text;
}

int cmd_gen_data(std::uint64_t seed, std::size_t hours, const std::string& out,
                 const std::string& start) {
    const std::int64_t start_hour = start.empty() ? 422184 : parse_hour(start);
    const ExogenousTrace trace = synth_trace(seed, hours, SynthBins{}, start_hour);
    save_trace(trace, out);
    std::cout << "wrote " << trace.size() << " hourly records to " << out << "\n";
    return 0;
}

int cmd_train(const std::string& config_path, const std::string& out) {
    RunConfig config = load_or_default(config_path);
    if (!out.empty()) config.out_dir = out;
    const PreparedData data = prepare_data(config);
    fs::create_directories(config.out_dir);

    Hyperparams hp = config.hyperparams;
    hp.seed = config.seeds.front();
    const TrainResult trained =
        train(data.training, data.validation, data.spaces, config.params, hp);

    const DpPolicy dp_policy = backward_induction(data.validation, data.spaces, config.params);
    const Trajectory dp_traj = evaluate_policy(dp_policy, data.validation, data.spaces,
                                               config.params);
    const std::size_t window_start = data.training.size();
    const EvalWindow dp_window = make_window(dp_traj, window_start);

    const Trajectory traj = evaluate_policy(trained.q, data.validation, data.spaces,
                                            config.params);
    PolicyEval eval = evaluate_trajectory(traj, window_start, average_cost(dp_window),
                                          ess_benefit(dp_window));
    eval.unmatched_discharges = trained.unmatched_discharges;
    eval.unmatched_energy = trained.unmatched_energy;

    const fs::path dir(config.out_dir);
    write_curves_csv(trained.curves, (dir / "curves_delayed.csv").string());
    write_dispatch_csv(traj, (dir / "dispatch_delayed.csv").string());
    save_qtable(trained.q, data.spaces, hp, (dir / "qtable_delayed.csv").string());

    nlohmann::json summary;
    summary["config"] = nlohmann::json::parse(config_to_json(config, false));
    summary["delayed"] = eval_json(eval);
    summary["dp"] = {{"avg_cost", average_cost(dp_window)},
                     {"ess_benefit", ess_benefit(dp_window)}};
    write_text((dir / "summary.json").string(), summary.dump(2) + "\n");
    std::cout << summary.dump(2) << "\n";
    return 0;
}

int cmd_dp(const std::string& config_path, const std::string& out) {
    RunConfig config = load_or_default(config_path);
    if (!out.empty()) config.out_dir = out;
    const PreparedData data = prepare_data(config);
    fs::create_directories(config.out_dir);

    const DpPolicy dp_policy = backward_induction(data.validation, data.spaces, config.params);
    const Trajectory dp_traj = evaluate_policy(dp_policy, data.validation, data.spaces,
                                               config.params);
    const EvalWindow window = make_window(dp_traj, data.training.size());

    const fs::path dir(config.out_dir);
    save_dp_policy(dp_policy, data.validation, data.spaces, (dir / "dp_policy.csv").string());
    write_dispatch_csv(dp_traj, (dir / "dispatch_dp.csv").string());

    nlohmann::json summary;
    summary["dp"] = {{"avg_cost", average_cost(window)},
                     {"ess_benefit", ess_benefit(window)},
                     {"total_cost", dp_traj.total_cost()}};
    write_text((dir / "summary.json").string(), summary.dump(2) + "\n");
    std::cout << summary.dump(2) << "\n";
    return 0;
}

int cmd_eval(const std::string& qtable_path, const std::string& config_path,
             const std::string& out) {
    RunConfig config = load_or_default(config_path);
    const PreparedData data = prepare_data(config);
    const QTable q = load_qtable(qtable_path, data.spaces);

    const DpPolicy dp_policy = backward_induction(data.validation, data.spaces, config.params);
    const Trajectory dp_traj = evaluate_policy(dp_policy, data.validation, data.spaces,
                                               config.params);
    const std::size_t window_start = data.training.size();
    const EvalWindow dp_window = make_window(dp_traj, window_start);

    const Trajectory traj = evaluate_policy(q, data.validation, data.spaces, config.params);
    const PolicyEval eval = evaluate_trajectory(traj, window_start,
                                                average_cost(dp_window),
                                                ess_benefit(dp_window));

    nlohmann::json summary;
    summary["qtable"] = qtable_path;
    summary["policy"] = eval_json(eval);
    summary["dp"] = {{"avg_cost", average_cost(dp_window)},
                     {"ess_benefit", ess_benefit(dp_window)}};
    if (!out.empty()) {
        fs::create_directories(out);
        write_dispatch_csv(traj, (fs::path(out) / "dispatch_eval.csv").string());
        write_text((fs::path(out) / "summary.json").string(), summary.dump(2) + "\n");
    }
    std::cout << summary.dump(2) << "\n";
    return 0;
}

int cmd_compare(const std::string& config_path, unsigned num_seeds, const std::string& out) {
    RunConfig config = load_or_default(config_path);
    if (!out.empty()) config.out_dir = out;
    if (num_seeds > 0) {
        const std::uint64_t base = config.seeds.front();
        config.seeds.clear();
        for (unsigned i = 0; i < num_seeds; ++i) config.seeds.push_back(base + i);
    }
    const ExperimentResult result = run_experiment(config);
    std::cout << "wrote " << result.summary_path << "\n";

    const auto summary = nlohmann::json::parse(result.summary_json);
    const auto& table = summary["table"];
    std::cout << "\n                      avg_cost   ess_benefit   ac_regret   eb_regret\n";
    const auto print_row = [&](const char* label, const nlohmann::json& row) {
        std::printf("%-20s %9.2f   %11.2f   %9.2f   %9.2f\n", label,
                    row[0].get<double>(), row[1].get<double>(), row[2].get<double>(),
                    row[3].get<double>());
    };
    print_row("without delayed", table["without_delayed_update"]);
    print_row("with delayed", table["with_delayed_update"]);
    print_row("dp optimal", table["dp_optimal"]);
    print_row("difference (%)", table["difference_pct"]);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"grid-connected microgrid operation policies: tabular Q-learning with "
                 "retroactive charge credit, exact DP baseline, evaluation harness"};
    app.require_subcommand(1);

    std::uint64_t seed = 7;
    std::size_t hours = 720;
    std::string out, config_path, qtable_path, start;
    unsigned num_seeds = 0;

    auto* gen = app.add_subcommand("gen-data", "generate a synthetic hourly trace CSV");
    gen->add_option("--seed", seed, "generator seed")->capture_default_str();
    gen->add_option("--hours", hours, "number of hourly records")->capture_default_str();
    gen->add_option("--out", out, "output CSV path")->required();
    gen->add_option("--start", start, "first timestamp (ISO-8601, default 2018-03-01T00:00:00)");

    auto* train_cmd = app.add_subcommand("train", "train the delayed-update policy");
    train_cmd->add_option("--config", config_path, "run configuration JSON");
    train_cmd->add_option("--out", out, "output directory (overrides config)");

    auto* dp_cmd = app.add_subcommand("dp", "solve the exact baseline on the validation window");
    dp_cmd->add_option("--config", config_path, "run configuration JSON");
    dp_cmd->add_option("--out", out, "output directory (overrides config)");

    auto* eval_cmd = app.add_subcommand("eval", "evaluate a saved Q-table");
    eval_cmd->add_option("--qtable", qtable_path, "saved Q-table path")->required();
    eval_cmd->add_option("--config", config_path, "run configuration JSON");
    eval_cmd->add_option("--out", out, "optional output directory");

    auto* compare_cmd = app.add_subcommand(
        "compare", "delayed vs vanilla vs DP over multiple seeds");
    compare_cmd->add_option("--config", config_path, "run configuration JSON");
    compare_cmd->add_option("--seeds", num_seeds, "run this many consecutive seeds");
    compare_cmd->add_option("--out", out, "output directory (overrides config)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_gen_data(seed, hours, out, start);
        if (train_cmd->parsed()) return cmd_train(config_path, out);
        if (dp_cmd->parsed()) return cmd_dp(config_path, out);
        if (eval_cmd->parsed()) return cmd_eval(qtable_path, config_path, out);
        if (compare_cmd->parsed()) return cmd_compare(config_path, num_seeds, out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
