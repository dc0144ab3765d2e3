#include "microgrid/config.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace microgrid {

using nlohmann::json;

void RunConfig::validate() const {
    params.validate();
    hyperparams.validate();
    if (price_scale <= 0.0) throw std::invalid_argument("price_scale must be positive");
    if (validation_hours < 1) throw std::invalid_argument("validation_hours must be >= 1");
    if (seeds.empty()) throw std::invalid_argument("seeds must be non-empty");
    if (trace_path.empty() && synth.hours < validation_hours + 2)
        throw std::invalid_argument("synthetic horizon too short for the validation split");
}

namespace {

json params_to_json(const MicrogridParams& p) {
    return {{"dt", p.dt},
            {"c_dg", p.c_dg},
            {"c_dr", p.c_dr},
            {"c_b", p.c_b},
            {"p_dg_max", p.p_dg_max},
            {"p_dg_min", p.p_dg_min},
            {"ramp", p.ramp},
            {"ess_power_cap", p.ess_power_cap},
            {"ess_storage_cap", p.ess_storage_cap},
            {"dr_rate", p.dr_rate},
            {"ess_efficiency", p.ess_efficiency},
            {"zero_reward_on_degenerate_baseline", p.zero_reward_on_degenerate_baseline}};
}

void params_from_json(const json& j, MicrogridParams& p) {
    p.dt = j.value("dt", p.dt);
    p.c_dg = j.value("c_dg", p.c_dg);
    p.c_dr = j.value("c_dr", p.c_dr);
    p.c_b = j.value("c_b", p.c_b);
    p.p_dg_max = j.value("p_dg_max", p.p_dg_max);
    p.p_dg_min = j.value("p_dg_min", p.p_dg_min);
    p.ramp = j.value("ramp", p.ramp);
    p.ess_power_cap = j.value("ess_power_cap", p.ess_power_cap);
    p.ess_storage_cap = j.value("ess_storage_cap", p.ess_storage_cap);
    p.dr_rate = j.value("dr_rate", p.dr_rate);
    p.ess_efficiency = j.value("ess_efficiency", p.ess_efficiency);
    p.zero_reward_on_degenerate_baseline = j.value("zero_reward_on_degenerate_baseline",
                                                   p.zero_reward_on_degenerate_baseline);
}

json hyper_to_json(const Hyperparams& h) {
    return {{"episodes", h.episodes},
            {"learning_rate", h.learning_rate},
            {"adaptation_rate", h.adaptation_rate},
            {"discount", h.discount},
            {"eps_start", h.eps_start},
            {"eps_end", h.eps_end},
            {"eps_decay_fraction", h.eps_decay_fraction}};
}

void hyper_from_json(const json& j, Hyperparams& h) {
    h.episodes = j.value("episodes", h.episodes);
    h.learning_rate = j.value("learning_rate", h.learning_rate);
    h.adaptation_rate = j.value("adaptation_rate", h.adaptation_rate);
    h.discount = j.value("discount", h.discount);
    h.eps_start = j.value("eps_start", h.eps_start);
    h.eps_end = j.value("eps_end", h.eps_end);
    h.eps_decay_fraction = j.value("eps_decay_fraction", h.eps_decay_fraction);
}

}  // namespace

std::string config_to_json(const RunConfig& config, bool include_out_dir) {
    json j;
    j["params"] = params_to_json(config.params);
    j["bins"] = {{"pv", config.pv_bins},
                 {"demand", config.demand_bins},
                 {"price", config.price_bins}};
    j["hyperparams"] = hyper_to_json(config.hyperparams);
    j["price_scale"] = config.price_scale;
    j["validation_hours"] = config.validation_hours;
    j["seeds"] = config.seeds;
    j["trace_path"] = config.trace_path;
    j["synth"] = {{"seed", config.synth.seed}, {"hours", config.synth.hours}};
    if (include_out_dir) j["out_dir"] = config.out_dir;
    return j.dump(2);
}

RunConfig config_from_json(const std::string& text) {
    const json j = json::parse(text);
    RunConfig config;
    if (j.contains("params")) params_from_json(j.at("params"), config.params);
    if (j.contains("bins")) {
        const auto& bins = j.at("bins");
        config.pv_bins = bins.value("pv", config.pv_bins);
        config.demand_bins = bins.value("demand", config.demand_bins);
        config.price_bins = bins.value("price", config.price_bins);
    }
    if (j.contains("hyperparams")) hyper_from_json(j.at("hyperparams"), config.hyperparams);
    config.price_scale = j.value("price_scale", config.price_scale);
    config.validation_hours = j.value("validation_hours", config.validation_hours);
    config.seeds = j.value("seeds", config.seeds);
    config.trace_path = j.value("trace_path", config.trace_path);
    if (j.contains("synth")) {
        config.synth.seed = j.at("synth").value("seed", config.synth.seed);
        config.synth.hours = j.at("synth").value("hours", config.synth.hours);
    }
    config.out_dir = j.value("out_dir", config.out_dir);
    config.validate();
    return config;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return config_from_json(text);
}

void save_config(const RunConfig& config, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << config_to_json(config) << "\n";
}

}  // namespace microgrid
