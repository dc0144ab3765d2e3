#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "microgrid/learner.hpp"
#include "microgrid/types.hpp"

namespace microgrid {

struct SynthSpec {
    std::uint64_t seed = 7;
    std::size_t hours = 720;  // 30 days
};

// Full description of a run. Defaults reproduce the reference system: the
// grid parameters, the observed exogenous bins and the tuned hyperparameters.
struct RunConfig {
    MicrogridParams params;
    std::vector<double> pv_bins{0, 10, 20, 30};
    std::vector<double> demand_bins{40, 50, 60, 70, 80, 90, 100, 110};
    std::vector<double> price_bins{70, 130, 140};
    Hyperparams hyperparams;
    double price_scale = 1.0;
    std::size_t validation_hours = 24;
    std::vector<std::uint64_t> seeds{1};
    std::string trace_path;  // empty: use the synthetic generator
    SynthSpec synth;
    std::string out_dir = "out";

    void validate() const;  // throws std::invalid_argument
};

// JSON round-trip; absent keys keep their defaults on load.
RunConfig load_config(const std::string& path);
void save_config(const RunConfig& config, const std::string& path);
std::string config_to_json(const RunConfig& config, bool include_out_dir = true);
RunConfig config_from_json(const std::string& text);

}  // namespace microgrid
