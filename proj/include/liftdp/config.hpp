#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "liftdp/types.hpp"

namespace liftdp {

/// How the finite action set is constructed.
struct ActionNetConfig {
    std::string mode = "sample"; // "sample" or "grid"
    std::size_t size = 10;       // sample mode: number of draws
    std::uint64_t seed = 7;      // sample mode: stream seed
    int resolution = 1;          // grid mode: lattice spacing is <= 1/resolution
};

struct QuantizationConfig {
    int state_level = 10;   // n
    int measure_level = 20; // ell
    bool add_data_to_grid = false;
    ActionNetConfig actions;
};

struct DatasetSpec {
    int train_size = 35;
    int test_size = 15;
    std::uint64_t seed = 1;
    double target_beta = 0.3;
};

struct RobustnessConfig {
    std::vector<std::size_t> sizes = {5, 15, 35};
    std::vector<std::uint64_t> seeds = {101, 102, 103, 104, 105};
    int proxy_size = 200;
    std::uint64_t proxy_seed = 9001;
    std::size_t net_size = 20;
};

/// Everything a run needs; loaded from a single JSON file with unknown keys
/// rejected and all defaults resolved at load time.
struct RunConfig {
    SystemConfig system;
    QuantizationConfig quant;
    DatasetSpec dataset;
    RobustnessConfig robustness;
    std::size_t max_states = 5000000;
    std::string out_dir = "out";

    void validate() const;
    nlohmann::ordered_json to_json() const;
    static RunConfig from_json(const nlohmann::ordered_json& j);
};

RunConfig load_run_config(const std::string& path);

/// Defaults for the bundled toy experiment (4 particles in [-1,1]^2, two
/// stages, sampled action nets).
RunConfig default_experiment_config();

} // namespace liftdp
