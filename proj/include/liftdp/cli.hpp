#pragma once

#include <string>
#include <vector>

namespace liftdp {

/// Exit codes used by the command line tool.
enum ExitCode : int {
    kOk = 0,
    kValidation = 2,
    kBudget = 3,
    kIo = 4,
};

struct CommonOptions {
    std::string config_path;
    std::string dataset_path;
    std::string policy_path;
    std::string out_dir; // overrides the config's output dir when set
    std::vector<std::size_t> levels;
    std::vector<std::size_t> sizes;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::size_t budget = 0; // 0 keeps the config's budget
    std::string model = "quantized";
};

/// generate-data: writes <out>/dataset.json and its manifest.
std::string cmd_generate_data(const CommonOptions& opt);

/// train: writes <out>/policy.json and <out>/train_report.json; returns the
/// policy path.
std::string cmd_train(const CommonOptions& opt);

/// evaluate: writes <out>/metrics.json with particle-level and lifted costs;
/// returns the metrics path.
std::string cmd_evaluate(const CommonOptions& opt);

/// sweep: trains one level per entry of --levels with nested nets and writes
/// <out>/sweep.csv.
std::string cmd_sweep(const CommonOptions& opt);

/// robustness: trains on nested datasets per seed/size and writes
/// <out>/robustness.csv.
std::string cmd_robustness(const CommonOptions& opt);

/// quantizer-bench: writes <out>/quantizer_bench.csv comparing measured
/// simplex-quantizer errors against the worst-case bound.
std::string cmd_quantizer_bench(const CommonOptions& opt);

/// Maps an exception in flight to the documented exit codes.
int run_command(const std::string& name, const CommonOptions& opt);

} // namespace liftdp
