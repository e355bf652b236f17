#include <string>
#include <vector>

#include "CLI11.hpp"
#include "liftdp/cli.hpp"

namespace {

void add_common(CLI::App* cmd, liftdp::CommonOptions& opt, bool* seed_flag) {
    cmd->add_option("--config", opt.config_path, "Run configuration file (JSON)");
    cmd->add_option("--dataset", opt.dataset_path, "Dataset file produced by generate-data");
    cmd->add_option("--policy", opt.policy_path, "Trained policy file");
    cmd->add_option("--out-dir", opt.out_dir, "Output directory (overrides the config)");
    cmd->add_option("--levels", opt.levels, "Action levels for sweep")->delimiter(',');
    cmd->add_option("--sizes", opt.sizes, "Dataset sizes for robustness")->delimiter(',');
    cmd->add_option("--seed", opt.seed, "Seed override")->each([seed_flag](const std::string&) {
        *seed_flag = true;
    });
    cmd->add_option("--budget", opt.budget, "Reachable-state budget override");
    cmd->add_option("--model", opt.model, "Evaluation model: exact or quantized");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Measure-space training of a single-block attention network by exact "
                 "dynamic programming over quantized ensembles"};
    app.require_subcommand(1);

    liftdp::CommonOptions opt;
    bool seed_flag = false;

    add_common(app.add_subcommand("generate-data", "Generate a seeded dataset with a manifest"),
               opt, &seed_flag);
    add_common(app.add_subcommand("train", "Train open-loop weights by backward recursion"), opt,
               &seed_flag);
    add_common(app.add_subcommand("evaluate", "Evaluate a trained policy on a dataset"), opt,
               &seed_flag);
    add_common(app.add_subcommand("sweep", "Error/runtime sweep over nested action levels"), opt,
               &seed_flag);
    add_common(app.add_subcommand("robustness", "Value stability across dataset sizes"), opt,
               &seed_flag);
    add_common(app.add_subcommand("quantizer-bench",
                                  "Measured simplex-quantizer error versus the bound"),
               opt, &seed_flag);

    CLI11_PARSE(app, argc, argv);
    opt.seed_set = seed_flag;
    return liftdp::run_command(app.get_subcommands().front()->get_name(), opt);
}
