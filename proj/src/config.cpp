#include "liftdp/config.hpp"

#include <fstream>
#include <set>

#include "liftdp/errors.hpp"

namespace liftdp {

namespace {

using nlohmann::ordered_json;

void reject_unknown_keys(const ordered_json& j, const std::set<std::string>& known,
                         const std::string& where) {
    for (const auto& [key, value] : j.items()) {
        if (!known.contains(key))
            throw ValidationError("unknown key '" + key + "' in " + where);
    }
}

template <typename T>
T get_or(const ordered_json& j, const std::string& key, const T& fallback) {
    if (!j.contains(key)) return fallback;
    return j.at(key).get<T>();
}

Box parse_box(const ordered_json& j) {
    Box box;
    for (const auto& bounds : j) {
        if (!bounds.is_array() || bounds.size() != 2)
            throw ValidationError("state_box entries must be [lo, hi] pairs");
        box.bounds.push_back({bounds[0].get<double>(), bounds[1].get<double>()});
    }
    return box;
}

ordered_json box_to_json(const Box& box) {
    ordered_json j = ordered_json::array();
    for (const auto& b : box.bounds) j.push_back({b[0], b[1]});
    return j;
}

} // namespace

void RunConfig::validate() const {
    system.validate();
    if (quant.state_level < 1) throw ValidationError("state_level must be >= 1");
    if (quant.measure_level < 1) throw ValidationError("measure_level must be >= 1");
    if (quant.actions.mode != "sample" && quant.actions.mode != "grid")
        throw ValidationError("action net mode must be 'sample' or 'grid'");
    if (quant.actions.mode == "sample" && quant.actions.size < 1)
        throw ValidationError("sampled action net needs size >= 1");
    if (quant.actions.mode == "grid" && quant.actions.resolution < 1)
        throw ValidationError("grid action net needs resolution >= 1");
    if (dataset.train_size < 1 || dataset.test_size < 1)
        throw ValidationError("dataset sizes must be >= 1");
    if (!(dataset.target_beta > 0.0)) throw ValidationError("target_beta must be positive");
    if (robustness.sizes.empty() || robustness.seeds.empty())
        throw ValidationError("robustness study needs sizes and seeds");
    for (std::size_t i = 0; i + 1 < robustness.sizes.size(); ++i) {
        if (robustness.sizes[i] >= robustness.sizes[i + 1])
            throw ValidationError("robustness sizes must be strictly increasing");
    }
    if (robustness.proxy_size < 1) throw ValidationError("proxy_size must be >= 1");
    if (robustness.net_size < 1) throw ValidationError("robustness net_size must be >= 1");
    if (max_states < 1) throw ValidationError("max_states must be >= 1");
    if (out_dir.empty()) throw ValidationError("output dir must not be empty");
}

nlohmann::ordered_json RunConfig::to_json() const {
    ordered_json j;
    j["system"] = {
        {"particle_count", system.particle_count},
        {"feature_dim", system.d},
        {"hidden_dim", system.d1},
        {"attention_dim", system.d2},
        {"beta", system.beta},
        {"horizon", system.horizon},
        {"activation", system.activation},
        {"state_box", box_to_json(system.state_box)},
        {"action_bound", system.action_bound},
        {"lambda", system.lambda},
    };
    j["quantization"] = {
        {"state_level", quant.state_level},
        {"measure_level", quant.measure_level},
        {"add_data_to_grid", quant.add_data_to_grid},
        {"actions",
         {{"mode", quant.actions.mode},
          {"size", quant.actions.size},
          {"seed", quant.actions.seed},
          {"resolution", quant.actions.resolution}}},
    };
    j["dataset"] = {
        {"train_size", dataset.train_size},
        {"test_size", dataset.test_size},
        {"seed", dataset.seed},
        {"target_beta", dataset.target_beta},
    };
    j["robustness"] = {
        {"sizes", robustness.sizes},
        {"seeds", robustness.seeds},
        {"proxy_size", robustness.proxy_size},
        {"proxy_seed", robustness.proxy_seed},
        {"net_size", robustness.net_size},
    };
    j["budget"] = {{"max_states", max_states}};
    j["output"] = {{"dir", out_dir}};
    return j;
}

RunConfig RunConfig::from_json(const ordered_json& j) {
    reject_unknown_keys(
        j, {"system", "quantization", "dataset", "robustness", "budget", "output"}, "config");
    if (!j.contains("system")) throw ValidationError("config is missing the 'system' section");
    if (!j.contains("quantization"))
        throw ValidationError("config is missing the 'quantization' section");

    RunConfig cfg;

    const auto& sys = j.at("system");
    reject_unknown_keys(sys,
                        {"particle_count", "feature_dim", "hidden_dim", "attention_dim", "beta",
                         "horizon", "activation", "state_box", "action_bound", "lambda"},
                        "system");
    cfg.system.particle_count = sys.at("particle_count").get<int>();
    cfg.system.d = sys.at("feature_dim").get<int>();
    cfg.system.d1 = get_or(sys, "hidden_dim", cfg.system.d);
    cfg.system.d2 = get_or(sys, "attention_dim", cfg.system.d);
    cfg.system.beta = sys.at("beta").get<double>();
    cfg.system.horizon = sys.at("horizon").get<int>();
    cfg.system.activation = get_or<std::string>(sys, "activation", "relu");
    cfg.system.state_box = parse_box(sys.at("state_box"));
    cfg.system.action_bound = get_or(sys, "action_bound", 1.0);
    // Default positional weight: twice the threshold below which transport
    // plans may trade positions for feature savings.
    const double diam = cfg.system.state_box.diameter();
    cfg.system.lambda =
        get_or(sys, "lambda", static_cast<double>(cfg.system.particle_count) * diam * diam);

    const auto& quant = j.at("quantization");
    reject_unknown_keys(quant, {"state_level", "measure_level", "add_data_to_grid", "actions"},
                        "quantization");
    cfg.quant.state_level = quant.at("state_level").get<int>();
    cfg.quant.measure_level = quant.at("measure_level").get<int>();
    cfg.quant.add_data_to_grid = get_or(quant, "add_data_to_grid", false);
    if (quant.contains("actions")) {
        const auto& actions = quant.at("actions");
        reject_unknown_keys(actions, {"mode", "size", "seed", "resolution"}, "actions");
        cfg.quant.actions.mode = get_or<std::string>(actions, "mode", "sample");
        cfg.quant.actions.size = get_or<std::size_t>(actions, "size", 10);
        cfg.quant.actions.seed = get_or<std::uint64_t>(actions, "seed", 7);
        cfg.quant.actions.resolution = get_or(actions, "resolution", 1);
    }

    if (j.contains("dataset")) {
        const auto& ds = j.at("dataset");
        reject_unknown_keys(ds, {"train_size", "test_size", "seed", "target_beta"}, "dataset");
        cfg.dataset.train_size = get_or(ds, "train_size", 35);
        cfg.dataset.test_size = get_or(ds, "test_size", 15);
        cfg.dataset.seed = get_or<std::uint64_t>(ds, "seed", 1);
        cfg.dataset.target_beta = get_or(ds, "target_beta", 0.3);
    }

    if (j.contains("robustness")) {
        const auto& rb = j.at("robustness");
        reject_unknown_keys(rb, {"sizes", "seeds", "proxy_size", "proxy_seed", "net_size"},
                            "robustness");
        cfg.robustness.sizes = get_or(rb, "sizes", cfg.robustness.sizes);
        cfg.robustness.seeds = get_or(rb, "seeds", cfg.robustness.seeds);
        cfg.robustness.proxy_size = get_or(rb, "proxy_size", cfg.robustness.proxy_size);
        cfg.robustness.proxy_seed = get_or(rb, "proxy_seed", cfg.robustness.proxy_seed);
        cfg.robustness.net_size = get_or(rb, "net_size", cfg.robustness.net_size);
    }

    if (j.contains("budget")) {
        const auto& budget = j.at("budget");
        reject_unknown_keys(budget, {"max_states"}, "budget");
        cfg.max_states = get_or<std::size_t>(budget, "max_states", cfg.max_states);
    }
    if (j.contains("output")) {
        const auto& output = j.at("output");
        reject_unknown_keys(output, {"dir"}, "output");
        cfg.out_dir = get_or<std::string>(output, "dir", cfg.out_dir);
    }

    cfg.validate();
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    ordered_json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("config parse error in '" + path + "': " + e.what());
    }
    return RunConfig::from_json(j);
}

RunConfig default_experiment_config() {
    RunConfig cfg;
    cfg.system.particle_count = 4;
    cfg.system.d = 2;
    cfg.system.d1 = 2;
    cfg.system.d2 = 2;
    cfg.system.beta = 0.5;
    cfg.system.horizon = 2;
    cfg.system.activation = "relu";
    cfg.system.state_box.bounds = {{-1.0, 1.0}, {-1.0, 1.0}};
    cfg.system.action_bound = 1.0;
    cfg.system.lambda = 32.0;
    cfg.quant.state_level = 10;
    cfg.quant.measure_level = 20;
    cfg.quant.actions.mode = "sample";
    cfg.quant.actions.size = 10;
    cfg.quant.actions.seed = 7;
    cfg.dataset.train_size = 35;
    cfg.dataset.test_size = 15;
    cfg.dataset.seed = 1;
    cfg.dataset.target_beta = 0.3;
    cfg.validate();
    return cfg;
}

} // namespace liftdp
