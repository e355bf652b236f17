#include "liftdp/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>

#include "json.hpp"
#include "liftdp/dynamics.hpp"
#include "liftdp/errors.hpp"
#include "liftdp/experiments.hpp"
#include "liftdp/rng.hpp"
#include "liftdp/serialize.hpp"

namespace liftdp {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

RunConfig load_config_checked(const CommonOptions& opt) {
    if (opt.config_path.empty()) throw ValidationError("--config is required");
    RunConfig cfg = load_run_config(opt.config_path);
    if (!opt.out_dir.empty()) cfg.out_dir = opt.out_dir;
    if (opt.budget > 0) cfg.max_states = opt.budget;
    if (opt.seed_set) cfg.dataset.seed = opt.seed;
    return cfg;
}

std::string ensure_out_dir(const RunConfig& cfg) {
    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec);
    if (ec) throw IoError("cannot create output dir '" + cfg.out_dir + "': " + ec.message());
    return cfg.out_dir;
}

std::string join(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

Dataset dataset_for(const CommonOptions& opt, const RunConfig& cfg) {
    if (!opt.dataset_path.empty()) return load_dataset(opt.dataset_path, cfg.system);
    return generate_dataset(cfg.dataset, cfg.system);
}

double particle_mse_exact(const std::vector<SequenceSample>& samples, const ActionSequence& seq,
                          const SystemConfig& cfg) {
    double total = 0.0;
    for (const auto& sample : samples) {
        const auto terminal = forward_sequence(sample.inputs, seq, cfg);
        for (std::size_t i = 0; i < terminal.size(); ++i) {
            total += squared_distance(terminal[i].feature, sample.labels[i]);
        }
    }
    return total / (static_cast<double>(samples.size()) *
                    static_cast<double>(cfg.particle_count));
}

double particle_mse_quantized(const std::vector<SequenceSample>& samples,
                              const ActionSequence& seq, const SystemConfig& cfg,
                              const StateGrid& grid, int ell) {
    double total = 0.0;
    for (const auto& sample : samples) {
        QuantizedMeasure state = quantize_lifted(lift_sequence(sample.inputs), grid, ell);
        for (const auto& u : seq) state = quantized_step(state, u, grid, cfg);
        double sample_loss = 0.0;
        for (const auto& [idx, count] : state.counts) {
            const ParticleState atom = superstate(grid, idx);
            const auto pos = static_cast<std::size_t>(
                std::llround(atom.pe * static_cast<double>(cfg.particle_count)));
            const double weight =
                static_cast<double>(count) / static_cast<double>(state.ell);
            sample_loss += weight * squared_distance(atom.feature, sample.labels[pos - 1]);
        }
        total += sample_loss;
    }
    return total / static_cast<double>(samples.size());
}

StateGrid grid_from_policy(const PolicyDocument& doc, const Dataset& data) {
    std::vector<Vec> extras;
    if (doc.config.quant.add_data_to_grid) {
        for (const auto& s : data.train) {
            extras.insert(extras.end(), s.inputs.begin(), s.inputs.end());
            extras.insert(extras.end(), s.labels.begin(), s.labels.end());
        }
    }
    return build_state_grid(doc.config.system.state_box, doc.config.quant.state_level,
                            doc.config.system.particle_count, extras);
}

std::vector<std::size_t> default_levels() {
    return {10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
}

} // namespace

std::string cmd_generate_data(const CommonOptions& opt) {
    const RunConfig cfg = load_config_checked(opt);
    const std::string dir = ensure_out_dir(cfg);
    const Dataset data = generate_dataset(cfg.dataset, cfg.system);
    const std::string path = join(dir, "dataset.json");
    save_dataset(path, data, cfg);
    write_dataset_manifest(path, cfg);
    return path;
}

std::string cmd_train(const CommonOptions& opt) {
    const RunConfig cfg = load_config_checked(opt);
    const std::string dir = ensure_out_dir(cfg);
    const Dataset data = dataset_for(opt, cfg);

    const TrainOutcome outcome = train_policy(cfg, data.train);

    PolicyDocument doc;
    doc.config = cfg;
    doc.net_mode = cfg.quant.actions.mode;
    doc.net_seed = cfg.quant.actions.seed;
    doc.net_resolution = cfg.quant.actions.resolution;
    doc.net_size = cfg.quant.actions.mode == "sample" ? cfg.quant.actions.size : 0;
    doc.stages = outcome.policy.actions;
    doc.value = outcome.policy.value;
    doc.state_counts = outcome.state_counts;

    // Echo the quantized initial ensembles so the run can be replayed.
    const StateGrid grid = grid_from_policy(doc, data);
    for (const auto& sample : data.train) {
        doc.initial_counts.push_back(
            quantize_lifted(lift_sequence(sample.inputs), grid, cfg.quant.measure_level));
    }
    if (doc.net_mode == "grid") {
        doc.net_size = build_action_net_grid(cfg.system, cfg.quant.actions.resolution).size();
    }

    const std::string policy_path = join(dir, "policy.json");
    save_policy(policy_path, doc);

    ordered_json report;
    report["value"] = doc.value;
    report["state_counts"] = doc.state_counts;
    report["wall_seconds"] = outcome.wall_seconds;
    report["policy_sha256"] = sha256_hex(read_file(policy_path));
    write_file(join(dir, "train_report.json"), report.dump(2) + "\n");
    return policy_path;
}

std::string cmd_evaluate(const CommonOptions& opt) {
    if (opt.policy_path.empty()) throw ValidationError("--policy is required");
    const PolicyDocument doc = load_policy(opt.policy_path);
    RunConfig cfg = doc.config;
    if (!opt.out_dir.empty()) cfg.out_dir = opt.out_dir;
    const std::string dir = ensure_out_dir(cfg);

    Dataset data;
    if (!opt.dataset_path.empty()) {
        data = load_dataset(opt.dataset_path, cfg.system);
    } else {
        data = generate_dataset(cfg.dataset, cfg.system);
    }

    const ModelKind model =
        opt.model == "exact" ? ModelKind::Exact : model_from_name(opt.model);
    const StateGrid grid = grid_from_policy(doc, data);

    ordered_json metrics;
    metrics["model"] = opt.model;
    const std::pair<std::string, const std::vector<SequenceSample>*> splits[] = {
        {"train", &data.train}, {"test", &data.test}};
    for (const auto& [name, samples] : splits) {
        const EnsembleState inputs = lift_inputs(*samples);
        const EnsembleState targets = lift_labels(*samples);
        double particle = 0.0;
        if (model == ModelKind::Exact) {
            particle = particle_mse_exact(*samples, doc.stages, cfg.system);
        } else {
            particle = particle_mse_quantized(*samples, doc.stages, cfg.system, grid,
                                              cfg.quant.measure_level);
        }
        const double lifted =
            evaluate_sequence(inputs, targets, doc.stages, model, grid,
                              cfg.quant.measure_level, cfg.system.lambda, cfg.system);
        metrics[name] = {{"particle_mse", particle}, {"lifted_cost", lifted}};
    }

    const std::string path = join(dir, "metrics.json");
    write_file(path, metrics.dump(2) + "\n");
    return path;
}

std::string cmd_sweep(const CommonOptions& opt) {
    const RunConfig cfg = load_config_checked(opt);
    const std::string dir = ensure_out_dir(cfg);
    const Dataset data = dataset_for(opt, cfg);
    const auto levels = opt.levels.empty() ? default_levels() : opt.levels;

    const auto rows = run_training_sweep(cfg, data, levels);
    CsvWriter csv({"level", "train_error", "test_error", "wall_seconds", "state_count"});
    for (const auto& row : rows) {
        csv.add_row({CsvWriter::format(static_cast<unsigned long long>(row.level)),
                     CsvWriter::format(row.train_error), CsvWriter::format(row.test_error),
                     CsvWriter::format(row.wall_seconds),
                     CsvWriter::format(static_cast<unsigned long long>(row.state_count))});
    }
    const std::string path = join(dir, "sweep.csv");
    write_file(path, csv.str());
    return path;
}

std::string cmd_robustness(const CommonOptions& opt) {
    RunConfig cfg = load_config_checked(opt);
    if (!opt.sizes.empty()) cfg.robustness.sizes = opt.sizes;
    cfg.validate();
    const std::string dir = ensure_out_dir(cfg);

    const auto rows = robustness_study(cfg);
    CsvWriter csv({"sample_count", "seed", "value", "gap", "action_distance"});
    for (const auto& row : rows) {
        csv.add_row({CsvWriter::format(static_cast<unsigned long long>(row.sample_count)),
                     CsvWriter::format(static_cast<unsigned long long>(row.seed)),
                     CsvWriter::format(row.value), CsvWriter::format(row.gap),
                     CsvWriter::format(row.action_distance)});
    }
    const std::string path = join(dir, "robustness.csv");
    write_file(path, csv.str());
    return path;
}

std::string cmd_quantizer_bench(const CommonOptions& opt) {
    const RunConfig cfg = load_config_checked(opt);
    const std::string dir = ensure_out_dir(cfg);
    const StateGrid grid = build_state_grid(cfg.system.state_box, cfg.quant.state_level,
                                            cfg.system.particle_count);

    // Random measures on a small random support of grid superstates; support
    // masses are exact so the transport distances are well-defined.
    const std::size_t support_size =
        std::min<std::size_t>(32, grid.superstate_count());
    constexpr int kSamplesPerLevel = 25;
    constexpr long long kMassDenominator = 1 << 20;
    Rng rng(opt.seed_set ? opt.seed : cfg.dataset.seed);

    CsvWriter csv({"ell", "sample", "support", "euclidean_error", "euclidean_bound", "w2_error"});
    for (const int ell : {4, 8, 16, 32, 64, 128}) {
        for (int s = 0; s < kSamplesPerLevel; ++s) {
            std::vector<std::uint32_t> support;
            while (support.size() < support_size) {
                const auto idx = static_cast<std::uint32_t>(
                    rng.raw() % grid.superstate_count());
                if (std::find(support.begin(), support.end(), idx) == support.end())
                    support.push_back(idx);
            }
            std::sort(support.begin(), support.end());

            std::vector<double> raw(support_size);
            for (auto& v : raw) v = rng.exponential();
            double sum = 0.0;
            for (const double v : raw) sum += v;
            for (auto& v : raw) v /= sum;
            // Snap to exact rationals so the measure-level distance is exact.
            const auto mass = quantize_simplex(raw, kMassDenominator);
            std::vector<double> probs(support_size);
            for (std::size_t i = 0; i < support_size; ++i) {
                probs[i] = static_cast<double>(mass[i]) / static_cast<double>(kMassDenominator);
            }

            const auto counts = quantize_simplex(probs, ell);
            double euclidean = 0.0;
            for (std::size_t i = 0; i < support_size; ++i) {
                const double diff =
                    probs[i] - static_cast<double>(counts[i]) / static_cast<double>(ell);
                euclidean += diff * diff;
            }
            euclidean = std::sqrt(euclidean);

            std::vector<ParticleState> atoms;
            atoms.reserve(support_size);
            for (const auto idx : support) atoms.push_back(superstate(grid, idx));
            const DiscreteMeasure mu = DiscreteMeasure::from_atoms(atoms, mass, kMassDenominator);
            const DiscreteMeasure quantized = DiscreteMeasure::from_atoms(atoms, counts, ell);
            const double w2 = std::sqrt(wasserstein2_sq(mu, quantized, cfg.system.lambda).value);

            csv.add_row({CsvWriter::format(static_cast<unsigned long long>(ell)),
                         CsvWriter::format(static_cast<unsigned long long>(s)),
                         CsvWriter::format(static_cast<unsigned long long>(support_size)),
                         CsvWriter::format(euclidean),
                         CsvWriter::format(quantizer_error_bound(support_size, ell)),
                         CsvWriter::format(w2)});
        }
    }
    const std::string path = join(dir, "quantizer_bench.csv");
    write_file(path, csv.str());
    return path;
}

int run_command(const std::string& name, const CommonOptions& opt) {
    try {
        std::string result;
        if (name == "generate-data") {
            result = cmd_generate_data(opt);
        } else if (name == "train") {
            result = cmd_train(opt);
        } else if (name == "evaluate") {
            result = cmd_evaluate(opt);
        } else if (name == "sweep") {
            result = cmd_sweep(opt);
        } else if (name == "robustness") {
            result = cmd_robustness(opt);
        } else if (name == "quantizer-bench") {
            result = cmd_quantizer_bench(opt);
        } else {
            std::cerr << "unknown command '" << name << "'\n";
            return kValidation;
        }
        std::cout << result << "\n";
        return kOk;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kValidation;
    } catch (const BudgetError& e) {
        std::cerr << "budget error: " << e.what() << "\n";
        return kBudget;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace liftdp
