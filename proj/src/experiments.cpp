#include "liftdp/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "liftdp/dynamics.hpp"
#include "liftdp/errors.hpp"
#include "liftdp/rng.hpp"

namespace liftdp {

std::vector<Vec> target_map(const std::vector<Vec>& inputs, double target_beta) {
    std::vector<Vec> out;
    out.reserve(inputs.size());
    for (const auto& x : inputs) {
        Vec logits(inputs.size());
        for (std::size_t j = 0; j < inputs.size(); ++j) logits[j] = target_beta * dot(x, inputs[j]);
        const Vec weights = softmax_masses(Vec(inputs.size(), 1.0), logits);
        Vec y(x.size(), 0.0);
        for (std::size_t j = 0; j < inputs.size(); ++j) {
            for (std::size_t i = 0; i < y.size(); ++i) y[i] += weights[j] * inputs[j][i];
        }
        out.push_back(std::move(y));
    }
    return out;
}

namespace {

SequenceSample draw_sample(Rng& rng, const SystemConfig& cfg, double target_beta) {
    SequenceSample sample;
    sample.inputs.reserve(static_cast<std::size_t>(cfg.particle_count));
    for (int i = 0; i < cfg.particle_count; ++i) {
        Vec x(static_cast<std::size_t>(cfg.d));
        for (int axis = 0; axis < cfg.d; ++axis) {
            x[static_cast<std::size_t>(axis)] = rng.uniform(
                cfg.state_box.bounds[static_cast<std::size_t>(axis)][0],
                cfg.state_box.bounds[static_cast<std::size_t>(axis)][1]);
        }
        sample.inputs.push_back(std::move(x));
    }
    sample.labels = target_map(sample.inputs, target_beta);
    return sample;
}

std::vector<ActionNet> per_stage_nets(const RunConfig& cfg, std::size_t net_size_override) {
    ActionNet net;
    if (cfg.quant.actions.mode == "grid") {
        net = build_action_net_grid(cfg.system, cfg.quant.actions.resolution);
    } else {
        const std::size_t size =
            net_size_override > 0 ? net_size_override : cfg.quant.actions.size;
        net = build_action_net_sampled(cfg.system, size, cfg.quant.actions.seed);
    }
    return std::vector<ActionNet>(static_cast<std::size_t>(cfg.system.horizon), net);
}

StateGrid grid_for(const RunConfig& cfg, const std::vector<SequenceSample>& samples) {
    std::vector<Vec> extras;
    if (cfg.quant.add_data_to_grid) {
        for (const auto& s : samples) {
            extras.insert(extras.end(), s.inputs.begin(), s.inputs.end());
            extras.insert(extras.end(), s.labels.begin(), s.labels.end());
        }
    }
    return build_state_grid(cfg.system.state_box, cfg.quant.state_level,
                            cfg.system.particle_count, extras);
}

} // namespace

Dataset generate_dataset(const DatasetSpec& spec, const SystemConfig& cfg) {
    Rng rng(spec.seed);
    Dataset data;
    data.train.reserve(static_cast<std::size_t>(spec.train_size));
    data.test.reserve(static_cast<std::size_t>(spec.test_size));
    for (int k = 0; k < spec.train_size; ++k)
        data.train.push_back(draw_sample(rng, cfg, spec.target_beta));
    for (int k = 0; k < spec.test_size; ++k)
        data.test.push_back(draw_sample(rng, cfg, spec.target_beta));
    return data;
}

std::vector<SequenceSample> draw_samples(std::size_t count, std::uint64_t seed,
                                         const SystemConfig& cfg, double target_beta) {
    Rng rng(seed);
    std::vector<SequenceSample> samples;
    samples.reserve(count);
    for (std::size_t k = 0; k < count; ++k) samples.push_back(draw_sample(rng, cfg, target_beta));
    return samples;
}

TrainOutcome train_policy(const RunConfig& cfg, const std::vector<SequenceSample>& samples,
                          std::size_t net_size_override) {
    if (samples.empty()) throw ValidationError("training needs at least one sample");
    for (const auto& s : samples) s.validate(cfg.system);

    const auto start = std::chrono::steady_clock::now();
    const StateGrid grid = grid_for(cfg, samples);
    const auto nets = per_stage_nets(cfg, net_size_override);

    const QuantizedEnsemble initial =
        quantize_ensemble(lift_inputs(samples), grid, cfg.quant.measure_level);
    const QuantizedEnsemble targets =
        quantize_ensemble(lift_labels(samples), grid, cfg.quant.measure_level);

    const ReachableSets reach =
        expand_reachable(initial, nets, grid, cfg.system, cfg.max_states);
    const ClosedLoopPolicy closed = backward_induction(reach, targets, cfg.system.lambda, grid);

    TrainOutcome outcome;
    outcome.policy = extract_open_loop(closed, reach, nets);
    outcome.state_counts.reserve(reach.states.size());
    for (const auto& stage : reach.states) outcome.state_counts.push_back(stage.size());
    outcome.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return outcome;
}

std::vector<SweepRow> run_training_sweep(const RunConfig& cfg, const Dataset& data,
                                         const std::vector<std::size_t>& levels) {
    if (cfg.quant.actions.mode != "sample")
        throw ValidationError("the training sweep needs sampled action nets");
    std::vector<std::size_t> sorted_levels = levels;
    std::sort(sorted_levels.begin(), sorted_levels.end());
    if (!sorted_levels.empty() && sorted_levels.front() == 0)
        throw ValidationError("sweep levels must be positive");

    const EnsembleState test_inputs = lift_inputs(data.test);
    const EnsembleState test_targets = lift_labels(data.test);
    const StateGrid grid = grid_for(cfg, data.train);

    std::vector<SweepRow> rows;
    rows.reserve(sorted_levels.size());
    for (const std::size_t level : sorted_levels) {
        TrainOutcome outcome;
        try {
            outcome = train_policy(cfg, data.train, level);
        } catch (const BudgetError& e) {
            throw BudgetError("sweep level " + std::to_string(level) + ": " + e.what());
        }
        SweepRow row;
        row.level = level;
        row.train_error = outcome.policy.value;
        // Deploying the fixed weights on unseen data uses the exact flow.
        row.test_error = evaluate_sequence(test_inputs, test_targets, outcome.policy.actions,
                                           ModelKind::Exact, grid, cfg.quant.measure_level,
                                           cfg.system.lambda, cfg.system);
        row.wall_seconds = outcome.wall_seconds;
        row.state_count = std::accumulate(outcome.state_counts.begin(),
                                          outcome.state_counts.end(), std::size_t{0});
        rows.push_back(row);
    }
    return rows;
}

void DoubleLiftedDistribution::validate() const {
    if (inputs.empty() || inputs.size() != targets.size() || inputs.size() != weight_num.size())
        throw ValidationError("double-lifted distribution has inconsistent sizes");
    if (weight_den <= 0) throw ValidationError("weight denominator must be positive");
    long long total = 0;
    for (const long long w : weight_num) {
        if (w < 0) throw ValidationError("negative pair weight");
        total += w;
    }
    if (total != weight_den) throw ValidationError("pair weights do not sum to one");
}

DoubleLiftedDistribution DoubleLiftedDistribution::uniform(
    const std::vector<SequenceSample>& samples) {
    DoubleLiftedDistribution p;
    p.weight_den = static_cast<long long>(samples.size());
    for (const auto& s : samples) {
        p.inputs.push_back(lift_sequence(s.inputs));
        p.targets.push_back(lift_sequence(s.labels));
        p.weight_num.push_back(1);
    }
    return p;
}

double evaluate_double_lifted(const DoubleLiftedDistribution& p, const ActionSequence& seq,
                              double lambda, const SystemConfig& cfg) {
    p.validate();
    double total = 0.0;
    for (std::size_t k = 0; k < p.inputs.size(); ++k) {
        if (p.weight_num[k] == 0) continue;
        const DiscreteMeasure terminal = rollout_measure(p.inputs[k], seq, cfg);
        const double weight =
            static_cast<double>(p.weight_num[k]) / static_cast<double>(p.weight_den);
        total += weight * wasserstein2_sq(terminal, p.targets[k], lambda).value;
    }
    return total;
}

std::vector<RobustnessRow> robustness_study(const RunConfig& cfg) {
    const auto& rb = cfg.robustness;
    const auto proxy_samples = draw_samples(static_cast<std::size_t>(rb.proxy_size),
                                            rb.proxy_seed, cfg.system, cfg.dataset.target_beta);
    const auto proxy = DoubleLiftedDistribution::uniform(proxy_samples);

    std::vector<RobustnessRow> rows;
    rows.reserve(rb.seeds.size() * rb.sizes.size());
    for (const std::uint64_t seed : rb.seeds) {
        // One stream per seed: smaller datasets are prefixes of larger ones,
        // so growing the sample count refines the same empirical law.
        const auto pool =
            draw_samples(rb.sizes.back(), seed, cfg.system, cfg.dataset.target_beta);
        ActionSequence previous;
        for (const std::size_t size : rb.sizes) {
            const std::vector<SequenceSample> samples(pool.begin(),
                                                      pool.begin() + static_cast<long>(size));
            const TrainOutcome outcome = train_policy(cfg, samples, rb.net_size);
            RobustnessRow row;
            row.sample_count = size;
            row.seed = seed;
            row.value = evaluate_double_lifted(proxy, outcome.policy.actions, cfg.system.lambda,
                                               cfg.system);
            if (!previous.empty()) {
                double dist = 0.0;
                for (std::size_t t = 0; t < previous.size(); ++t) {
                    dist = std::max(dist, action_distance(previous[t], outcome.policy.actions[t]));
                }
                row.action_distance = dist;
            }
            previous = outcome.policy.actions;
            rows.push_back(row);
        }
    }

    double best = rows.front().value;
    for (const auto& row : rows) best = std::min(best, row.value);
    for (auto& row : rows) row.gap = row.value - best;
    return rows;
}

} // namespace liftdp
