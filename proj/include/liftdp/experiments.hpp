#pragma once

#include <cstdint>
#include <vector>

#include "liftdp/config.hpp"
#include "liftdp/dp.hpp"
#include "liftdp/lifting.hpp"

namespace liftdp {

struct Dataset {
    std::vector<SequenceSample> train;
    std::vector<SequenceSample> test;
};

/// The toy target: plain self-attention with identity value map at the given
/// temperature. Each output is the attention-weighted average of all inputs.
std::vector<Vec> target_map(const std::vector<Vec>& inputs, double target_beta);

/// Inputs drawn i.i.d. uniformly from the state box under the spec's seed;
/// labels are the target map of the inputs. Train samples are drawn before
/// test samples from the same stream.
Dataset generate_dataset(const DatasetSpec& spec, const SystemConfig& cfg);

/// Samples drawn from an arbitrary point of the stream; used by the
/// robustness study for nested empirical datasets.
std::vector<SequenceSample> draw_samples(std::size_t count, std::uint64_t seed,
                                         const SystemConfig& cfg, double target_beta);

/// One full training run: quantize the data, expand the reachable ensembles
/// under the configured net, run the backward recursion and extract the open
/// loop. net_size_override > 0 replaces the configured sampled-net size.
struct TrainOutcome {
    OpenLoopPolicy policy;
    std::vector<std::size_t> state_counts; // per stage, 0..T
    double wall_seconds = 0.0;
};

TrainOutcome train_policy(const RunConfig& cfg, const std::vector<SequenceSample>& samples,
                          std::size_t net_size_override = 0);

struct SweepRow {
    std::size_t level = 0;
    double train_error = 0.0; // quantized-model optimum on the training data
    double test_error = 0.0;  // exact flow with the trained weights on test data
    double wall_seconds = 0.0;
    std::size_t state_count = 0;
};

/// Nested-net sweep: level M trains with the first M actions of the seeded
/// stream, so later levels extend earlier ones and the training error cannot
/// increase.
std::vector<SweepRow> run_training_sweep(const RunConfig& cfg, const Dataset& data,
                                         const std::vector<std::size_t>& levels);

/// Weighted pairs of (input measure, target measure) with exact rational
/// weights; the weighted mean squared transport cost of pushing each input
/// through the flow.
struct DoubleLiftedDistribution {
    std::vector<DiscreteMeasure> inputs;
    std::vector<DiscreteMeasure> targets;
    std::vector<long long> weight_num;
    long long weight_den = 1;

    void validate() const;
    static DoubleLiftedDistribution uniform(const std::vector<SequenceSample>& samples);
};

double evaluate_double_lifted(const DoubleLiftedDistribution& p, const ActionSequence& seq,
                              double lambda, const SystemConfig& cfg);

struct RobustnessRow {
    std::size_t sample_count = 0;
    std::uint64_t seed = 0;
    double value = 0.0;           // cost of the trained weights on the truth proxy
    double gap = 0.0;             // value minus the best value observed in the study
    double action_distance = 0.0; // distance to the previous level's weights (0 on the first)
};

/// Trains on nested empirical datasets of growing size per seed and scores
/// every trained weight sequence against a large held-out proxy for the
/// generating distribution.
std::vector<RobustnessRow> robustness_study(const RunConfig& cfg);

} // namespace liftdp
