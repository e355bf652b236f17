#pragma once

#include <vector>

#include "liftdp/dynamics.hpp"
#include "liftdp/measure.hpp"
#include "liftdp/transport.hpp"

namespace liftdp {

/// Ordered tuple of per-sample measures evolving under one shared action.
struct EnsembleState {
    std::vector<DiscreteMeasure> measures;

    std::size_t size() const { return measures.size(); }
    bool operator==(const EnsembleState&) const = default;
};

using ActionSequence = std::vector<WeightAction>;

/// Image measure of one stage: every atom moves through the single-particle
/// update against mu itself, keeping its mass. Coincident images are merged
/// bitwise, never by tolerance, so mass bookkeeping stays exact.
DiscreteMeasure push_forward(const DiscreteMeasure& mu, const WeightAction& u,
                             const SystemConfig& cfg);

/// Componentwise push_forward with the shared action.
EnsembleState ensemble_step(const EnsembleState& e, const WeightAction& u,
                            const SystemConfig& cfg);

/// Iterates ensemble_step over the whole action sequence.
EnsembleState rollout(const EnsembleState& initial, const ActionSequence& seq,
                      const SystemConfig& cfg);

/// Repeated push_forward of a single measure.
DiscreteMeasure rollout_measure(const DiscreteMeasure& mu, const ActionSequence& seq,
                                const SystemConfig& cfg);

/// Mean squared transport distance between terminal and target measures.
double terminal_cost(const EnsembleState& terminal, const EnsembleState& targets, double lambda);

/// Lifts a dataset of sequence samples to (input, target) measure tuples.
EnsembleState lift_inputs(const std::vector<SequenceSample>& samples);
EnsembleState lift_labels(const std::vector<SequenceSample>& samples);

} // namespace liftdp
