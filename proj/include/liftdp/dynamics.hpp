#pragma once

#include <utility>
#include <vector>

#include "liftdp/measure.hpp"
#include "liftdp/types.hpp"

namespace liftdp {

/// Mass-weighted softmax: p_a proportional to masses[a] * exp(logits[a]).
/// The maximum logit is subtracted before exponentiation so large attention
/// scores cannot overflow.
Vec softmax_masses(const Vec& masses, const Vec& logits);

/// Attention scores of a query feature x against weighted atoms, at
/// temperature beta: softmax over beta * <Q x, K z_a> weighted by the atom
/// masses. Entries are non-negative and sum to one.
Vec attention_weights(const Vec& x, const std::vector<std::pair<double, Vec>>& atoms,
                      const WeightAction& u, double beta);

/// Attention scores against the atoms of a measure (same computation as
/// above, evaluated in the measure's canonical atom order).
Vec attention_weights(const Vec& x, const DiscreteMeasure& mu, const WeightAction& u, double beta);

/// One-stage update of a single particle interacting with the population
/// measure mu: the positional tag is kept and the feature becomes
/// W sigma(A x + b) + sum_a att_a V z_a.
ParticleState step_particle(const ParticleState& x, const WeightAction& u,
                            const DiscreteMeasure& mu, const SystemConfig& cfg);

/// Full trajectory of an input sequence: positional tags are attached, then
/// every stage advances all particles against the ensemble's own empirical
/// measure. Returns actions.size() + 1 snapshots, the first being the tagged
/// inputs.
std::vector<std::vector<ParticleState>> forward_trajectory(const std::vector<Vec>& inputs,
                                                           const std::vector<WeightAction>& actions,
                                                           const SystemConfig& cfg);

/// Terminal snapshot of forward_trajectory.
std::vector<ParticleState> forward_sequence(const std::vector<Vec>& inputs,
                                            const std::vector<WeightAction>& actions,
                                            const SystemConfig& cfg);

} // namespace liftdp
