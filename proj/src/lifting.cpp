#include "liftdp/lifting.hpp"

#include "liftdp/errors.hpp"

namespace liftdp {

DiscreteMeasure push_forward(const DiscreteMeasure& mu, const WeightAction& u,
                             const SystemConfig& cfg) {
    std::vector<ParticleState> images;
    images.reserve(mu.size());
    for (const auto& atom : mu.atoms) images.push_back(step_particle(atom, u, mu, cfg));
    return DiscreteMeasure::from_atoms(std::move(images), mu.mass_num, mu.mass_den);
}

EnsembleState ensemble_step(const EnsembleState& e, const WeightAction& u,
                            const SystemConfig& cfg) {
    EnsembleState next;
    next.measures.reserve(e.size());
    for (const auto& mu : e.measures) next.measures.push_back(push_forward(mu, u, cfg));
    return next;
}

EnsembleState rollout(const EnsembleState& initial, const ActionSequence& seq,
                      const SystemConfig& cfg) {
    EnsembleState state = initial;
    for (const auto& u : seq) state = ensemble_step(state, u, cfg);
    return state;
}

DiscreteMeasure rollout_measure(const DiscreteMeasure& mu, const ActionSequence& seq,
                                const SystemConfig& cfg) {
    DiscreteMeasure state = mu;
    for (const auto& u : seq) state = push_forward(state, u, cfg);
    return state;
}

double terminal_cost(const EnsembleState& terminal, const EnsembleState& targets, double lambda) {
    if (terminal.size() != targets.size())
        throw ValidationError("terminal_cost: sample counts differ");
    if (terminal.size() == 0) throw ValidationError("terminal_cost: empty ensemble");
    double total = 0.0;
    for (std::size_t k = 0; k < terminal.size(); ++k) {
        total += wasserstein2_sq(terminal.measures[k], targets.measures[k], lambda).value;
    }
    return total / static_cast<double>(terminal.size());
}

EnsembleState lift_inputs(const std::vector<SequenceSample>& samples) {
    EnsembleState e;
    e.measures.reserve(samples.size());
    for (const auto& s : samples) e.measures.push_back(lift_sequence(s.inputs));
    return e;
}

EnsembleState lift_labels(const std::vector<SequenceSample>& samples) {
    EnsembleState e;
    e.measures.reserve(samples.size());
    for (const auto& s : samples) e.measures.push_back(lift_sequence(s.labels));
    return e;
}

} // namespace liftdp
