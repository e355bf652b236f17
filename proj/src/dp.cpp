#include "liftdp/dp.hpp"

#include <limits>
#include <sstream>
#include <unordered_map>

#include "liftdp/errors.hpp"

namespace liftdp {

EnsembleKey QuantizedEnsemble::key() const {
    EnsembleKey key;
    std::size_t words = 0;
    for (const auto& mu : measures) words += 1 + mu.counts.size();
    key.words.reserve(words);
    for (const auto& mu : measures) {
        key.words.push_back(static_cast<std::uint64_t>(mu.counts.size()));
        for (const auto& [idx, count] : mu.counts) {
            key.words.push_back((static_cast<std::uint64_t>(idx) << 32) | count);
        }
    }
    return key;
}

QuantizedEnsemble quantize_ensemble(const EnsembleState& e, const StateGrid& grid, int ell) {
    QuantizedEnsemble out;
    out.measures.reserve(e.size());
    for (const auto& mu : e.measures) out.measures.push_back(quantize_lifted(mu, grid, ell));
    return out;
}

QuantizedEnsemble quantized_ensemble_step(const QuantizedEnsemble& e, const WeightAction& u,
                                          const StateGrid& grid, const SystemConfig& cfg) {
    QuantizedEnsemble out;
    out.measures.reserve(e.measures.size());
    for (const auto& mu : e.measures) out.measures.push_back(quantized_step(mu, u, grid, cfg));
    return out;
}

double quantized_terminal_cost(const QuantizedEnsemble& terminal, const QuantizedEnsemble& targets,
                               double lambda, const StateGrid& grid) {
    if (terminal.measures.size() != targets.measures.size())
        throw ValidationError("quantized terminal cost: sample counts differ");
    if (terminal.measures.empty()) throw ValidationError("quantized terminal cost: empty ensemble");
    double total = 0.0;
    for (std::size_t k = 0; k < terminal.measures.size(); ++k) {
        total += wasserstein2_sq(to_measure(terminal.measures[k], grid),
                                 to_measure(targets.measures[k], grid), lambda)
                     .value;
    }
    return total / static_cast<double>(terminal.measures.size());
}

std::size_t ReachableSets::total_states() const {
    std::size_t total = 0;
    for (const auto& stage : states) total += stage.size();
    return total;
}

ReachableSets expand_reachable(const QuantizedEnsemble& initial, const std::vector<ActionNet>& nets,
                               const StateGrid& grid, const SystemConfig& cfg,
                               std::size_t state_budget) {
    ReachableSets reach;
    const int horizon = static_cast<int>(nets.size());
    reach.states.resize(static_cast<std::size_t>(horizon) + 1);
    reach.transitions.resize(static_cast<std::size_t>(horizon));
    reach.net_sizes.resize(static_cast<std::size_t>(horizon));
    reach.states[0].push_back(initial);

    std::size_t running_total = 1;
    for (int t = 0; t < horizon; ++t) {
        const auto& net = nets[static_cast<std::size_t>(t)];
        if (net.actions.empty()) throw ValidationError("empty action net at stage " + std::to_string(t));
        reach.net_sizes[static_cast<std::size_t>(t)] = net.size();
        auto& frontier = reach.states[static_cast<std::size_t>(t)];
        auto& next_states = reach.states[static_cast<std::size_t>(t) + 1];
        auto& table = reach.transitions[static_cast<std::size_t>(t)];
        table.assign(frontier.size() * net.size(), -1);

        std::unordered_map<EnsembleKey, std::int32_t, EnsembleKeyHash> seen;
        for (std::size_t s = 0; s < frontier.size(); ++s) {
            for (std::size_t a = 0; a < net.size(); ++a) {
                QuantizedEnsemble next =
                    quantized_ensemble_step(frontier[s], net.actions[a], grid, cfg);
                EnsembleKey key = next.key();
                auto [it, inserted] =
                    seen.try_emplace(std::move(key), static_cast<std::int32_t>(next_states.size()));
                if (inserted) {
                    next_states.push_back(std::move(next));
                    if (++running_total > state_budget) {
                        std::ostringstream msg;
                        msg << "reachable-state budget " << state_budget
                            << " exceeded while expanding stage " << (t + 1);
                        throw BudgetError(msg.str());
                    }
                }
                table[s * net.size() + a] = it->second;
            }
        }
    }
    return reach;
}

ClosedLoopPolicy backward_induction(const ReachableSets& reach, const QuantizedEnsemble& targets,
                                    double lambda, const StateGrid& grid) {
    const int horizon = reach.horizon();
    ClosedLoopPolicy policy;
    policy.value.resize(static_cast<std::size_t>(horizon) + 1);
    policy.action.resize(static_cast<std::size_t>(horizon));

    auto& terminal_values = policy.value[static_cast<std::size_t>(horizon)];
    const auto& terminal_states = reach.states[static_cast<std::size_t>(horizon)];
    terminal_values.resize(terminal_states.size());
    for (std::size_t i = 0; i < terminal_states.size(); ++i) {
        terminal_values[i] = quantized_terminal_cost(terminal_states[i], targets, lambda, grid);
    }

    for (int t = horizon - 1; t >= 0; --t) {
        const auto& stage_states = reach.states[static_cast<std::size_t>(t)];
        const auto& next_values = policy.value[static_cast<std::size_t>(t) + 1];
        const std::size_t net_size = reach.net_sizes[static_cast<std::size_t>(t)];
        auto& values = policy.value[static_cast<std::size_t>(t)];
        auto& actions = policy.action[static_cast<std::size_t>(t)];
        values.resize(stage_states.size());
        actions.resize(stage_states.size());
        for (std::size_t s = 0; s < stage_states.size(); ++s) {
            double best = std::numeric_limits<double>::infinity();
            std::int32_t best_action = -1;
            for (std::size_t a = 0; a < net_size; ++a) {
                const std::int32_t next = reach.next_state(t, s, a);
                if (next < 0)
                    throw std::logic_error("missing transition in reachable-set table");
                const double v = next_values[static_cast<std::size_t>(next)];
                if (v < best) {
                    best = v;
                    best_action = static_cast<std::int32_t>(a);
                }
            }
            values[s] = best;
            actions[s] = best_action;
        }
    }
    return policy;
}

OpenLoopPolicy extract_open_loop(const ClosedLoopPolicy& policy, const ReachableSets& reach,
                                 const std::vector<ActionNet>& nets) {
    OpenLoopPolicy open;
    open.initial_key = reach.states[0][0].key();
    open.value = policy.value[0][0];
    open.actions.reserve(static_cast<std::size_t>(reach.horizon()));
    std::int32_t state = 0;
    for (int t = 0; t < reach.horizon(); ++t) {
        const std::int32_t a = policy.action[static_cast<std::size_t>(t)][static_cast<std::size_t>(state)];
        open.actions.push_back(nets[static_cast<std::size_t>(t)].actions[static_cast<std::size_t>(a)]);
        open.net_ids.push_back(nets[static_cast<std::size_t>(t)].id());
        state = reach.next_state(t, static_cast<std::size_t>(state), static_cast<std::size_t>(a));
    }
    return open;
}

ModelKind model_from_name(const std::string& name) {
    if (name == "exact") return ModelKind::Exact;
    if (name == "state-quantized") return ModelKind::StateQuantized;
    if (name == "triply-quantized" || name == "quantized") return ModelKind::TriplyQuantized;
    throw ValidationError("unknown model '" + name + "'");
}

namespace {

DiscreteMeasure quantize_atoms(const DiscreteMeasure& mu, const StateGrid& grid) {
    std::vector<ParticleState> atoms;
    atoms.reserve(mu.size());
    for (const auto& atom : mu.atoms) atoms.push_back(quantize_state(atom, grid));
    return DiscreteMeasure::from_atoms(std::move(atoms), mu.mass_num, mu.mass_den);
}

} // namespace

double evaluate_sequence(const EnsembleState& initial, const EnsembleState& targets,
                         const ActionSequence& seq, ModelKind model, const StateGrid& grid,
                         int ell, double lambda, const SystemConfig& cfg) {
    if (initial.size() != targets.size())
        throw ValidationError("evaluate_sequence: sample counts differ");

    switch (model) {
        case ModelKind::Exact:
            return terminal_cost(rollout(initial, seq, cfg), targets, lambda);
        case ModelKind::StateQuantized: {
            double total = 0.0;
            for (std::size_t k = 0; k < initial.size(); ++k) {
                DiscreteMeasure state = quantize_atoms(initial.measures[k], grid);
                for (const auto& u : seq) state = state_quantized_step(state, u, grid, cfg);
                total += wasserstein2_sq(state, targets.measures[k], lambda).value;
            }
            return total / static_cast<double>(initial.size());
        }
        case ModelKind::TriplyQuantized: {
            QuantizedEnsemble state = quantize_ensemble(initial, grid, ell);
            const QuantizedEnsemble quantized_targets = quantize_ensemble(targets, grid, ell);
            for (const auto& u : seq) state = quantized_ensemble_step(state, u, grid, cfg);
            return quantized_terminal_cost(state, quantized_targets, lambda, grid);
        }
    }
    throw ValidationError("unknown model");
}

} // namespace liftdp
