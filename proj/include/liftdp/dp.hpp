#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "liftdp/lifting.hpp"
#include "liftdp/quantization.hpp"

namespace liftdp {

/// Canonical hashable encoding of a tuple of quantized measures: for every
/// sample in order, the support size followed by its (index, count) pairs
/// packed into single words. Two ensembles share a key iff all counts agree.
struct EnsembleKey {
    std::vector<std::uint64_t> words;
    bool operator==(const EnsembleKey&) const = default;
};

struct EnsembleKeyHash {
    std::size_t operator()(const EnsembleKey& key) const {
        std::uint64_t h = 1469598103934665603ull; // FNV-1a
        for (const std::uint64_t w : key.words) {
            h ^= w;
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

/// Joint quantized state of all training samples: the DP works on tuples
/// because one shared action drives every sample at once.
struct QuantizedEnsemble {
    std::vector<QuantizedMeasure> measures;

    bool operator==(const QuantizedEnsemble&) const = default;
    EnsembleKey key() const;
};

QuantizedEnsemble quantize_ensemble(const EnsembleState& e, const StateGrid& grid, int ell);

QuantizedEnsemble quantized_ensemble_step(const QuantizedEnsemble& e, const WeightAction& u,
                                          const StateGrid& grid, const SystemConfig& cfg);

/// Mean squared transport distance between two quantized ensembles, solved
/// exactly on the grid atoms.
double quantized_terminal_cost(const QuantizedEnsemble& terminal, const QuantizedEnsemble& targets,
                               double lambda, const StateGrid& grid);

/// All ensembles reachable from the initial one within the horizon, plus the
/// dense transition table (state index, action index) -> next state index per
/// stage. States are stored in first-visit order, so the tables are
/// reproducible.
struct ReachableSets {
    std::vector<std::vector<QuantizedEnsemble>> states; // stages 0..T
    std::vector<std::vector<std::int32_t>> transitions; // stages 0..T-1
    std::vector<std::size_t> net_sizes;

    int horizon() const { return static_cast<int>(transitions.size()); }
    std::size_t total_states() const;
    std::int32_t next_state(int stage, std::size_t state, std::size_t action) const {
        return transitions[stage][state * net_sizes[stage] + action];
    }
};

/// Breadth-first forward expansion under per-stage action nets with key
/// deduplication. Throws BudgetError naming the stage once the running state
/// count passes state_budget.
ReachableSets expand_reachable(const QuantizedEnsemble& initial, const std::vector<ActionNet>& nets,
                               const StateGrid& grid, const SystemConfig& cfg,
                               std::size_t state_budget);

/// Stage-indexed value and greedy-action tables over the reachable sets.
struct ClosedLoopPolicy {
    std::vector<std::vector<double>> value;         // stages 0..T
    std::vector<std::vector<std::int32_t>> action;  // stages 0..T-1
};

/// Exact backward recursion: terminal values are mean squared transport
/// distances to the targets, interior values the minimum over net actions of
/// the successor value. Ties keep the lowest action index.
ClosedLoopPolicy backward_induction(const ReachableSets& reach, const QuantizedEnsemble& targets,
                                    double lambda, const StateGrid& grid);

/// Fixed weight sequence obtained by replaying the greedy actions from the
/// initial ensemble, with its provenance.
struct OpenLoopPolicy {
    std::vector<WeightAction> actions;
    EnsembleKey initial_key;
    std::vector<std::string> net_ids;
    double value = 0.0; // closed-loop value at the initial ensemble
};

OpenLoopPolicy extract_open_loop(const ClosedLoopPolicy& policy, const ReachableSets& reach,
                                 const std::vector<ActionNet>& nets);

/// Which of the three nested flow models to roll out.
enum class ModelKind { Exact, StateQuantized, TriplyQuantized };

ModelKind model_from_name(const std::string& name);

/// Terminal cost of rolling out an action sequence under the selected model.
/// The exact model pushes the lifted data through the unquantized flow; the
/// state-quantized model grid-quantizes every image atom but keeps exact
/// rational masses and compares against the unquantized targets; the triply
/// quantized model additionally works with count vectors over the grid and
/// compares against the quantized targets.
double evaluate_sequence(const EnsembleState& initial, const EnsembleState& targets,
                         const ActionSequence& seq, ModelKind model, const StateGrid& grid,
                         int ell, double lambda, const SystemConfig& cfg);

} // namespace liftdp
