#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "liftdp/linalg.hpp"

namespace liftdp {

/// A particle together with its fixed positional tag p_i = i/n. The tag is
/// never changed by the dynamics; it only disambiguates sequence order once
/// particle ensembles are replaced by unordered measures.
struct ParticleState {
    double pe = 0.0;
    Vec feature;

    bool operator==(const ParticleState&) const = default;
};

/// Returns true if `a` precedes `b` in the canonical atom order
/// (position tag first, then feature coordinates lexicographically).
bool atom_less(const ParticleState& a, const ParticleState& b);

/// The shared weight tuple applied to every particle at one stage:
/// feed-forward output W (d x d1), hidden map A (d1 x d), hidden bias b (d1),
/// attention query/key Q, K (d2 x d) and value V (d x d).
struct WeightAction {
    Matrix W;
    Matrix A;
    Vec b;
    Matrix Q;
    Matrix K;
    Matrix V;

    bool operator==(const WeightAction&) const = default;

    static WeightAction zeros(int d, int d1, int d2);

    /// Entries in a fixed flat order (W, A, b, Q, K, V row-major); used by
    /// net construction and serialization.
    std::size_t entry_count() const;
    void for_each_entry(const std::function<void(double&)>& fn);
};

/// Frobenius distance between two weight tuples.
double action_distance(const WeightAction& a, const WeightAction& b);

/// Axis-aligned box of per-coordinate bounds.
struct Box {
    std::vector<std::array<double, 2>> bounds;

    std::size_t dim() const { return bounds.size(); }
    double length(std::size_t axis) const { return bounds[axis][1] - bounds[axis][0]; }
    bool contains(const Vec& x, double slack = 0.0) const;
    /// Euclidean diameter (corner-to-corner distance).
    double diameter() const;
};

using ActivationFn = void (*)(Vec&);

/// Looks up a 1-Lipschitz activation by name ("relu", "tanh", "identity").
/// Throws ValidationError for unknown names.
ActivationFn activation_from_name(const std::string& name);

/// Registers an additional activation under a new name.
void register_activation(const std::string& name, ActivationFn fn);

/// Static description of the controlled particle system.
struct SystemConfig {
    int particle_count = 0; // n particles per sequence
    int d = 0;              // feature dimension
    int d1 = 0;             // feed-forward hidden dimension
    int d2 = 0;             // attention query/key dimension
    double beta = 1.0;      // attention temperature
    int horizon = 1;        // number of stages / layers
    std::string activation = "relu";
    Box state_box;            // the compact feature domain
    double action_bound = 1.0; // every weight entry lies in [-bound, bound]
    double lambda = 0.0;       // positional cost weight

    double positional_encoding(int i) const { // i is 1-based
        return static_cast<double>(i) / static_cast<double>(particle_count);
    }

    /// Positional weights below this make cross-position transport plans
    /// competitive; the configured lambda must exceed it.
    double lambda_threshold() const;

    /// Throws ValidationError when any invariant fails.
    void validate() const;

    /// Validating factory.
    static SystemConfig make(int particle_count, int d, int d1, int d2, double beta, int horizon,
                             std::string activation, Box state_box, double action_bound,
                             double lambda);
};

/// One training pair: an input sequence and its label sequence.
struct SequenceSample {
    std::vector<Vec> inputs;
    std::vector<Vec> labels;

    void validate(const SystemConfig& cfg) const;
};

} // namespace liftdp
