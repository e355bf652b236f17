#include "liftdp/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "liftdp/errors.hpp"

namespace liftdp {

Vec softmax_masses(const Vec& masses, const Vec& logits) {
    const double top = *std::max_element(logits.begin(), logits.end());
    Vec out(logits.size());
    double total = 0.0;
    for (std::size_t a = 0; a < logits.size(); ++a) {
        out[a] = masses[a] * std::exp(logits[a] - top);
        total += out[a];
    }
    for (auto& v : out) v /= total;
    return out;
}

namespace {

Vec attention_logits(const Vec& query_image, const WeightAction& u, double beta,
                     const std::vector<const Vec*>& features) {
    Vec logits(features.size());
    for (std::size_t a = 0; a < features.size(); ++a) {
        logits[a] = beta * dot(query_image, matvec(u.K, *features[a]));
    }
    return logits;
}

} // namespace

Vec attention_weights(const Vec& x, const std::vector<std::pair<double, Vec>>& atoms,
                      const WeightAction& u, double beta) {
    if (atoms.empty()) throw ValidationError("attention over empty atom list");
    const Vec qx = matvec(u.Q, x);
    Vec masses(atoms.size());
    std::vector<const Vec*> features(atoms.size());
    for (std::size_t a = 0; a < atoms.size(); ++a) {
        masses[a] = atoms[a].first;
        features[a] = &atoms[a].second;
    }
    return softmax_masses(masses, attention_logits(qx, u, beta, features));
}

Vec attention_weights(const Vec& x, const DiscreteMeasure& mu, const WeightAction& u,
                      double beta) {
    if (mu.size() == 0) throw ValidationError("attention over empty measure");
    const Vec qx = matvec(u.Q, x);
    Vec masses(mu.size());
    std::vector<const Vec*> features(mu.size());
    for (std::size_t a = 0; a < mu.size(); ++a) {
        masses[a] = mu.mass(a);
        features[a] = &mu.atoms[a].feature;
    }
    return softmax_masses(masses, attention_logits(qx, u, beta, features));
}

ParticleState step_particle(const ParticleState& x, const WeightAction& u,
                            const DiscreteMeasure& mu, const SystemConfig& cfg) {
    const ActivationFn sigma = activation_from_name(cfg.activation);

    Vec hidden = matvec(u.A, x.feature);
    for (std::size_t i = 0; i < hidden.size(); ++i) hidden[i] += u.b[i];
    sigma(hidden);
    Vec next = matvec(u.W, hidden);

    const Vec att = attention_weights(x.feature, mu, u, cfg.beta);
    for (std::size_t a = 0; a < mu.size(); ++a) {
        const Vec vz = matvec(u.V, mu.atoms[a].feature);
        for (std::size_t i = 0; i < next.size(); ++i) next[i] += att[a] * vz[i];
    }
    return ParticleState{x.pe, std::move(next)};
}

std::vector<std::vector<ParticleState>> forward_trajectory(const std::vector<Vec>& inputs,
                                                           const std::vector<WeightAction>& actions,
                                                           const SystemConfig& cfg) {
    if (inputs.size() != static_cast<std::size_t>(cfg.particle_count))
        throw ValidationError("input sequence length does not match particle_count");
    for (const auto& x : inputs) {
        if (x.size() != static_cast<std::size_t>(cfg.d))
            throw ValidationError("input feature dimension does not match d");
    }

    std::vector<std::vector<ParticleState>> trajectory;
    trajectory.reserve(actions.size() + 1);
    trajectory.push_back(attach_positions(inputs));

    for (const auto& u : actions) {
        const auto& current = trajectory.back();
        // Every particle interacts with the same canonical empirical measure,
        // so this path and the measure-level flow evaluate identical sums.
        const DiscreteMeasure mu = DiscreteMeasure::empirical(current);
        std::vector<ParticleState> next;
        next.reserve(current.size());
        for (const auto& particle : current) next.push_back(step_particle(particle, u, mu, cfg));
        trajectory.push_back(std::move(next));
    }
    return trajectory;
}

std::vector<ParticleState> forward_sequence(const std::vector<Vec>& inputs,
                                            const std::vector<WeightAction>& actions,
                                            const SystemConfig& cfg) {
    return forward_trajectory(inputs, actions, cfg).back();
}

} // namespace liftdp
