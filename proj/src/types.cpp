#include "liftdp/types.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "liftdp/errors.hpp"

namespace liftdp {

bool atom_less(const ParticleState& a, const ParticleState& b) {
    if (a.pe != b.pe) return a.pe < b.pe;
    return std::lexicographical_compare(a.feature.begin(), a.feature.end(), b.feature.begin(),
                                        b.feature.end());
}

WeightAction WeightAction::zeros(int d, int d1, int d2) {
    WeightAction u;
    u.W = Matrix(d, d1);
    u.A = Matrix(d1, d);
    u.b = Vec(static_cast<std::size_t>(d1), 0.0);
    u.Q = Matrix(d2, d);
    u.K = Matrix(d2, d);
    u.V = Matrix(d, d);
    return u;
}

std::size_t WeightAction::entry_count() const {
    return W.data.size() + A.data.size() + b.size() + Q.data.size() + K.data.size() +
           V.data.size();
}

void WeightAction::for_each_entry(const std::function<void(double&)>& fn) {
    for (auto& x : W.data) fn(x);
    for (auto& x : A.data) fn(x);
    for (auto& x : b) fn(x);
    for (auto& x : Q.data) fn(x);
    for (auto& x : K.data) fn(x);
    for (auto& x : V.data) fn(x);
}

double action_distance(const WeightAction& a, const WeightAction& b) {
    double acc = 0.0;
    acc += squared_distance(a.W.data, b.W.data);
    acc += squared_distance(a.A.data, b.A.data);
    acc += squared_distance(a.b, b.b);
    acc += squared_distance(a.Q.data, b.Q.data);
    acc += squared_distance(a.K.data, b.K.data);
    acc += squared_distance(a.V.data, b.V.data);
    return std::sqrt(acc);
}

bool Box::contains(const Vec& x, double slack) const {
    if (x.size() != bounds.size()) return false;
    for (std::size_t i = 0; i < bounds.size(); ++i) {
        if (x[i] < bounds[i][0] - slack || x[i] > bounds[i][1] + slack) return false;
    }
    return true;
}

double Box::diameter() const {
    double acc = 0.0;
    for (const auto& b : bounds) {
        const double len = b[1] - b[0];
        acc += len * len;
    }
    return std::sqrt(acc);
}

namespace {

void relu(Vec& x) {
    for (auto& v : x) v = std::max(v, 0.0);
}

void tanh_act(Vec& x) {
    for (auto& v : x) v = std::tanh(v);
}

void identity_act(Vec&) {}

std::map<std::string, ActivationFn>& activation_registry() {
    static std::map<std::string, ActivationFn> registry = {
        {"relu", &relu},
        {"tanh", &tanh_act},
        {"identity", &identity_act},
    };
    return registry;
}

} // namespace

ActivationFn activation_from_name(const std::string& name) {
    const auto& registry = activation_registry();
    const auto it = registry.find(name);
    if (it == registry.end()) throw ValidationError("unknown activation '" + name + "'");
    return it->second;
}

void register_activation(const std::string& name, ActivationFn fn) {
    activation_registry()[name] = fn;
}

double SystemConfig::lambda_threshold() const {
    const double diam = state_box.diameter();
    return 0.5 * static_cast<double>(particle_count) * diam * diam;
}

void SystemConfig::validate() const {
    if (particle_count < 1) throw ValidationError("particle_count must be >= 1");
    if (d < 1 || d1 < 1 || d2 < 1) throw ValidationError("dimensions must be >= 1");
    if (!(beta > 0.0)) throw ValidationError("beta must be positive");
    if (horizon < 1) throw ValidationError("horizon must be >= 1");
    if (state_box.dim() != static_cast<std::size_t>(d))
        throw ValidationError("state_box dimension does not match d");
    for (const auto& b : state_box.bounds) {
        if (!(b[0] < b[1])) throw ValidationError("state_box bounds must satisfy lo < hi");
    }
    if (!(action_bound > 0.0)) throw ValidationError("action_bound must be positive");
    if (!(lambda > lambda_threshold())) {
        std::ostringstream msg;
        msg << "lambda = " << lambda << " must exceed the positional threshold "
            << lambda_threshold();
        throw ValidationError(msg.str());
    }
    activation_from_name(activation);
}

SystemConfig SystemConfig::make(int particle_count, int d, int d1, int d2, double beta,
                                int horizon, std::string activation, Box state_box,
                                double action_bound, double lambda) {
    SystemConfig cfg;
    cfg.particle_count = particle_count;
    cfg.d = d;
    cfg.d1 = d1;
    cfg.d2 = d2;
    cfg.beta = beta;
    cfg.horizon = horizon;
    cfg.activation = std::move(activation);
    cfg.state_box = std::move(state_box);
    cfg.action_bound = action_bound;
    cfg.lambda = lambda;
    cfg.validate();
    return cfg;
}

void SequenceSample::validate(const SystemConfig& cfg) const {
    const auto n = static_cast<std::size_t>(cfg.particle_count);
    if (inputs.size() != n || labels.size() != n)
        throw ValidationError("sample length does not match particle_count");
    for (const auto& x : inputs) {
        if (!cfg.state_box.contains(x)) throw ValidationError("input feature outside state box");
    }
    for (const auto& y : labels) {
        if (!cfg.state_box.contains(y, 1e-12))
            throw ValidationError("label feature outside state box");
    }
}

} // namespace liftdp
