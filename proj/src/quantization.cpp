#include "liftdp/quantization.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "liftdp/dynamics.hpp"
#include "liftdp/errors.hpp"
#include "liftdp/rng.hpp"
#include "liftdp/transport.hpp"

namespace liftdp {

namespace {

double lattice_coord(const StateGrid& grid, std::size_t axis, int i) {
    return grid.axis_lo[axis] + static_cast<double>(i) * grid.axis_step[axis];
}

} // namespace

std::uint32_t StateGrid::nearest_state_index(const Vec& x) const {
    const std::size_t d = box.dim();
    // Separable metric on a uniform lattice: per-axis nearest with ties to
    // the lower coordinate yields the lowest-index nearest lattice point.
    std::size_t flat = 0;
    for (std::size_t axis = 0; axis < d; ++axis) {
        const int count = axis_counts[axis];
        double t = (x[axis] - axis_lo[axis]) / axis_step[axis];
        int f = static_cast<int>(std::floor(t));
        f = std::clamp(f, 0, count - 1);
        int pick = f;
        if (f + 1 < count) {
            const double d0 = std::abs(x[axis] - lattice_coord(*this, axis, f));
            const double d1 = std::abs(lattice_coord(*this, axis, f + 1) - x[axis]);
            if (d1 < d0) pick = f + 1;
        }
        flat = flat * static_cast<std::size_t>(count) + static_cast<std::size_t>(pick);
    }

    std::uint32_t best = static_cast<std::uint32_t>(flat);
    if (lattice_size < points.size()) {
        double best_dist = squared_distance(points[flat], x);
        for (std::size_t i = lattice_size; i < points.size(); ++i) {
            const double dist = squared_distance(points[i], x);
            if (dist < best_dist) {
                best_dist = dist;
                best = static_cast<std::uint32_t>(i);
            }
        }
    }
    return best;
}

double StateGrid::covering_radius() const {
    double acc = 0.0;
    for (const double h : axis_step) acc += 0.25 * h * h;
    return std::sqrt(acc);
}

StateGrid build_state_grid(const Box& state_box, int level, int particle_count,
                           const std::vector<Vec>& extra_points) {
    if (level < 1) throw ValidationError("grid level must be >= 1");
    if (particle_count < 1) throw ValidationError("particle_count must be >= 1");
    const std::size_t d = state_box.dim();
    if (d == 0) throw ValidationError("state box has no dimensions");

    StateGrid grid;
    grid.level = level;
    grid.particle_count = particle_count;
    grid.box = state_box;
    grid.axis_counts.resize(d);
    grid.axis_lo.resize(d);
    grid.axis_step.resize(d);

    // Per-axis spacing at most 2 / (level * sqrt(d)) keeps the cell
    // half-diagonal, and with it the covering radius, at most 1/level.
    const double max_step = 2.0 / (static_cast<double>(level) * std::sqrt(static_cast<double>(d)));
    std::size_t total = 1;
    for (std::size_t axis = 0; axis < d; ++axis) {
        const double len = state_box.length(axis);
        const int cells = std::max(1, static_cast<int>(std::ceil(len / max_step)));
        grid.axis_counts[axis] = cells + 1;
        grid.axis_lo[axis] = state_box.bounds[axis][0];
        grid.axis_step[axis] = len / static_cast<double>(cells);
        total *= static_cast<std::size_t>(cells + 1);
    }

    grid.points.reserve(total + extra_points.size());
    Vec point(d, 0.0);
    std::vector<int> idx(d, 0);
    for (;;) {
        for (std::size_t axis = 0; axis < d; ++axis) point[axis] = lattice_coord(grid, axis, idx[axis]);
        grid.points.push_back(point);
        std::size_t axis = d;
        while (axis > 0) {
            --axis;
            if (++idx[axis] < grid.axis_counts[axis]) break;
            idx[axis] = 0;
            if (axis == 0) {
                grid.lattice_size = grid.points.size();
                for (const auto& extra : extra_points) {
                    if (extra.size() != d)
                        throw ValidationError("extra grid point has wrong dimension");
                    if (std::find(grid.points.begin(), grid.points.end(), extra) ==
                        grid.points.end()) {
                        grid.points.push_back(extra);
                    }
                }
                return grid;
            }
        }
    }
}

ParticleState quantize_state(const ParticleState& x, const StateGrid& grid) {
    return ParticleState{x.pe, grid.points[grid.nearest_state_index(x.feature)]};
}

std::pair<int, int> enumerate_index(long long a, const StateGrid& grid) {
    const long long size = static_cast<long long>(grid.state_count());
    const long long n = static_cast<long long>(grid.particle_count);
    if (a < 1 || a > n * size) throw ValidationError("superstate index out of range");
    return {static_cast<int>((a - 1) / size + 1), static_cast<int>((a - 1) % size + 1)};
}

long long flat_index(int position, int state_index, const StateGrid& grid) {
    const long long size = static_cast<long long>(grid.state_count());
    if (position < 1 || position > grid.particle_count)
        throw ValidationError("position index out of range");
    if (state_index < 1 || state_index > size)
        throw ValidationError("state index out of range");
    return static_cast<long long>(position - 1) * size + state_index;
}

ParticleState superstate(const StateGrid& grid, std::uint32_t flat0) {
    const std::size_t size = grid.state_count();
    const std::size_t pos0 = flat0 / size;
    const std::size_t state0 = flat0 % size;
    const double pe = static_cast<double>(pos0 + 1) / static_cast<double>(grid.particle_count);
    return ParticleState{pe, grid.points[state0]};
}

std::uint32_t superstate_index(const StateGrid& grid, double pe, std::uint32_t state_idx0) {
    const auto pos = static_cast<std::uint32_t>(
        std::llround(pe * static_cast<double>(grid.particle_count)));
    return static_cast<std::uint32_t>((pos - 1) * grid.state_count() + state_idx0);
}

long long QuantizedMeasure::total() const {
    long long sum = 0;
    for (const auto& [idx, count] : counts) sum += count;
    return sum;
}

void QuantizedMeasure::validate() const {
    if (ell < 1) throw ValidationError("measure level must be >= 1");
    if (counts.empty()) throw ValidationError("quantized measure has empty support");
    for (std::size_t i = 0; i + 1 < counts.size(); ++i) {
        if (counts[i].first >= counts[i + 1].first)
            throw ValidationError("quantized measure support not strictly sorted");
    }
    if (total() != ell) throw ValidationError("quantized counts do not sum to ell");
}

namespace {

/// Shared repair step on sparse (index, ell*p) pairs. Entries absent from
/// the list are exact zeros and are never selected, because the surplus is
/// always covered by entries with strictly positive rounding error.
std::vector<std::pair<std::uint32_t, long long>> quantize_sparse(
    std::vector<std::pair<std::uint32_t, double>> scaled, long long ell) {
    std::vector<std::pair<std::uint32_t, long long>> out;
    out.reserve(scaled.size());
    long long sum = 0;
    for (const auto& [idx, value] : scaled) {
        const long long r = static_cast<long long>(std::floor(value + 0.5));
        out.emplace_back(idx, r);
        sum += r;
    }
    long long delta = sum - ell;
    if (delta != 0) {
        std::vector<std::size_t> order(out.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        if (delta > 0) {
            // Drop from the entries rounded up the most; equal errors drop
            // the highest index so the kept vector is lexicographically
            // largest.
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                const double ea = static_cast<double>(out[a].second) - scaled[a].second;
                const double eb = static_cast<double>(out[b].second) - scaled[b].second;
                if (ea != eb) return ea > eb;
                return out[a].first > out[b].first;
            });
            for (std::size_t i = 0; delta > 0 && i < order.size(); ++i) {
                if (out[order[i]].second > 0) {
                    --out[order[i]].second;
                    --delta;
                }
            }
        } else {
            // Add to the entries rounded down the most; equal errors add at
            // the lowest index.
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                const double ea = static_cast<double>(out[a].second) - scaled[a].second;
                const double eb = static_cast<double>(out[b].second) - scaled[b].second;
                if (ea != eb) return ea < eb;
                return out[a].first < out[b].first;
            });
            for (std::size_t i = 0; delta < 0 && i < order.size(); ++i) {
                ++out[order[i]].second;
                ++delta;
            }
        }
        if (delta != 0) throw ValidationError("simplex quantizer failed to repair counts");
    }
    return out;
}

} // namespace

std::vector<long long> quantize_simplex(const std::vector<double>& probs, long long ell) {
    if (ell < 1) throw ValidationError("ell must be >= 1");
    if (probs.empty()) throw ValidationError("empty probability vector");
    double sum = 0.0;
    for (const double p : probs) {
        if (p < 0.0) throw ValidationError("negative probability entry");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw ValidationError("probabilities do not sum to one");

    std::vector<std::pair<std::uint32_t, double>> scaled;
    scaled.reserve(probs.size());
    for (std::size_t a = 0; a < probs.size(); ++a) {
        if (probs[a] > 0.0)
            scaled.emplace_back(static_cast<std::uint32_t>(a),
                                static_cast<double>(ell) * probs[a]);
    }
    std::vector<long long> counts(probs.size(), 0);
    for (const auto& [idx, count] : quantize_sparse(std::move(scaled), ell)) {
        counts[idx] = count;
    }
    return counts;
}

QuantizedMeasure quantize_measure(const std::vector<double>& probs, int ell) {
    const auto counts = quantize_simplex(probs, ell);
    QuantizedMeasure out;
    out.ell = ell;
    for (std::size_t a = 0; a < counts.size(); ++a) {
        if (counts[a] > 0)
            out.counts.emplace_back(static_cast<std::uint32_t>(a),
                                    static_cast<std::uint32_t>(counts[a]));
    }
    out.validate();
    return out;
}

double quantizer_error_bound(std::size_t alphabet_size, long long ell) {
    const double k = static_cast<double>(alphabet_size);
    const double half = std::floor(k / 2.0);
    return std::sqrt(half * (k - half) / k) / static_cast<double>(ell);
}

std::string ActionNet::id() const {
    std::ostringstream out;
    out << mode << ":";
    if (mode == "sample") {
        out << "seed=" << seed << ":size=" << actions.size();
    } else {
        out << "resolution=" << resolution << ":size=" << actions.size();
    }
    return out.str();
}

ActionNet build_action_net_sampled(const SystemConfig& cfg, std::size_t size,
                                   std::uint64_t seed) {
    ActionNet net;
    net.mode = "sample";
    net.seed = seed;
    Rng rng(seed);
    const double bound = cfg.action_bound;
    while (net.actions.size() < size) {
        WeightAction u = WeightAction::zeros(cfg.d, cfg.d1, cfg.d2);
        u.for_each_entry([&](double& x) { x = rng.uniform(-bound, bound); });
        if (std::find(net.actions.begin(), net.actions.end(), u) == net.actions.end()) {
            net.actions.push_back(std::move(u));
        }
    }
    return net;
}

ActionNet build_action_net_grid(const SystemConfig& cfg, int resolution) {
    if (resolution < 1) throw ValidationError("grid net resolution must be >= 1");
    const std::size_t entries = WeightAction::zeros(cfg.d, cfg.d1, cfg.d2).entry_count();
    if (entries > 12) {
        throw ValidationError("grid action net refused for " + std::to_string(entries) +
                              " weight entries (> 12); use sample mode");
    }
    const double bound = cfg.action_bound;
    const int cells =
        std::max(1, static_cast<int>(std::ceil(2.0 * bound * static_cast<double>(resolution))));
    std::vector<double> values(static_cast<std::size_t>(cells) + 1);
    for (int i = 0; i <= cells; ++i) {
        values[static_cast<std::size_t>(i)] =
            -bound + 2.0 * bound * static_cast<double>(i) / static_cast<double>(cells);
    }

    double total = std::pow(static_cast<double>(values.size()), static_cast<double>(entries));
    if (total > 2e7) throw ValidationError("grid action net would enumerate too many actions");

    ActionNet net;
    net.mode = "grid";
    net.resolution = resolution;
    std::vector<std::size_t> odometer(entries, 0);
    for (;;) {
        WeightAction u = WeightAction::zeros(cfg.d, cfg.d1, cfg.d2);
        std::size_t slot = 0;
        u.for_each_entry([&](double& x) { x = values[odometer[slot++]]; });
        net.actions.push_back(std::move(u));
        std::size_t e = entries;
        while (e > 0) {
            --e;
            if (++odometer[e] < values.size()) break;
            odometer[e] = 0;
            if (e == 0) return net;
        }
    }
}

DiscreteMeasure to_measure(const QuantizedMeasure& mu, const StateGrid& grid) {
    std::vector<ParticleState> atoms;
    std::vector<long long> nums;
    atoms.reserve(mu.counts.size());
    nums.reserve(mu.counts.size());
    for (const auto& [idx, count] : mu.counts) {
        atoms.push_back(superstate(grid, idx));
        nums.push_back(count);
    }
    return DiscreteMeasure::from_atoms(std::move(atoms), std::move(nums), mu.ell);
}

QuantizedMeasure quantize_lifted(const DiscreteMeasure& mu, const StateGrid& grid, int ell) {
    mu.validate();
    // Merge atoms that share a grid cell, with exact masses.
    std::vector<std::pair<std::uint32_t, long long>> merged;
    for (std::size_t a = 0; a < mu.size(); ++a) {
        const std::uint32_t idx =
            superstate_index(grid, mu.atoms[a].pe, grid.nearest_state_index(mu.atoms[a].feature));
        merged.emplace_back(idx, mu.mass_num[a]);
    }
    std::sort(merged.begin(), merged.end());
    QuantizedMeasure out;
    out.ell = ell;
    if (ell % mu.mass_den == 0) {
        const long long scale = ell / mu.mass_den;
        for (const auto& [idx, num] : merged) {
            if (!out.counts.empty() && out.counts.back().first == idx) {
                out.counts.back().second += static_cast<std::uint32_t>(num * scale);
            } else {
                out.counts.emplace_back(idx, static_cast<std::uint32_t>(num * scale));
            }
        }
    } else {
        std::vector<double> probs(grid.superstate_count(), 0.0);
        for (const auto& [idx, num] : merged) {
            probs[idx] += static_cast<double>(num) / static_cast<double>(mu.mass_den);
        }
        return quantize_measure(probs, ell);
    }
    out.validate();
    return out;
}

QuantizedMeasure quantized_step(const QuantizedMeasure& mu, const WeightAction& u,
                                const StateGrid& grid, const SystemConfig& cfg) {
    const DiscreteMeasure base = to_measure(mu, grid);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> accum;
    accum.reserve(mu.counts.size());
    for (const auto& [idx, count] : mu.counts) {
        const ParticleState image = step_particle(superstate(grid, idx), u, base, cfg);
        const std::uint32_t target =
            superstate_index(grid, image.pe, grid.nearest_state_index(image.feature));
        accum.emplace_back(target, count);
    }
    std::sort(accum.begin(), accum.end());

    QuantizedMeasure out;
    out.ell = mu.ell;
    for (const auto& [idx, count] : accum) {
        if (!out.counts.empty() && out.counts.back().first == idx) {
            out.counts.back().second += count;
        } else {
            out.counts.emplace_back(idx, count);
        }
    }
    out.validate();

    // The exact counts already form a type with denominator ell, so the
    // simplex quantizer must act as the identity here.
    std::vector<std::pair<std::uint32_t, double>> scaled;
    scaled.reserve(out.counts.size());
    for (const auto& [idx, count] : out.counts) {
        scaled.emplace_back(idx, static_cast<double>(mu.ell) *
                                     (static_cast<double>(count) / static_cast<double>(mu.ell)));
    }
    const auto requantized = quantize_sparse(std::move(scaled), mu.ell);
    for (std::size_t i = 0; i < out.counts.size(); ++i) {
        if (requantized[i].first != out.counts[i].first ||
            requantized[i].second != static_cast<long long>(out.counts[i].second)) {
            throw std::logic_error("measure quantizer moved an exact type");
        }
    }
    return out;
}

DiscreteMeasure state_quantized_step(const DiscreteMeasure& mu, const WeightAction& u,
                                     const StateGrid& grid, const SystemConfig& cfg) {
    std::vector<ParticleState> images;
    images.reserve(mu.size());
    for (const auto& atom : mu.atoms) {
        images.push_back(quantize_state(step_particle(atom, u, mu, cfg), grid));
    }
    return DiscreteMeasure::from_atoms(std::move(images), mu.mass_num, mu.mass_den);
}

std::vector<double> quantized_cost_matrix(const StateGrid& grid, double lambda) {
    const std::size_t size = grid.superstate_count();
    std::vector<double> cost(size * size, 0.0);
    for (std::size_t a = 0; a < size; ++a) {
        const ParticleState xa = superstate(grid, static_cast<std::uint32_t>(a));
        for (std::size_t b = a + 1; b < size; ++b) {
            const ParticleState xb = superstate(grid, static_cast<std::uint32_t>(b));
            const double c = pair_cost(xa, xb, lambda);
            cost[a * size + b] = c;
            cost[b * size + a] = c;
        }
    }
    return cost;
}

} // namespace liftdp
