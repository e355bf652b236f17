#include "liftdp/measure.hpp"

#include <algorithm>
#include <numeric>

#include "liftdp/errors.hpp"

namespace liftdp {

bool DiscreteMeasure::is_uniform() const {
    if (atoms.empty()) return false;
    if (mass_den != static_cast<long long>(atoms.size())) return false;
    return std::all_of(mass_num.begin(), mass_num.end(), [](long long n) { return n == 1; });
}

void DiscreteMeasure::validate() const {
    if (atoms.empty()) throw ValidationError("measure has no atoms");
    if (atoms.size() != mass_num.size()) throw ValidationError("atom/mass size mismatch");
    if (mass_den <= 0) throw ValidationError("mass denominator must be positive");
    long long total = 0;
    for (const long long n : mass_num) {
        if (n < 0) throw ValidationError("negative atom mass");
        total += n;
    }
    if (total != mass_den) throw ValidationError("masses do not sum to one");
}

DiscreteMeasure DiscreteMeasure::from_atoms(std::vector<ParticleState> atoms,
                                            std::vector<long long> mass_num, long long mass_den) {
    if (atoms.size() != mass_num.size()) throw ValidationError("atom/mass size mismatch");
    if (mass_den <= 0) throw ValidationError("mass denominator must be positive");

    std::vector<std::size_t> order(atoms.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return atom_less(atoms[a], atoms[b]); });

    DiscreteMeasure out;
    out.mass_den = mass_den;
    for (const std::size_t idx : order) {
        if (mass_num[idx] < 0) throw ValidationError("negative atom mass");
        if (mass_num[idx] == 0) continue;
        if (!out.atoms.empty() && out.atoms.back() == atoms[idx]) {
            out.mass_num.back() += mass_num[idx];
        } else {
            out.atoms.push_back(std::move(atoms[idx]));
            out.mass_num.push_back(mass_num[idx]);
        }
    }
    out.validate();

    long long g = out.mass_den;
    for (const long long n : out.mass_num) g = std::gcd(g, n);
    if (g > 1) {
        out.mass_den /= g;
        for (auto& n : out.mass_num) n /= g;
    }
    return out;
}

DiscreteMeasure DiscreteMeasure::empirical(const std::vector<ParticleState>& particles) {
    return from_atoms(particles, std::vector<long long>(particles.size(), 1),
                      static_cast<long long>(particles.size()));
}

bool Coupling::feasible_for(const DiscreteMeasure& source, const DiscreteMeasure& target) const {
    if (rows != source.size() || cols != target.size()) return false;
    if (flow_den <= 0) return false;
    // Marginal checks are done on the cross-multiplied integers, so they are
    // exact regardless of the denominators involved.
    for (std::size_t i = 0; i < rows; ++i) {
        long long row = 0;
        for (std::size_t j = 0; j < cols; ++j) {
            if (flow(i, j) < 0) return false;
            row += flow(i, j);
        }
        if (row * source.mass_den != source.mass_num[i] * flow_den) return false;
    }
    for (std::size_t j = 0; j < cols; ++j) {
        long long col = 0;
        for (std::size_t i = 0; i < rows; ++i) col += flow(i, j);
        if (col * target.mass_den != target.mass_num[j] * flow_den) return false;
    }
    return true;
}

std::vector<ParticleState> attach_positions(const std::vector<Vec>& features) {
    std::vector<ParticleState> out;
    out.reserve(features.size());
    const auto n = static_cast<double>(features.size());
    for (std::size_t i = 0; i < features.size(); ++i) {
        out.push_back(ParticleState{static_cast<double>(i + 1) / n, features[i]});
    }
    return out;
}

DiscreteMeasure lift_sequence(const std::vector<Vec>& features) {
    return DiscreteMeasure::empirical(attach_positions(features));
}

} // namespace liftdp
