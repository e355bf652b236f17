#pragma once

#include <cstdint>
#include <vector>

#include "liftdp/types.hpp"

namespace liftdp {

/// Finitely supported probability measure with exact rational masses: atom i
/// carries mass mass_num[i] / mass_den. Canonical form sorts atoms, merges
/// bitwise-equal ones, drops zero masses and reduces by the common gcd, so
/// equal measures have identical representations.
struct DiscreteMeasure {
    std::vector<ParticleState> atoms;
    std::vector<long long> mass_num;
    long long mass_den = 1;

    std::size_t size() const { return atoms.size(); }
    double mass(std::size_t i) const {
        return static_cast<double>(mass_num[i]) / static_cast<double>(mass_den);
    }

    bool operator==(const DiscreteMeasure&) const = default;

    /// True when every atom has mass 1/size (after canonicalization).
    bool is_uniform() const;

    /// Throws ValidationError unless masses are non-negative and sum to one.
    void validate() const;

    /// Builds the canonical measure from atoms and rational masses.
    static DiscreteMeasure from_atoms(std::vector<ParticleState> atoms,
                                      std::vector<long long> mass_num, long long mass_den);

    /// Empirical measure of a particle list (mass 1/n each, merged).
    static DiscreteMeasure empirical(const std::vector<ParticleState>& particles);
};

/// Transport plan between two measures; flow (i, j) moves
/// flow_num[i * cols + j] / flow_den mass from source atom i to target atom j.
struct Coupling {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<long long> flow_num;
    long long flow_den = 1;

    long long flow(std::size_t i, std::size_t j) const { return flow_num[i * cols + j]; }

    /// Checks row/column marginals against the two measures, exactly.
    bool feasible_for(const DiscreteMeasure& source, const DiscreteMeasure& target) const;
};

/// Attaches positional tags 1/n, ..., 1 to a feature sequence.
std::vector<ParticleState> attach_positions(const std::vector<Vec>& features);

/// Empirical measure of a tagged feature sequence.
DiscreteMeasure lift_sequence(const std::vector<Vec>& features);

} // namespace liftdp
