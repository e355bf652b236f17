#pragma once

#include "liftdp/measure.hpp"

namespace liftdp {

/// Squared position-sensitive ground cost between two tagged particles:
/// ||x - y||^2 + lambda * (p - q)^2.
double pair_cost(const ParticleState& x, const ParticleState& y, double lambda);

struct TransportResult {
    double value = 0.0; // minimal expected squared ground cost
    Coupling plan;
};

/// Exact squared transport distance between two canonical measures, with an
/// optimal plan. Two uniform measures with equal atom counts are solved as a
/// minimum-cost perfect matching; general rational masses are scaled to a
/// common integer denominator and solved as an integer transportation
/// problem, so plans satisfy their marginals exactly.
TransportResult wasserstein2_sq(const DiscreteMeasure& p, const DiscreteMeasure& q, double lambda);

/// Exhaustive minimum over all atom permutations, for two uniform measures
/// with the same atom count n <= 8. Test oracle; refuses larger instances.
double wasserstein_bruteforce(const DiscreteMeasure& p, const DiscreteMeasure& q, double lambda);

} // namespace liftdp
