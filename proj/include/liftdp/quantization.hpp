#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "liftdp/measure.hpp"
#include "liftdp/types.hpp"

namespace liftdp {

/// Finite covering of the state box: an axis-aligned lattice whose covering
/// radius is at most 1/level, optionally extended with extra points (e.g.
/// initial data). Lattice points come first, ordered lexicographically by
/// coordinates; extras follow in insertion order.
struct StateGrid {
    int level = 1;          // n
    int particle_count = 0; // number of positional tags
    Box box;
    std::vector<int> axis_counts;
    std::vector<double> axis_lo;
    std::vector<double> axis_step;
    std::vector<Vec> points;
    std::size_t lattice_size = 0; // points[0 .. lattice_size) form the lattice

    std::size_t state_count() const { return points.size(); }           // |S_n|
    std::size_t superstate_count() const {                              // |X_n|
        return static_cast<std::size_t>(particle_count) * points.size();
    }

    /// Index of the nearest grid feature; exact-distance ties go to the
    /// lowest index.
    std::uint32_t nearest_state_index(const Vec& x) const;

    /// Half-diagonal of a lattice cell; every box point is within this
    /// distance of the lattice, and it is at most 1/level.
    double covering_radius() const;
};

StateGrid build_state_grid(const Box& state_box, int level, int particle_count,
                           const std::vector<Vec>& extra_points = {});

/// Nearest grid point with the positional tag kept. Defined for all of R^d:
/// features outside the box clamp to the closest grid point.
ParticleState quantize_state(const ParticleState& x, const StateGrid& grid);

/// The fixed 1-based bijection {1..n_pos*|S_n|} -> (position, state index):
/// a -> (floor((a-1)/|S_n|)+1, ((a-1) mod |S_n|)+1).
std::pair<int, int> enumerate_index(long long a, const StateGrid& grid);
long long flat_index(int position, int state_index, const StateGrid& grid);

/// The tagged grid point behind a 0-based flat superstate index.
ParticleState superstate(const StateGrid& grid, std::uint32_t flat0);
std::uint32_t superstate_index(const StateGrid& grid, double pe, std::uint32_t state_idx0);

/// Probability vector with denominator ell, stored sparsely: counts are
/// (0-based flat superstate index, count) pairs sorted by index and summing
/// to ell.
struct QuantizedMeasure {
    int ell = 1;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> counts;

    bool operator==(const QuantizedMeasure&) const = default;
    long long total() const;
    void validate() const;
};

/// Nearest probability vector with denominator ell in Euclidean distance on
/// the simplex (type quantization): round ell*p, then repair the count
/// surplus by decrementing the most over-rounded entries (or incrementing
/// the most under-rounded ones). Among equal rounding errors the result is
/// the lexicographically largest count vector, matching the first minimizer
/// in the descending-lexicographic enumeration of types.
std::vector<long long> quantize_simplex(const std::vector<double>& probs, long long ell);

/// Simplex quantizer packaged as a sparse QuantizedMeasure over superstates.
QuantizedMeasure quantize_measure(const std::vector<double>& probs, int ell);

/// Worst-case Euclidean simplex error of the type quantizer:
/// (1/ell) * sqrt(floor(k/2) * (k - floor(k/2)) / k) for alphabet size k.
double quantizer_error_bound(std::size_t alphabet_size, long long ell);

/// Finite action set. Sample mode draws every weight entry uniformly from
/// the action box with a seeded stream, so nets of increasing size are
/// nested. Grid mode lattices every entry with spacing at most
/// 1/resolution and is only practical for tiny weight counts.
struct ActionNet {
    std::vector<WeightAction> actions;
    std::string mode; // "sample" or "grid"
    std::uint64_t seed = 0;
    int resolution = 0;

    std::size_t size() const { return actions.size(); }
    std::string id() const;
};

ActionNet build_action_net_sampled(const SystemConfig& cfg, std::size_t size, std::uint64_t seed);
ActionNet build_action_net_grid(const SystemConfig& cfg, int resolution);

/// Measure on the grid carried by a QuantizedMeasure (atoms are tagged grid
/// points, masses count/ell).
DiscreteMeasure to_measure(const QuantizedMeasure& mu, const StateGrid& grid);

/// Grid-quantizes every atom of a measure, merges, and re-expresses the
/// masses as counts over ell (exactly when ell is a multiple of the mass
/// denominator, via the simplex quantizer otherwise).
QuantizedMeasure quantize_lifted(const DiscreteMeasure& mu, const StateGrid& grid, int ell);

/// One stage of the fully quantized flow: every support atom moves through
/// the single-particle update against the measure, the image is grid-
/// quantized and exact counts are accumulated. The accumulated counts
/// already form a type with denominator ell; this is checked against the
/// simplex quantizer on every call.
QuantizedMeasure quantized_step(const QuantizedMeasure& mu, const WeightAction& u,
                                const StateGrid& grid, const SystemConfig& cfg);

/// One stage of the state-quantized flow without measure quantization:
/// push-forward followed by grid quantization of every image atom, with
/// exact rational masses.
DiscreteMeasure state_quantized_step(const DiscreteMeasure& mu, const WeightAction& u,
                                     const StateGrid& grid, const SystemConfig& cfg);

/// Dense |X_n| x |X_n| matrix of squared ground costs between enumerated
/// superstates (row-major).
std::vector<double> quantized_cost_matrix(const StateGrid& grid, double lambda);

} // namespace liftdp
