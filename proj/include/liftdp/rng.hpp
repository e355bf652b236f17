#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "liftdp/linalg.hpp"

namespace liftdp {

/// Seeded generator with a fixed bit-to-double mapping. std::mt19937_64 output
/// is specified by the standard, and the explicit mapping below keeps draws
/// identical across standard libraries (the std distributions are not).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    Vec uniform_vec(std::size_t n, double lo, double hi) {
        Vec v(n);
        for (auto& x : v) x = uniform(lo, hi);
        return v;
    }

    /// Standard exponential via inversion; used for simplex sampling.
    double exponential() {
        double u;
        do {
            u = uniform01();
        } while (u <= 0.0);
        return -std::log(u);
    }

    std::uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

} // namespace liftdp
