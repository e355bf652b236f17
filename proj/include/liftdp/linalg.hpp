#pragma once

#include <cstddef>
#include <vector>

namespace liftdp {

using Vec = std::vector<double>;

/// Dense row-major matrix, sized for the small weight blocks used here.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

    double& operator()(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
    double operator()(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }

    bool operator==(const Matrix&) const = default;
};

inline Vec matvec(const Matrix& m, const Vec& x) {
    Vec out(static_cast<std::size_t>(m.rows), 0.0);
    for (int r = 0; r < m.rows; ++r) {
        double acc = 0.0;
        for (int c = 0; c < m.cols; ++c) acc += m(r, c) * x[static_cast<std::size_t>(c)];
        out[static_cast<std::size_t>(r)] = acc;
    }
    return out;
}

inline double dot(const Vec& a, const Vec& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

inline double squared_distance(const Vec& a, const Vec& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

} // namespace liftdp
