#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "speclab/grid.hpp"

namespace speclab {

// Real-valued field sampled on a Grid1D.  Each grid point carries a rows x cols
// block stored row-major; grid points are consecutive, so the flat layout is
// data[(i*rows + r)*cols + c].  Scalars are rows = cols = 1, column vectors are
// cols = 1.
struct Field {
    Grid1D grid;
    int rows = 1;
    int cols = 1;
    std::vector<double> data;

    static Field zeros(const Grid1D& g, int rows = 1, int cols = 1) {
        if (rows < 1 || cols < 1) throw std::invalid_argument("Field: non-positive shape");
        Field f;
        f.grid = g;
        f.rows = rows;
        f.cols = cols;
        f.data.assign(static_cast<std::size_t>(g.n) * rows * cols, 0.0);
        return f;
    }

    static Field constant(const Grid1D& g, double value) {
        Field f = zeros(g);
        for (double& v : f.data) v = value;
        return f;
    }

    int comps() const { return rows * cols; }
    bool is_scalar() const { return rows == 1 && cols == 1; }

    double& at(int i, int r = 0, int c = 0) {
        return data[(static_cast<std::size_t>(i) * rows + r) * cols + c];
    }
    double at(int i, int r = 0, int c = 0) const {
        return data[(static_cast<std::size_t>(i) * rows + r) * cols + c];
    }

    // k-th component (row-major within the block) at grid point i.
    double& comp(int i, int k) { return data[static_cast<std::size_t>(i) * comps() + k]; }
    double comp(int i, int k) const { return data[static_cast<std::size_t>(i) * comps() + k]; }
};

inline void require_same_grid(const Field& a, const Field& b, const char* what) {
    if (!(a.grid == b.grid))
        throw std::invalid_argument(std::string(what) + ": grid mismatch");
}

inline void require_same_layout(const Field& a, const Field& b, const char* what) {
    require_same_grid(a, b, what);
    if (a.rows != b.rows || a.cols != b.cols)
        throw std::invalid_argument(std::string(what) + ": shape mismatch");
}

inline void require_finite(const Field& f, const char* what) {
    for (double v : f.data)
        if (!std::isfinite(v))
            throw std::invalid_argument(std::string(what) + ": non-finite sample");
}

inline Field operator+(const Field& a, const Field& b) {
    require_same_layout(a, b, "Field::operator+");
    Field out = a;
    for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] += b.data[i];
    return out;
}

inline Field operator-(const Field& a, const Field& b) {
    require_same_layout(a, b, "Field::operator-");
    Field out = a;
    for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] -= b.data[i];
    return out;
}

inline Field operator*(double s, const Field& a) {
    Field out = a;
    for (double& v : out.data) v *= s;
    return out;
}

inline Field& operator+=(Field& a, const Field& b) {
    require_same_layout(a, b, "Field::operator+=");
    for (std::size_t i = 0; i < a.data.size(); ++i) a.data[i] += b.data[i];
    return a;
}

inline Field& operator-=(Field& a, const Field& b) {
    require_same_layout(a, b, "Field::operator-=");
    for (std::size_t i = 0; i < a.data.size(); ++i) a.data[i] -= b.data[i];
    return a;
}

// Pointwise Euclidean (Frobenius) magnitude, reducing any shape to a scalar field.
inline Field magnitude(const Field& f) {
    Field out = Field::zeros(f.grid);
    const int k = f.comps();
    for (int i = 0; i < f.grid.n; ++i) {
        double s = 0.0;
        for (int c = 0; c < k; ++c) s += f.comp(i, c) * f.comp(i, c);
        out.at(i) = std::sqrt(s);
    }
    return out;
}

inline Field transpose(const Field& f) {
    Field out = Field::zeros(f.grid, f.cols, f.rows);
    for (int i = 0; i < f.grid.n; ++i)
        for (int r = 0; r < f.rows; ++r)
            for (int c = 0; c < f.cols; ++c) out.at(i, c, r) = f.at(i, r, c);
    return out;
}

inline Field identity_field(const Grid1D& g, int m) {
    Field out = Field::zeros(g, m, m);
    for (int i = 0; i < g.n; ++i)
        for (int r = 0; r < m; ++r) out.at(i, r, r) = 1.0;
    return out;
}

// Per-component means; index k is the row-major block position.
inline std::vector<double> component_means(const Field& f) {
    std::vector<double> means(f.comps(), 0.0);
    for (int i = 0; i < f.grid.n; ++i)
        for (int k = 0; k < f.comps(); ++k) means[k] += f.comp(i, k);
    for (double& m : means) m /= f.grid.n;
    return means;
}

inline double max_abs(const Field& f) {
    double m = 0.0;
    for (double v : f.data) m = std::max(m, std::abs(v));
    return m;
}

// Pointwise block products; these operate sample by sample with no spectral
// truncation and are meant for algebraic constructions (projectors, rotations).
inline Field pointwise_matmul(const Field& a, const Field& b) {
    require_same_grid(a, b, "pointwise_matmul");
    if (a.cols != b.rows) throw std::invalid_argument("pointwise_matmul: inner dim mismatch");
    Field out = Field::zeros(a.grid, a.rows, b.cols);
    for (int i = 0; i < a.grid.n; ++i)
        for (int r = 0; r < a.rows; ++r)
            for (int c = 0; c < b.cols; ++c) {
                double s = 0.0;
                for (int k = 0; k < a.cols; ++k) s += a.at(i, r, k) * b.at(i, k, c);
                out.at(i, r, c) = s;
            }
    return out;
}

inline Field pointwise_multiply(const Field& a, const Field& b) {
    require_same_grid(a, b, "pointwise_multiply");
    if (!a.is_scalar() || !b.is_scalar())
        throw std::invalid_argument("pointwise_multiply: scalar fields expected");
    Field out = a;
    for (int i = 0; i < a.grid.n; ++i) out.at(i) *= b.at(i);
    return out;
}

} // namespace speclab
