#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "speclab/field.hpp"

namespace speclab {

struct SymmAsymm {
    Field symm;
    Field asymm;
};

inline SymmAsymm symm_asymm_split(const Field& a) {
    if (a.rows != a.cols) throw std::invalid_argument("symm_asymm_split: square matrix expected");
    SymmAsymm out{Field::zeros(a.grid, a.rows, a.cols), Field::zeros(a.grid, a.rows, a.cols)};
    for (int i = 0; i < a.grid.n; ++i)
        for (int r = 0; r < a.rows; ++r)
            for (int c = 0; c < a.cols; ++c) {
                const double s = 0.5 * (a.at(i, r, c) + a.at(i, c, r));
                const double w = 0.5 * (a.at(i, r, c) - a.at(i, c, r));
                out.symm.at(i, r, c) = s;
                out.asymm.at(i, r, c) = w;
            }
    return out;
}

inline void require_antisymmetric(const Field& a, const char* what, double tol = 1e-10) {
    if (a.rows != a.cols) throw std::invalid_argument(std::string(what) + ": square matrix expected");
    for (int i = 0; i < a.grid.n; ++i)
        for (int r = 0; r < a.rows; ++r)
            for (int c = 0; c < a.cols; ++c)
                if (std::abs(a.at(i, r, c) + a.at(i, c, r)) > tol)
                    throw std::invalid_argument(std::string(what) + ": matrix is not antisymmetric");
}

namespace detail {

// exp of one antisymmetric m x m block by scaling-and-squaring Taylor series
inline void exp_antisym_block(const std::vector<double>& eta, std::vector<double>& out, int m) {
    double norm2 = 0.0;
    for (double v : eta) norm2 += v * v;
    const double norm = std::sqrt(norm2); // Frobenius bounds the spectral norm
    int squarings = 0;
    double scale = 1.0;
    while (norm * scale > 0.25) {
        scale *= 0.5;
        ++squarings;
    }

    std::vector<double> x(eta);
    for (double& v : x) v *= scale;

    std::vector<double> term(static_cast<std::size_t>(m) * m, 0.0);
    for (int r = 0; r < m; ++r) term[r * m + r] = 1.0;
    std::vector<double> acc(term);
    std::vector<double> next(static_cast<std::size_t>(m) * m);
    for (int k = 1; k <= 16; ++k) {
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < m; ++c) {
                double s = 0.0;
                for (int j = 0; j < m; ++j) s += term[r * m + j] * x[j * m + c];
                next[r * m + c] = s / k;
            }
        term.swap(next);
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += term[i];
    }

    for (int q = 0; q < squarings; ++q) {
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < m; ++c) {
                double s = 0.0;
                for (int j = 0; j < m; ++j) s += acc[r * m + j] * acc[j * m + c];
                next[r * m + c] = s;
            }
        acc.swap(next);
    }
    out = std::move(acc);
}

} // namespace detail

// Pointwise matrix exponential of an antisymmetric field: closed form for m=2,
// Rodrigues for m=3, scaling-and-squaring otherwise.  Output is orthogonal
// with determinant +1 at every sample.
inline Field exp_so(const Field& eta) {
    require_antisymmetric(eta, "exp_so");
    const int m = eta.rows;
    Field out = Field::zeros(eta.grid, m, m);

    if (m == 1) {
        for (int i = 0; i < eta.grid.n; ++i) out.at(i) = 1.0;
        return out;
    }

    if (m == 2) {
        for (int i = 0; i < eta.grid.n; ++i) {
            const double b = eta.at(i, 1, 0);
            const double cb = std::cos(b), sb = std::sin(b);
            out.at(i, 0, 0) = cb;
            out.at(i, 0, 1) = -sb;
            out.at(i, 1, 0) = sb;
            out.at(i, 1, 1) = cb;
        }
        return out;
    }

    if (m == 3) {
        for (int i = 0; i < eta.grid.n; ++i) {
            // axis vector of the antisymmetric block
            const double a1 = eta.at(i, 2, 1);
            const double a2 = eta.at(i, 0, 2);
            const double a3 = eta.at(i, 1, 0);
            const double th = std::sqrt(a1 * a1 + a2 * a2 + a3 * a3);
            // exp(K) = I + sinc(th) K + (1-cos th)/th^2 K^2, stable near th = 0
            double c1, c2;
            if (th < 1e-4) {
                c1 = 1.0 - th * th / 6.0;
                c2 = 0.5 - th * th / 24.0;
            } else {
                c1 = std::sin(th) / th;
                c2 = (1.0 - std::cos(th)) / (th * th);
            }
            const double k[3][3] = {{0, -a3, a2}, {a3, 0, -a1}, {-a2, a1, 0}};
            for (int r = 0; r < 3; ++r)
                for (int c = 0; c < 3; ++c) {
                    double k2 = 0.0;
                    for (int j = 0; j < 3; ++j) k2 += k[r][j] * k[j][c];
                    out.at(i, r, c) = (r == c ? 1.0 : 0.0) + c1 * k[r][c] + c2 * k2;
                }
        }
        return out;
    }

    std::vector<double> block(static_cast<std::size_t>(m) * m), result;
    for (int i = 0; i < eta.grid.n; ++i) {
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < m; ++c) block[r * m + c] = eta.at(i, r, c);
        detail::exp_antisym_block(block, result, m);
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < m; ++c) out.at(i, r, c) = result[r * m + c];
    }
    return out;
}

// Determinant at each sample (cofactor expansion; fine for the small m here).
inline double det_block(const Field& f, int i) {
    const int m = f.rows;
    if (f.rows != f.cols) throw std::invalid_argument("det_block: square matrix expected");
    std::vector<double> a(static_cast<std::size_t>(m) * m);
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c) a[r * m + c] = f.at(i, r, c);
    // Gaussian elimination with partial pivoting
    double det = 1.0;
    for (int col = 0; col < m; ++col) {
        int piv = col;
        for (int r = col + 1; r < m; ++r)
            if (std::abs(a[r * m + col]) > std::abs(a[piv * m + col])) piv = r;
        if (a[piv * m + col] == 0.0) return 0.0;
        if (piv != col) {
            for (int c = 0; c < m; ++c) std::swap(a[piv * m + c], a[col * m + c]);
            det = -det;
        }
        det *= a[col * m + col];
        for (int r = col + 1; r < m; ++r) {
            const double factor = a[r * m + col] / a[col * m + col];
            for (int c = col; c < m; ++c) a[r * m + c] -= factor * a[col * m + c];
        }
    }
    return det;
}

// max over samples of ||P(x)^T P(x) - Id||_infinity
inline double orthogonality_defect(const Field& p) {
    if (p.rows != p.cols) throw std::invalid_argument("orthogonality_defect: square matrix expected");
    const int m = p.rows;
    double worst = 0.0;
    for (int i = 0; i < p.grid.n; ++i)
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < m; ++c) {
                double s = 0.0;
                for (int j = 0; j < m; ++j) s += p.at(i, j, r) * p.at(i, j, c);
                worst = std::max(worst, std::abs(s - (r == c ? 1.0 : 0.0)));
            }
    return worst;
}

inline void require_orthogonal(const Field& p, const char* what, double tol = 1e-8) {
    if (orthogonality_defect(p) > tol)
        throw std::invalid_argument(std::string(what) + ": field is not pointwise orthogonal");
}

} // namespace speclab
