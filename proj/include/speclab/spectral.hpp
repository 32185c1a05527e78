#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "speclab/fft.hpp"
#include "speclab/field.hpp"
#include "speclab/grid.hpp"

namespace speclab {

// Raw DFT coefficients of a Field, one complex sequence per block component.
// coef[k][j] = sum_i f.comp(i,k) * exp(-2*pi*I*i*j/n); no 1/n normalisation.
struct Spectrum {
    Grid1D grid;
    int rows = 1;
    int cols = 1;
    std::vector<std::vector<std::complex<double>>> coef;

    int comps() const { return rows * cols; }
};

inline Spectrum forward(const Field& f) {
    Spectrum s;
    s.grid = f.grid;
    s.rows = f.rows;
    s.cols = f.cols;
    s.coef.resize(f.comps());
    std::vector<std::complex<double>> buf(f.grid.n);
    for (int k = 0; k < f.comps(); ++k) {
        for (int i = 0; i < f.grid.n; ++i) buf[i] = f.comp(i, k);
        detail::fft_pow2(buf, false);
        s.coef[k] = buf;
    }
    return s;
}

// Inverse transform; the imaginary residue of a well-formed real spectrum is
// at roundoff level and is dropped.
inline Field inverse(const Spectrum& s) {
    Field f = Field::zeros(s.grid, s.rows, s.cols);
    std::vector<std::complex<double>> buf;
    for (int k = 0; k < s.comps(); ++k) {
        buf = s.coef[k];
        detail::fft_pow2(buf, true);
        for (int i = 0; i < s.grid.n; ++i) f.comp(i, k) = buf[i].real();
    }
    return f;
}

namespace detail {

// Applies a frequency multiplier bin by bin.  odd = true zeroes the Nyquist
// bin, which an odd symbol (i*sign(xi), i*xi) would otherwise map out of the
// real subspace of the grid.
inline Field apply_multiplier(const Field& f, const std::function<std::complex<double>(double)>& sym,
                              bool odd, const char* what) {
    require_finite(f, what);
    Spectrum s = forward(f);
    const int n = f.grid.n;
    for (auto& comp : s.coef) {
        for (int j = 0; j < n; ++j) {
            if (j == 0) {
                comp[j] = 0.0; // homogeneous symbols annihilate the mean
            } else if (odd && j == n / 2) {
                comp[j] = 0.0;
            } else {
                comp[j] *= sym(f.grid.frequency_of_bin(j));
            }
        }
    }
    return inverse(s);
}

} // namespace detail

// (-Laplace)^s as the Fourier multiplier |xi|^{2s}; the constant mode maps to 0.
inline Field fractional_laplacian(const Field& f, double s) {
    if (!(s > 0.0 && s <= 1.0))
        throw std::invalid_argument("fractional_laplacian: s must lie in (0,1]");
    return detail::apply_multiplier(
        f, [s](double xi) { return std::complex<double>(std::pow(std::abs(xi), 2.0 * s), 0.0); },
        false, "fractional_laplacian");
}

// Inverse on the mean-free subspace: multiplier |xi|^{-2s}, constant mode -> 0.
inline Field inverse_fractional_laplacian(const Field& f, double s) {
    if (!(s > 0.0 && s <= 1.0))
        throw std::invalid_argument("inverse_fractional_laplacian: s must lie in (0,1]");
    return detail::apply_multiplier(
        f, [s](double xi) { return std::complex<double>(std::pow(std::abs(xi), -2.0 * s), 0.0); },
        false, "inverse_fractional_laplacian");
}

// Riesz transform, multiplier i*sign(xi); kills both the mean and Nyquist bins.
inline Field riesz_transform(const Field& f) {
    return detail::apply_multiplier(
        f, [](double xi) { return std::complex<double>(0.0, xi > 0.0 ? 1.0 : -1.0); }, true,
        "riesz_transform");
}

// d/dx as the multiplier i*xi (odd, so Nyquist is zeroed).
inline Field spectral_derivative(const Field& f) {
    return detail::apply_multiplier(f, [](double xi) { return std::complex<double>(0.0, xi); },
                                    true, "spectral_derivative");
}

inline Field mean_free(const Field& f) {
    Field out = f;
    const auto means = component_means(f);
    for (int i = 0; i < f.grid.n; ++i)
        for (int k = 0; k < f.comps(); ++k) out.comp(i, k) -= means[k];
    return out;
}

// |xi|^s multiplier used by Sobolev seminorms; s may be negative.
inline Field homogeneous_weight(const Field& f, double s) {
    return detail::apply_multiplier(
        f, [s](double xi) { return std::complex<double>(std::pow(std::abs(xi), s), 0.0); }, false,
        "homogeneous_weight");
}

// ---- band-projected products -----------------------------------------------
//
// Pointwise products of two grid fields alias once the combined bandwidth
// exceeds the grid.  Products below are evaluated on a 2x oversampled grid and
// truncated back, which makes each product the exact L^2 projection of the
// true product onto the representable band.

inline Spectrum upsample2_spectrum(const Spectrum& s) {
    Spectrum out;
    out.grid = Grid1D{2 * s.grid.n, s.grid.length};
    out.rows = s.rows;
    out.cols = s.cols;
    out.coef.resize(s.comps());
    const int n = s.grid.n;
    for (int k = 0; k < s.comps(); ++k) {
        std::vector<std::complex<double>> fine(2 * n, 0.0);
        for (int j = 0; j < n; ++j) {
            const int m = s.grid.mode_of_bin(j);
            if (m == -n / 2) {
                // split the Nyquist bin symmetrically to stay real and even
                fine[n / 2] += s.coef[k][j];
                fine[2 * n - n / 2] += s.coef[k][j];
            } else {
                fine[(m + 2 * n) % (2 * n)] += 2.0 * s.coef[k][j];
            }
        }
        out.coef[k] = std::move(fine);
    }
    return out;
}

inline Spectrum downsample2_spectrum(const Spectrum& s) {
    const int n2 = s.grid.n;
    const int n = n2 / 2;
    Spectrum out;
    out.grid = Grid1D{n, s.grid.length};
    out.rows = s.rows;
    out.cols = s.cols;
    out.coef.resize(s.comps());
    for (int k = 0; k < s.comps(); ++k) {
        std::vector<std::complex<double>> coarse(n, 0.0);
        for (int m = -n / 2 + 1; m < n / 2; ++m) {
            const int jf = (m + n2) % n2;
            const int jc = (m + n) % n;
            coarse[jc] += 0.5 * s.coef[k][jf];
        }
        // both fine +-n/2 bins fold onto the coarse Nyquist bin
        coarse[n / 2] += 0.5 * (s.coef[k][n / 2] + s.coef[k][n2 - n / 2]);
        out.coef[k] = std::move(coarse);
    }
    return out;
}

inline Field upsample2(const Field& f) { return inverse(upsample2_spectrum(forward(f))); }
inline Field downsample2(const Field& f) { return inverse(downsample2_spectrum(forward(f))); }

// Band-projected block product A*B (matmul shapes, scalars broadcast).
inline Field product_dealiased(const Field& a, const Field& b) {
    require_same_grid(a, b, "product_dealiased");
    const Field fa = upsample2(a);
    const Field fb = upsample2(b);
    Field fine;
    if (a.is_scalar() && !b.is_scalar()) {
        fine = Field::zeros(fa.grid, b.rows, b.cols);
        for (int i = 0; i < fa.grid.n; ++i)
            for (int k = 0; k < fine.comps(); ++k) fine.comp(i, k) = fa.at(i) * fb.comp(i, k);
    } else if (!a.is_scalar() && b.is_scalar()) {
        fine = Field::zeros(fa.grid, a.rows, a.cols);
        for (int i = 0; i < fa.grid.n; ++i)
            for (int k = 0; k < fine.comps(); ++k) fine.comp(i, k) = fa.comp(i, k) * fb.at(i);
    } else {
        if (a.cols != b.rows)
            throw std::invalid_argument("product_dealiased: inner dim mismatch");
        fine = pointwise_matmul(fa, fb);
    }
    return downsample2(fine);
}

} // namespace speclab
