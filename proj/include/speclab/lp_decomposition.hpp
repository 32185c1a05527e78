#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "speclab/field.hpp"
#include "speclab/norms.hpp"
#include "speclab/spectral.hpp"

namespace speclab {

// Dyadic frequency cutoff: 1 on |xi| <= 1, 0 on |xi| >= 2, and the fixed
// smooth blend exp(1 - 1/(1 - t^2)) with t = |xi| - 1 in between.  This exact
// formula is part of the output contract; all block-based quantities
// (Besov, Hardy, paraproducts) are reproducible bit for bit from it.
inline double dyadic_cutoff(double xi) {
    const double a = std::abs(xi);
    if (a <= 1.0) return 1.0;
    if (a >= 2.0) return 0.0;
    const double t = a - 1.0;
    return std::exp(1.0 - 1.0 / (1.0 - t * t));
}

// Annulus weight for scale j: psi(2^-j xi) with psi = cutoff(xi) - cutoff(2 xi),
// supported in 2^{j-1} <= |xi| <= 2^{j+1}.
inline double dyadic_annulus(int j, double xi) {
    const double y = std::ldexp(std::abs(xi), -j); // |xi| / 2^j
    return dyadic_cutoff(y) - dyadic_cutoff(2.0 * y);
}

// Frequency-localised pieces of a field: a low-pass part containing
// |xi| <= 2^{j0} (and the mean) plus annular blocks for j = j0 .. j_max.
// The pieces sum exactly back to the field.
struct LPDecomposition {
    Field lowpass;
    int j0 = 1;
    std::vector<std::pair<int, Field>> blocks; // (j, block)
};

namespace detail {

inline Field filter_by(const Spectrum& s, const std::function<double(double)>& weight) {
    Spectrum t = s;
    for (auto& comp : t.coef)
        for (int j = 0; j < s.grid.n; ++j) comp[j] *= weight(s.grid.frequency_of_bin(j));
    return inverse(t);
}

} // namespace detail

inline LPDecomposition lp_blocks(const Field& f) {
    require_finite(f, "lp_blocks");
    LPDecomposition dec;
    dec.j0 = 1;
    const Spectrum s = forward(f);
    dec.lowpass = detail::filter_by(s, [](double xi) { return dyadic_cutoff(xi); });
    const double xi_max = f.grid.max_frequency();
    for (int j = dec.j0; std::ldexp(1.0, j - 1) <= xi_max; ++j) {
        Field block = detail::filter_by(s, [j](double xi) { return dyadic_annulus(j, xi); });
        dec.blocks.emplace_back(j, std::move(block));
    }
    return dec;
}

inline Field lp_reconstruct(const LPDecomposition& dec) {
    Field out = dec.lowpass;
    for (const auto& [j, block] : dec.blocks) out += block;
    return out;
}

// sup_j of the block sup-norms; the low-pass part is excluded, matching the
// homogeneous-space reading (constants score zero).
inline double besov_b0_infinf_norm(const Field& f) {
    const LPDecomposition dec = lp_blocks(f);
    double norm = 0.0;
    for (const auto& [j, block] : dec.blocks) norm = std::max(norm, lp_norm(block, std::numeric_limits<double>::infinity()));
    return norm;
}

// L^1 norm of the block square function (sum_j |f_j|^2)^(1/2); mean-free
// blocks only, so constants again score zero.
inline double hardy_h1_norm(const Field& f) {
    const LPDecomposition dec = lp_blocks(f);
    Field sq = Field::zeros(f.grid);
    for (const auto& [j, block] : dec.blocks)
        for (int i = 0; i < f.grid.n; ++i)
            for (int k = 0; k < block.comps(); ++k) sq.at(i) += block.comp(i, k) * block.comp(i, k);
    for (int i = 0; i < f.grid.n; ++i) sq.at(i) = std::sqrt(sq.at(i));
    return lp_norm(sq, 1.0);
}

// Mean-oscillation norm over the periodic dyadic interval family: lengths
// L/2^k for k = 0 .. log2(n) - 2 (at least four samples per interval) at every
// grid offset, scored by mean absolute deviation from the interval mean.
inline double bmo_norm(const Field& f) {
    require_finite(f, "bmo_norm");
    const Field m = f.is_scalar() ? f : magnitude(f);
    const int n = f.grid.n;

    // doubled prefix sums for cyclic windows
    std::vector<double> pre(2 * n + 1, 0.0);
    for (int i = 0; i < 2 * n; ++i) pre[i + 1] = pre[i] + m.at(i % n);

    double best = 0.0;
    for (int len = n; len >= 4; len /= 2) {
        for (int start = 0; start < n; ++start) {
            const double mean = (pre[start + len] - pre[start]) / len;
            double dev = 0.0;
            for (int i = start; i < start + len; ++i) dev += std::abs(m.at(i % n) - mean);
            best = std::max(best, dev / len);
        }
    }
    return best;
}

// Low/high frequency interaction split of a pointwise product.  With the
// extended block list b_0 = lowpass, b_p = annulus j0+p-1, the three pieces
// partition all block pairs: (p,q) with q <= p-4 goes to low_second,
// p <= q-4 to low_first, |p-q| <= 3 to diagonal.  Their sum telescopes to the
// plain pointwise product exactly.
struct Paraproducts {
    Field low_second; // frequencies of f dominate
    Field low_first;  // frequencies of g dominate
    Field diagonal;   // comparable frequencies
};

inline Paraproducts paraproducts(const Field& f, const Field& g) {
    require_same_grid(f, g, "paraproducts");
    if (!f.is_scalar() || !g.is_scalar())
        throw std::invalid_argument("paraproducts: scalar fields expected");

    const LPDecomposition df = lp_blocks(f);
    const LPDecomposition dg = lp_blocks(g);

    std::vector<Field> bf, bg;
    bf.push_back(df.lowpass);
    for (const auto& [j, b] : df.blocks) bf.push_back(b);
    bg.push_back(dg.lowpass);
    for (const auto& [j, b] : dg.blocks) bg.push_back(b);
    const int nf = static_cast<int>(bf.size());
    const int ng = static_cast<int>(bg.size());

    // cumulative sums over block index
    std::vector<Field> cf(nf), cg(ng);
    for (int p = 0; p < nf; ++p) cf[p] = p ? cf[p - 1] + bf[p] : bf[p];
    for (int q = 0; q < ng; ++q) cg[q] = q ? cg[q - 1] + bg[q] : bg[q];

    Paraproducts out{Field::zeros(f.grid), Field::zeros(f.grid), Field::zeros(f.grid)};
    for (int p = 0; p < nf; ++p) {
        if (p - 4 >= 0) out.low_second += pointwise_multiply(bf[p], cg[std::min(p - 4, ng - 1)]);
        Field near = Field::zeros(f.grid);
        for (int q = std::max(0, p - 3); q <= std::min(ng - 1, p + 3); ++q) near += bg[q];
        out.diagonal += pointwise_multiply(bf[p], near);
    }
    for (int q = 0; q < ng; ++q)
        if (q - 4 >= 0) out.low_first += pointwise_multiply(bg[q], cf[std::min(q - 4, nf - 1)]);
    return out;
}

} // namespace speclab
