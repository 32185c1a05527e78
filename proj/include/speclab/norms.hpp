#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "speclab/field.hpp"
#include "speclab/spectral.hpp"

namespace speclab {

// L^p quadrature norm (sum |f|^p * dx)^(1/p); p = infinity gives the max.
// Non-scalar shapes are reduced pointwise to their Euclidean magnitude first.
inline double lp_norm(const Field& f, double p) {
    require_finite(f, "lp_norm");
    if (std::isinf(p)) {
        const Field m = f.is_scalar() ? f : magnitude(f);
        return max_abs(m);
    }
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1 or infinity");
    const Field m = f.is_scalar() ? f : magnitude(f);
    const double dx = f.grid.spacing();
    double acc = 0.0;
    for (int i = 0; i < f.grid.n; ++i) acc += std::pow(std::abs(m.at(i)), p) * dx;
    return std::pow(acc, 1.0 / p);
}

// Decreasing rearrangement of |f| with one cell of measure length/n per sample.
struct RearrangementProfile {
    std::vector<double> values; // sorted descending
    double cell = 0.0;          // measure per sample
};

inline RearrangementProfile decreasing_rearrangement(const Field& f) {
    require_finite(f, "decreasing_rearrangement");
    const Field m = f.is_scalar() ? f : magnitude(f);
    RearrangementProfile p;
    p.cell = f.grid.spacing();
    p.values.resize(static_cast<std::size_t>(f.grid.n));
    for (int i = 0; i < f.grid.n; ++i) p.values[i] = std::abs(m.at(i));
    std::sort(p.values.begin(), p.values.end(), std::greater<double>());
    return p;
}

struct LorentzNorms {
    double l21 = 0.0;  // integral of t^{-1/2} f*(t) dt, exact for step profiles
    double l2inf = 0.0; // sup_t t^{1/2} f*(t)
};

// Lorentz functionals of a weighted step profile: value v_i on a cell of
// measure w_i.  Values need not be pre-sorted.
inline LorentzNorms lorentz_from_samples(std::vector<double> values, std::vector<double> weights) {
    if (values.size() != weights.size())
        throw std::invalid_argument("lorentz_from_samples: size mismatch");
    std::vector<std::size_t> order(values.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(values[a]) > std::abs(values[b]);
    });
    LorentzNorms out;
    double t = 0.0;
    double sqrt_prev = 0.0;
    for (std::size_t idx : order) {
        const double w = weights[idx];
        if (!(w >= 0.0)) throw std::invalid_argument("lorentz_from_samples: negative weight");
        if (w == 0.0) continue;
        const double v = std::abs(values[idx]);
        t += w;
        const double sqrt_t = std::sqrt(t);
        out.l21 += v * 2.0 * (sqrt_t - sqrt_prev);
        out.l2inf = std::max(out.l2inf, sqrt_t * v);
        sqrt_prev = sqrt_t;
    }
    return out;
}

inline LorentzNorms lorentz_norms(const Field& f) {
    const RearrangementProfile p = decreasing_rearrangement(f);
    std::vector<double> w(p.values.size(), p.cell);
    return lorentz_from_samples(p.values, w);
}

// Homogeneous Sobolev seminorm: L^2 norm of |xi|^s f-hat.  Any real s; the
// constant mode never contributes.
inline double sobolev_norm(const Field& f, double s) {
    return lp_norm(homogeneous_weight(f, s), 2.0);
}

} // namespace speclab
