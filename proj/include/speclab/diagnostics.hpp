#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "speclab/field.hpp"
#include "speclab/norms.hpp"

// Local growth diagnostics on the circle: Morrey-type averages over periodic
// balls and per-annulus weak-L2 decay tables, plus a log-log power-law fit.
// "Balls" are arcs of length 2r with wraparound; cell overlaps are measured
// exactly so constant fields reproduce closed forms to roundoff.

namespace speclab {

namespace detail {

// Arc-length of cell [center - h/2, center + h/2] intersected with the ball
// (x0 - r, x0 + r) on a circle of circumference L. Valid for r <= L/2.
inline double cell_ball_overlap(double cell_center, double h, double x0, double r, double L) {
    const double d = std::remainder(cell_center - x0, L);  // in [-L/2, L/2]
    double acc = 0.0;
    for (int k = -1; k <= 1; ++k) {
        const double lo = std::max(d + k * L - 0.5 * h, -r);
        const double hi = std::min(d + k * L + 0.5 * h, r);
        acc += std::max(0.0, hi - lo);
    }
    return acc;
}

}  // namespace detail

struct MorreyEntry {
    double center = 0.0;
    double radius = 0.0;
    double value = 0.0;  // r^{-beta} * integral of |f| over the ball
};

struct MorreyProfile {
    double beta = 0.25;
    std::vector<MorreyEntry> entries;
    double supremum = 0.0;
};

inline MorreyProfile morrey_profile(const Field& f, double beta, const std::vector<double>& centers,
                                    const std::vector<double>& radii) {
    if (!(beta > 0.0 && beta < 0.5))
        throw std::invalid_argument("morrey_profile: beta must lie in (0, 1/2)");
    const double length = f.grid.length;
    for (double r : radii)
        if (!(r > 0.0 && r <= 0.25 * length))
            throw std::invalid_argument("morrey_profile: radii must lie in (0, L/4]");
    const Field absf = magnitude(f);
    const double h = f.grid.spacing();

    MorreyProfile profile;
    profile.beta = beta;
    for (double x0 : centers) {
        for (double r : radii) {
            double integral = 0.0;
            for (int i = 0; i < f.grid.n; ++i)
                integral += absf.at(i) * detail::cell_ball_overlap(f.grid.point(i), h, x0, r, length);
            const double value = std::pow(r, -beta) * integral;
            profile.entries.push_back({x0, r, value});
            profile.supremum = std::max(profile.supremum, value);
        }
    }
    return profile;
}

// Weighted Lorentz norms of f restricted to a periodic ball; weights are the
// exact cell/ball overlap lengths.
inline LorentzNorms ball_lorentz(const Field& f, double x0, double r) {
    if (!(r > 0.0 && r <= 0.5 * f.grid.length))
        throw std::invalid_argument("ball_lorentz: radius must lie in (0, L/2]");
    const Field absf = magnitude(f);
    const double h = f.grid.spacing();
    std::vector<double> values(static_cast<std::size_t>(f.grid.n));
    std::vector<double> weights(static_cast<std::size_t>(f.grid.n));
    for (int i = 0; i < f.grid.n; ++i) {
        values[static_cast<std::size_t>(i)] = absf.at(i);
        weights[static_cast<std::size_t>(i)] =
            detail::cell_ball_overlap(f.grid.point(i), h, x0, r, f.grid.length);
    }
    return lorentz_from_samples(values, weights);
}

struct AnnularEntry {
    int h = 0;
    double inner_radius = 0.0;  // 2^{h-1} r
    double outer_radius = 0.0;  // 2^{h+1} r
    double l2weak = 0.0;
};

struct AnnularProfile {
    double x0 = 0.0;
    double r = 0.0;
    std::vector<AnnularEntry> entries;
    double weighted_sum = 0.0;  // sum_h 2^{-h/2} * l2weak
};

// Weak-L2 norms over the dyadic annuli B(x0, 2^{h+1}r) \ B(x0, 2^{h-1}r),
// h >= 0 while the outer ball still fits in half the circle.
inline AnnularProfile annular_l2weak_profile(const Field& f, double x0, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("annular_l2weak_profile: r must be positive");
    const double length = f.grid.length;
    const Field absf = magnitude(f);
    const double h_cell = f.grid.spacing();

    AnnularProfile profile;
    profile.x0 = x0;
    profile.r = r;
    for (int h = 0; std::ldexp(r, h + 1) <= 0.5 * length; ++h) {
        const double r_in = std::ldexp(r, h - 1);
        const double r_out = std::ldexp(r, h + 1);
        std::vector<double> values(static_cast<std::size_t>(f.grid.n));
        std::vector<double> weights(static_cast<std::size_t>(f.grid.n));
        for (int i = 0; i < f.grid.n; ++i) {
            const double x = f.grid.point(i);
            values[static_cast<std::size_t>(i)] = absf.at(i);
            weights[static_cast<std::size_t>(i)] =
                detail::cell_ball_overlap(x, h_cell, x0, r_out, length) -
                detail::cell_ball_overlap(x, h_cell, x0, r_in, length);
        }
        const double l2weak = lorentz_from_samples(values, weights).l2inf;
        profile.entries.push_back({h, r_in, r_out, l2weak});
        profile.weighted_sum += std::pow(2.0, -0.5 * h) * l2weak;
    }
    return profile;
}

struct DecayFit {
    double beta_hat = 0.0;  // slope of log(value) against log(r)
    double log_c = 0.0;
    double r_squared = 1.0;
    int points_used = 0;
};

inline DecayFit fit_power_law(const std::vector<double>& radii, const std::vector<double>& values) {
    if (radii.size() != values.size())
        throw std::invalid_argument("fit_power_law: length mismatch");
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (radii[i] > 0.0 && values[i] > 0.0) {
            xs.push_back(std::log(radii[i]));
            ys.push_back(std::log(values[i]));
        }
    }
    if (xs.size() < 2) throw std::invalid_argument("fit_power_law: need at least two usable points");
    const auto n = static_cast<double>(xs.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw std::invalid_argument("fit_power_law: degenerate radius lattice");
    DecayFit fit;
    fit.points_used = static_cast<int>(xs.size());
    fit.beta_hat = (n * sxy - sx * sy) / denom;
    fit.log_c = (sy - fit.beta_hat * sx) / n;
    double ss_res = 0.0, ss_tot = 0.0;
    const double ybar = sy / n;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double pred = fit.log_c + fit.beta_hat * xs[i];
        ss_res += (ys[i] - pred) * (ys[i] - pred);
        ss_tot += (ys[i] - ybar) * (ys[i] - ybar);
    }
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

}  // namespace speclab
