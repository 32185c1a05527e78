#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "speclab/compensation.hpp"
#include "speclab/json_out.hpp"
#include "speclab/lp_decomposition.hpp"
#include "speclab/norms.hpp"
#include "speclab/rng.hpp"
#include "speclab/rotation.hpp"
#include "speclab/spectral.hpp"

namespace speclab {

// Seeded band-limited Gaussian field: each component excites modes 1..band
// with N(0,1)/sqrt(band) cosine/sine weights times `amplitude`; mean-free by
// construction and deterministic for a given Rng state.
inline Field band_limited_field(const Grid1D& g, Rng& rng, int band, double amplitude,
                                int rows = 1, int cols = 1) {
    if (band < 1 || band >= g.n / 2)
        throw std::invalid_argument("band_limited_field: band must lie in [1, n/2)");
    Field f = Field::zeros(g, rows, cols);
    const double scale = amplitude / std::sqrt(static_cast<double>(band));
    for (int k = 0; k < f.comps(); ++k) {
        for (int mode = 1; mode <= band; ++mode) {
            const double a = rng.normal() * scale;
            const double b = rng.normal() * scale;
            const double xi = 2.0 * std::numbers::pi * mode / g.length;
            for (int i = 0; i < g.n; ++i) {
                const double x = g.point(i);
                f.comp(i, k) += a * std::cos(xi * x) + b * std::sin(xi * x);
            }
        }
    }
    return f;
}

inline Field antisymmetric_band_limited(const Grid1D& g, Rng& rng, int m, int band,
                                        double amplitude) {
    const Field a = band_limited_field(g, rng, band, amplitude, m, m);
    return symm_asymm_split(a).asymm;
}

struct EnsembleConfig {
    int n = 256;
    double length = 2.0 * std::numbers::pi;
    std::uint64_t seed = 7;
    int count = 100;
    int band = 8;
    double amplitude = 1.0;
};

struct SweepRow {
    int k = 0;
    double compensated = 0.0;
    double naive = 0.0;
};

struct RatioStats {
    double min = 0.0;
    double median = 0.0;
    double max = 0.0;
};

struct OperatorReport {
    std::string operator_name;
    std::string norm_spec;
    EnsembleConfig config;
    int ensemble_size = 0;
    int degenerate_count = 0;
    RatioStats ratio_stats;
    std::vector<SweepRow> frequency_sweep;
};

namespace detail {

struct OpEstimate {
    Field (*apply)(const Field&, const Field&);
    const char* default_norms;
    double (*numerator)(const Field&);
    double (*denominator)(const Field&, const Field&);
};

inline double norm_hm12(const Field& f) { return sobolev_norm(f, -0.5); }
inline double norm_h1(const Field& f) { return hardy_h1_norm(f); }

inline double den_h12_l2w(const Field& q, const Field& v) {
    return sobolev_norm(q, 0.5) * lorentz_norms(v).l2inf;
}
inline double den_h12_bmo(const Field& q, const Field& v) {
    return sobolev_norm(q, 0.5) * bmo_norm(v);
}
inline double den_h12_h12(const Field& q, const Field& v) {
    return sobolev_norm(q, 0.5) * sobolev_norm(v, 0.5);
}
inline double den_l2_l2w(const Field& q, const Field& v) {
    return lp_norm(q, 2.0) * lorentz_norms(v).l2inf;
}
inline double den_l2_h12(const Field& q, const Field& v) {
    return lp_norm(q, 2.0) * sobolev_norm(v, 0.5);
}

inline OpEstimate op_estimate(const std::string& name) {
    if (name == "N") return {&op_n, "Hm12 / (H12 * L2w)", &norm_hm12, &den_h12_l2w};
    if (name == "T") return {&op_t, "Hm12 / (H12 * BMO)", &norm_hm12, &den_h12_bmo};
    if (name == "S") return {&op_s, "Hm12 / (H12 * BMO)", &norm_hm12, &den_h12_bmo};
    if (name == "Stilde") return {&op_s_dual, "Hm12 / (H12 * BMO)", &norm_hm12, &den_h12_bmo};
    if (name == "R") return {&op_r, "H1 / (H12 * H12)", &norm_h1, &den_h12_h12};
    if (name == "F") return {&op_f, "Hm12 / (L2 * L2w)", &norm_hm12, &den_l2_l2w};
    if (name == "Fstar") return {&op_f_star, "H1 / (L2 * H12)", &norm_h1, &den_l2_h12};
    throw std::invalid_argument("estimate_constant: unknown operator " + name);
}

inline Field cosine_mode(const Grid1D& g, int k) {
    Field f = Field::zeros(g);
    const double xi = 2.0 * std::numbers::pi * k / g.length;
    for (int i = 0; i < g.n; ++i) f.at(i) = std::cos(xi * g.point(i));
    return f;
}

} // namespace detail

// Empirical constants: ratio statistics over a seeded Gaussian ensemble plus
// the fixed-frequency sweep Q = cos x, u = cos kx that exhibits the
// cancellation (the subtracted combination stays bounded in k while the raw
// middle term grows).
inline OperatorReport estimate_constant(const std::string& op_name, const std::string& norm_spec,
                                        const EnsembleConfig& config) {
    const detail::OpEstimate est = detail::op_estimate(op_name);
    if (!norm_spec.empty() && norm_spec != "default" && norm_spec != est.default_norms)
        throw std::invalid_argument("estimate_constant: unknown norm spec " + norm_spec);
    if (config.count < 1) throw std::invalid_argument("estimate_constant: count must be positive");

    const Grid1D g = Grid1D::make(config.n, config.length);
    Rng rng(config.seed);

    OperatorReport report;
    report.operator_name = op_name;
    report.norm_spec = est.default_norms;
    report.config = config;
    report.ensemble_size = config.count;

    std::vector<double> ratios;
    for (int i = 0; i < config.count; ++i) {
        const Field q = band_limited_field(g, rng, config.band, config.amplitude);
        const Field v = band_limited_field(g, rng, config.band, config.amplitude);
        const double den = est.denominator(q, v);
        if (den < 1e-14) {
            ++report.degenerate_count;
            continue;
        }
        ratios.push_back(est.numerator(est.apply(q, v)) / den);
    }
    if (!ratios.empty()) {
        std::sort(ratios.begin(), ratios.end());
        report.ratio_stats.min = ratios.front();
        report.ratio_stats.max = ratios.back();
        const std::size_t h = ratios.size() / 2;
        report.ratio_stats.median =
            ratios.size() % 2 ? ratios[h] : 0.5 * (ratios[h - 1] + ratios[h]);
    }

    const Field qs = detail::cosine_mode(g, 1);
    const double q_h12 = sobolev_norm(qs, 0.5);
    for (int k = 4; k <= 128 && k < g.n / 2; k *= 2) {
        const Field u = detail::cosine_mode(g, k);
        const double den = q_h12 * bmo_norm(u);
        SweepRow row;
        row.k = k;
        row.compensated = sobolev_norm(est.apply(qs, u), -0.5) / den;
        row.naive =
            sobolev_norm(product_dealiased(qs, fractional_laplacian(u, 0.5)), -0.5) / den;
        report.frequency_sweep.push_back(row);
    }
    return report;
}

inline json to_json(const OperatorReport& r) {
    json j;
    j["operator"] = r.operator_name;
    j["norms"] = r.norm_spec;
    j["config"] = {{"n", r.config.n},
                   {"length", r.config.length},
                   {"seed", r.config.seed},
                   {"count", r.config.count},
                   {"band", r.config.band},
                   {"amplitude", r.config.amplitude}};
    j["ensemble_size"] = r.ensemble_size;
    j["degenerate_count"] = r.degenerate_count;
    j["ratio_stats"] = {{"min", r.ratio_stats.min},
                        {"median", r.ratio_stats.median},
                        {"max", r.ratio_stats.max}};
    json sweep = json::array();
    for (const auto& row : r.frequency_sweep)
        sweep.push_back({{"k", row.k}, {"compensated", row.compensated}, {"naive", row.naive}});
    j["frequency_sweep"] = sweep;
    return j;
}

} // namespace speclab
