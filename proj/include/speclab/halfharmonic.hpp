#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "speclab/compensation.hpp"
#include "speclab/ensemble.hpp"
#include "speclab/field.hpp"
#include "speclab/norms.hpp"
#include "speclab/rng.hpp"
#include "speclab/spectral.hpp"
#include "speclab/sphere.hpp"

// Half-harmonic map machinery for sphere targets: energy, Euler-Lagrange
// residuals, projected gradient flow, the commutator coefficient matrices, and
// assembly of the first-order antisymmetric-potential system satisfied by
// v = (P^T D^{1/2}u ; R P^N D^{1/2}u)... see assemble_system. Products of
// sampled fields are de-aliased (exact band projection) because the identities
// under test are exact cancellations that plain products would mask.

namespace speclab {

namespace detail {

inline Field mean_field(const Field& f) {
    const std::vector<double> mu = component_means(f);
    Field out = f;
    for (int i = 0; i < f.grid.n; ++i)
        for (int r = 0; r < f.rows; ++r)
            for (int c = 0; c < f.cols; ++c)
                out.at(i, r, c) = mu[static_cast<std::size_t>(r) * f.cols + c];
    return out;
}

}  // namespace detail

inline double energy(const Field& u, double tol = 1e-8) {
    require_on_sphere(u, "energy", tol);
    const double nn = lp_norm(fractional_laplacian(u, 0.25), 2.0);
    return nn * nn;
}

// Tangential part of D^{1/2}u; vanishes exactly at critical points.
inline Field el_residual(const Field& u) {
    require_on_sphere(u, "el_residual");
    return pointwise_matmul(sphere_tangent_projector(u), fractional_laplacian(u, 0.5));
}

// 2-form components u_i (D^{1/2}u)_j - u_j (D^{1/2}u)_i for i < j. For |u| = 1
// the pointwise magnitude agrees with the el_residual magnitude.
inline Field wedge_residual(const Field& u) {
    require_on_sphere(u, "wedge_residual");
    const Field h = fractional_laplacian(u, 0.5);
    const int m = u.rows;
    Field out = Field::zeros(u.grid, m * (m - 1) / 2, 1);
    for (int i = 0; i < u.grid.n; ++i) {
        int idx = 0;
        for (int r = 0; r < m; ++r)
            for (int c = r + 1; c < m; ++c, ++idx)
                out.at(i, idx, 0) = u.at(i, r, 0) * h.at(i, c, 0) - u.at(i, c, 0) * h.at(i, r, 0);
    }
    return out;
}

struct ProjectionFields {
    Field tangent;
    Field normal;
};

inline ProjectionFields projection_fields(const Field& u) {
    require_on_sphere(u, "projection_fields");
    return {sphere_tangent_projector(u), sphere_normal_projector(u)};
}

// The middle term of the third coefficient matrix is printed two ways in
// circulation: with the singular integral applied once (kPlain, matching the
// pattern of the other five) or twice (kResmoothed). Both are provided; the
// system residual refinement study selects which one closes the identity.
enum class Omega3Form { kPlain, kResmoothed };

struct OmegaMatrices {
    Field omega;    // antisymmetric exactly
    Field omega_r;  // antisymmetric exactly
    Field omega1;
    Field omega2;
    Field omega3;
    Field omega4;
};

inline OmegaMatrices omega_matrices(const Field& u, Omega3Form form = Omega3Form::kPlain) {
    require_on_sphere(u, "omega_matrices");
    const auto proj = projection_fields(u);
    const Field& pt = proj.tangent;
    const Field& pn = proj.normal;
    const Field a = fractional_laplacian(pt, 0.25);
    const Field lpn = fractional_laplacian(pn, 0.25);
    const Field b = riesz_transform(a);

    const Field a_pt = product_dealiased(a, pt);
    const Field pt_a = product_dealiased(pt, a);
    const Field b_pt = product_dealiased(b, pt);
    const Field pt_b = product_dealiased(pt, b);
    const Field l_ptpt = fractional_laplacian(product_dealiased(pt, pt), 0.25);

    OmegaMatrices om{
        .omega = 0.5 * (a_pt - pt_a),
        .omega_r = 0.5 * (b_pt - pt_b),
        .omega1 = 0.5 * (a_pt + pt_a - l_ptpt),
        .omega2 = 0.5 * (product_dealiased(a, pn) + product_dealiased(pt, lpn) -
                         fractional_laplacian(product_dealiased(pt, pn), 0.25)),
        .omega3 = Field::zeros(u.grid, u.rows, u.rows),
        .omega4 = 0.5 * (product_dealiased(b, pn) + product_dealiased(pn, b) -
                         riesz_transform(fractional_laplacian(product_dealiased(pn, pt), 0.25))),
    };
    const Field middle =
        form == Omega3Form::kPlain ? pt_b : product_dealiased(pt, fractional_laplacian(b, 0.25));
    om.omega3 = 0.5 * (b_pt + middle - riesz_transform(l_ptpt));
    return om;
}

// Identity satisfied by all sphere-valued maps, critical or not:
//   D^{1/4}(R P^N D^{1/4}u) = R S(P^N, u) + [(D^{1/4}P^N)(R D^{1/4}u)]_mean-free
// up to band-truncation terms. The subtracted mean is the torus zero mode the
// singular integrals on the left annihilate.
inline Field structure_identity_residual(const Field& u) {
    require_on_sphere(u, "structure_identity_residual");
    const Field pn = sphere_normal_projector(u);
    const Field w = fractional_laplacian(u, 0.25);
    const Field s = product_dealiased(pn, w);
    const Field x = product_dealiased(fractional_laplacian(pn, 0.25), riesz_transform(w));
    return fractional_laplacian(riesz_transform(s), 0.25) - riesz_transform(op_s(pn, u)) -
           mean_free(x);
}

// D^{1/4}(P^T D^{1/4}u) - T(P^T,u) + (D^{1/4}P^T)(D^{1/4}u): by construction
// this equals the de-aliased P^T D^{1/2}u, i.e. the smoothed EL defect, so it
// is small exactly when u is critical.
inline Field el_commutator_residual(const Field& u) {
    require_on_sphere(u, "el_commutator_residual");
    const Field pt = sphere_tangent_projector(u);
    const Field w = fractional_laplacian(u, 0.25);
    const Field t = product_dealiased(pt, w);
    return fractional_laplacian(t, 0.25) - op_t(pt, u) +
           product_dealiased(fractional_laplacian(pt, 0.25), w);
}

enum class SystemBlocks { kDerived, kPrinted };

struct SystemAssembly {
    Field v;             // 2m x 1: (P^T D^{1/4}u ; R P^N D^{1/4}u)
    Field omega;         // 2m x 2m, exactly antisymmetric
    Field omega_tilde1;  // 2m x 1
    Field omega_tilde2;  // 2m x 2m
    Field residual;      // D^{1/4}v - omega_tilde1 - omega_tilde2*v - omega*v
};

namespace detail {

inline void set_block(Field& out, int bi, int bj, const Field& blk) {
    for (int i = 0; i < out.grid.n; ++i)
        for (int r = 0; r < blk.rows; ++r)
            for (int c = 0; c < blk.cols; ++c)
                out.at(i, bi * blk.rows + r, bj * blk.cols + c) = blk.at(i, r, c);
}

inline Field stack2(const Field& top, const Field& bottom) {
    Field out = Field::zeros(top.grid, top.rows + bottom.rows, top.cols);
    for (int i = 0; i < out.grid.n; ++i) {
        for (int r = 0; r < top.rows; ++r)
            for (int c = 0; c < top.cols; ++c) out.at(i, r, c) = top.at(i, r, c);
        for (int r = 0; r < bottom.rows; ++r)
            for (int c = 0; c < bottom.cols; ++c)
                out.at(i, top.rows + r, c) = bottom.at(i, r, c);
    }
    return out;
}

}  // namespace detail

// First-order system for v = (P^T D^{1/4}u ; R P^N D^{1/4}u):
//   D^{1/4} v = omega_tilde1 + omega_tilde2 v + Omega v + residual,
// Omega antisymmetric. kDerived uses the coefficient set obtained by expanding
// (D^{1/4}P^T)(D^{1/4}u) and (D^{1/4}P^N)(R D^{1/4}u) through the projector
// algebra; its residual is the EL defect (top row) plus band-truncation terms.
// kPrinted assembles the block matrices exactly as they circulate in print,
// for side-by-side comparison; the refinement study reports both.
inline SystemAssembly assemble_system(const Field& u, Omega3Form form = Omega3Form::kPlain,
                                      SystemBlocks blocks = SystemBlocks::kDerived) {
    require_on_sphere(u, "assemble_system");
    const int m = u.rows;
    const auto proj = projection_fields(u);
    const Field& pt = proj.tangent;
    const Field& pn = proj.normal;
    const Field w = fractional_laplacian(u, 0.25);
    const Field t = product_dealiased(pt, w);
    const Field s = product_dealiased(pn, w);
    const Field v2 = riesz_transform(s);
    const OmegaMatrices om = omega_matrices(u, form);
    const Field a = fractional_laplacian(pt, 0.25);
    const Field b = riesz_transform(a);

    SystemAssembly sys{.v = detail::stack2(t, v2),
                       .omega = Field::zeros(u.grid, 2 * m, 2 * m),
                       .omega_tilde1 = Field::zeros(u.grid, 2 * m, 1),
                       .omega_tilde2 = Field::zeros(u.grid, 2 * m, 2 * m),
                       .residual = Field::zeros(u.grid, 2 * m, 1)};

    detail::set_block(sys.omega, 0, 0, -2.0 * om.omega);
    detail::set_block(sys.omega, 0, 1, 2.0 * om.omega_r);
    detail::set_block(sys.omega, 1, 0, 2.0 * om.omega_r);
    detail::set_block(sys.omega, 1, 1, -2.0 * riesz_transform(om.omega_r));

    Field top = Field::zeros(u.grid, m, 1);
    Field bottom = top;
    if (blocks == SystemBlocks::kDerived) {
        detail::set_block(sys.omega_tilde2, 0, 0, -2.0 * om.omega1);
        detail::set_block(sys.omega_tilde2, 0, 1,
                          2.0 * riesz_transform(om.omega1 + om.omega) - 2.0 * om.omega_r);
        detail::set_block(sys.omega_tilde2, 1, 0, 2.0 * om.omega3);
        detail::set_block(sys.omega_tilde2, 1, 1, -2.0 * riesz_transform(om.omega3));

        top = op_t(pt, u) - 2.0 * op_f(om.omega1 + om.omega, s);
        const Field x = product_dealiased(fractional_laplacian(pn, 0.25), riesz_transform(w));
        bottom = riesz_transform(op_s(pn, u)) + op_f(b, w) +
                 2.0 * op_f(om.omega3 + om.omega_r, s) - detail::mean_field(x);
    } else {
        detail::set_block(sys.omega_tilde2, 0, 0, -2.0 * om.omega1);
        detail::set_block(sys.omega_tilde2, 0, 1,
                          -2.0 * (riesz_transform(om.omega1 + om.omega2) +
                                  riesz_transform(om.omega) - om.omega_r));
        detail::set_block(sys.omega_tilde2, 1, 0, 2.0 * om.omega3);
        detail::set_block(sys.omega_tilde2, 1, 1, -2.0 * riesz_transform(om.omega3 - om.omega4));

        top = -2.0 * op_f(-1.0 * om.omega + om.omega1 + om.omega2, s) + op_t(pt, u);
        bottom = -2.0 * op_f(riesz_transform(fractional_laplacian(pn, 0.25)), riesz_transform(w)) -
                 2.0 * op_f(om.omega_r - om.omega3 - om.omega4, s) + riesz_transform(op_s(pn, u));
    }
    sys.omega_tilde1 = detail::stack2(top, bottom);
    sys.residual = fractional_laplacian(sys.v, 0.25) - sys.omega_tilde1 -
                   product_dealiased(sys.omega_tilde2, sys.v) -
                   product_dealiased(sys.omega, sys.v);
    return sys;
}

// Quadrature of <D^{1/4}(u1 - u0), D^{1/4}(u1 + u0)>, an exact rearrangement
// of energy(u1) - energy(u0) that stays accurate when the difference is tiny.
inline double energy_difference(const Field& u1, const Field& u0) {
    const Field d = fractional_laplacian(u1 - u0, 0.25);
    const Field p = fractional_laplacian(u1 + u0, 0.25);
    double acc = 0.0;
    for (std::size_t i = 0; i < d.data.size(); ++i) acc += d.data[i] * p.data[i];
    return acc * u0.grid.spacing();
}

// One projected-gradient candidate u' = project(u - tau D^{1/2}u); accepted
// iff the energy strictly decreases.
inline std::pair<Field, bool> flow_step(const Field& u, double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("flow_step: tau must be positive");
    require_on_sphere(u, "flow_step");
    const Field cand = project_to_sphere(u - tau * fractional_laplacian(u, 0.5));
    const bool accepted = energy_difference(cand, u) < 0.0;
    return {accepted ? cand : u, accepted};
}

struct FlowStepRecord {
    double energy = 0.0;
    double el_norm = 0.0;
    double tau = 0.0;
};

struct FlowConfig {
    int max_steps = 2000;
    double el_tol = 1e-6;
    double tau0 = 0.0;  // 0 selects 1/xi_max
    double tau_floor = 1e-12;
};

struct FlowTrace {
    Field u;
    std::vector<FlowStepRecord> steps;  // initial state, then one row per accepted step
    bool reached_tol = false;
    std::string stop_reason;  // "el_tol" | "tau_floor" | "max_steps"
    double final_energy = 0.0;
    double final_el_norm = 0.0;
};

inline FlowTrace run_flow(const Field& u0, const FlowConfig& config = {}) {
    require_on_sphere(u0, "run_flow");
    const double tau_max = config.tau0 > 0.0 ? config.tau0 : 1.0 / u0.grid.max_frequency();
    FlowTrace trace;
    trace.u = u0;
    double tau = tau_max;
    double en = energy(u0);
    double el = lp_norm(el_residual(u0), 2.0);
    trace.steps.push_back({en, el, 0.0});

    for (int step = 0; step < config.max_steps; ++step) {
        if (el <= config.el_tol) {
            trace.reached_tol = true;
            trace.stop_reason = "el_tol";
            break;
        }
        auto [next, accepted] = flow_step(trace.u, tau);
        if (accepted) {
            en += energy_difference(next, trace.u);  // keeps the recorded sequence monotone
            trace.u = next;
            el = lp_norm(el_residual(trace.u), 2.0);
            trace.steps.push_back({en, el, tau});
            tau = std::min(1.2 * tau, tau_max);
        } else {
            tau *= 0.5;
            if (tau < config.tau_floor) {
                trace.stop_reason = "tau_floor";
                break;
            }
        }
    }
    if (el <= config.el_tol) {
        trace.reached_tol = true;
        trace.stop_reason = "el_tol";
    } else if (trace.stop_reason.empty()) {
        trace.stop_reason = "max_steps";
    }
    trace.final_energy = en;
    trace.final_el_norm = el;
    return trace;
}

// Seeded initial data: reproducible off-critical starts for the flow.
inline Field perturbed_winding(const Grid1D& g, int k, std::uint64_t seed, double amplitude = 0.1,
                               int band = 8) {
    Rng rng(seed);
    const Field bump = band_limited_field(g, rng, band, amplitude, 2, 1);
    return project_to_sphere(winding_map(g, k) + bump);
}

inline Field perturbed_equator(const Grid1D& g, std::uint64_t seed, double amplitude = 0.1,
                               int band = 8) {
    Rng rng(seed);
    const Field bump = band_limited_field(g, rng, band, amplitude, 3, 1);
    return project_to_sphere(equator_map(g) + bump);
}

}  // namespace speclab
