#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "speclab/field.hpp"
#include "speclab/norms.hpp"
#include "speclab/rotation.hpp"
#include "speclab/spectral.hpp"

// Optimal-gauge construction: find P in SO(m) with Asymm(P^T D^{1/4} P) = Omega.
// This module works with plain pointwise matrix products throughout, so the
// discrete equation is self-consistent (the residual read off from a solution
// vanishes identically, not just up to aliasing).

namespace speclab {

struct LinearSolveError : std::runtime_error {
    double last_residual;
    LinearSolveError(const std::string& msg, double r)
        : std::runtime_error(msg), last_residual(r) {}
};

namespace detail {

// G = P^T D^{1/4} P, the frame derivative all gauge formulas are built from.
inline Field frame_derivative(const Field& p) {
    return pointwise_matmul(transpose(p), fractional_laplacian(p, 0.25));
}

inline double dot_data(const Field& a, const Field& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) s += a.data[i] * b.data[i];
    return s;
}

}  // namespace detail

// P^T D^{1/4}P - (D^{1/4}P^T)P - 2 Omega. For orthogonal P the second term is
// the transpose of the first (the entrywise operator commutes with transpose),
// so this equals 2(Asymm(G) - Omega).
inline Field gauge_residual(const Field& p, const Field& omega) {
    require_orthogonal(p, "gauge_residual P");
    require_same_grid(p, omega, "gauge_residual");
    if (omega.rows != p.rows || omega.cols != p.cols)
        throw std::invalid_argument("gauge_residual: Omega shape mismatch");
    const Field lp = fractional_laplacian(p, 0.25);
    const Field pt_lp = pointwise_matmul(transpose(p), lp);
    const Field lpt_p = pointwise_matmul(transpose(lp), p);
    return pt_lp - lpt_p - 2.0 * omega;
}

// Derivative of P |-> P^T D^{1/4} P - (D^{1/4} P^T) P at P0 in the direction
// P0*eta (eta antisymmetric):
//   L(eta) = -eta G + D^{1/4}(eta P0^T) P0 + P0^T D^{1/4}(P0 eta) - G^T eta.
// Maps antisymmetric mean-free fields to antisymmetric mean-free fields.
inline Field linearized_gauge_operator(const Field& p0, const Field& eta) {
    const Field g = detail::frame_derivative(p0);
    const Field p0t = transpose(p0);
    Field out = pointwise_matmul(fractional_laplacian(pointwise_matmul(eta, p0t), 0.25), p0);
    out += pointwise_matmul(p0t, fractional_laplacian(pointwise_matmul(p0, eta), 0.25));
    out -= pointwise_matmul(eta, g);
    out -= pointwise_matmul(transpose(g), eta);
    return out;
}

struct LinearizedSolveOptions {
    double tol = 1e-10;       // on the mean-free part of ||L(eta) - omega||_L2
    int max_fixed_point = 120;
    int gmres_restart = 60;
    int gmres_max_iters = 600;
};

struct LinearizedSolveInfo {
    double residual = 0.0;                // mean-free residual, L2
    double constant_mode_residual = 0.0;  // L2 norm of the constant part
    int fixed_point_iters = 0;
    int gmres_iters = 0;
    bool used_gmres = false;
};

namespace detail {

// Restarted GMRES with modified Gram-Schmidt and Givens rotations. Residual
// tolerance is absolute, in the Euclidean norm of the flattened field data.
inline double gmres(const std::function<Field(const Field&)>& apply, const Field& b,
                    Field& x, double tol_abs, int restart, int max_iters, int* iters_out) {
    const int m = restart;
    std::vector<Field> v;
    v.reserve(static_cast<std::size_t>(m) + 1);
    std::vector<double> h(static_cast<std::size_t>(m + 1) * m, 0.0);
    std::vector<double> cs(m, 0.0), sn(m, 0.0), g(m + 1, 0.0);
    auto H = [&](int i, int j) -> double& { return h[static_cast<std::size_t>(j) * (m + 1) + i]; };

    int total = 0;
    double res = 0.0;
    while (true) {
        Field r = b - apply(x);
        double beta = std::sqrt(dot_data(r, r));
        res = beta;
        if (beta <= tol_abs || total >= max_iters) return res;

        v.clear();
        v.push_back((1.0 / beta) * r);
        std::fill(g.begin(), g.end(), 0.0);
        g[0] = beta;
        std::fill(h.begin(), h.end(), 0.0);

        int j = 0;
        for (; j < m && total < max_iters; ++j, ++total) {
            Field w = apply(v[static_cast<std::size_t>(j)]);
            for (int i = 0; i <= j; ++i) {
                H(i, j) = dot_data(w, v[static_cast<std::size_t>(i)]);
                w -= H(i, j) * v[static_cast<std::size_t>(i)];
            }
            H(j + 1, j) = std::sqrt(dot_data(w, w));
            const bool breakdown = H(j + 1, j) <= 1e-14 * beta;
            if (!breakdown) v.push_back((1.0 / H(j + 1, j)) * w);

            for (int i = 0; i < j; ++i) {
                const double t = cs[i] * H(i, j) + sn[i] * H(i + 1, j);
                H(i + 1, j) = -sn[i] * H(i, j) + cs[i] * H(i + 1, j);
                H(i, j) = t;
            }
            const double denom = std::hypot(H(j, j), H(j + 1, j));
            cs[j] = denom == 0.0 ? 1.0 : H(j, j) / denom;
            sn[j] = denom == 0.0 ? 0.0 : H(j + 1, j) / denom;
            H(j, j) = denom;
            H(j + 1, j) = 0.0;
            g[j + 1] = -sn[j] * g[j];
            g[j] = cs[j] * g[j];
            res = std::abs(g[j + 1]);
            if (res <= tol_abs || breakdown) { ++j; ++total; break; }
        }

        // back substitution on the j x j triangular system
        std::vector<double> y(j, 0.0);
        for (int i = j - 1; i >= 0; --i) {
            double s = g[i];
            for (int k = i + 1; k < j; ++k) s -= H(i, k) * y[k];
            y[i] = H(i, i) != 0.0 ? s / H(i, i) : 0.0;
        }
        for (int i = 0; i < j; ++i) x += y[i] * v[static_cast<std::size_t>(i)];

        if (iters_out) *iters_out = total;
        Field rr = b - apply(x);
        res = std::sqrt(dot_data(rr, rr));
        if (res <= tol_abs || total >= max_iters) return res;
    }
}

}  // namespace detail

// Solve L^{P0}(eta) = omega for antisymmetric eta. Starts from the contraction
// eta <- (1/2) D^{-1/4}(omega - H(eta)) with H = L - 2 D^{1/4}; if that stalls,
// falls back to GMRES on the preconditioned operator (1/2) D^{-1/4} L.
// D^{-1/4} annihilates constants, so the iterate's mean is pinned to zero and
// the constant mode of the residual is reported separately.
inline Field solve_linearized(const Field& p0, const Field& omega,
                              const LinearizedSolveOptions& opt = {},
                              LinearizedSolveInfo* info = nullptr) {
    require_orthogonal(p0, "solve_linearized P0");
    require_same_grid(p0, omega, "solve_linearized");
    if (omega.rows != p0.rows || omega.cols != p0.cols)
        throw std::invalid_argument("solve_linearized: omega shape mismatch");
    require_antisymmetric(omega, "solve_linearized omega", 1e-10);

    const auto mf_residual = [&](const Field& eta, double* const_part) {
        Field r = linearized_gauge_operator(p0, eta) - omega;
        Field r_mf = mean_free(r);
        if (const_part) *const_part = lp_norm(r - r_mf, 2.0);
        return lp_norm(r_mf, 2.0);
    };

    Field eta = 0.5 * inverse_fractional_laplacian(mean_free(omega), 0.25);
    Field best = eta;
    double best_res = mf_residual(eta, nullptr);
    LinearizedSolveInfo inf;

    std::vector<double> window;
    bool stalled = false;
    for (int k = 0; k < opt.max_fixed_point && best_res > opt.tol; ++k) {
        Field h = linearized_gauge_operator(p0, eta) - 2.0 * fractional_laplacian(eta, 0.25);
        eta = 0.5 * inverse_fractional_laplacian(omega - h, 0.25);
        double res = mf_residual(eta, nullptr);
        ++inf.fixed_point_iters;
        if (std::isfinite(res) && res < best_res) { best_res = res; best = eta; }
        window.push_back(res);
        if (!std::isfinite(res) || (window.size() >= 6 && res > 0.9 * window[window.size() - 6])) {
            stalled = true;
            break;
        }
    }

    if (best_res > opt.tol) {
        (void)stalled;
        inf.used_gmres = true;
        const Grid1D& grid = p0.grid;
        const double h_cell = grid.spacing();
        // Euclidean residual of the preconditioned system maps back to the L2
        // residual of the original with amplification at most 2 sqrt(xi_max).
        const double tol_eucl =
            opt.tol / std::sqrt(h_cell) / (2.0 * std::sqrt(grid.max_frequency()));
        const auto apply = [&](const Field& x) {
            return 0.5 * inverse_fractional_laplacian(linearized_gauge_operator(p0, x), 0.25);
        };
        Field b = 0.5 * inverse_fractional_laplacian(omega, 0.25);
        eta = best;
        detail::gmres(apply, b, eta, tol_eucl, opt.gmres_restart, opt.gmres_max_iters,
                      &inf.gmres_iters);
        double res = mf_residual(eta, nullptr);
        if (std::isfinite(res) && res < best_res) { best_res = res; best = eta; }
    }

    // exact antisymmetric projection, cheap insurance against drift
    best = symm_asymm_split(best).asymm;
    best_res = mf_residual(best, &inf.constant_mode_residual);
    inf.residual = best_res;
    if (info) *info = inf;
    if (!(best_res <= opt.tol))
        throw LinearSolveError("solve_linearized: no convergence, residual " +
                                   std::to_string(best_res),
                               best_res);
    return best;
}

struct GaugeProblem {
    Field omega;  // m x m, pointwise antisymmetric
};

struct GaugeConfig {
    double smallness_budget = 0.5;  // max allowed ||Omega||_L2
    double tol_scale = 1e-9;        // target residual = tol_scale * max(1, ||Omega||)
    double ds = 0.25;
    double min_ds = 1.0 / 64.0;
    int max_newton = 30;
    LinearizedSolveOptions linear;
};

struct GaugeResult {
    Field p;
    std::vector<double> residual_history;
    double constant_c = 0.0;  // ||D^{1/4}P||^2 / ||Omega||^2
    bool converged = false;
    std::vector<double> homotopy_path;    // accepted values of s
    double constant_mode_residual = 0.0;  // constant part of the final defect
};

// Homotopy Omega_s = s*Omega with Newton correction P <- P exp(eta) at each
// stage; the Newton right-hand side is the current equation defect
// 2(s Omega - Asymm(G)). Failed stages bisect the step.
inline GaugeResult construct_gauge(const GaugeProblem& problem, const GaugeConfig& config = {}) {
    const Field& omega = problem.omega;
    if (omega.rows != omega.cols) throw std::invalid_argument("construct_gauge: Omega not square");
    require_antisymmetric(omega, "construct_gauge Omega", 1e-12);
    const double omega_norm = lp_norm(omega, 2.0);
    if (omega_norm > config.smallness_budget)
        throw std::invalid_argument("construct_gauge: ||Omega||_L2 = " + std::to_string(omega_norm) +
                                    " exceeds budget " + std::to_string(config.smallness_budget));

    const double target = config.tol_scale * std::max(1.0, omega_norm);
    GaugeResult result;
    result.p = identity_field(omega.grid, omega.rows);

    double s = 0.0;
    double ds = config.ds;
    while (s < 1.0) {
        const double s_try = std::min(1.0, s + ds);
        Field p_work = result.p;
        std::vector<double> stage_history;
        bool ok = false;
        double prev = std::numeric_limits<double>::infinity();
        for (int k = 0; k <= config.max_newton; ++k) {
            Field defect = -1.0 * gauge_residual(p_work, s_try * omega);
            Field defect_mf = mean_free(defect);
            const double dn = lp_norm(defect_mf, 2.0);
            stage_history.push_back(dn);
            if (dn <= target) {
                ok = true;
                result.constant_mode_residual = lp_norm(defect - defect_mf, 2.0);
                break;
            }
            if (!std::isfinite(dn) || dn > 4.0 * prev || k == config.max_newton) break;
            prev = dn;
            Field eta;
            try {
                eta = solve_linearized(p_work, defect_mf, config.linear);
            } catch (const LinearSolveError&) {
                break;
            }
            p_work = pointwise_matmul(p_work, exp_so(eta));
        }
        if (ok) {
            result.p = p_work;
            require_orthogonal(result.p, "construct_gauge P");
            result.residual_history.insert(result.residual_history.end(), stage_history.begin(),
                                           stage_history.end());
            s = s_try;
            result.homotopy_path.push_back(s);
            ds = std::min(config.ds, 2.0 * ds);
        } else {
            ds *= 0.5;
            if (ds < config.min_ds) {
                result.residual_history.insert(result.residual_history.end(), stage_history.begin(),
                                               stage_history.end());
                result.converged = false;
                return result;
            }
        }
    }
    result.converged = true;
    const double dp = sobolev_norm(result.p, 0.5);
    result.constant_c = omega_norm > 0.0 ? (dp * dp) / (omega_norm * omega_norm) : 0.0;
    return result;
}

struct GaugeBoundsReport {
    bool degenerate = false;     // Omega = 0, ratios reported as 0
    double energy_ratio = 0.0;   // ||D^{1/4}P||^2 / ||Omega||^2
    double symm_over_asymm = 0.0;
    double c_max = 10.0;
    bool violates_c_max = false;
};

inline GaugeBoundsReport verify_gauge_bounds(const GaugeResult& result, const GaugeProblem& problem,
                                             double c_max = 10.0) {
    GaugeBoundsReport report;
    report.c_max = c_max;
    const double omega_norm = lp_norm(problem.omega, 2.0);
    const Field g = detail::frame_derivative(result.p);
    const auto split = symm_asymm_split(g);
    const double asymm_norm = lp_norm(split.asymm, 2.0);
    if (omega_norm <= 0.0) {
        report.degenerate = true;
        return report;
    }
    const double dp = sobolev_norm(result.p, 0.5);
    report.energy_ratio = (dp * dp) / (omega_norm * omega_norm);
    report.symm_over_asymm = asymm_norm > 0.0 ? lp_norm(split.symm, 2.0) / asymm_norm : 0.0;
    report.violates_c_max = report.energy_ratio > c_max;
    return report;
}

}  // namespace speclab
