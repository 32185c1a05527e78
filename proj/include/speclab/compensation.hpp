#pragma once

#include <stdexcept>

#include "speclab/field.hpp"
#include "speclab/rotation.hpp"
#include "speclab/spectral.hpp"

namespace speclab {

// Bilinear commutator-type operators.  Each one subtracts the naive Leibniz
// bookkeeping from an operator applied to a product, leaving a combination
// that is strictly better behaved than its individual terms.  All products go
// through product_dealiased so the cancellations are tested free of aliasing.

namespace detail {

inline void require_composable(const Field& q, const Field& v, const char* what) {
    require_same_grid(q, v, what);
    if (q.is_scalar() || v.is_scalar()) return;
    if (q.cols != v.rows) throw std::invalid_argument(std::string(what) + ": shape mismatch");
}

} // namespace detail

// quarter-Laplacian commutator with a plain product:
//   N(Q,v) = L(Qv) - Q Lv + (LQ) v,    L = fractional_laplacian(., 1/4)
inline Field op_n(const Field& q, const Field& v) {
    detail::require_composable(q, v, "op_n");
    return fractional_laplacian(product_dealiased(q, v), 0.25) -
           product_dealiased(q, fractional_laplacian(v, 0.25)) +
           product_dealiased(fractional_laplacian(q, 0.25), v);
}

// three-term commutator built on L u:
//   T(Q,u) = L(Q Lu) - Q L^2 u + (LQ)(Lu)
inline Field op_t(const Field& q, const Field& u) {
    detail::require_composable(q, u, "op_t");
    const Field lu = fractional_laplacian(u, 0.25);
    return fractional_laplacian(product_dealiased(q, lu), 0.25) -
           product_dealiased(q, fractional_laplacian(u, 0.5)) +
           product_dealiased(fractional_laplacian(q, 0.25), lu);
}

// companion of T through the Riesz transform R (symbol i sign xi):
//   S(Q,u) = L(Q Lu) + R(Q u') + R((LQ)(R Lu))
// The middle term carries a plus: with R the i*sign(xi) multiplier one has
// L^2 = -R d/dx, so the first two terms cancel for constant Q, which is the
// defining feature of the combination.
inline Field op_s(const Field& q, const Field& u) {
    detail::require_composable(q, u, "op_s");
    const Field lu = fractional_laplacian(u, 0.25);
    return fractional_laplacian(product_dealiased(q, lu), 0.25) +
           riesz_transform(product_dealiased(q, spectral_derivative(u))) +
           riesz_transform(
               product_dealiased(fractional_laplacian(q, 0.25), riesz_transform(lu)));
}

// dual-side three-term commutator:
//   R(Q,u) = L(Q Lu) - L^2(Q u) + L((LQ) u)
inline Field op_r(const Field& q, const Field& u) {
    detail::require_composable(q, u, "op_r");
    return fractional_laplacian(product_dealiased(q, fractional_laplacian(u, 0.25)), 0.25) -
           fractional_laplacian(product_dealiased(q, u), 0.5) +
           fractional_laplacian(product_dealiased(fractional_laplacian(q, 0.25), u), 0.25);
}

// dual companion of S (middle sign follows the same cancellation as op_s):
//   S~(Q,u) = L(Q Lu) + d/dx(Q Ru) + R L((LQ)(R u))
inline Field op_s_dual(const Field& q, const Field& u) {
    detail::require_composable(q, u, "op_s_dual");
    return fractional_laplacian(product_dealiased(q, fractional_laplacian(u, 0.25)), 0.25) +
           spectral_derivative(product_dealiased(q, riesz_transform(u))) +
           riesz_transform(fractional_laplacian(
               product_dealiased(fractional_laplacian(q, 0.25), riesz_transform(u)), 0.25));
}

// Riesz bilinear defect: F(Q,v) = (RQ)(Rv) - Qv
inline Field op_f(const Field& q, const Field& v) {
    detail::require_composable(q, v, "op_f");
    return product_dealiased(riesz_transform(q), riesz_transform(v)) - product_dealiased(q, v);
}

// its smoothed counterpart: F*(Q,v) = L(Qv) - L R((RQ) v)
inline Field op_f_star(const Field& q, const Field& v) {
    detail::require_composable(q, v, "op_f_star");
    return fractional_laplacian(product_dealiased(q, v), 0.25) -
           fractional_laplacian(riesz_transform(product_dealiased(riesz_transform(q), v)), 0.25);
}

// linearization remainder around an orthogonal frame:
//   Q(eta, P0) = L(eta P0^T) P0 + (eta P0^T)(L P0) - L eta
inline Field op_q_gauge(const Field& eta, const Field& p0) {
    require_same_grid(eta, p0, "op_q_gauge");
    if (eta.rows != eta.cols || p0.rows != p0.cols || eta.rows != p0.rows)
        throw std::invalid_argument("op_q_gauge: square matrix fields of equal size expected");
    require_orthogonal(p0, "op_q_gauge");
    const Field eta_p0t = product_dealiased(eta, transpose(p0));
    return product_dealiased(fractional_laplacian(eta_p0t, 0.25), p0) +
           product_dealiased(eta_p0t, fractional_laplacian(p0, 0.25)) -
           fractional_laplacian(eta, 0.25);
}

} // namespace speclab
