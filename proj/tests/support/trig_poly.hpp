#pragma once

// Sparse real trigonometric polynomials used as a test oracle.  Everything is
// computed directly on the coefficient map, independent of any FFT code.
// Convention: f(x) = sum_m c[m] exp(i*2*pi*m*x/L) with c[-m] = conj(c[m]).

#include <cmath>
#include <complex>
#include <map>
#include <numbers>

#include "speclab/field.hpp"
#include "speclab/grid.hpp"
#include "speclab/rng.hpp"

namespace oracle {

using cplx = std::complex<double>;

struct TrigPoly {
    double length = 2.0 * std::numbers::pi;
    std::map<int, cplx> c;

    double freq(int m) const { return 2.0 * std::numbers::pi * m / length; }
};

inline void add_cos(TrigPoly& p, int m, double amp) {
    p.c[m] += cplx(amp / 2.0, 0.0);
    p.c[-m] += cplx(amp / 2.0, 0.0);
}

inline void add_sin(TrigPoly& p, int m, double amp) {
    p.c[m] += cplx(0.0, -amp / 2.0);
    p.c[-m] += cplx(0.0, amp / 2.0);
}

inline void add_const(TrigPoly& p, double v) { p.c[0] += cplx(v, 0.0); }

inline TrigPoly random_poly(double length, speclab::Rng& rng, int band, double amp) {
    TrigPoly p{length, {}};
    add_const(p, amp * rng.normal());
    for (int m = 1; m <= band; ++m) {
        add_cos(p, m, amp * rng.normal());
        add_sin(p, m, amp * rng.normal());
    }
    return p;
}

inline TrigPoly mul(const TrigPoly& a, const TrigPoly& b) {
    TrigPoly out{a.length, {}};
    for (const auto& [ma, ca] : a.c)
        for (const auto& [mb, cb] : b.c) out.c[ma + mb] += ca * cb;
    return out;
}

inline TrigPoly scaled(const TrigPoly& a, double s) {
    TrigPoly out = a;
    for (auto& [m, cm] : out.c) cm *= s;
    return out;
}

inline TrigPoly add(const TrigPoly& a, const TrigPoly& b) {
    TrigPoly out = a;
    for (const auto& [m, cm] : b.c) out.c[m] += cm;
    return out;
}

// |xi|^{2s} with the zero mode removed.
inline TrigPoly frac_lap(const TrigPoly& p, double s) {
    TrigPoly out{p.length, {}};
    for (const auto& [m, cm] : p.c)
        if (m != 0) out.c[m] = cm * std::pow(std::abs(p.freq(m)), 2.0 * s);
    return out;
}

inline TrigPoly inv_frac_lap(const TrigPoly& p, double s) { return frac_lap(p, -s); }

// i*sign(xi); zero mode removed.
inline TrigPoly riesz(const TrigPoly& p) {
    TrigPoly out{p.length, {}};
    for (const auto& [m, cm] : p.c)
        if (m != 0) out.c[m] = cm * cplx(0.0, m > 0 ? 1.0 : -1.0);
    return out;
}

inline TrigPoly derivative(const TrigPoly& p) {
    TrigPoly out{p.length, {}};
    for (const auto& [m, cm] : p.c)
        if (m != 0) out.c[m] = cm * cplx(0.0, p.freq(m));
    return out;
}

// L^2 projection onto the band representable on an n-point grid.  Keeps
// |m| <= n/2; evaluation at grid points folds the +-n/2 modes exactly the way
// the grid's single Nyquist bin does.
inline TrigPoly truncate(const TrigPoly& p, int n) {
    TrigPoly out{p.length, {}};
    for (const auto& [m, cm] : p.c)
        if (std::abs(m) <= n / 2) out.c[m] = cm;
    return out;
}

inline double eval(const TrigPoly& p, double x) {
    cplx acc = 0.0;
    for (const auto& [m, cm] : p.c) acc += cm * std::exp(cplx(0.0, p.freq(m) * x));
    return acc.real();
}

inline speclab::Field sample(const TrigPoly& p, const speclab::Grid1D& g) {
    speclab::Field f = speclab::Field::zeros(g);
    for (int i = 0; i < g.n; ++i) f.at(i) = eval(p, g.point(i));
    return f;
}

// Parseval: integral of f^2 over one period equals L * sum |c_m|^2.
inline double l2_norm(const TrigPoly& p) {
    double acc = 0.0;
    for (const auto& [m, cm] : p.c) acc += std::norm(cm);
    return std::sqrt(p.length * acc);
}

inline double hs_seminorm(const TrigPoly& p, double s) {
    double acc = 0.0;
    for (const auto& [m, cm] : p.c)
        if (m != 0) acc += std::pow(std::abs(p.freq(m)), 2.0 * s) * std::norm(cm);
    return std::sqrt(p.length * acc);
}

} // namespace oracle
