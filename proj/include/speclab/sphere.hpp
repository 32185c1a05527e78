#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>

#include "speclab/field.hpp"

// Sphere targets S^{m-1} and reference maps into them. The general-manifold
// interface is the callback triple in TargetGeometry; the sphere is the only
// shipped instance (nearest-point projection and both projectors are closed
// form there).

namespace speclab {

inline double on_sphere_defect(const Field& u) {
    if (u.cols != 1) throw std::invalid_argument("on_sphere_defect: expected a column vector field");
    double worst = 0.0;
    for (int i = 0; i < u.grid.n; ++i) {
        double s = 0.0;
        for (int r = 0; r < u.rows; ++r) s += u.at(i, r, 0) * u.at(i, r, 0);
        worst = std::max(worst, std::abs(std::sqrt(s) - 1.0));
    }
    return worst;
}

inline void require_on_sphere(const Field& u, const char* what, double tol = 1e-8) {
    const double d = on_sphere_defect(u);
    if (!(d <= tol))
        throw std::invalid_argument(std::string(what) + ": field is off the unit sphere by " +
                                    std::to_string(d));
}

// z -> z/|z| pointwise; undefined near the origin.
inline Field project_to_sphere(const Field& z) {
    if (z.cols != 1) throw std::invalid_argument("project_to_sphere: expected a column vector field");
    Field out = z;
    for (int i = 0; i < z.grid.n; ++i) {
        double s = 0.0;
        for (int r = 0; r < z.rows; ++r) s += z.at(i, r, 0) * z.at(i, r, 0);
        const double len = std::sqrt(s);
        if (!(len > 1e-14))
            throw std::domain_error("project_to_sphere: sample too close to the origin");
        for (int r = 0; r < z.rows; ++r) out.at(i, r, 0) = z.at(i, r, 0) / len;
    }
    return out;
}

// Id - z z^T / |z|^2 pointwise.
inline Field sphere_tangent_projector(const Field& z) {
    if (z.cols != 1)
        throw std::invalid_argument("sphere_tangent_projector: expected a column vector field");
    const int m = z.rows;
    Field out = Field::zeros(z.grid, m, m);
    for (int i = 0; i < z.grid.n; ++i) {
        double s = 0.0;
        for (int r = 0; r < m; ++r) s += z.at(i, r, 0) * z.at(i, r, 0);
        if (!(s > 0.0)) throw std::domain_error("sphere_tangent_projector: zero sample");
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < m; ++c)
                out.at(i, r, c) = (r == c ? 1.0 : 0.0) - z.at(i, r, 0) * z.at(i, c, 0) / s;
    }
    return out;
}

// z z^T / |z|^2 pointwise.
inline Field sphere_normal_projector(const Field& z) {
    if (z.cols != 1)
        throw std::invalid_argument("sphere_normal_projector: expected a column vector field");
    const int m = z.rows;
    Field out = Field::zeros(z.grid, m, m);
    for (int i = 0; i < z.grid.n; ++i) {
        double s = 0.0;
        for (int r = 0; r < m; ++r) s += z.at(i, r, 0) * z.at(i, r, 0);
        if (!(s > 0.0)) throw std::domain_error("sphere_normal_projector: zero sample");
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < m; ++c) out.at(i, r, c) = z.at(i, r, 0) * z.at(i, c, 0) / s;
    }
    return out;
}

struct TargetGeometry {
    int ambient_dim = 2;
    std::function<Field(const Field&)> project;
    std::function<Field(const Field&)> tangent_projector;
    std::function<Field(const Field&)> normal_projector;
};

inline TargetGeometry sphere_geometry(int ambient_dim) {
    if (ambient_dim < 2) throw std::invalid_argument("sphere_geometry: ambient_dim must be >= 2");
    TargetGeometry t;
    t.ambient_dim = ambient_dim;
    t.project = project_to_sphere;
    t.tangent_projector = sphere_tangent_projector;
    t.normal_projector = sphere_normal_projector;
    return t;
}

// u(x) = (cos k theta, sin k theta), theta = 2 pi x / L: degree-k circle map.
inline Field winding_map(const Grid1D& g, int k) {
    Field u = Field::zeros(g, 2, 1);
    const double rate = 2.0 * std::numbers::pi * k / g.length;
    for (int i = 0; i < g.n; ++i) {
        const double phase = rate * g.point(i);
        u.at(i, 0, 0) = std::cos(phase);
        u.at(i, 1, 0) = std::sin(phase);
    }
    return u;
}

// Equatorial circle inside S^2.
inline Field equator_map(const Grid1D& g) {
    Field u = Field::zeros(g, 3, 1);
    const double rate = 2.0 * std::numbers::pi / g.length;
    for (int i = 0; i < g.n; ++i) {
        const double phase = rate * g.point(i);
        u.at(i, 0, 0) = std::cos(phase);
        u.at(i, 1, 0) = std::sin(phase);
        u.at(i, 2, 0) = 0.0;
    }
    return u;
}

// Moebius pull of the degree-1 map: z = (e^{i theta} - a)/(1 - a e^{i theta})
// for real a in (-1,1). Stays on the circle and has spectral tail ~ a^k, which
// makes it the natural refinement family: smooth, nonconstant, not band-limited.
inline Field blaschke_map(const Grid1D& g, double a) {
    if (!(std::abs(a) < 1.0)) throw std::invalid_argument("blaschke_map: need |a| < 1");
    Field u = Field::zeros(g, 2, 1);
    const double rate = 2.0 * std::numbers::pi / g.length;
    for (int i = 0; i < g.n; ++i) {
        const double phase = rate * g.point(i);
        const double cr = std::cos(phase), ci = std::sin(phase);
        // (w - a) / (1 - a w), w = cr + i ci
        const double dr = 1.0 - a * cr, di = -a * ci;
        const double den = dr * dr + di * di;
        const double nr = cr - a, ni = ci;
        u.at(i, 0, 0) = (nr * dr + ni * di) / den;
        u.at(i, 1, 0) = (ni * dr - nr * di) / den;
    }
    return u;
}

}  // namespace speclab
