#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "speclab/speclab.hpp"

using namespace speclab;

namespace {

const double kPi = std::numbers::pi;

Field random_sphere_map(const Grid1D& g, std::uint64_t seed, int m, double amp) {
    Rng rng(seed);
    Field base = m == 2 ? winding_map(g, 1) : equator_map(g);
    return project_to_sphere(base + band_limited_field(g, rng, 6, amp, m, 1));
}

} // namespace

TEST_CASE("sphere projector algebra") {
    Grid1D g = Grid1D::make(128, 2.0 * kPi);
    Field u = random_sphere_map(g, 3, 3, 0.3);
    Field pt = sphere_tangent_projector(u);
    Field pn = sphere_normal_projector(u);
    CHECK(max_abs(pt + pn - identity_field(g, 3)) < 1e-12);
    CHECK(max_abs(pointwise_matmul(pt, pt) - pt) < 1e-12);
    CHECK(max_abs(pointwise_matmul(pn, pn) - pn) < 1e-12);
    CHECK(max_abs(pointwise_matmul(pt, pn)) < 1e-12);
    CHECK(max_abs(pointwise_matmul(pt, u)) < 1e-12); // u is normal to its tangent space
    CHECK(max_abs(pointwise_matmul(pn, u) - u) < 1e-12);
}

TEST_CASE("sphere helpers") {
    Grid1D g = Grid1D::make(64, 2.0 * kPi);
    SECTION("projection normalises and rejects near-zero vectors") {
        Field z = Field::zeros(g, 2, 1);
        for (int i = 0; i < g.n; ++i) {
            z.at(i, 0, 0) = 3.0 * std::cos(g.point(i)) + 4.0;
            z.at(i, 1, 0) = 3.0 * std::sin(g.point(i));
        }
        Field u = project_to_sphere(z);
        CHECK(on_sphere_defect(u) < 1e-14);
        CHECK_THROWS_AS(project_to_sphere(Field::zeros(g, 2, 1)), std::domain_error);
    }
    SECTION("winding and equator maps are unit length") {
        CHECK(on_sphere_defect(winding_map(g, 3)) < 1e-14);
        CHECK(on_sphere_defect(equator_map(g)) < 1e-14);
        CHECK(on_sphere_defect(blaschke_map(g, 0.6)) < 1e-13);
        CHECK_THROWS_AS(blaschke_map(g, 1.0), std::invalid_argument);
    }
    SECTION("geometry interface dispatches to the sphere") {
        TargetGeometry geo = sphere_geometry(2);
        CHECK(geo.ambient_dim == 2);
        Field u = winding_map(g, 1);
        CHECK(max_abs(geo.project(2.0 * u) - u) < 1e-14);
        CHECK(max_abs(geo.tangent_projector(u) - sphere_tangent_projector(u)) == 0.0);
    }
}

TEST_CASE("winding maps are critical points with the expected energy") {
    Grid1D g = Grid1D::make(256, 2.0 * kPi);
    for (int k : {1, 2, 3}) {
        Field u = winding_map(g, k);
        INFO("winding " << k);
        CHECK(lp_norm(el_residual(u), 2.0) < 1e-10);
        CHECK(lp_norm(wedge_residual(u), 2.0) < 1e-10);
        const double e = energy(u);
        CHECK(std::abs(e - 2.0 * kPi * k) < 1e-10 * e);
    }
}

TEST_CASE("moebius maps are critical with winding-one energy for every parameter") {
    Grid1D g = Grid1D::make(256, 2.0 * kPi);
    for (double a : {0.0, 0.3, 0.7, 0.9}) {
        Field u = blaschke_map(g, a);
        INFO("parameter " << a);
        CHECK(lp_norm(el_residual(u), 2.0) < 1e-10);
        const double e = energy(u);
        CHECK(std::abs(e - 2.0 * kPi) < 1e-8 * e);
    }
}

TEST_CASE("constant maps are trivial critical points") {
    Grid1D g = Grid1D::make(64, 2.0 * kPi);
    Field u = Field::zeros(g, 3, 1);
    for (int i = 0; i < g.n; ++i) u.at(i, 2, 0) = 1.0;
    CHECK(energy(u) == 0.0);
    CHECK(max_abs(el_residual(u)) == 0.0);
    CHECK(max_abs(wedge_residual(u)) == 0.0);
    FlowTrace tr = run_flow(u);
    CHECK(tr.reached_tol);
    CHECK(tr.steps.size() == 1); // only the initial record, no steps taken
    CHECK(tr.stop_reason == "el_tol");
}

TEST_CASE("non-critical maps have a visible defect") {
    Grid1D g = Grid1D::make(256, 2.0 * kPi);
    Field u = perturbed_winding(g, 1, 9, 0.1, 8);
    CHECK(lp_norm(el_residual(u), 2.0) >= 1e-3);
}

TEST_CASE("wedge and tangential defects have equal magnitude on the sphere") {
    Grid1D g = Grid1D::make(128, 2.0 * kPi);
    for (int m : {2, 3}) {
        Field u = random_sphere_map(g, 17 + static_cast<std::uint64_t>(m), m, 0.4);
        Field el = el_residual(u);
        Field we = wedge_residual(u);
        REQUIRE(we.rows == m * (m - 1) / 2);
        Field d = magnitude(we) - magnitude(el);
        CHECK(max_abs(d) < 1e-11);
    }
}

TEST_CASE("connection matrices on the first winding map match closed forms") {
    Grid1D g = Grid1D::make(128, 2.0 * kPi);
    Field u = winding_map(g, 1);
    OmegaMatrices om = omega_matrices(u);

    const double q = std::sqrt(2.0) / 4.0;
    Field c2 = Field::zeros(g), s2 = Field::zeros(g);
    for (int i = 0; i < g.n; ++i) {
        c2.at(i) = std::cos(2.0 * g.point(i));
        s2.at(i) = std::sin(2.0 * g.point(i));
    }
    Field id2 = identity_field(g, 2);
    Field j2 = Field::zeros(g, 2, 2);
    for (int i = 0; i < g.n; ++i) {
        j2.at(i, 0, 1) = -1.0;
        j2.at(i, 1, 0) = 1.0;
    }
    CHECK(max_abs(om.omega) < 1e-12);
    CHECK(max_abs(om.omega_r - q * j2) < 1e-12);
    CHECK(max_abs(om.omega1 - q * id2) < 1e-12);
    CHECK(max_abs(om.omega2 + q * id2) < 1e-12);
    CHECK(max_abs(om.omega3) < 1e-12);
    Field w4 = Field::zeros(g, 2, 2); // -q * riesz of the double-angle reflection
    for (int i = 0; i < g.n; ++i) {
        w4.at(i, 0, 0) = q * s2.at(i);
        w4.at(i, 0, 1) = -q * c2.at(i);
        w4.at(i, 1, 0) = -q * c2.at(i);
        w4.at(i, 1, 1) = -q * s2.at(i);
    }
    CHECK(max_abs(om.omega4 - w4) < 1e-12);
}

TEST_CASE("derived redundancies among the connection matrices") {
    Grid1D g = Grid1D::make(128, 2.0 * kPi);
    Field u = random_sphere_map(g, 23, 2, 0.3);
    OmegaMatrices om = omega_matrices(u);
    SECTION("antisymmetric parts are exactly antisymmetric") {
        CHECK(max_abs(om.omega + transpose(om.omega)) == 0.0);
        CHECK(max_abs(om.omega_r + transpose(om.omega_r)) == 0.0);
    }
    SECTION("normal-projector companions are determined by the tangent ones") {
        // P^T + P^N = Id makes omega2 = -omega1 and omega3 + omega4 = B/2
        CHECK(max_abs(om.omega2 + om.omega1) < 1e-12);
        Field b = riesz_transform(
            fractional_laplacian(sphere_tangent_projector(u), 0.25));
        CHECK(max_abs(om.omega3 + om.omega4 - 0.5 * b) < 1e-12);
    }
}

TEST_CASE("structure identity holds for sphere-valued maps") {
    SECTION("band-limited critical maps satisfy it to roundoff") {
        Grid1D g = Grid1D::make(256, 2.0 * kPi);
        for (int k : {1, 3}) {
            Field u = winding_map(g, k);
            Field r = structure_identity_residual(u);
            const double ref =
                lp_norm(fractional_laplacian(
                            riesz_transform(product_dealiased(sphere_normal_projector(u),
                                                              fractional_laplacian(u, 0.25))),
                            0.25),
                        2.0) +
                lp_norm(fractional_laplacian(u, 0.5), 2.0);
            CHECK(lp_norm(r, 2.0) < 1e-8 * ref);
        }
    }
    SECTION("projected rough maps: the defect decays under grid refinement") {
        double prev = 0.0;
        int level = 0;
        for (int n : {128, 256, 512}) {
            Grid1D g = Grid1D::make(n, 2.0 * kPi);
            Rng rng(5);
            Field u = project_to_sphere(winding_map(g, 1) +
                                        band_limited_field(g, rng, 6, 0.3, 2, 1));
            const double r = lp_norm(structure_identity_residual(u), 2.0);
            if (level > 0) CHECK(r < prev / 4.0);
            prev = r;
            ++level;
        }
    }
}

TEST_CASE("commutator form of the criticality defect") {
    Grid1D g = Grid1D::make(256, 2.0 * kPi);
    SECTION("equals the band-projected tangential defect exactly") {
        Field u = random_sphere_map(g, 29, 2, 0.25);
        Field pt = sphere_tangent_projector(u);
        Field e1 = product_dealiased(pt, fractional_laplacian(u, 0.5));
        Field r = el_commutator_residual(u);
        CHECK(max_abs(r - e1) < 1e-12 * std::max(1.0, max_abs(e1)));
    }
    SECTION("vanishes on critical maps, visible on perturbed ones") {
        CHECK(lp_norm(el_commutator_residual(winding_map(g, 2)), 2.0) < 1e-10);
        CHECK(lp_norm(el_commutator_residual(perturbed_winding(g, 1, 9, 0.1, 8)), 2.0) >= 1e-3);
    }
}

TEST_CASE("first-order system: antisymmetry and residual decay") {
    SECTION("the antisymmetric potential is exactly antisymmetric") {
        Grid1D g = Grid1D::make(128, 2.0 * kPi);
        Field u = random_sphere_map(g, 31, 2, 0.3);
        SystemAssembly sys = assemble_system(u);
        CHECK(max_abs(sys.omega + transpose(sys.omega)) == 0.0);
        REQUIRE(sys.v.rows == 4);
        REQUIRE(sys.omega.rows == 4);
        REQUIRE(sys.omega.cols == 4);
    }
    SECTION("band-limited critical maps solve the system to roundoff") {
        Grid1D g = Grid1D::make(256, 2.0 * kPi);
        Field u = winding_map(g, 2);
        SystemAssembly sys = assemble_system(u);
        const double ref = lp_norm(fractional_laplacian(sys.v, 0.25), 2.0);
        CHECK(lp_norm(sys.residual, 2.0) < 1e-10 * ref);
    }
    SECTION("moebius family: residual vanishes under refinement") {
        double prev = 0.0;
        int level = 0;
        for (int n : {128, 256, 512}) {
            Grid1D g = Grid1D::make(n, 2.0 * kPi);
            Field u = blaschke_map(g, 0.8);
            SystemAssembly sys = assemble_system(u);
            const double ref = lp_norm(fractional_laplacian(sys.v, 0.25), 2.0);
            const double r = lp_norm(sys.residual, 2.0) / ref;
            if (level > 0) CHECK(r < prev / 4.0);
            prev = r;
            ++level;
        }
        CHECK(prev < 1e-8);
    }
    SECTION("the alternative coefficient variants do not close discretely") {
        Grid1D g = Grid1D::make(256, 2.0 * kPi);
        Field u = blaschke_map(g, 0.8);
        const double ref =
            lp_norm(fractional_laplacian(assemble_system(u).v, 0.25), 2.0);
        SystemAssembly re = assemble_system(u, Omega3Form::kResmoothed);
        SystemAssembly pr = assemble_system(u, Omega3Form::kPlain, SystemBlocks::kPrinted);
        CHECK(lp_norm(re.residual, 2.0) > 0.1 * ref);
        CHECK(lp_norm(pr.residual, 2.0) > 0.1 * ref);
    }
}

TEST_CASE("energy difference bookkeeping") {
    Grid1D g = Grid1D::make(128, 2.0 * kPi);
    Field u0 = random_sphere_map(g, 37, 2, 0.2);
    Field u1 = random_sphere_map(g, 38, 2, 0.2);
    CHECK(energy_difference(u0, u0) == 0.0);
    const double de = energy_difference(u1, u0);
    CHECK(de == Catch::Approx(energy(u1) - energy(u0)).margin(1e-10));
    CHECK(energy_difference(u0, u1) == Catch::Approx(-de).margin(1e-14));
}

TEST_CASE("gradient flow reaches criticality on the circle target") {
    Grid1D g = Grid1D::make(512, 2.0 * kPi);
    Field u0 = perturbed_winding(g, 1, 3, 0.1, 8);
    FlowConfig cfg;
    cfg.max_steps = 10000;
    FlowTrace tr = run_flow(u0, cfg);
    REQUIRE(tr.reached_tol);
    CHECK(tr.stop_reason == "el_tol");
    CHECK(tr.final_el_norm <= 1e-6);
    CHECK(static_cast<int>(tr.steps.size()) <= 10000);
    CHECK(on_sphere_defect(tr.u) < 1e-12);
    SECTION("recorded energies decrease monotonically") {
        for (std::size_t i = 1; i < tr.steps.size(); ++i)
            CHECK(tr.steps[i].energy < tr.steps[i - 1].energy);
    }
    SECTION("the limit keeps the winding energy") {
        CHECK(tr.final_energy == Catch::Approx(2.0 * kPi).epsilon(1e-3));
    }
}

TEST_CASE("gradient flow on the two-sphere target") {
    Grid1D g = Grid1D::make(512, 2.0 * kPi);
    Field u0 = perturbed_equator(g, 4, 0.1, 8);
    FlowConfig cfg;
    cfg.max_steps = 10000;
    FlowTrace tr = run_flow(u0, cfg);
    REQUIRE(tr.reached_tol);
    CHECK(tr.final_el_norm <= 1e-6);
    CHECK(on_sphere_defect(tr.u) < 1e-12);
    for (std::size_t i = 1; i < tr.steps.size(); ++i)
        CHECK(tr.steps[i].energy < tr.steps[i - 1].energy);
}

TEST_CASE("flow stop reasons") {
    Grid1D g = Grid1D::make(128, 2.0 * kPi);
    SECTION("step budget") {
        FlowConfig cfg;
        cfg.max_steps = 3;
        cfg.el_tol = 1e-300;
        FlowTrace tr = run_flow(perturbed_winding(g, 1, 5, 0.1, 6), cfg);
        CHECK_FALSE(tr.reached_tol);
        CHECK(tr.stop_reason == "max_steps");
    }
    SECTION("stalled step size at a critical point") {
        FlowConfig cfg;
        cfg.el_tol = 1e-300; // unreachable, so the flow must stall instead
        cfg.max_steps = 200;
        FlowTrace tr = run_flow(winding_map(g, 1), cfg);
        CHECK_FALSE(tr.reached_tol);
        CHECK(tr.stop_reason == "tau_floor");
    }
}

TEST_CASE("seeded initial data is reproducible and on the sphere") {
    Grid1D g = Grid1D::make(128, 2.0 * kPi);
    Field a = perturbed_winding(g, 2, 11, 0.1, 8);
    Field b = perturbed_winding(g, 2, 11, 0.1, 8);
    Field c = perturbed_winding(g, 2, 12, 0.1, 8);
    CHECK(a.data == b.data);
    CHECK(max_abs(a - c) > 1e-3);
    CHECK(on_sphere_defect(a) < 1e-14);
    Field e = perturbed_equator(g, 11, 0.1, 8);
    REQUIRE(e.rows == 3);
    CHECK(on_sphere_defect(e) < 1e-14);
}
