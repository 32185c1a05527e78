#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "speclab/speclab.hpp"
#include "support/trig_poly.hpp"

using namespace speclab;

namespace {

const double kPi = std::numbers::pi;

Field cosine(const Grid1D& g, int k, double amp = 1.0) {
    Field f = Field::zeros(g);
    for (int i = 0; i < g.n; ++i) f.at(i) = amp * std::cos(k * g.point(i));
    return f;
}

Field indicator(const Grid1D& g, int cells) {
    Field f = Field::zeros(g);
    for (int i = 0; i < cells; ++i) f.at(i) = 1.0;
    return f;
}

} // namespace

TEST_CASE("decreasing rearrangement sorts magnitudes") {
    Grid1D g = Grid1D::make(16, 2.0 * kPi);
    Field f = Field::zeros(g);
    for (int i = 0; i < g.n; ++i) f.at(i) = (i % 3 == 0) ? -2.0 : 0.5;
    RearrangementProfile p = decreasing_rearrangement(f);
    CHECK(p.cell == Catch::Approx(g.spacing()));
    REQUIRE(p.values.size() == 16);
    CHECK(p.values.front() == 2.0);
    CHECK(p.values.back() == 0.5);
    CHECK(std::is_sorted(p.values.begin(), p.values.end(), std::greater<double>()));
}

TEST_CASE("lorentz norms of an indicator match the closed forms") {
    Grid1D g = Grid1D::make(256, 2.0 * kPi);
    const int cells = 32;
    const double a = cells * g.spacing();
    LorentzNorms ln = lorentz_norms(indicator(g, cells));
    // f* = 1 on [0,a): L^{2,1} = int_0^a t^{-1/2} dt = 2 sqrt(a),
    // L^{2,inf} = sup t^{1/2} = sqrt(a)
    CHECK(std::abs(ln.l21 - 2.0 * std::sqrt(a)) < 1e-10 * 2.0 * std::sqrt(a));
    CHECK(std::abs(ln.l2inf - std::sqrt(a)) < 1e-10 * std::sqrt(a));
}

TEST_CASE("lorentz norms scale linearly and nest around L2") {
    Grid1D g = Grid1D::make(128, 2.0 * kPi);
    Rng rng(17);
    Field f = Field::zeros(g);
    for (int i = 0; i < g.n; ++i) f.at(i) = rng.normal();
    LorentzNorms ln = lorentz_norms(f);
    LorentzNorms ln3 = lorentz_norms(3.0 * f);
    CHECK(ln3.l21 == Catch::Approx(3.0 * ln.l21));
    CHECK(ln3.l2inf == Catch::Approx(3.0 * ln.l2inf));
    const double l2 = lp_norm(f, 2.0);
    CHECK(ln.l2inf <= l2 * (1.0 + 1e-12));
    CHECK(l2 <= ln.l21 * (1.0 + 1e-12));
}

TEST_CASE("sobolev seminorm closed forms") {
    Grid1D g = Grid1D::make(256, 2.0 * kPi);
    SECTION("cos(4x) in the half-order seminorm") {
        const double got = sobolev_norm(cosine(g, 4), 0.5);
        CHECK(std::abs(got - 2.0 * std::sqrt(kPi)) < 1e-10 * got);
    }
    SECTION("quarter laplacian eigenvalue on cos(3x)") {
        Field got = fractional_laplacian(cosine(g, 3), 0.25);
        CHECK(max_abs(got - std::sqrt(3.0) * cosine(g, 3)) < 1e-10 * std::sqrt(3.0));
    }
    SECTION("constants carry no homogeneous energy") {
        CHECK(sobolev_norm(Field::constant(g, 2.0), 0.5) == 0.0);
    }
    SECTION("agrees with the coefficient oracle") {
        Rng rng(23);
        oracle::TrigPoly p = oracle::random_poly(g.length, rng, 60, 1.0);
        Field f = oracle::sample(p, g);
        for (double s : {0.25, 0.5, -0.5}) {
            oracle::TrigPoly q = p;
            if (s < 0) q.c.erase(0); // negative weights live on the mean-free part
            const double got = sobolev_norm(s < 0 ? mean_free(f) : f, s);
            CHECK(got == Catch::Approx(oracle::hs_seminorm(q, s)).epsilon(1e-12));
        }
    }
}

TEST_CASE("littlewood-paley blocks reconstruct the field") {
    Grid1D g = Grid1D::make(256, 2.0 * kPi);
    Rng rng(29);
    oracle::TrigPoly p = oracle::random_poly(g.length, rng, 120, 1.0);
    Field f = oracle::sample(p, g);
    LPDecomposition dec = lp_blocks(f);
    CHECK(max_abs(lp_reconstruct(dec) - f) < 1e-12 * max_abs(f));
    SECTION("blocks are supported on their annuli") {
        for (const auto& [j, block] : dec.blocks) {
            Spectrum s = forward(block);
            for (int b = 0; b < g.n; ++b) {
                const double axi = std::abs(g.frequency_of_bin(b));
                if (axi < std::ldexp(1.0, j - 1) || axi > std::ldexp(1.0, j + 1))
                    CHECK(std::abs(s.coef[0][b]) < 1e-9);
            }
        }
    }
}

TEST_CASE("besov norm of single-frequency fields") {
    Grid1D g = Grid1D::make(256, 2.0 * kPi);
    SECTION("dyadic frequencies land in exactly one annulus") {
        for (int k : {4, 8, 16, 32}) {
            CHECK(besov_b0_infinf_norm(cosine(g, k)) == Catch::Approx(1.0).margin(1e-12));
        }
    }
    SECTION("frequencies inside the lowpass ball do not count") {
        CHECK(besov_b0_infinf_norm(cosine(g, 1)) == Catch::Approx(0.0).margin(1e-12));
        CHECK(besov_b0_infinf_norm(Field::constant(g, 5.0)) == 0.0);
    }
    SECTION("split frequencies keep the sup between the shares") {
        const double v = besov_b0_infinf_norm(cosine(g, 12));
        CHECK(v >= 0.5);
        CHECK(v <= 1.0 + 1e-12);
    }
    SECTION("triangle inequality") {
        Field a = cosine(g, 8), b = cosine(g, 24, 0.5);
        CHECK(besov_b0_infinf_norm(a + b) <=
              besov_b0_infinf_norm(a) + besov_b0_infinf_norm(b) + 1e-12);
    }
}

TEST_CASE("hardy norm basics") {
    Grid1D g = Grid1D::make(256, 2.0 * kPi);
    // cos(8x) occupies one annulus; the square function is |cos(8x)| and its
    // integral over a period is 4
    const double h = hardy_h1_norm(cosine(g, 8));
    CHECK(h == Catch::Approx(4.0).epsilon(0.02));
    SECTION("insensitive to constant shifts") {
        CHECK(hardy_h1_norm(cosine(g, 8) + Field::constant(g, 7.0)) == Catch::Approx(h));
    }
    SECTION("homogeneous of degree one") {
        CHECK(hardy_h1_norm(cosine(g, 8, 2.5)) == Catch::Approx(2.5 * h));
    }
}

TEST_CASE("bmo norm basics") {
    Grid1D g = Grid1D::make(256, 2.0 * kPi);
    CHECK(bmo_norm(Field::constant(g, -3.0)) == 0.0);
    const double b = bmo_norm(cosine(g, 4));
    // the full-period window already gives mean |cos| = 2/pi
    CHECK(b >= 2.0 / kPi - 1e-3);
    CHECK(b <= 2.0);
    SECTION("shift invariance") {
        CHECK(bmo_norm(cosine(g, 4) + Field::constant(g, 11.0)) == Catch::Approx(b));
    }
    SECTION("bounded by twice the sup norm") {
        Rng rng(31);
        Field f = Field::zeros(g);
        for (int i = 0; i < g.n; ++i) f.at(i) = rng.normal();
        CHECK(bmo_norm(f) <= 2.0 * lp_norm(f, std::numeric_limits<double>::infinity()) + 1e-12);
    }
}

TEST_CASE("paraproducts partition the pointwise product") {
    Grid1D g = Grid1D::make(256, 2.0 * kPi);
    Rng rng(37);
    Field f = Field::zeros(g), h = Field::zeros(g);
    for (int i = 0; i < g.n; ++i) {
        f.at(i) = rng.normal();
        h.at(i) = rng.normal();
    }
    Paraproducts pp = paraproducts(f, h);
    Field plain = Field::zeros(g);
    for (int i = 0; i < g.n; ++i) plain.at(i) = f.at(i) * h.at(i);
    Field sum = pp.low_second + pp.low_first + pp.diagonal;
    CHECK(max_abs(sum - plain) < 1e-10 * std::max(1.0, max_abs(plain)));
}

TEST_CASE("scale-separated factors concentrate in one paraproduct") {
    Grid1D g = Grid1D::make(256, 2.0 * kPi);
    Field lo = cosine(g, 1);
    Field hi = cosine(g, 32);
    Paraproducts pp = paraproducts(lo, hi);
    const double total = lp_norm(pp.low_second + pp.low_first + pp.diagonal, 2.0);
    REQUIRE(total > 0.0);
    CHECK(lp_norm(pp.low_first, 2.0) / total >= 0.999);
    CHECK(lp_norm(pp.low_second, 2.0) / total <= 1e-3);
    CHECK(lp_norm(pp.diagonal, 2.0) / total <= 1e-3);
    SECTION("swapping the factors swaps the roles") {
        Paraproducts qq = paraproducts(hi, lo);
        const double t2 = lp_norm(qq.low_second + qq.low_first + qq.diagonal, 2.0);
        CHECK(lp_norm(qq.low_second, 2.0) / t2 >= 0.999);
    }
    SECTION("comparable factors concentrate on the diagonal") {
        Paraproducts dd = paraproducts(cosine(g, 16), cosine(g, 16));
        const double t3 = lp_norm(dd.low_second + dd.low_first + dd.diagonal, 2.0);
        CHECK(lp_norm(dd.diagonal, 2.0) / t3 >= 0.999);
    }
}

TEST_CASE("norm argument validation") {
    Grid1D g = Grid1D::make(16, 2.0 * kPi);
    Field f = Field::constant(g, 1.0);
    CHECK_THROWS_AS(lp_norm(f, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(paraproducts(Field::zeros(g, 2, 1), Field::zeros(g)),
                    std::invalid_argument);
    CHECK(lp_norm(f, std::numeric_limits<double>::infinity()) == 1.0);
}
