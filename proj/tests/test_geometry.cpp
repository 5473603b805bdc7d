#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "knotcs/integrator.hpp"
#include "knotcs/knot_geometry.hpp"
#include "knotcs/wilson_graph.hpp"

using knotcs::Curve;
using knotcs::CurveJet;
using knotcs::CurvePtr;
using knotcs::CurveStats;
using knotcs::FrameJet;
using knotcs::Framing;
using knotcs::FramingPtr;
using knotcs::Vec3;
using knotcs::WilsonGraph;

namespace {

constexpr double kTau = 6.283185307179586;

double rel_err(const Vec3& got, const Vec3& want) {
    return norm(got - want) / std::max(1.0, norm(want));
}

// Central finite differences against the reported derivatives. Third derivatives
// are only checked when `analytic` (piecewise curves are C^2 at junctions).
void check_jets(const Curve& c, double s, bool analytic) {
    const double h = 1e-4;
    CurveJet j0 = c.eval(s), jp = c.eval(s + h), jm = c.eval(s - h);
    CAPTURE(s);
    CHECK(rel_err((jp.p - jm.p) / (2 * h), j0.d1) < 2e-3);
    CHECK(rel_err((jp.p - j0.p * 2.0 + jm.p) / (h * h), j0.d2) < 2e-3);
    if (analytic) CHECK(rel_err((jp.d2 - jm.d2) / (2 * h), j0.d3) < 2e-3);
}

void check_frame(const Curve& c, const Framing& f, double s) {
    const double h = 1e-4;
    CurveJet j = c.eval(s);
    FrameJet u0 = f.eval(s), up = f.eval(s + h), um = f.eval(s - h);
    CAPTURE(s);
    CHECK(std::fabs(norm(u0.u) - 1.0) < 1e-10);
    CHECK(std::fabs(dot(u0.u, normalized(j.d1))) < 1e-10);
    CHECK(std::fabs(dot(u0.u, u0.du)) < 1e-8);
    CHECK(rel_err((up.u - um.u) / (2 * h), u0.du) < 2e-3);
}

std::vector<int> bits_to_eps(int mask, int n) {
    std::vector<int> eps(n);
    for (int b = 0; b < n; ++b) eps[b] = (mask >> b & 1) ? 1 : -1;
    return eps;
}

}  // namespace

TEST_CASE("circle jets and stats") {
    auto c = knotcs::make_circle(1.5);
    CurveJet j = c->eval(0.25);
    CHECK(norm(j.p - Vec3{0, 1.5, 0}) < 1e-12);
    CHECK(norm(j.d1 - Vec3{-kTau * 1.5, 0, 0}) < 1e-12);
    CHECK(norm(c->point(0.0) - c->point(1.0)) < 1e-12);
    for (double s : {0.0, 0.13, 0.5, 0.77}) check_jets(*c, s, true);

    CurveStats st = knotcs::curve_stats(*c);
    CHECK(norm(st.centroid) < 1e-12);
    CHECK(st.diameter == doctest::Approx(3.0).epsilon(1e-3));
    CHECK(st.speed_min == doctest::Approx(kTau * 1.5).epsilon(1e-9));
    CHECK(st.speed_max == doctest::Approx(kTau * 1.5).epsilon(1e-9));
    CHECK(st.injectivity_margin > 0.05);
    CHECK_NOTHROW(knotcs::validate_embedding(*c));
    CHECK(std::fabs(knotcs::writhe_quadrature(*c, 128)) < 1e-12);
}

TEST_CASE("torus knot curve") {
    auto c = knotcs::make_torus_knot(2, 3);
    CHECK_NOTHROW(knotcs::validate_embedding(*c));
    for (double s : {0.017, 0.26, 0.5009, 0.83}) check_jets(*c, s, true);
    // periodicity
    CHECK(norm(c->point(0.3) - c->point(1.3)) < 1e-9);
    CHECK(norm(c->point(-0.2) - c->point(0.8)) < 1e-9);
    CurveStats st = knotcs::curve_stats(*c);
    CHECK(st.diameter > 4.0);
    CHECK(st.diameter < 6.0);
    CHECK(st.injectivity_margin > 0.3);
    CHECK_THROWS_AS(knotcs::make_torus_knot(0, 3), std::invalid_argument);
    CHECK_THROWS_AS(knotcs::make_torus_knot(2, -1), std::invalid_argument);
}

TEST_CASE("explicit fourier curve matches its series") {
    std::vector<std::array<double, 6>> coeffs = {
        {0.1, 0, 0.2, 0, 0, 0}, {1.0, 0.3, 0, 1.1, 0.2, 0}, {0, 0.2, 0.4, 0, 0, 0.5}};
    auto c = knotcs::make_fourier(coeffs);
    double s = 0.37;
    Vec3 want{};
    for (int k = 0; k < 3; ++k) {
        double cs = std::cos(kTau * k * s), sn = std::sin(kTau * k * s);
        want.x += coeffs[k][0] * cs + coeffs[k][1] * sn;
        want.y += coeffs[k][2] * cs + coeffs[k][3] * sn;
        want.z += coeffs[k][4] * cs + coeffs[k][5] * sn;
    }
    CHECK(norm(c->point(s) - want) < 1e-12);
    check_jets(*c, s, true);
    CHECK_THROWS_AS(knotcs::make_fourier({}), std::invalid_argument);
}

TEST_CASE("polygon curve approximates its polygon") {
    std::vector<Vec3> square = {{1, 1, 0}, {-1, 1, 0}, {-1, -1, 0}, {1, -1, 0}};
    auto c = knotcs::make_polygon(square, 0.02, 24);
    CHECK_NOTHROW(knotcs::validate_embedding(*c));
    double max_z = 0, max_out = 0;
    for (int k = 0; k < 400; ++k) {
        Vec3 p = c->point((k + 0.5) / 400);
        max_z = std::max(max_z, std::fabs(p.z));
        // distance from the square boundary in the plane
        double ax = std::fabs(p.x), ay = std::fabs(p.y);
        max_out = std::max(max_out, std::fabs(std::max(ax, ay) - 1.0));
    }
    CHECK(max_z < 1e-9);
    CHECK(max_out < 0.15);
    for (double s : {0.08, 0.33, 0.61}) check_jets(*c, s, true);
    CHECK_THROWS_AS(knotcs::make_polygon({{0, 0, 0}, {1, 0, 0}}, 0.02), std::invalid_argument);
}

TEST_CASE("curve transforms") {
    auto c = knotcs::make_torus_knot(2, 3);
    auto m = knotcs::mirror_curve(c);
    CHECK(norm(m->point(0.3) + c->point(0.3)) < 1e-12);
    auto r = knotcs::reverse_curve(c);
    CHECK(norm(r->point(0.3) - c->point(0.7)) < 1e-12);
    CHECK(norm(r->eval(0.3).d1 + c->eval(0.7).d1) < 1e-12);
    check_jets(*r, 0.21, true);

    auto rp = knotcs::reparam_curve(c, 0.25, 0.5, 2);
    check_jets(*rp, 0.13, true);
    CHECK_THROWS_AS(knotcs::reparam_curve(c, 0.0, 1.5, 1), std::invalid_argument);

    std::array<double, 9> rot = {0, -1, 0, 1, 0, 0, 0, 0, 1};  // quarter turn around z
    auto rg = knotcs::rigid_motion_curve(c, rot, Vec3{1, 2, 3}, 2.0);
    Vec3 p = c->point(0.3);
    CHECK(norm(rg->point(0.3) - (Vec3{-p.y, p.x, p.z} * 2.0 + Vec3{1, 2, 3})) < 1e-12);
    check_jets(*rg, 0.44, true);

    auto pert = knotcs::perturb_curve(c, {{0, 0, 0, 0, 0, 0}, {1, 0, 0, 1, 0.5, 0.5}}, 0.05);
    CHECK_NOTHROW(knotcs::validate_embedding(*pert));
    double maxd = 0;
    for (int k = 0; k < 200; ++k)
        maxd = std::max(maxd, norm(pert->point(k / 200.0) - c->point(k / 200.0)));
    CHECK(maxd > 1e-4);
    CHECK(maxd < 0.5);
}

TEST_CASE("framings are orthonormal and consistent") {
    auto c = knotcs::make_torus_knot(2, 3);
    auto f = knotcs::default_framing(c);
    for (double s : {0.0, 0.11, 0.37, 0.52, 0.9}) check_frame(*c, *f, s);

    auto tw = knotcs::twist_framing(c, f, 3);
    for (double s : {0.07, 0.41, 0.88}) check_frame(*c, *tw, s);
    // the twisted frame makes angle 2 pi k s with the base frame
    double s = 0.29;
    CHECK(dot(tw->eval(s).u, f->eval(s).u) == doctest::Approx(std::cos(kTau * 3 * s)).epsilon(1e-9));
}

TEST_CASE("total twist behaves under framing changes and symmetries") {
    auto c = knotcs::make_torus_knot(2, 3);
    auto f = knotcs::default_framing(c);
    double tau = knotcs::total_twist(*c, *f);

    auto tw = knotcs::twist_framing(c, f, 2);
    CHECK(knotcs::total_twist(*c, *tw) - tau == doctest::Approx(2.0).epsilon(1e-10));

    CHECK(knotcs::total_twist(*knotcs::mirror_curve(c), *knotcs::mirror_framing(f)) ==
          doctest::Approx(-tau).epsilon(1e-9));
    CHECK(knotcs::total_twist(*knotcs::reverse_curve(c), *knotcs::reverse_framing(f)) ==
          doctest::Approx(tau).epsilon(1e-9));
    CHECK(knotcs::total_twist(*knotcs::reparam_curve(c, 0.3, 0.4, 2),
                              *knotcs::reparam_framing(f, 0.3, 0.4, 2)) ==
          doctest::Approx(tau).epsilon(1e-6));
    std::array<double, 9> rot = {0, -1, 0, 1, 0, 0, 0, 0, 1};
    CHECK(knotcs::total_twist(*knotcs::rigid_motion_curve(c, rot, Vec3{0.4, -1, 2}),
                              *knotcs::rotate_framing(f, rot)) ==
          doctest::Approx(tau).epsilon(1e-9));
}

TEST_CASE("self-linking number is an integer") {
    auto check_self_link = [](CurvePtr c, int expect) {
        double w = knotcs::writhe_quadrature(*c, 512);
        double tau = knotcs::total_twist(*c, *knotcs::default_framing(c));
        CHECK(w + tau == doctest::Approx(expect).epsilon(1e-6));
    };
    check_self_link(knotcs::make_circle(), 0);
    check_self_link(knotcs::make_torus_knot(2, 3), -3);
}

TEST_CASE("one-crossing singular preset") {
    auto fam = knotcs::make_singular_preset(1);
    REQUIRE(fam->crossings() == 1);
    REQUIRE(fam->handedness() == std::vector<int>{+1});
    CHECK(fam->chord_diagram().canonical().key() == WilsonGraph::theta().canonical().key());

    auto plus = fam->curve({+1}), minus = fam->curve({-1});
    CHECK_NOTHROW(knotcs::validate_embedding(*plus));
    CHECK_NOTHROW(knotcs::validate_embedding(*minus));
    for (double s : {0.033, 0.271, 0.523, 0.761, 0.913}) {
        check_jets(*plus, s, false);
        check_frame(*plus, *fam->framing({+1}), s);
    }

    // the two resolutions coincide pointwise outside the crossing region
    auto ri = fam->region_intervals();
    REQUIRE(ri.size() == 1);
    double max_in = 0;
    for (int k = 0; k < 2000; ++k) {
        double s = (k + 0.5) / 2000;
        bool inside = (s > ri[0][0] && s < ri[0][1]) || (s > ri[0][2] && s < ri[0][3]);
        double d = norm(plus->point(s) - minus->point(s));
        if (inside)
            max_in = std::max(max_in, d);
        else
            CHECK(d == 0.0);
    }
    CHECK(max_in > 0.1);

    // crossing strands coincide in projection and differ in height
    auto cp = fam->crossing_params();
    REQUIRE(cp.size() == 1);
    Vec3 a = plus->point(cp[0].first), b = plus->point(cp[0].second);
    CHECK(std::hypot(a.x - b.x, a.y - b.y) < 1e-9);
    CHECK(a.z - b.z == doctest::Approx(0.45).epsilon(1e-9));

    // resolving the crossing changes the writhe by twice the handedness
    double wp = knotcs::writhe_quadrature(*plus, 512);
    double wm = knotcs::writhe_quadrature(*minus, 512);
    CHECK(wp - wm == doctest::Approx(2.0).epsilon(1e-3));

    // the framing twist does not depend on the resolution at all
    CHECK(knotcs::total_twist(*plus, *fam->framing({+1})) ==
          knotcs::total_twist(*minus, *fam->framing({-1})));

    CHECK_THROWS_AS(fam->curve({+1, -1}), std::invalid_argument);
    CHECK_THROWS_AS(knotcs::make_singular_preset(3), std::invalid_argument);
}

TEST_CASE("two-crossing singular preset") {
    auto fam = knotcs::make_singular_preset(2);
    REQUIRE(fam->crossings() == 2);
    REQUIRE(fam->handedness() == std::vector<int>{+1, -1});
    // the two chords interleave along the circle
    CHECK(fam->chord_diagram().canonical().key() ==
          WilsonGraph::chord_diagram({{0, 2}, {1, 3}}).canonical().key());

    std::vector<CurvePtr> curves(4);
    std::vector<double> writhe(4), twist(4);
    for (int mask = 0; mask < 4; ++mask) {
        auto eps = bits_to_eps(mask, 2);
        curves[mask] = fam->curve(eps);
        CHECK_NOTHROW(knotcs::validate_embedding(*curves[mask]));
        writhe[mask] = knotcs::writhe_quadrature(*curves[mask], 512);
        twist[mask] = knotcs::total_twist(*curves[mask], *fam->framing(eps));
    }
    for (double s : {0.043, 0.31, 0.57, 0.83}) check_jets(*curves[3], s, false);
    for (double s : {0.02, 0.2, 0.45, 0.72, 0.95}) check_frame(*curves[3], *fam->framing({1, 1}), s);

    // single-crossing flips move the writhe by twice the handedness
    CHECK(writhe[1] - writhe[0] == doctest::Approx(2.0).epsilon(3e-3));
    CHECK(writhe[3] - writhe[2] == doctest::Approx(2.0).epsilon(3e-3));
    CHECK(writhe[2] - writhe[0] == doctest::Approx(-2.0).epsilon(3e-3));
    CHECK(writhe[3] - writhe[1] == doctest::Approx(-2.0).epsilon(3e-3));
    // the alternating sum cancels termwise
    CHECK(std::fabs(writhe[3] - writhe[1] - writhe[2] + writhe[0]) < 1e-4);
    // twist is identical across all resolutions
    CHECK(twist[1] == twist[0]);
    CHECK(twist[2] == twist[0]);
    CHECK(twist[3] == twist[0]);

    // coincidence outside the two crossing regions
    auto ri = fam->region_intervals();
    REQUIRE(ri.size() == 2);
    for (int k = 0; k < 2000; ++k) {
        double s = (k + 0.5) / 2000;
        bool inside = false;
        for (const auto& r : ri)
            if ((s > r[0] && s < r[1]) || (s > r[2] && s < r[3])) inside = true;
        if (!inside)
            for (int mask = 1; mask < 4; ++mask)
                CHECK(norm(curves[mask]->point(s) - curves[0]->point(s)) == 0.0);
    }

    auto cp = fam->crossing_params();
    REQUIRE(cp.size() == 2);
    for (const auto& pr : cp) {
        Vec3 a = curves[3]->point(pr.first), b = curves[3]->point(pr.second);
        CHECK(std::hypot(a.x - b.x, a.y - b.y) < 1e-9);
        CHECK(a.z - b.z == doctest::Approx(0.45).epsilon(1e-9));
    }
}

TEST_CASE("degenerate inputs are rejected") {
    CHECK_THROWS_AS(knotcs::curve_stats(*knotcs::make_circle(), 8), std::invalid_argument);
    // a doubly traversed circle: P(s) == P(s + 1/2)
    std::vector<std::array<double, 6>> coeffs = {{0, 0, 0, 0, 0, 0}, {0, 0, 0, 0, 0, 0},
                                                 {1, 0, 0, 1, 0, 0}};
    auto c = knotcs::make_fourier(coeffs);
    CHECK_THROWS_AS(knotcs::validate_embedding(*c), std::invalid_argument);
}
