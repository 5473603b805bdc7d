#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <doctest.h>
#include <stdexcept>

#include "knotcs/invariant.hpp"

using namespace knotcs;

namespace {

McOptions quick_mc(std::uint64_t seed) {
    McOptions mc;
    mc.samples = 1 << 17;
    mc.seed = seed;
    mc.threads = 1;
    return mc;
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace

TEST_CASE("series product and exponential identities") {
    Algebra alg(3);
    const std::vector<std::vector<double>> x = {{0.7}, {0.3, -0.4}, {0.2, -0.1, 0.5}};
    const std::vector<std::vector<double>> y = {{-1.2}, {0.5, 0.1}, {-0.3, 0.4, 0.2}};
    const std::vector<std::vector<double>> z = {{0.4}, {-0.2, 0.6}, {0.1, 0.1, -0.7}};

    // exp keeps the degree-1 part and inverts under negation.
    auto ex = series_exp(alg, x, 3);
    CHECK(ex[0][0] == doctest::Approx(x[0][0]).epsilon(1e-14));
    std::vector<std::vector<double>> nx = x;
    for (auto& row : nx)
        for (double& v : row) v = -v;
    auto prod = series_product(alg, ex, series_exp(alg, nx, 3), 3);
    for (const auto& row : prod)
        for (double v : row) CHECK(std::abs(v) < 1e-12);

    // commutativity and associativity of the graded product.
    auto xy = series_product(alg, x, y, 3);
    auto yx = series_product(alg, y, x, 3);
    auto xy_z = series_product(alg, xy, z, 3);
    auto x_yz = series_product(alg, x, series_product(alg, y, z, 3), 3);
    for (int d = 0; d < 3; ++d)
        for (std::size_t k = 0; k < xy[d].size(); ++k) {
            CHECK(close(xy[d][k], yx[d][k], 1e-12));
            CHECK(close(xy_z[d][k], x_yz[d][k], 1e-12));
        }

    // shape validation
    CHECK_THROWS_AS(series_product(alg, {{1.0}}, {{1.0}}, 2), std::invalid_argument);
    CHECK_THROWS_AS(series_exp(alg, {{1.0, 2.0}}, 1), std::invalid_argument);
    CHECK_THROWS_AS(series_exp(alg, x, 7), std::invalid_argument);
}

TEST_CASE("framing correction generator table") {
    Algebra alg(3);
    auto as = anomaly_series(alg, 3, quick_mc(1), false);
    REQUIRE(as.coords.size() == 3);

    // Degree 1 is exactly half the two-point chord class, with zero variance.
    REQUIRE(as.coords[0].size() == 1);
    CHECK(as.coords[0][0] == 0.5);
    CHECK(as.sigmas[0][0] == 0.0);

    // Degrees 2 and 3 vanish identically in the deterministic table.
    for (int d = 1; d < 3; ++d)
        for (std::size_t k = 0; k < as.coords[d].size(); ++k) {
            CHECK(as.coords[d][k] == 0.0);
            CHECK(as.sigmas[d][k] == 0.0);
        }

    // The direct Monte Carlo check of degree 3 agrees with the zero table.
    // Two of the three primitive classes cancel pointwise; the third (two
    // internal vertices, four legs) is a genuinely noisy mean-zero estimate.
    McOptions mc = quick_mc(2);
    mc.samples = 1 << 14;
    auto mc3 = anomaly_series(alg, 3, mc, true);
    for (std::size_t k = 0; k < mc3.coords[2].size(); ++k) {
        CHECK(std::isfinite(mc3.sigmas[2][k]));
        CHECK(mc3.sigmas[2][k] < 0.05);
        CHECK(std::abs(mc3.coords[2][k]) < 4.0 * mc3.sigmas[2][k] + 1e-9);
    }
}

TEST_CASE("framed trefoil: degree-1 coefficient matches writhe plus twist") {
    Algebra alg(2);
    CurvePtr trefoil = make_torus_knot(2, 3);
    FramedKnot knot{trefoil, default_framing(trefoil)};

    InvariantOptions opt;
    opt.max_degree = 2;
    opt.mc = quick_mc(9);
    opt.quad_grid = 512;
    auto res = compute_invariant(alg, knot, opt);

    CHECK(res.max_degree == 2);
    CHECK(close(res.self_link, -3.126859, 1e-3));
    CHECK(close(res.tau, 0.126859, 1e-3));

    // Raw degree 1 is I(theta)/2 ~ W/2; corrected adds tau/2 exactly.
    REQUIRE(res.raw[0].coords.size() == 1);
    const double sig1 = res.raw[0].sigmas[0];
    CHECK(sig1 > 0.0);
    CHECK(sig1 < 0.05);
    CHECK(close(res.raw[0].coords[0], 0.5 * res.self_link, 3.5 * sig1 + 1e-3));
    CHECK(close(res.corrected[0].coords[0], res.raw[0].coords[0] + 0.5 * res.tau, 1e-12));
    CHECK(res.corrected[0].sigmas[0] == sig1);
    CHECK(close(res.corrected[0].coords[0], 0.5 * (res.self_link + res.tau), 3.5 * sig1 + 1e-3));

    // Degree-2 estimates exist with finite spread; labels cover both bases.
    REQUIRE(res.raw[1].coords.size() == 2);
    for (double s : res.raw[1].sigmas) CHECK(s > 0.0);
    CHECK(res.basis_labels[0].size() == 1);
    CHECK(res.basis_labels[1].size() == 2);

    // Deterministic reruns are bitwise identical.
    auto res2 = compute_invariant(alg, knot, opt);
    for (int d = 0; d < 2; ++d)
        for (std::size_t k = 0; k < res.raw[d].coords.size(); ++k) {
            CHECK(res.raw[d].coords[k] == res2.raw[d].coords[k]);
            CHECK(res.corrected[d].coords[k] == res2.corrected[d].coords[k]);
        }

    // Adding two framing twists moves the corrected degree-1 term by exactly
    // +1 = 2 * alpha_1 while the raw term (same seeds, same curve) is unchanged.
    FramedKnot twisted{trefoil, twist_framing(trefoil, knot.framing, 2)};
    auto rest = compute_invariant(alg, twisted, opt);
    CHECK(rest.raw[0].coords[0] == res.raw[0].coords[0]);
    CHECK(close(rest.tau, res.tau + 2.0, 1e-9));
    CHECK(close(rest.corrected[0].coords[0] - res.corrected[0].coords[0], 1.0, 1e-9));
}

TEST_CASE("degree-1 coefficient is stable under rigid motion") {
    Algebra alg(1);
    CurvePtr a = make_torus_knot(2, 3);
    // quarter turn about z plus a translation; framing follows the moved curve
    const std::array<double, 9> rot = {0, -1, 0, 1, 0, 0, 0, 0, 1};
    CurvePtr b = rigid_motion_curve(a, rot, Vec3{0.4, -0.2, 0.8}, 1.0);

    InvariantOptions opt;
    opt.max_degree = 1;
    opt.mc = quick_mc(21);
    auto ra = compute_invariant(alg, {a, default_framing(a)}, opt);
    auto rb = compute_invariant(alg, {b, default_framing(b)}, opt);
    const double sig =
        std::sqrt(ra.corrected[0].sigmas[0] * ra.corrected[0].sigmas[0] +
                  rb.corrected[0].sigmas[0] * rb.corrected[0].sigmas[0]);
    CHECK(close(ra.corrected[0].coords[0], rb.corrected[0].coords[0], 4.0 * sig + 1e-3));
}

TEST_CASE("one-crossing family: difference picks out the chord class") {
    Algebra alg(2);
    auto fam = make_singular_preset(1);

    VassilievOptions opt;
    opt.max_degree = 2;
    opt.mc = quick_mc(3);
    opt.quad_grid = 512;
    auto r = vassiliev_difference(alg, *fam, opt);

    CHECK(r.crossings == 1);
    REQUIRE(r.writhes.size() == 2);
    CHECK(close(r.writhes[0], -1.0, 2e-3));
    CHECK(close(r.writhes[1], 1.0, 2e-3));

    // Quadrature path: (sum_eps w W)/2 equals the crossing handedness.
    const double wq = 0.5 * (r.writhes[1] - r.writhes[0]);
    CHECK(close(wq, fam->handedness()[0], 2e-3));

    // Monte Carlo path: degree-1 difference is the same number in the basis.
    REQUIRE(r.diff[0].coords.size() == 1);
    const double sig = r.diff[0].sigmas[0];
    CHECK(sig > 0.0);
    CHECK(sig < 0.1);
    CHECK(close(r.diff[0].coords[0], fam->handedness()[0], 3.5 * sig + 2e-3));

    // Degree-2 difference of a single crossing change stays consistent with 0.
    for (std::size_t k = 0; k < r.diff[1].coords.size(); ++k)
        CHECK(close(r.diff[1].coords[k], 0.0, 4.0 * r.diff[1].sigmas[k] + 1e-3));

    // The reported twist matches the geometry layer for the minus resolution.
    CHECK(r.tau == total_twist(*fam->curve({-1}), *fam->framing({-1}), 8 * opt.quad_grid));

    auto r2 = vassiliev_difference(alg, *fam, opt);
    CHECK(r.diff[0].coords[0] == r2.diff[0].coords[0]);
    CHECK(r.diff[1].coords[1] == r2.diff[1].coords[1]);
}

TEST_CASE("two-crossing family: first difference cancels, second is measurable") {
    Algebra alg(2);
    auto fam = make_singular_preset(2);

    VassilievOptions opt;
    opt.max_degree = 2;
    opt.mc = quick_mc(4);
    opt.quad_grid = 512;
    auto r = vassiliev_difference(alg, *fam, opt);

    CHECK(r.crossings == 2);
    REQUIRE(r.writhes.size() == 4);

    // Quadrature path: the sign-weighted writhe sum cancels.
    double sw = 0.0;
    for (int mask = 0; mask < 4; ++mask) {
        const double w = ((mask & 1) ? 1 : -1) * ((mask >> 1 & 1) ? 1 : -1);
        sw += w * r.writhes[mask];
    }
    CHECK(std::abs(0.5 * sw) < 1e-4);

    // Monte Carlo path: each crossing zone enters as z = eps * bump, so the
    // z-mirror pairs resolutions with opposite two-point linking values and the
    // weighted degree-1 integrand cancels at every sample point.
    CHECK(std::abs(r.diff[0].coords[0]) < 1e-9);
    CHECK(r.diff[0].sigmas[0] < 1e-9);

    // Degree 2: the coordinate orthogonal to the crossing chord diagram is
    // consistent with zero; the chord-diagram coordinate has a usable spread.
    auto rx = alg.space(2).reduce_graph(fam->chord_diagram());
    REQUIRE(rx.size() == 2);
    CHECK(to_double(rx[0]) == 0.0);
    CHECK(to_double(rx[1]) == 1.0);
    CHECK(close(r.diff[1].coords[0], 0.0, 4.0 * r.diff[1].sigmas[0] + 1e-3));
    CHECK(std::isfinite(r.diff[1].coords[1]));
    CHECK(r.diff[1].sigmas[1] > 0.0);
    CHECK(std::abs(r.diff[1].coords[1]) < 5.0);

    // All four resolutions carry one common twist by construction.
    CHECK(r.tau == total_twist(*fam->curve({1, 1}), *fam->framing({1, 1}), 8 * opt.quad_grid));
}

TEST_CASE("invariant input validation") {
    Algebra alg(2);
    CurvePtr c = make_circle();
    FramedKnot knot{c, default_framing(c)};

    InvariantOptions opt;
    opt.mc = quick_mc(1);

    FramedKnot broken{nullptr, knot.framing};
    CHECK_THROWS_AS(compute_invariant(alg, broken, opt), std::invalid_argument);

    InvariantOptions bad = opt;
    bad.max_degree = 0;
    CHECK_THROWS_AS(compute_invariant(alg, knot, bad), std::invalid_argument);
    bad.max_degree = 5;
    CHECK_THROWS_AS(compute_invariant(alg, knot, bad), std::invalid_argument);
    bad = opt;
    bad.quad_grid = 4;
    CHECK_THROWS_AS(compute_invariant(alg, knot, bad), std::invalid_argument);

    VassilievOptions vbad;
    vbad.max_degree = 9;
    vbad.mc = quick_mc(1);
    auto fam = make_singular_preset(1);
    CHECK_THROWS_AS(vassiliev_difference(alg, *fam, vbad), std::invalid_argument);
    CHECK_THROWS_AS(anomaly_series(alg, 0, quick_mc(1), false), std::invalid_argument);
}
