#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "knotcs/integrator.hpp"
#include "knotcs/knot_geometry.hpp"
#include "knotcs/wilson_graph.hpp"

using knotcs::McEstimate;
using knotcs::McOptions;
using knotcs::Vec3;
using knotcs::WilsonGraph;

namespace {

McOptions quick(std::int64_t samples = 1 << 17, std::uint64_t seed = 11) {
    McOptions o;
    o.samples = samples;
    o.seed = seed;
    return o;
}

constexpr double kFourPi = 4.0 * 3.14159265358979323846;

}  // namespace

TEST_CASE("planar circle has vanishing chord integral") {
    // every configuration is coplanar, so the integrand vanishes identically
    McEstimate e = knotcs::integrate_graph(WilsonGraph::theta(), *knotcs::make_circle(), quick());
    CHECK(e.value == 0.0);
    CHECK(e.sigma == 0.0);
    CHECK(e.samples == (1 << 17));
}

TEST_CASE("chord integral of the simple diagram equals the writhe") {
    auto tref = knotcs::make_torus_knot(2, 3);
    double wq = knotcs::writhe_quadrature(*tref, 1024);
    McEstimate e = knotcs::integrate_graph(WilsonGraph::theta(), *tref, quick(1 << 18));
    CHECK(e.sigma < 0.05);
    CHECK(std::fabs(e.value - wq) < 4.0 * e.sigma + 1e-3);
    // quadrature is internally converged
    CHECK(knotcs::writhe_quadrature(*tref, 256) == doctest::Approx(wq).epsilon(1e-5));
}

TEST_CASE("graph negation flips the estimate exactly") {
    auto tref = knotcs::make_torus_knot(2, 3);
    for (WilsonGraph g : {WilsonGraph::theta(), WilsonGraph::mercedes()}) {
        McEstimate a = knotcs::integrate_graph(g, *tref, quick(1 << 14));
        McEstimate b = knotcs::integrate_graph(g.negated(), *tref, quick(1 << 14));
        CHECK(b.value == -a.value);
        CHECK(b.sigma == a.sigma);
    }
}

TEST_CASE("results do not depend on the thread count") {
    auto tref = knotcs::make_torus_knot(2, 3);
    McOptions o1 = quick(1 << 15), o3 = quick(1 << 15);
    o1.threads = 1;
    o3.threads = 3;
    McEstimate a = knotcs::integrate_graph(WilsonGraph::mercedes(), *tref, o1);
    McEstimate b = knotcs::integrate_graph(WilsonGraph::mercedes(), *tref, o3);
    CHECK(a.value == b.value);
    CHECK(a.sigma == b.sigma);

    // the environment override is honoured when threads is left at 0
    ::setenv("KNOTCS_THREADS", "2", 1);
    McEstimate c = knotcs::integrate_graph(WilsonGraph::mercedes(), *tref, quick(1 << 15));
    ::unsetenv("KNOTCS_THREADS");
    CHECK(c.value == a.value);
}

TEST_CASE("same seed reproduces, different seeds agree statistically") {
    auto tref = knotcs::make_torus_knot(2, 3);
    McEstimate a = knotcs::integrate_graph(WilsonGraph::theta(), *tref, quick(1 << 16, 5));
    McEstimate b = knotcs::integrate_graph(WilsonGraph::theta(), *tref, quick(1 << 16, 5));
    CHECK(a.value == b.value);
    McEstimate c = knotcs::integrate_graph(WilsonGraph::theta(), *tref, quick(1 << 16, 6));
    CHECK(c.value != a.value);
    CHECK(std::fabs(c.value - a.value) < 5.0 * (a.sigma + c.sigma));
}

TEST_CASE("mirror image negates chord-only integrals sample by sample") {
    auto tref = knotcs::make_torus_knot(2, 3);
    McEstimate a = knotcs::integrate_graph(WilsonGraph::theta(), *tref, quick(1 << 15));
    McEstimate b =
        knotcs::integrate_graph(WilsonGraph::theta(), *knotcs::mirror_curve(tref), quick(1 << 15));
    CHECK(b.value == -a.value);
}

TEST_CASE("multi-curve evaluation shares the sample stream") {
    auto tref = knotcs::make_torus_knot(2, 3);
    auto pert = knotcs::perturb_curve(tref, {{0, 0, 0, 0, 0, 0}, {1, 0, 0, 1, 0.5, 0.5}}, 0.02);
    McEstimate single = knotcs::integrate_graph(WilsonGraph::theta(), *tref, quick(1 << 15));
    auto multi = knotcs::integrate_graph_multi(WilsonGraph::theta(), {tref, pert}, quick(1 << 15));
    REQUIRE(multi.size() == 2);
    CHECK(multi[0].value == single.value);
    // nearby embeddings produce nearby estimates under common random numbers
    CHECK(std::fabs(multi[1].value - multi[0].value) < 0.2);

    McEstimate diff = knotcs::integrate_graph_weighted(WilsonGraph::theta(), {tref, tref},
                                                       {1.0, -1.0}, quick(1 << 15));
    CHECK(diff.value == 0.0);
    CHECK(diff.sigma == 0.0);
}

TEST_CASE("pointwise integrand values match the linking form") {
    auto tref = knotcs::make_torus_knot(2, 3);
    double s0 = 0.2, s1 = 0.7;
    auto j0 = tref->eval(s0), j1 = tref->eval(s1);
    Vec3 r = j0.p - j1.p;
    double rn = norm(r);
    double want = det3(j0.d1, j1.d1, r) / (kFourPi * rn * rn * rn);
    double got = knotcs::integrand_value(WilsonGraph::theta(), *tref, {s0, s1}, {});
    CHECK(got == doctest::Approx(want).epsilon(1e-12));
    // symmetric under exchanging the two legs
    double swapped = knotcs::integrand_value(WilsonGraph::theta(), *tref, {s1, s0}, {});
    CHECK(swapped == doctest::Approx(got).epsilon(1e-12));
    // internal configurations are accepted
    double v = knotcs::integrand_value(WilsonGraph::mercedes(), *tref, {0.1, 0.4, 0.8},
                                       {Vec3{0.3, 0.2, 0.1}});
    CHECK(std::isfinite(v));
}

TEST_CASE("invalid integration requests are rejected") {
    auto tref = knotcs::make_torus_knot(2, 3);
    // a graph with four chord legs on one external vertex is not trivalent
    WilsonGraph bad = WilsonGraph::from_edges(2, 0, {{0, 1}, {0, 1}});
    CHECK_FALSE(bad.is_trivalent());
    CHECK_THROWS_AS(knotcs::integrate_graph(bad, *tref, quick(1 << 10)), std::invalid_argument);
    CHECK_THROWS_AS(knotcs::integrand_value(WilsonGraph::theta(), *tref, {0.5}, {}),
                    std::invalid_argument);
    CHECK_THROWS_AS(knotcs::writhe_quadrature(*tref, 4), std::invalid_argument);
}

TEST_CASE("null-class graphs integrate to exactly zero") {
    auto tref = knotcs::make_torus_knot(2, 3);
    // one chord from the Wilson line to an internal tadpole loop
    WilsonGraph tadpole = WilsonGraph::from_edges(1, 1, {{0, 1}, {1, 1}});
    REQUIRE(tadpole.null_integrand());
    McEstimate e = knotcs::integrate_graph(tadpole, *tref, quick(1 << 12));
    CHECK(e.value == 0.0);
    CHECK(e.sigma == 0.0);
}
