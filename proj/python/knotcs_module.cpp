// Python bindings: a compact surface over the diagram algebra, the geometry
// helpers, the Monte Carlo integrator, and the assembled invariant. Heavy
// calls release the GIL; they only touch C++ state.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "knotcs/anomaly.hpp"
#include "knotcs/diagram_algebra.hpp"
#include "knotcs/enumeration.hpp"
#include "knotcs/integrator.hpp"
#include "knotcs/invariant.hpp"
#include "knotcs/json_io.hpp"
#include "knotcs/knot_geometry.hpp"
#include "knotcs/rational.hpp"
#include "knotcs/wilson_graph.hpp"

namespace py = pybind11;
using namespace knotcs;

namespace {

struct PyGraph {
    WilsonGraph g;
};

struct PyCurve {
    CurvePtr ptr;
};

McOptions mc_options(std::int64_t samples, std::uint64_t seed, int threads) {
    if (samples < 1) throw std::invalid_argument("samples must be positive");
    McOptions mo;
    mo.samples = samples;
    mo.seed = seed;
    mo.threads = threads;
    return mo;
}

std::vector<std::string> rational_strings(const std::vector<Rational>& v) {
    std::vector<std::string> out;
    out.reserve(v.size());
    for (const auto& x : v) out.push_back(to_string(x));
    return out;
}

}  // namespace

PYBIND11_MODULE(_knotcs, m) {
    m.doc() = "Perturbative knot invariants: diagram algebra, configuration-space "
              "integrals, framing corrections";

    py::class_<PyGraph>(m, "Graph")
        .def_property_readonly("degree", [](const PyGraph& p) { return p.g.degree(); })
        .def_property_readonly("n_ext", [](const PyGraph& p) { return p.g.n_ext(); })
        .def_property_readonly("n_int", [](const PyGraph& p) { return p.g.n_int(); })
        .def_property_readonly("aut", [](const PyGraph& p) { return p.g.aut_info().aut; })
        .def_property_readonly("null_class",
                               [](const PyGraph& p) { return p.g.aut_info().null_class(); })
        .def_property_readonly("null_integrand",
                               [](const PyGraph& p) { return p.g.null_integrand(); })
        .def_property_readonly("canonical_key",
                               [](const PyGraph& p) { return p.g.canonical().key(); })
        .def("__repr__", [](const PyGraph& p) {
            return "<Graph n=" + std::to_string(p.g.n_ext()) +
                   " t=" + std::to_string(p.g.n_int()) + ">";
        });

    m.def("theta", [] { return PyGraph{WilsonGraph::theta()}; },
          "Two-point chord graph, the degree-1 generator.");
    m.def("mercedes", [] { return PyGraph{WilsonGraph::mercedes()}; },
          "Three external legs joined in one internal vertex.");
    m.def(
        "chord_diagram",
        [](const std::vector<std::pair<int, int>>& pairs) {
            return PyGraph{WilsonGraph::chord_diagram(pairs)};
        },
        py::arg("pairs"), "Chord diagram on 2*len(pairs) external vertices.");
    m.def(
        "trivalent_class_count",
        [](int degree) { return static_cast<int>(trivalent_classes(degree).size()); },
        py::arg("degree"), "Number of trivalent graph classes of the degree.");

    m.def(
        "algebra_dimension", [](int degree) { return DegreeSpace(degree).dimension(); },
        py::arg("degree"), "Dimension of the degree component of the diagram algebra.");
    m.def(
        "relation_count", [](int degree) { return DegreeSpace(degree).num_relations(); },
        py::arg("degree"), "Number of independent relation rows at the degree.");
    m.def(
        "basis_labels",
        [](int degree) {
            DegreeSpace sp(degree);
            std::vector<std::string> out;
            for (int c : sp.basis_columns()) out.push_back(sp.column_label(c));
            return out;
        },
        py::arg("degree"), "Labels of the chosen basis classes at the degree.");
    m.def(
        "reduce_class",
        [](const PyGraph& p) {
            return rational_strings(DegreeSpace(p.g.degree()).reduce_graph(p.g));
        },
        py::arg("graph"),
        "Exact basis coordinates of a graph's class, as fraction strings.");

    py::class_<PyCurve>(m, "Curve").def("__repr__", [](const PyCurve&) {
        return std::string("<Curve>");
    });
    m.def(
        "circle", [](double r) { return PyCurve{make_circle(r)}; }, py::arg("radius") = 1.0);
    m.def(
        "torus_knot",
        [](int p, int q, double R, double r) { return PyCurve{make_torus_knot(p, q, R, r)}; },
        py::arg("p"), py::arg("q"), py::arg("R") = 2.0, py::arg("r") = 0.5);
    m.def(
        "mirror", [](const PyCurve& c) { return PyCurve{mirror_curve(c.ptr)}; },
        py::arg("curve"), "Mirror image (pointwise negation).");

    m.def(
        "writhe",
        [](const PyCurve& c, int grid) {
            if (!c.ptr) throw std::invalid_argument("null curve");
            return writhe_quadrature(*c.ptr, grid);
        },
        py::arg("curve"), py::arg("grid") = 512, py::call_guard<py::gil_scoped_release>(),
        "Deterministic writhe quadrature.");

    m.def(
        "integrate",
        [](const PyGraph& g, const PyCurve& c, std::int64_t samples, std::uint64_t seed,
           int threads) {
            if (!c.ptr) throw std::invalid_argument("null curve");
            auto est = integrate_graph(g.g, *c.ptr, mc_options(samples, seed, threads));
            return std::make_pair(est.value, est.sigma);
        },
        py::arg("graph"), py::arg("curve"), py::arg("samples") = std::int64_t{1} << 16,
        py::arg("seed") = std::uint64_t{1}, py::arg("threads") = 0,
        py::call_guard<py::gil_scoped_release>(),
        "Monte Carlo estimate (value, std_error) of a graph's integral.");

    m.def(
        "anomaly",
        [](const PyGraph& g, std::int64_t samples, std::uint64_t seed, int threads) {
            auto est = anomaly_coefficient(g.g, mc_options(samples, seed, threads));
            return std::make_pair(est.value, est.sigma);
        },
        py::arg("graph"), py::arg("samples") = std::int64_t{1} << 16,
        py::arg("seed") = std::uint64_t{1}, py::arg("threads") = 0,
        py::call_guard<py::gil_scoped_release>(),
        "Framing-correction coefficient (value, std_error) of a graph.");

    m.def(
        "invariant_report",
        [](const std::string& knot_json, int order, std::int64_t samples, std::uint64_t seed,
           int threads, int grid) {
            Json doc = Json::parse(knot_json);
            Json knot_desc = doc.contains("knot") ? doc["knot"] : doc;
            CurvePtr curve = knot_from_json(knot_desc);
            FramingPtr framing =
                doc.contains("framing") ? framing_from_json(doc["framing"], curve)
                                        : default_framing(curve);
            InvariantOptions io;
            io.max_degree = order;
            io.mc = mc_options(samples, seed, threads);
            io.quad_grid = grid;
            Algebra alg(order);
            InvariantResult r;
            {
                py::gil_scoped_release release;
                r = compute_invariant(alg, {curve, framing}, io);
            }
            return invariant_result_to_json(r, knot_desc, seed, samples, "mc").dump(2);
        },
        py::arg("knot_json"), py::arg("order") = 2, py::arg("samples") = std::int64_t{1} << 16,
        py::arg("seed") = std::uint64_t{1}, py::arg("threads") = 0, py::arg("grid") = 512,
        "Full corrected-invariant report as a JSON string; the input is a knot "
        "description, optionally wrapped as {\"knot\":..., \"framing\":...}.");
}
