#include "knotcs/json_io.hpp"

#include <fstream>
#include <stdexcept>

namespace knotcs {
namespace {

[[noreturn]] void bad(const std::string& what) {
    throw std::runtime_error("json: " + what);
}

const Json& field(const Json& j, const char* name) {
    auto it = j.find(name);
    if (it == j.end()) bad(std::string("missing field \"") + name + "\"");
    return *it;
}

int int_field(const Json& j, const char* name) {
    const Json& f = field(j, name);
    if (!f.is_number_integer()) bad(std::string("field \"") + name + "\" must be an integer");
    return f.get<int>();
}

double num_field(const Json& j, const char* name, double fallback) {
    auto it = j.find(name);
    if (it == j.end()) return fallback;
    if (!it->is_number()) bad(std::string("field \"") + name + "\" must be a number");
    return it->get<double>();
}

std::pair<int, int> edge_pair(const Json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
        bad("edge must be a [tail, head] pair");
    return {j[0].get<int>(), j[1].get<int>()};
}

}  // namespace

Json graph_to_json(const WilsonGraph& g) {
    const int n = g.n_ext();
    const auto& edges = g.chords();
    // partition: external-touching edges first, purely internal ones after
    std::vector<int> remap(edges.size());
    Json chords = Json::array(), internal = Json::array();
    int next = 0;
    for (std::size_t e = 0; e < edges.size(); ++e)
        if (edges[e].first < n || edges[e].second < n) {
            remap[e] = next++;
            chords.push_back({edges[e].first, edges[e].second});
        }
    for (std::size_t e = 0; e < edges.size(); ++e)
        if (edges[e].first >= n && edges[e].second >= n) {
            remap[e] = next++;
            internal.push_back({edges[e].first, edges[e].second});
        }

    Json orders = Json::array();
    for (const auto& darts : g.vertex_orders()) {
        Json row = Json::array();
        for (const Dart& d : darts) {
            const auto& e = edges[d.edge];
            if (e.first == e.second)
                row.push_back({remap[d.edge], d.end});  // self-loop: end is ambiguous
            else
                row.push_back(remap[d.edge]);
        }
        orders.push_back(std::move(row));
    }

    Json wilson = Json::array();
    for (int i = 0; i < n; ++i) wilson.push_back(i);
    return Json{{"n", n},
                {"t", g.n_int()},
                {"wilson_order", std::move(wilson)},
                {"chords", std::move(chords)},
                {"internal_edges", std::move(internal)},
                {"vertex_orders", std::move(orders)},
                {"sign", g.sign()}};
}

WilsonGraph graph_from_json(const Json& j) {
    if (!j.is_object()) bad("graph must be an object");
    const int n = int_field(j, "n");
    const int t = int_field(j, "t");
    const int sign = int_field(j, "sign");
    if (n < 1 || t < 0) bad("need n >= 1 and t >= 0");
    if (sign != 1 && sign != -1) bad("sign must be +1 or -1");

    const Json& wilson = field(j, "wilson_order");
    if (!wilson.is_array() || static_cast<int>(wilson.size()) != n)
        bad("wilson_order must list the n external vertices");
    for (int i = 0; i < n; ++i)
        if (wilson[i] != i) bad("wilson_order must be the identity cycle 0..n-1");

    std::vector<std::pair<int, int>> edges;
    const Json& chords = field(j, "chords");
    const Json& internal = field(j, "internal_edges");
    if (!chords.is_array() || !internal.is_array()) bad("edge lists must be arrays");
    for (const Json& e : chords) {
        auto p = edge_pair(e);
        if (std::min(p.first, p.second) >= n) bad("chord with no external endpoint");
        edges.push_back(p);
    }
    for (const Json& e : internal) {
        auto p = edge_pair(e);
        if (p.first < n || p.second < n) bad("internal edge with an external endpoint");
        edges.push_back(p);
    }
    const int ne = static_cast<int>(edges.size());
    for (auto [a, b] : edges)
        if (a < 0 || b < 0 || a >= n + t || b >= n + t) bad("edge endpoint out of range");

    const Json& orders = field(j, "vertex_orders");
    if (!orders.is_array() || static_cast<int>(orders.size()) != n + t)
        bad("vertex_orders must have one row per vertex");
    std::vector<std::vector<Dart>> vo(n + t);
    for (int v = 0; v < n + t; ++v) {
        if (!orders[v].is_array()) bad("vertex_orders rows must be arrays");
        for (const Json& d : orders[v]) {
            Dart dart{};
            if (d.is_number_integer()) {
                dart.edge = d.get<int>();
                if (dart.edge < 0 || dart.edge >= ne) bad("dart edge id out of range");
                const auto& e = edges[dart.edge];
                if (e.first == e.second) bad("self-loop dart needs an explicit [edge, end]");
                if (e.first == v)
                    dart.end = 0;
                else if (e.second == v)
                    dart.end = 1;
                else
                    bad("dart references an edge not incident to its vertex");
            } else if (d.is_array() && d.size() == 2) {
                dart.edge = d[0].get<int>();
                dart.end = d[1].get<int>();
                if (dart.edge < 0 || dart.edge >= ne) bad("dart edge id out of range");
                if (dart.end != 0 && dart.end != 1) bad("dart end must be 0 or 1");
                const auto& e = edges[dart.edge];
                if ((dart.end == 0 ? e.first : e.second) != v)
                    bad("dart references an edge end not at its vertex");
            } else {
                bad("dart must be an edge id or an [edge, end] pair");
            }
            vo[v].push_back(dart);
        }
    }
    try {
        return WilsonGraph(n, t, std::move(edges), std::move(vo), sign);
    } catch (const std::exception& e) {
        bad(e.what());
    }
}

CurvePtr knot_from_json(const Json& j) {
    if (!j.is_object()) bad("knot must be an object");
    const Json& type = field(j, "type");
    if (type == "torus") {
        return make_torus_knot(int_field(j, "p"), int_field(j, "q"), num_field(j, "R", 2.0),
                               num_field(j, "r", 0.5));
    }
    if (type == "fourier") {
        const Json& cj = field(j, "coeffs");
        if (!cj.is_array()) bad("coeffs must be an array");
        std::vector<std::array<double, 6>> coeffs;
        for (const Json& row : cj) {
            if (!row.is_array() || row.size() != 6) bad("each coeffs row needs 6 numbers");
            std::array<double, 6> a{};
            for (int k = 0; k < 6; ++k) a[k] = row[k].get<double>();
            coeffs.push_back(a);
        }
        return make_fourier(coeffs);
    }
    if (type == "polygon") {
        const Json& pj = field(j, "points");
        if (!pj.is_array()) bad("points must be an array");
        std::vector<Vec3> pts;
        for (const Json& row : pj) {
            if (!row.is_array() || row.size() != 3) bad("each point needs 3 numbers");
            pts.push_back({row[0].get<double>(), row[1].get<double>(), row[2].get<double>()});
        }
        return make_polygon(pts, num_field(j, "smoothing", 0.05));
    }
    bad("unknown knot type (want torus | fourier | polygon)");
}

FramingPtr framing_from_json(const Json& j, CurvePtr curve) {
    if (!j.is_object()) bad("framing must be an object");
    const Json& type = field(j, "type");
    if (type == "default") return default_framing(std::move(curve));
    if (type == "twist") {
        const int k = int_field(j, "k");
        FramingPtr base = default_framing(curve);
        return twist_framing(std::move(curve), std::move(base), k);
    }
    bad("unknown framing type (want default | twist)");
}

Json estimate_to_json(const McEstimate& e) {
    return Json{{"value", e.value}, {"std_error", e.sigma}};
}

Json invariant_result_to_json(const InvariantResult& r, const Json& knot_desc,
                              std::uint64_t seed, std::int64_t samples,
                              const std::string& method) {
    Json degrees = Json::array();
    for (int d = 1; d <= r.max_degree; ++d) {
        degrees.push_back(Json{{"degree", d},
                               {"basis", r.basis_labels[d - 1]},
                               {"raw",
                                Json{{"coords", r.raw[d - 1].coords},
                                     {"std_errors", r.raw[d - 1].sigmas}}},
                               {"corrected",
                                Json{{"coords", r.corrected[d - 1].coords},
                                     {"std_errors", r.corrected[d - 1].sigmas}}}});
    }
    return Json{{"knot", knot_desc},
                {"max_degree", r.max_degree},
                {"tau", r.tau},
                {"self_link", r.self_link},
                {"degrees", std::move(degrees)},
                {"seed", seed},
                {"samples", samples},
                {"method", method}};
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw std::runtime_error("cannot parse " + path + ": " + e.what());
    }
}

void save_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << j.dump(2) << "\n";
    if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace knotcs
