#pragma once
#include <string>

#include <nlohmann/json.hpp>

#include "knotcs/invariant.hpp"
#include "knotcs/knot_geometry.hpp"
#include "knotcs/wilson_graph.hpp"

namespace knotcs {

using Json = nlohmann::json;

// Graph schema: {"n","t","wilson_order","chords","internal_edges","vertex_orders","sign"}.
// "chords" lists edges with at least one external endpoint, "internal_edges" the
// rest; edge ids in "vertex_orders" refer to the concatenated list (chords first).
// Darts of a self-loop edge are written as [edge, end] pairs.
Json graph_to_json(const WilsonGraph& g);
WilsonGraph graph_from_json(const Json& j);

// Knot schema: {"type":"torus","p","q","R","r"} | {"type":"fourier","coeffs":[[6 numbers]..]}
//            | {"type":"polygon","points":[[x,y,z]..],"smoothing":0.05}
CurvePtr knot_from_json(const Json& j);
// Framing schema: {"type":"default"} | {"type":"twist","k":int}
FramingPtr framing_from_json(const Json& j, CurvePtr curve);

Json estimate_to_json(const McEstimate& e);
Json invariant_result_to_json(const InvariantResult& r, const Json& knot_desc,
                              std::uint64_t seed, std::int64_t samples,
                              const std::string& method);

Json load_json_file(const std::string& path);   // throws std::runtime_error on I/O
void save_json_file(const std::string& path, const Json& j);

}  // namespace knotcs
