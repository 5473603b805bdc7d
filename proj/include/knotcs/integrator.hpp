#pragma once
#include <cstdint>
#include <vector>

#include "knotcs/knot_geometry.hpp"
#include "knotcs/wilson_graph.hpp"

namespace knotcs {

struct McOptions {
    std::int64_t samples = 1 << 20;
    std::uint64_t seed = 1;
    int threads = 0;          // 0: use KNOTCS_THREADS or hardware_concurrency
    int chunk_log2 = 12;      // samples per reproducibility chunk
    double tube_fraction = 0.35;  // weight of the near-diagonal proposal component
    double tube_width = 0.08;     // parameter-space width of the tube proposal
    double box_pad = 1.6;         // half-width of the ambient sampling box, in curve radii
};

struct McEstimate {
    double value = 0.0;
    double sigma = 0.0;       // standard error of the mean
    std::int64_t samples = 0;
};

// Configuration-space integral I(g) for one graph on one framed embedding.
McEstimate integrate_graph(const WilsonGraph& g, const Curve& curve, const McOptions& opt);

// Same-seed evaluation across several embeddings (common random numbers):
// returns one estimate per curve, sampled from identical underlying variates.
std::vector<McEstimate> integrate_graph_multi(const WilsonGraph& g,
                                              const std::vector<CurvePtr>& curves,
                                              const McOptions& opt);

// Single estimator of sum_i weights[i] * I(g, curves[i]) with common variates,
// so cancellations between nearby embeddings reduce the variance directly.
McEstimate integrate_graph_weighted(const WilsonGraph& g,
                                    const std::vector<CurvePtr>& curves,
                                    const std::vector<double>& weights,
                                    const McOptions& opt);

// One evaluation of the integrand density at given external parameters and
// internal positions (exposed for direct tests).
double integrand_value(const WilsonGraph& g, const Curve& curve,
                       const std::vector<double>& sv, const std::vector<Vec3>& xv);

// Self-linking (writhe) integral of the two-point chord graph, deterministic
// midpoint product quadrature with one Richardson extrapolation step.
double writhe_quadrature(const Curve& curve, int grid = 512);

// Total twist of the framing: (1/2pi) * integral of ((t x u) . du/ds) ds.
double total_twist(const Curve& curve, const Framing& framing, int grid = 4096);

}  // namespace knotcs
