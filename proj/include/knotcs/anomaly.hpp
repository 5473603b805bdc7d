#pragma once
#include "knotcs/integrator.hpp"
#include "knotcs/wilson_graph.hpp"

namespace knotcs {

// Monte Carlo estimate of the frame-bundle coefficient f(g) attached to a
// primitive trivalent graph. Normalization is fixed by f(theta) = 2 for the
// two-point chord graph. Non-primitive graphs return exactly zero.
McEstimate anomaly_coefficient(const WilsonGraph& g, const McOptions& opt);

}  // namespace knotcs
