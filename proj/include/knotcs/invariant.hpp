#pragma once
#include <string>
#include <vector>

#include "knotcs/diagram_algebra.hpp"
#include "knotcs/integrator.hpp"
#include "knotcs/knot_geometry.hpp"

namespace knotcs {

struct FramedKnot {
    CurvePtr curve;
    FramingPtr framing;
};

// Coordinates of one homogeneous coefficient in the basis of its degree space.
struct CoefficientEstimate {
    std::vector<double> coords;
    std::vector<double> sigmas;
};

// Per-degree coordinates of the framing-correction generator alpha. Degree 1 is
// exact; degree 2 vanishes; degree 3 is a Monte Carlo table (optional).
struct AnomalySeries {
    std::vector<std::vector<double>> coords;  // [d-1] -> coords in degree-d basis
    std::vector<std::vector<double>> sigmas;
};
AnomalySeries anomaly_series(const Algebra& alg, int max_degree, const McOptions& opt,
                             bool enable_degree3 = false);

struct InvariantOptions {
    int max_degree = 2;
    McOptions mc;
    bool degree3_anomaly = false;
    int quad_grid = 512;  // writhe quadrature resolution
};

struct InvariantResult {
    int max_degree = 0;
    double tau = 0.0;        // total twist of the framing
    double self_link = 0.0;  // writhe by quadrature, reported alongside
    std::vector<CoefficientEstimate> raw;        // Z_d
    std::vector<CoefficientEstimate> corrected;  // Zhat_d = (Z * exp(tau*alpha))_d
    std::vector<std::vector<std::string>> basis_labels;
};

InvariantResult compute_invariant(const Algebra& alg, const FramedKnot& knot,
                                  const InvariantOptions& opt);

// Formal-series helpers on per-degree basis coordinates (degree-0 term fixed to 1
// for `series_exp_linear` input t*x with x homogeneous of degree >= 1).
std::vector<std::vector<double>> series_product(const Algebra& alg,
                                                const std::vector<std::vector<double>>& a,
                                                const std::vector<std::vector<double>>& b,
                                                int max_degree);
std::vector<std::vector<double>> series_exp(const Algebra& alg,
                                            const std::vector<std::vector<double>>& x,
                                            int max_degree);

struct VassilievOptions {
    int max_degree = 2;
    McOptions mc;
    int quad_grid = 512;
    bool degree3_anomaly = false;
};

struct VassilievResult {
    int crossings = 0;
    double tau = 0.0;                      // common twist of all resolutions
    std::vector<double> writhes;           // quadrature writhe per resolution
    std::vector<CoefficientEstimate> diff; // sum over resolutions of sign-weighted Zhat_d
};

// Alternating sum of the corrected invariant over the 2^j resolutions of a
// singular family, evaluated with common random numbers per graph class.
VassilievResult vassiliev_difference(const Algebra& alg, const SingularFamily& fam,
                                     const VassilievOptions& opt);

}  // namespace knotcs
