#pragma once
#include <array>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "knotcs/vec3.hpp"
#include "knotcs/wilson_graph.hpp"

namespace knotcs {

struct CurveJet {
    Vec3 p;   // position
    Vec3 d1;  // derivatives with respect to the circle parameter s in [0,1)
    Vec3 d2;
    Vec3 d3;
};

// Smooth closed curve R/Z -> R^3.
class Curve {
public:
    virtual ~Curve() = default;
    virtual CurveJet eval(double s) const = 0;
    Vec3 point(double s) const { return eval(s).p; }
};
using CurvePtr = std::shared_ptr<const Curve>;

CurvePtr make_circle(double radius = 1.0);
CurvePtr make_torus_knot(int p, int q, double R = 2.0, double r = 0.5);
// coeffs[k] = {ax,bx, ay,by, az,bz}: axis value = sum_k a cos(2 pi k s) + b sin(2 pi k s).
CurvePtr make_fourier(const std::vector<std::array<double, 6>>& coeffs);
// Closed polygon resampled by arc length, mollified with a periodic Gaussian of
// radius `smoothing` (fraction of total length), projected on `harmonics` modes.
CurvePtr make_polygon(const std::vector<Vec3>& points, double smoothing,
                      int harmonics = 24);

CurvePtr mirror_curve(CurvePtr c);                       // pointwise negation
CurvePtr reverse_curve(CurvePtr c);                      // s -> 1 - s
// s -> s + shift + amp * sin(2 pi freq s) / (2 pi freq); diffeomorphism for |amp| < 1.
CurvePtr reparam_curve(CurvePtr c, double shift, double amp = 0.0, int freq = 1);
CurvePtr rigid_motion_curve(CurvePtr c, const std::array<double, 9>& rot, const Vec3& shift,
                            double scale = 1.0);
// Curve plus a small Fourier displacement field (an ambient perturbation).
CurvePtr perturb_curve(CurvePtr c, const std::vector<std::array<double, 6>>& coeffs,
                       double amplitude);

struct FrameJet {
    Vec3 u;   // unit framing vector, orthogonal to the tangent
    Vec3 du;  // derivative with respect to s
};

class Framing {
public:
    virtual ~Framing() = default;
    virtual FrameJet eval(double s) const = 0;
};
using FramingPtr = std::shared_ptr<const Framing>;

// Principal-normal framing with a smooth blend to a fixed transverse reference
// direction where curvature degenerates.
FramingPtr default_framing(CurvePtr c);
// Framing rotated around the tangent by k full turns per circuit.
FramingPtr twist_framing(CurvePtr c, FramingPtr base, int k);
FramingPtr mirror_framing(FramingPtr f);   // negated field, for mirrored curves
FramingPtr reverse_framing(FramingPtr f);  // s -> 1 - s
FramingPtr reparam_framing(FramingPtr f, double shift, double amp = 0.0, int freq = 1);
FramingPtr rotate_framing(FramingPtr f, const std::array<double, 9>& rot);

// Sampled geometric summary used for integration bounds and validity checks.
struct CurveStats {
    Vec3 centroid;
    double diameter = 0.0;
    double speed_min = 0.0, speed_max = 0.0;
    double injectivity_margin = 0.0;  // min pairwise distance outside a parameter window
};
CurveStats curve_stats(const Curve& c, int samples = 4096);
// Throws std::invalid_argument when the sampled embedding degenerates.
void validate_embedding(const Curve& c, int samples = 4096);

// ---------------------------------------------------------------------------
// Singular knots: a family of 2^j embeddings agreeing outside j disjoint crossing
// regions. Each region holds one straight strand that is resolved within a fixed
// plane; the framing is the plane normal there, making the total twist independent
// of the resolution signs by construction.
// ---------------------------------------------------------------------------
class SingularFamily {
public:
    virtual ~SingularFamily() = default;
    virtual int crossings() const = 0;
    virtual CurvePtr curve(const std::vector<int>& eps) const = 0;
    virtual FramingPtr framing(const std::vector<int>& eps) const = 0;
    // Parameter pair (moving strand, static strand) of each crossing.
    virtual std::vector<std::pair<double, double>> crossing_params() const = 0;
    // Sign of crossing i in the all-(+1) resolution.
    virtual std::vector<int> handedness() const = 0;
    // Parameter intervals (one pair per crossing) outside of which all resolutions
    // coincide pointwise.
    virtual std::vector<std::array<double, 4>> region_intervals() const = 0;

    WilsonGraph chord_diagram() const;
};
using SingularFamilyPtr = std::shared_ptr<const SingularFamily>;

// j = 1: one crossing on a figure-eight-like base. j = 2: a clasp with two
// parameter-interleaved crossings.
SingularFamilyPtr make_singular_preset(int j);

}  // namespace knotcs
