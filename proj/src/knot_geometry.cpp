#include "knotcs/knot_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace knotcs {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double wrap01(double s) {
    double w = s - std::floor(s);
    return (w >= 1.0) ? 0.0 : w;  // guard against floor rounding at exact integers
}

// Quintic smoothstep: C^2 ramp with flat value and first/second derivative at both ends.
double smoothstep5(double x) {
    if (x <= 0) return 0;
    if (x >= 1) return 1;
    return x * x * x * (10.0 + x * (-15.0 + 6.0 * x));
}
double smoothstep5_d(double x) {
    if (x <= 0 || x >= 1) return 0;
    return 30.0 * x * x * (1.0 + x * (-2.0 + x));
}

// ---------------------------------------------------------------------------
// Fourier curves
// ---------------------------------------------------------------------------

class FourierCurve : public Curve {
public:
    explicit FourierCurve(std::vector<std::array<double, 6>> coeffs) : coeffs_(std::move(coeffs)) {
        if (coeffs_.empty()) throw std::invalid_argument("fourier curve needs coefficients");
    }

    CurveJet eval(double s) const override {
        CurveJet j{};
        for (std::size_t k = 0; k < coeffs_.size(); ++k) {
            const auto& c = coeffs_[k];
            double w = kTwoPi * static_cast<double>(k);
            double cs = std::cos(w * s), sn = std::sin(w * s);
            // per axis: a cos + b sin, with derivative weights w, -w^2, -w^3 cycling
            for (int axis = 0; axis < 3; ++axis) {
                double a = c[2 * axis], b = c[2 * axis + 1];
                double v0 = a * cs + b * sn;
                double v1 = w * (-a * sn + b * cs);
                double v2 = -w * w * v0;
                double v3 = -w * w * v1;
                add_axis(j.p, axis, v0);
                add_axis(j.d1, axis, v1);
                add_axis(j.d2, axis, v2);
                add_axis(j.d3, axis, v3);
            }
        }
        return j;
    }

private:
    static void add_axis(Vec3& v, int axis, double val) {
        if (axis == 0) v.x += val;
        else if (axis == 1) v.y += val;
        else v.z += val;
    }
    std::vector<std::array<double, 6>> coeffs_;
};

// ---------------------------------------------------------------------------
// Piecewise curves: straight cores (optionally with a transverse bump) joined by
// quintic Hermite turns. C^2 at junctions by construction.
// ---------------------------------------------------------------------------

// C^3 bump profile on [-1, 1]: (1 - x^2)^4, all derivatives through the third
// vanish at the support boundary.
void bump_jet(double x, double& b0, double& b1, double& b2, double& b3) {
    if (std::fabs(x) >= 1.0) {
        b0 = b1 = b2 = b3 = 0;
        return;
    }
    double q = 1.0 - x * x;
    b0 = q * q * q * q;
    b1 = -8.0 * x * q * q * q;
    b2 = -8.0 * q * q * q + 48.0 * x * x * q * q;
    b3 = 144.0 * x * q * q - 192.0 * x * x * x * q;
}

struct PwSegment {
    double s0 = 0, dur = 0;
    bool is_core = false;
    // hermite: p(u) = sum c[i] u^i
    std::array<Vec3, 6> c{};
    // core: p(u) = P + D u + z_dir * amp * bump((u - 0.5) / ub)
    Vec3 P{}, D{};
    double bump_amp = 0, bump_ub = 0;
};

class PiecewiseCurve : public Curve {
public:
    explicit PiecewiseCurve(std::vector<PwSegment> segs) : segs_(std::move(segs)) {}

    CurveJet eval(double s) const override {
        double w = wrap01(s);
        std::size_t lo = 0, hi = segs_.size() - 1;
        while (lo < hi) {
            std::size_t mid = (lo + hi + 1) / 2;
            if (segs_[mid].s0 <= w) lo = mid; else hi = mid - 1;
        }
        const PwSegment& g = segs_[lo];
        double u = (w - g.s0) / g.dur;
        CurveJet j{};
        if (g.is_core) {
            j.p = g.P + g.D * u;
            j.d1 = g.D;
            if (g.bump_amp != 0) {
                double b0, b1, b2, b3;
                bump_jet((u - 0.5) / g.bump_ub, b0, b1, b2, b3);
                double iw = 1.0 / g.bump_ub;
                j.p.z += g.bump_amp * b0;
                j.d1.z += g.bump_amp * b1 * iw;
                j.d2.z += g.bump_amp * b2 * iw * iw;
                j.d3.z += g.bump_amp * b3 * iw * iw * iw;
            }
        } else {
            for (int i = 5; i >= 0; --i) j.p = j.p * u + g.c[i];
            for (int i = 5; i >= 1; --i) j.d1 = j.d1 * u + g.c[i] * double(i);
            for (int i = 5; i >= 2; --i) j.d2 = j.d2 * u + g.c[i] * double(i * (i - 1));
            for (int i = 5; i >= 3; --i) j.d3 = j.d3 * u + g.c[i] * double(i * (i - 1) * (i - 2));
        }
        double id = 1.0 / g.dur;
        j.d1 = j.d1 * id;
        j.d2 = j.d2 * (id * id);
        j.d3 = j.d3 * (id * id * id);
        return j;
    }

    const std::vector<PwSegment>& segments() const { return segs_; }

private:
    std::vector<PwSegment> segs_;
};

// Assembles a closed piecewise curve. Segment durations are proportional to the
// supplied lengths, so the parameter speed at every junction equals the total
// length and the assembled curve is C^2 (cores end with zero second derivative,
// Hermite pieces are built with zero end acceleration).
struct PwBuilder {
    struct Raw {
        bool core;
        Vec3 P0, P1, T0, T1;
        double len;
        double bump_amp = 0, bump_ub = 0;
    };
    std::vector<Raw> raw;

    void core(const Vec3& P, const Vec3& Q, double bump_amp = 0, double bump_ub = 0) {
        Raw r;
        r.core = true;
        r.P0 = P;
        r.P1 = Q;
        r.len = norm(Q - P);
        r.bump_amp = bump_amp;
        r.bump_ub = bump_ub;
        raw.push_back(r);
    }
    // T0/T1 are unit travel directions at the endpoints; est_len balances the
    // parameter speed against the straight cores.
    void turn(const Vec3& P0, const Vec3& T0, const Vec3& P1, const Vec3& T1, double est_len) {
        Raw r;
        r.core = false;
        r.P0 = P0;
        r.P1 = P1;
        r.T0 = T0;
        r.T1 = T1;
        r.len = est_len;
        raw.push_back(r);
    }

    std::shared_ptr<PiecewiseCurve> build() const {
        double total = 0;
        for (const auto& r : raw) total += r.len;
        std::vector<PwSegment> segs;
        double s = 0;
        for (const auto& r : raw) {
            PwSegment g;
            g.s0 = s;
            g.dur = r.len / total;
            if (r.core) {
                g.is_core = true;
                g.P = r.P0;
                g.D = r.P1 - r.P0;
                g.bump_amp = r.bump_amp;
                g.bump_ub = r.bump_ub;
            } else {
                Vec3 dP = r.P1 - r.P0;
                Vec3 V0 = r.T0 * r.len, V1 = r.T1 * r.len;  // local-u velocities
                g.c[0] = r.P0;
                g.c[1] = V0;
                g.c[2] = Vec3{};
                g.c[3] = dP * 10.0 - V0 * 6.0 - V1 * 4.0;
                g.c[4] = dP * -15.0 + V0 * 8.0 + V1 * 7.0;
                g.c[5] = dP * 6.0 - V0 * 3.0 - V1 * 3.0;
            }
            segs.push_back(g);
            s += g.dur;
        }
        segs.back().dur += 1.0 - s;  // absorb rounding so the intervals tile [0,1]
        return std::make_shared<PiecewiseCurve>(std::move(segs));
    }
};

// ---------------------------------------------------------------------------
// Curve transforms
// ---------------------------------------------------------------------------

class MirrorCurve : public Curve {
public:
    explicit MirrorCurve(CurvePtr c) : c_(std::move(c)) {}
    CurveJet eval(double s) const override {
        CurveJet j = c_->eval(s);
        return {-j.p, -j.d1, -j.d2, -j.d3};
    }

private:
    CurvePtr c_;
};

class ReverseCurve : public Curve {
public:
    explicit ReverseCurve(CurvePtr c) : c_(std::move(c)) {}
    CurveJet eval(double s) const override {
        CurveJet j = c_->eval(1.0 - s);
        return {j.p, -j.d1, j.d2, -j.d3};
    }

private:
    CurvePtr c_;
};

struct ReparamMap {
    double shift = 0, amp = 0;
    int freq = 1;
    void eval(double s, double& v, double& v1, double& v2, double& v3) const {
        double w = kTwoPi * freq;
        v = s + shift + amp * std::sin(w * s) / w;
        v1 = 1.0 + amp * std::cos(w * s);
        v2 = -amp * w * std::sin(w * s);
        v3 = -amp * w * w * std::cos(w * s);
    }
};

class ReparamCurve : public Curve {
public:
    ReparamCurve(CurvePtr c, ReparamMap m) : c_(std::move(c)), m_(m) {}
    CurveJet eval(double s) const override {
        double v, v1, v2, v3;
        m_.eval(s, v, v1, v2, v3);
        CurveJet j = c_->eval(wrap01(v));
        CurveJet out;
        out.p = j.p;
        out.d1 = j.d1 * v1;
        out.d2 = j.d2 * (v1 * v1) + j.d1 * v2;
        out.d3 = j.d3 * (v1 * v1 * v1) + j.d2 * (3.0 * v1 * v2) + j.d1 * v3;
        return out;
    }
    const ReparamMap& map() const { return m_; }

private:
    CurvePtr c_;
    ReparamMap m_;
};

Vec3 apply_rot(const std::array<double, 9>& r, const Vec3& v) {
    return {r[0] * v.x + r[1] * v.y + r[2] * v.z,
            r[3] * v.x + r[4] * v.y + r[5] * v.z,
            r[6] * v.x + r[7] * v.y + r[8] * v.z};
}

class RigidCurve : public Curve {
public:
    RigidCurve(CurvePtr c, const std::array<double, 9>& rot, const Vec3& shift, double scale)
        : c_(std::move(c)), rot_(rot), shift_(shift), scale_(scale) {}
    CurveJet eval(double s) const override {
        CurveJet j = c_->eval(s);
        return {apply_rot(rot_, j.p) * scale_ + shift_, apply_rot(rot_, j.d1) * scale_,
                apply_rot(rot_, j.d2) * scale_, apply_rot(rot_, j.d3) * scale_};
    }

private:
    CurvePtr c_;
    std::array<double, 9> rot_;
    Vec3 shift_;
    double scale_;
};

class SumCurve : public Curve {
public:
    SumCurve(CurvePtr a, CurvePtr b, double wb) : a_(std::move(a)), b_(std::move(b)), wb_(wb) {}
    CurveJet eval(double s) const override {
        CurveJet ja = a_->eval(s), jb = b_->eval(s);
        return {ja.p + jb.p * wb_, ja.d1 + jb.d1 * wb_, ja.d2 + jb.d2 * wb_,
                ja.d3 + jb.d3 * wb_};
    }

private:
    CurvePtr a_, b_;
    double wb_;
};

// ---------------------------------------------------------------------------
// Framings
// ---------------------------------------------------------------------------

// Unit framing from a reference field r(s): project out the tangent and
// normalize, propagating the derivative.
FrameJet project_frame(const CurveJet& j, const Vec3& r, const Vec3& dr) {
    double n1 = norm(j.d1);
    Vec3 t = j.d1 / n1;
    Vec3 tp = (j.d2 - t * dot(t, j.d2)) / n1;
    Vec3 w = r - t * dot(r, t);
    Vec3 dw = dr - tp * dot(r, t) - t * (dot(dr, t) + dot(r, tp));
    double nw = norm(w);
    if (!(nw > 1e-12)) throw std::invalid_argument("framing reference parallel to tangent");
    Vec3 u = w / nw;
    Vec3 du = dw / nw - w * (dot(w, dw) / (nw * nw * nw));
    return {u, du};
}

class DefaultFraming : public Framing {
public:
    explicit DefaultFraming(CurvePtr c) : c_(std::move(c)) {
        // Weight of the fixed transverse reference: small against the typical
        // normal acceleration so the frame tracks curvature where it is healthy
        // and falls back to the reference where it degenerates.
        double m2 = 0;
        for (int i = 0; i < 256; ++i) {
            CurveJet j = c_->eval((i + 0.5) / 256.0);
            Vec3 t = normalized(j.d1);
            m2 = std::max(m2, norm(j.d2 - t * dot(t, j.d2)));
        }
        mu_ = 0.02 * m2 + 1e-6;
    }
    FrameJet eval(double s) const override {
        CurveJet j = c_->eval(s);
        Vec3 ref{0.37, 0.21, 1.0};
        return project_frame(j, j.d2 + ref * mu_, j.d3);
    }

private:
    CurvePtr c_;
    double mu_ = 1.0;
};

class TwistFraming : public Framing {
public:
    TwistFraming(CurvePtr c, FramingPtr base, int k) : c_(std::move(c)), base_(std::move(base)), k_(k) {}
    FrameJet eval(double s) const override {
        CurveJet j = c_->eval(s);
        FrameJet b = base_->eval(s);
        double n1 = norm(j.d1);
        Vec3 t = j.d1 / n1;
        Vec3 tp = (j.d2 - t * dot(t, j.d2)) / n1;
        double phi = kTwoPi * k_ * s, dphi = kTwoPi * k_;
        double cs = std::cos(phi), sn = std::sin(phi);
        Vec3 n2 = cross(t, b.u);
        Vec3 dn2 = cross(tp, b.u) + cross(t, b.du);
        FrameJet out;
        out.u = b.u * cs + n2 * sn;
        out.du = (n2 * cs - b.u * sn) * dphi + b.du * cs + dn2 * sn;
        return out;
    }

private:
    CurvePtr c_;
    FramingPtr base_;
    int k_;
};

class MirrorFraming : public Framing {
public:
    explicit MirrorFraming(FramingPtr f) : f_(std::move(f)) {}
    FrameJet eval(double s) const override {
        FrameJet b = f_->eval(s);
        return {-b.u, -b.du};
    }

private:
    FramingPtr f_;
};

class ReverseFraming : public Framing {
public:
    explicit ReverseFraming(FramingPtr f) : f_(std::move(f)) {}
    FrameJet eval(double s) const override {
        FrameJet b = f_->eval(1.0 - s);
        return {b.u, -b.du};
    }

private:
    FramingPtr f_;
};

class ReparamFraming : public Framing {
public:
    ReparamFraming(FramingPtr f, ReparamMap m) : f_(std::move(f)), m_(m) {}
    FrameJet eval(double s) const override {
        double v, v1, v2, v3;
        m_.eval(s, v, v1, v2, v3);
        FrameJet b = f_->eval(wrap01(v));
        return {b.u, b.du * v1};
    }

private:
    FramingPtr f_;
    ReparamMap m_;
};

class RotateFraming : public Framing {
public:
    RotateFraming(FramingPtr f, const std::array<double, 9>& rot) : f_(std::move(f)), rot_(rot) {}
    FrameJet eval(double s) const override {
        FrameJet b = f_->eval(s);
        return {apply_rot(rot_, b.u), apply_rot(rot_, b.du)};
    }

private:
    FramingPtr f_;
    std::array<double, 9> rot_;
};

// Framing for the singular presets. The reference field is a fixed axis
// everywhere except inside designated core intervals, where it rotates (about
// the straight core direction) to the crossing-plane normal, holds it across
// the whole bump support, and rotates back. On the support the projection is
// the identity for every resolution, so the twist density there is exactly
// zero and the total twist does not depend on the resolution signs.
class ZoneFraming : public Framing {
public:
    struct Zone {
        double s0, dur;
        Vec3 axis;
    };
    ZoneFraming(CurvePtr c, Vec3 base, std::vector<Zone> zones)
        : c_(std::move(c)), base_(base), zones_(std::move(zones)) {}

    FrameJet eval(double s) const override {
        double w = wrap01(s);
        Vec3 r = base_, dr{};
        for (const auto& z : zones_) {
            if (w < z.s0 || w > z.s0 + z.dur) continue;
            double v = (w - z.s0) / z.dur;
            // C^2 profile: ramp up over [0.04, 0.22], hold, ramp down over [0.78, 0.96];
            // bump support lies inside the hold.
            double a = (v - 0.04) / 0.18, b = (v - 0.78) / 0.18;
            if (a >= 1.0 && b <= 0.0) {
                // On the hold the reference equals the axis exactly (no rounding
                // residue from cos(pi/2)), making the twist there vanish identically.
                r = z.axis;
                dr = Vec3{};
            } else {
                double psi = 1.5707963267948966 * (smoothstep5(a) - smoothstep5(b));
                double dpsi =
                    1.5707963267948966 * (smoothstep5_d(a) - smoothstep5_d(b)) / (0.18 * z.dur);
                double cs = std::cos(psi), sn = std::sin(psi);
                r = z.axis * sn + base_ * cs;
                dr = (z.axis * cs - base_ * sn) * dpsi;
            }
            break;
        }
        CurveJet j = c_->eval(w);
        return project_frame(j, r, dr);
    }

private:
    CurvePtr c_;
    Vec3 base_;
    std::vector<Zone> zones_;
};

// ---------------------------------------------------------------------------
// Singular presets
// ---------------------------------------------------------------------------

// Common layout constants: straight crossing cores of length 2 carry a bump of
// height 0.45 supported on the middle half of the core.
constexpr double kBumpHeight = 0.45;
constexpr double kBumpHalf = 0.25;  // as a fraction of the core parameter

struct CoreSpan {
    double s0, dur;
};

// One-crossing family: a planar figure eight. The moving strand runs along the
// x axis, the static strand along the y axis; the crossing resolves by a
// transverse bump in z on the moving strand only.
class FigureEightFamily : public SingularFamily {
public:
    int crossings() const override { return 1; }

    CurvePtr curve(const std::vector<int>& eps) const override {
        check_eps(eps, 1);
        PwBuilder b;
        double q = 1.45;  // estimated quarter-turn length
        b.core({-1, 0, 0}, {1, 0, 0}, eps[0] * kBumpHeight, kBumpHalf);
        b.turn({1, 0, 0}, {1, 0, 0}, {1.9, -0.9, 0}, {0, -1, 0}, q);
        b.turn({1.9, -0.9, 0}, {0, -1, 0}, {1.0, -1.8, 0}, {-1, 0, 0}, q);
        b.turn({1.0, -1.8, 0}, {-1, 0, 0}, {0, -1, 0}, {0, 1, 0}, q);
        b.core({0, -1, 0}, {0, 1, 0});
        b.turn({0, 1, 0}, {0, 1, 0}, {-0.9, 1.9, 0}, {-1, 0, 0}, q);
        b.turn({-0.9, 1.9, 0}, {-1, 0, 0}, {-1.8, 1.0, 0}, {0, -1, 0}, q);
        b.turn({-1.8, 1.0, 0}, {0, -1, 0}, {-1, 0, 0}, {1, 0, 0}, q);
        return b.build();
    }

    FramingPtr framing(const std::vector<int>& eps) const override {
        check_eps(eps, 1);
        auto c = curve(eps);
        CoreSpan a = core_span(c, 0);
        return std::make_shared<ZoneFraming>(
            c, Vec3{0, 0, 1}, std::vector<ZoneFraming::Zone>{{a.s0, a.dur, {0, 1, 0}}});
    }

    std::vector<std::pair<double, double>> crossing_params() const override {
        auto c = curve({+1});
        CoreSpan a = core_span(c, 0), s = core_span(c, 4);
        return {{a.s0 + 0.5 * a.dur, s.s0 + 0.5 * s.dur}};
    }

    std::vector<int> handedness() const override { return {+1}; }

    std::vector<std::array<double, 4>> region_intervals() const override {
        auto c = curve({+1});
        CoreSpan a = core_span(c, 0), s = core_span(c, 4);
        return {{a.s0 + 0.25 * a.dur, a.s0 + 0.75 * a.dur,
                 s.s0 + 0.4 * s.dur, s.s0 + 0.6 * s.dur}};
    }

private:
    static void check_eps(const std::vector<int>& eps, std::size_t n) {
        if (eps.size() != n) throw std::invalid_argument("resolution vector has wrong length");
        for (int e : eps)
            if (e != 1 && e != -1) throw std::invalid_argument("resolution signs must be +-1");
    }
    static CoreSpan core_span(const CurvePtr& c, int idx) {
        const auto& segs = static_cast<const PiecewiseCurve&>(*c).segments();
        return {segs[idx].s0, segs[idx].dur};
    }
    friend class ClaspFamily;
};

// Two-crossing clasp: a finger dips across a straight static strand twice with
// parameter-interleaved crossings, giving the crossed chord diagram. The two
// top connectors are separated in height, so the only resolution-dependent data
// are the two bumps.
class ClaspFamily : public SingularFamily {
public:
    int crossings() const override { return 2; }

    CurvePtr curve(const std::vector<int>& eps) const override {
        FigureEightFamily::check_eps(eps, 2);
        PwBuilder b;
        // finger, crossing 0 (index 0)
        b.core({-1, 1, 0}, {-1, -1, 0}, eps[0] * kBumpHeight, kBumpHalf);
        b.turn({-1, -1, 0}, {0, -1, 0}, {-0.3, -1.9, 0}, {1, 0, 0}, 1.41);
        b.core({-0.3, -1.9, 0}, {0.3, -1.9, 0});
        b.turn({0.3, -1.9, 0}, {1, 0, 0}, {1, -1, 0}, {0, 1, 0}, 1.41);
        // finger, crossing 1 (index 4)
        b.core({1, -1, 0}, {1, 1, 0}, eps[1] * kBumpHeight, kBumpHalf);
        // flyover back to the static strand head
        b.turn({1, 1, 0}, {0, 1, 0}, {0.2, 2.6, 1.3}, {-1, 0, 0}, 2.2);
        b.core({0.2, 2.6, 1.3}, {-3.2, 2.6, 1.3});
        b.turn({-3.2, 2.6, 1.3}, {-1, 0, 0}, {-4.0, 1.3, 0.65}, {0, -1, 0}, 1.7);
        b.turn({-4.0, 1.3, 0.65}, {0, -1, 0}, {-2.5, 0, 0}, {1, 0, 0}, 2.2);
        // static strand (index 9), crossings at x = -1 and x = +1
        b.core({-2.5, 0, 0}, {2.5, 0, 0});
        // return at z = 0 under the flyover
        b.turn({2.5, 0, 0}, {1, 0, 0}, {3.3, 0.9, 0}, {0, 1, 0}, 1.41);
        b.turn({3.3, 0.9, 0}, {0, 1, 0}, {2.4, 1.7, 0}, {-1, 0, 0}, 1.41);
        b.core({2.4, 1.7, 0}, {-0.2, 1.7, 0});
        b.turn({-0.2, 1.7, 0}, {-1, 0, 0}, {-1, 1, 0}, {0, -1, 0}, 1.3);
        return b.build();
    }

    FramingPtr framing(const std::vector<int>& eps) const override {
        auto c = curve(eps);
        CoreSpan f0 = span(c, 0), f1 = span(c, 4);
        return std::make_shared<ZoneFraming>(
            c, Vec3{0, 0, 1},
            std::vector<ZoneFraming::Zone>{{f0.s0, f0.dur, {1, 0, 0}},
                                           {f1.s0, f1.dur, {1, 0, 0}}});
    }

    std::vector<std::pair<double, double>> crossing_params() const override {
        auto c = curve({+1, +1});
        CoreSpan f0 = span(c, 0), f1 = span(c, 4), st = span(c, 9);
        // static strand runs x = -2.5 .. 2.5; crossings at x = -+1
        return {{f0.s0 + 0.5 * f0.dur, st.s0 + 0.3 * st.dur},
                {f1.s0 + 0.5 * f1.dur, st.s0 + 0.7 * st.dur}};
    }

    std::vector<int> handedness() const override { return {+1, -1}; }

    std::vector<std::array<double, 4>> region_intervals() const override {
        auto c = curve({+1, +1});
        CoreSpan f0 = span(c, 0), f1 = span(c, 4), st = span(c, 9);
        return {{f0.s0 + 0.25 * f0.dur, f0.s0 + 0.75 * f0.dur,
                 st.s0 + 0.25 * st.dur, st.s0 + 0.35 * st.dur},
                {f1.s0 + 0.25 * f1.dur, f1.s0 + 0.75 * f1.dur,
                 st.s0 + 0.65 * st.dur, st.s0 + 0.75 * st.dur}};
    }

private:
    static CoreSpan span(const CurvePtr& c, int idx) {
        const auto& segs = static_cast<const PiecewiseCurve&>(*c).segments();
        return {segs[idx].s0, segs[idx].dur};
    }
};

}  // namespace

// ---------------------------------------------------------------------------
// Factories
// ---------------------------------------------------------------------------

CurvePtr make_circle(double radius) {
    return std::make_shared<FourierCurve>(std::vector<std::array<double, 6>>{
        {0, 0, 0, 0, 0, 0}, {radius, 0, 0, radius, 0, 0}});
}

CurvePtr make_torus_knot(int p, int q, double R, double r) {
    if (p <= 0 || q <= 0) throw std::invalid_argument("torus knot indices must be positive");
    int top = std::max(p + q, std::max(p, q));
    std::vector<std::array<double, 6>> c(top + 1, std::array<double, 6>{});
    c[p][0] += R;            // x: R cos(p)
    c[p + q][0] += 0.5 * r;  // x: (r/2) cos(p+q)
    c[std::abs(p - q)][0] += 0.5 * r;
    c[p][3] += R;            // y: R sin(p)
    c[p + q][3] += 0.5 * r;
    if (p > q) c[p - q][3] += 0.5 * r;
    else if (q > p) c[q - p][3] -= 0.5 * r;
    c[q][5] += r;            // z: r sin(q)
    return std::make_shared<FourierCurve>(std::move(c));
}

CurvePtr make_fourier(const std::vector<std::array<double, 6>>& coeffs) {
    return std::make_shared<FourierCurve>(coeffs);
}

CurvePtr make_polygon(const std::vector<Vec3>& points, double smoothing, int harmonics) {
    if (points.size() < 3) throw std::invalid_argument("polygon needs at least three points");
    if (harmonics < 1) throw std::invalid_argument("polygon needs at least one harmonic");
    std::size_t m = points.size();
    std::vector<double> cum(m + 1, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        cum[i + 1] = cum[i] + norm(points[(i + 1) % m] - points[i]);
    double total = cum[m];
    if (!(total > 0)) throw std::invalid_argument("degenerate polygon");

    const int M = std::max(1024, 16 * harmonics);
    std::vector<Vec3> samp(M);
    std::size_t edge = 0;
    for (int i = 0; i < M; ++i) {
        double target = total * i / M;
        while (edge + 1 < m + 1 && cum[edge + 1] < target) ++edge;
        double seg = cum[edge + 1] - cum[edge];
        double t = seg > 0 ? (target - cum[edge]) / seg : 0.0;
        samp[i] = points[edge % m] + (points[(edge + 1) % m] - points[edge % m]) * t;
    }

    std::vector<std::array<double, 6>> coeffs(harmonics + 1, std::array<double, 6>{});
    for (int i = 0; i < M; ++i) {
        coeffs[0][0] += samp[i].x / M;
        coeffs[0][2] += samp[i].y / M;
        coeffs[0][4] += samp[i].z / M;
    }
    for (int k = 1; k <= harmonics; ++k) {
        // periodic Gaussian mollifier acts as a factor exp(-2 (pi k sigma)^2)
        double g = std::exp(-2.0 * std::pow(3.14159265358979324 * k * smoothing, 2));
        double ca = 0, sa = 0, cb = 0, sb = 0, cc = 0, sc = 0;
        for (int i = 0; i < M; ++i) {
            double ang = kTwoPi * k * i / M;
            double cs = std::cos(ang), sn = std::sin(ang);
            ca += samp[i].x * cs;
            sa += samp[i].x * sn;
            cb += samp[i].y * cs;
            sb += samp[i].y * sn;
            cc += samp[i].z * cs;
            sc += samp[i].z * sn;
        }
        coeffs[k] = {2 * g * ca / M, 2 * g * sa / M, 2 * g * cb / M,
                     2 * g * sb / M, 2 * g * cc / M, 2 * g * sc / M};
    }
    return std::make_shared<FourierCurve>(std::move(coeffs));
}

CurvePtr mirror_curve(CurvePtr c) { return std::make_shared<MirrorCurve>(std::move(c)); }
CurvePtr reverse_curve(CurvePtr c) { return std::make_shared<ReverseCurve>(std::move(c)); }

CurvePtr reparam_curve(CurvePtr c, double shift, double amp, int freq) {
    if (std::fabs(amp) >= 1.0) throw std::invalid_argument("reparametrization must keep speed positive");
    if (freq < 1) throw std::invalid_argument("reparametrization frequency must be positive");
    return std::make_shared<ReparamCurve>(std::move(c), ReparamMap{shift, amp, freq});
}

CurvePtr rigid_motion_curve(CurvePtr c, const std::array<double, 9>& rot, const Vec3& shift,
                            double scale) {
    return std::make_shared<RigidCurve>(std::move(c), rot, shift, scale);
}

CurvePtr perturb_curve(CurvePtr c, const std::vector<std::array<double, 6>>& coeffs,
                       double amplitude) {
    return std::make_shared<SumCurve>(std::move(c), std::make_shared<FourierCurve>(coeffs),
                                      amplitude);
}

FramingPtr default_framing(CurvePtr c) { return std::make_shared<DefaultFraming>(std::move(c)); }

FramingPtr twist_framing(CurvePtr c, FramingPtr base, int k) {
    return std::make_shared<TwistFraming>(std::move(c), std::move(base), k);
}

FramingPtr mirror_framing(FramingPtr f) { return std::make_shared<MirrorFraming>(std::move(f)); }
FramingPtr reverse_framing(FramingPtr f) { return std::make_shared<ReverseFraming>(std::move(f)); }

FramingPtr reparam_framing(FramingPtr f, double shift, double amp, int freq) {
    if (std::fabs(amp) >= 1.0) throw std::invalid_argument("reparametrization must keep speed positive");
    if (freq < 1) throw std::invalid_argument("reparametrization frequency must be positive");
    return std::make_shared<ReparamFraming>(std::move(f), ReparamMap{shift, amp, freq});
}

FramingPtr rotate_framing(FramingPtr f, const std::array<double, 9>& rot) {
    return std::make_shared<RotateFraming>(std::move(f), rot);
}

// ---------------------------------------------------------------------------
// Diagnostics
// ---------------------------------------------------------------------------

CurveStats curve_stats(const Curve& c, int samples) {
    if (samples < 16) throw std::invalid_argument("curve_stats needs at least 16 samples");
    std::vector<Vec3> p(samples);
    CurveStats st;
    st.speed_min = std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) {
        CurveJet j = c.eval((i + 0.5) / samples);
        p[i] = j.p;
        double v = norm(j.d1);
        st.speed_min = std::min(st.speed_min, v);
        st.speed_max = std::max(st.speed_max, v);
        st.centroid += j.p / samples;
    }
    st.injectivity_margin = std::numeric_limits<double>::infinity();
    const int window = std::max(1, static_cast<int>(0.02 * samples));
    for (int i = 0; i < samples; ++i) {
        for (int j = i + 1; j < samples; ++j) {
            double d2 = norm2(p[i] - p[j]);
            st.diameter = std::max(st.diameter, d2);
            int gap = std::min(j - i, samples - (j - i));
            if (gap > window) st.injectivity_margin = std::min(st.injectivity_margin, d2);
        }
    }
    st.diameter = std::sqrt(st.diameter);
    st.injectivity_margin = std::sqrt(st.injectivity_margin);
    return st;
}

void validate_embedding(const Curve& c, int samples) {
    CurveStats st = curve_stats(c, samples);
    if (!std::isfinite(st.diameter) || !std::isfinite(st.speed_max))
        throw std::invalid_argument("curve evaluates to non-finite values");
    if (!(st.speed_min > 1e-9 * std::max(1.0, st.speed_max)))
        throw std::invalid_argument("curve speed degenerates");
    if (!(st.injectivity_margin > 1e-4 * st.diameter))
        throw std::invalid_argument("curve nearly self-intersects");
}

// ---------------------------------------------------------------------------
// Singular families
// ---------------------------------------------------------------------------

WilsonGraph SingularFamily::chord_diagram() const {
    auto params = crossing_params();
    std::vector<std::pair<double, int>> marks;
    for (std::size_t i = 0; i < params.size(); ++i) {
        marks.push_back({params[i].first, static_cast<int>(i)});
        marks.push_back({params[i].second, static_cast<int>(i)});
    }
    std::sort(marks.begin(), marks.end());
    std::vector<std::pair<int, int>> pairs(params.size(), {-1, -1});
    for (std::size_t pos = 0; pos < marks.size(); ++pos) {
        auto& pr = pairs[marks[pos].second];
        (pr.first < 0 ? pr.first : pr.second) = static_cast<int>(pos);
    }
    return WilsonGraph::chord_diagram(pairs);
}

SingularFamilyPtr make_singular_preset(int j) {
    if (j == 1) return std::make_shared<FigureEightFamily>();
    if (j == 2) return std::make_shared<ClaspFamily>();
    throw std::invalid_argument("singular preset index must be 1 or 2");
}

}  // namespace knotcs
