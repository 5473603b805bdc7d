#include "knotcs/integrator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>

#include "mc_detail.hpp"

namespace knotcs {
namespace {

using detail::Rng;
using detail::chunk_seed;
using detail::dart_permutation_sign;
using detail::det_inplace;
using detail::kFourPi;
using detail::kPi;
using detail::resolve_threads;

struct GraphCtx {
    int n = 0, t = 0, E = 0, N = 0;
    std::vector<std::pair<int, int>> chords;
    double static_sign = 1.0;   // graph sign times dart permutation sign
    double form_norm = 1.0;     // (1/4pi)^E
    double region_density = 1;  // (n-1)!: density of the cyclic-order sampler

    explicit GraphCtx(const WilsonGraph& g) {
        if (!g.is_trivalent())
            throw std::invalid_argument("configuration-space integration needs a trivalent graph");
        n = g.n_ext();
        t = g.n_int();
        chords = g.chords();
        E = static_cast<int>(chords.size());
        N = n + 3 * t;
        static_sign = g.sign() * dart_permutation_sign(g);
        form_norm = std::pow(1.0 / kFourPi, E);
        for (int k = 2; k < n; ++k) region_density *= k;
    }
};

// Integrand: the product over chords of the pulled-back unit-sphere area forms,
// evaluated on the coordinate frame (ds_0..ds_{n-1}, dx_0..dx_{t-1}) as one
// determinant with two rows per chord.
double eval_integrand(const GraphCtx& gc, const Curve& curve, const double* sv, const Vec3* xv,
                      std::vector<CurveJet>& jets, std::vector<double>& m) {
    for (int i = 0; i < gc.n; ++i) jets[i] = curve.eval(sv[i]);
    const int N = gc.N;
    m.assign(static_cast<std::size_t>(N) * N, 0.0);
    for (int e = 0; e < gc.E; ++e) {
        int a = gc.chords[e].first, b = gc.chords[e].second;
        Vec3 pa = a < gc.n ? jets[a].p : xv[a - gc.n];
        Vec3 pb = b < gc.n ? jets[b].p : xv[b - gc.n];
        Vec3 gv = pb - pa;
        double r2 = norm2(gv);
        if (!(r2 > 1e-280)) return 0.0;
        double rinv = 1.0 / std::sqrt(r2);
        Vec3 u = gv * rinv, p, q;
        perp_frame(u, p, q);
        double* ra = &m[static_cast<std::size_t>(2 * e) * N];
        double* rb = ra + N;
        auto add_endpoint = [&](int v, double sgn) {
            if (v < gc.n) {
                ra[v] += sgn * dot(p, jets[v].d1) * rinv;
                rb[v] += sgn * dot(q, jets[v].d1) * rinv;
            } else {
                int c0 = gc.n + 3 * (v - gc.n);
                ra[c0] += sgn * p.x * rinv;
                ra[c0 + 1] += sgn * p.y * rinv;
                ra[c0 + 2] += sgn * p.z * rinv;
                rb[c0] += sgn * q.x * rinv;
                rb[c0 + 1] += sgn * q.y * rinv;
                rb[c0 + 2] += sgn * q.z * rinv;
            }
        };
        add_endpoint(a, -1.0);
        add_endpoint(b, +1.0);
    }
    return gc.static_sign * gc.form_norm * det_inplace(m, N);
}

// Proposal for the internal positions: a mixture of a uniform box, tube
// components around fixed curve points with a 1/r^2-weighted radial profile
// (which keeps the variance of the near-singular integrand finite), and a
// heavy-tailed component covering the far field. The density is exact.
struct Proposal {
    static constexpr int kCenters = 64;
    double w_box = 0.5, w_tube = 0.35, w_heavy = 0.15;
    Vec3 box_lo, box_hi, center;
    double box_density = 0;  // 1/volume
    std::array<Vec3, kCenters> centers{};
    double tube_w = 0.1;
    double heavy_R = 1.0, heavy_coef = 1.0;

    Proposal(const Curve& curve, const McOptions& opt) {
        CurveStats st = curve_stats(curve, 1024);
        double half = 0.5 * st.diameter * opt.box_pad + 1e-9;
        center = st.centroid;
        box_lo = center - Vec3{half, half, half};
        box_hi = center + Vec3{half, half, half};
        box_density = 1.0 / (8.0 * half * half * half);
        for (int k = 0; k < kCenters; ++k) centers[k] = curve.point((k + 0.5) / kCenters);
        tube_w = std::max(opt.tube_width * st.diameter, 1e-6);
        heavy_R = std::max(st.diameter, 1e-6);
        // 3d Student-t with 3 degrees of freedom
        heavy_coef = std::tgamma(3.0) /
                     (std::tgamma(1.5) * std::pow(3.0 * kPi, 1.5) * heavy_R * heavy_R * heavy_R);
        w_tube = std::clamp(opt.tube_fraction, 0.0, 0.8);
        w_heavy = 0.15;
        w_box = 1.0 - w_tube - w_heavy;
    }

    Vec3 sample(Rng& rng) const {
        double u = rng.uniform();
        if (u < w_box) {
            return {box_lo.x + rng.uniform() * (box_hi.x - box_lo.x),
                    box_lo.y + rng.uniform() * (box_hi.y - box_lo.y),
                    box_lo.z + rng.uniform() * (box_hi.z - box_lo.z)};
        }
        if (u < w_box + w_tube) {
            const Vec3& c = centers[rng.below(kCenters)];
            Vec3 dir = rng.normal3();
            double dn = norm(dir);
            if (dn < 1e-12) dir = {1, 0, 0}, dn = 1;
            double r = tube_w * std::fabs(rng.normal());
            return c + dir * (r / dn);
        }
        Vec3 gv = rng.normal3();
        double chi2 = 0;
        for (int i = 0; i < 3; ++i) {
            double z = rng.normal();
            chi2 += z * z;
        }
        chi2 = std::max(chi2, 1e-12);
        return center + gv * (heavy_R * std::sqrt(3.0 / chi2));
    }

    double density(const Vec3& x) const {
        double q = 0;
        if (x.x >= box_lo.x && x.x <= box_hi.x && x.y >= box_lo.y && x.y <= box_hi.y &&
            x.z >= box_lo.z && x.z <= box_hi.z)
            q += w_box * box_density;
        double tube = 0;
        double cr = std::sqrt(2.0 / kPi) / tube_w;
        for (const Vec3& c : centers) {
            double r2 = std::max(norm2(x - c), 1e-28);
            tube += cr * std::exp(-0.5 * r2 / (tube_w * tube_w)) / (kFourPi * r2);
        }
        q += w_tube * tube / kCenters;
        double z2 = norm2(x - center) / (heavy_R * heavy_R);
        q += w_heavy * heavy_coef / std::pow(1.0 + z2 / 3.0, 3.0);
        return q;
    }
};

struct ChunkAccum {
    std::vector<double> sum, sum2;  // per curve; last slot = weighted combination
};

McEstimate combine(const std::vector<ChunkAccum>& chunks, int slot, std::int64_t ns) {
    double s = 0, s2 = 0;
    for (const auto& c : chunks) {
        s += c.sum[slot];
        s2 += c.sum2[slot];
    }
    McEstimate e;
    e.samples = ns;
    e.value = s / static_cast<double>(ns);
    double var = (s2 - s * s / static_cast<double>(ns)) / std::max<double>(1.0, ns - 1);
    e.sigma = std::sqrt(std::max(var, 0.0) / static_cast<double>(ns));
    return e;
}

std::vector<McEstimate> run_mc(const WilsonGraph& g, const std::vector<CurvePtr>& curves,
                               const std::vector<double>& weights, const McOptions& opt,
                               bool weighted) {
    if (curves.empty()) throw std::invalid_argument("no curves given");
    if (weighted && weights.size() != curves.size())
        throw std::invalid_argument("weights do not match curves");
    const GraphCtx gc(g);
    const int ncurves = static_cast<int>(curves.size());
    const int nslots = ncurves + (weighted ? 1 : 0);

    if (g.null_integrand()) {
        std::vector<McEstimate> out(nslots);
        for (auto& e : out) e.samples = opt.samples;
        return out;
    }

    const int chunk = 1 << std::clamp(opt.chunk_log2, 4, 20);
    const std::int64_t nchunks = std::max<std::int64_t>(1, (opt.samples + chunk - 1) / chunk);
    const std::int64_t total = nchunks * chunk;
    const Proposal prop(*curves[0], opt);

    std::vector<ChunkAccum> acc(nchunks);
    std::atomic<std::int64_t> next{0};
    auto worker = [&]() {
        std::vector<CurveJet> jets(std::max(gc.n, 1));
        std::vector<double> m;
        std::vector<double> sorted(gc.n), sv(gc.n), fval(ncurves);
        std::vector<Vec3> xv(std::max(gc.t, 1));
        for (;;) {
            std::int64_t c = next.fetch_add(1);
            if (c >= nchunks) break;
            Rng rng(chunk_seed(opt.seed, c));
            ChunkAccum a;
            a.sum.assign(nslots, 0.0);
            a.sum2.assign(nslots, 0.0);
            for (int it = 0; it < chunk; ++it) {
                for (int i = 0; i < gc.n; ++i) sorted[i] = rng.uniform();
                std::sort(sorted.begin(), sorted.end());
                int rot = gc.n > 1 ? rng.below(gc.n) : 0;
                for (int l = 0; l < gc.n; ++l) sv[l] = sorted[(l + rot) % gc.n];
                double qprod = gc.region_density;
                for (int j = 0; j < gc.t; ++j) {
                    xv[j] = prop.sample(rng);
                    qprod *= prop.density(xv[j]);
                }
                double iw = 1.0 / qprod;
                double wsum = 0;
                for (int k = 0; k < ncurves; ++k) {
                    double v = eval_integrand(gc, *curves[k], sv.data(), xv.data(), jets, m) * iw;
                    a.sum[k] += v;
                    a.sum2[k] += v * v;
                    if (weighted) wsum += weights[k] * v;
                }
                if (weighted) {
                    a.sum[ncurves] += wsum;
                    a.sum2[ncurves] += wsum * wsum;
                }
            }
            acc[c] = std::move(a);
        }
    };

    int nthreads = std::min<std::int64_t>(resolve_threads(opt), nchunks);
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    std::vector<McEstimate> out;
    for (int k = 0; k < nslots; ++k) out.push_back(combine(acc, k, total));
    return out;
}

}  // namespace

McEstimate integrate_graph(const WilsonGraph& g, const Curve& curve, const McOptions& opt) {
    struct Ref : Curve {
        const Curve* c;
        CurveJet eval(double s) const override { return c->eval(s); }
    };
    auto ref = std::make_shared<Ref>();
    ref->c = &curve;
    return run_mc(g, {ref}, {}, opt, false)[0];
}

std::vector<McEstimate> integrate_graph_multi(const WilsonGraph& g,
                                              const std::vector<CurvePtr>& curves,
                                              const McOptions& opt) {
    return run_mc(g, curves, {}, opt, false);
}

McEstimate integrate_graph_weighted(const WilsonGraph& g, const std::vector<CurvePtr>& curves,
                                    const std::vector<double>& weights, const McOptions& opt) {
    return run_mc(g, curves, weights, opt, true).back();
}

double integrand_value(const WilsonGraph& g, const Curve& curve, const std::vector<double>& sv,
                       const std::vector<Vec3>& xv) {
    GraphCtx gc(g);
    if (static_cast<int>(sv.size()) != gc.n || static_cast<int>(xv.size()) != gc.t)
        throw std::invalid_argument("configuration size does not match the graph");
    std::vector<CurveJet> jets(std::max(gc.n, 1));
    std::vector<double> m;
    return eval_integrand(gc, curve, sv.data(), xv.empty() ? nullptr : xv.data(), jets, m);
}

double writhe_quadrature(const Curve& curve, int grid) {
    if (grid < 8) throw std::invalid_argument("writhe grid too small");
    auto pass = [&](int n) {
        std::vector<Vec3> p(n), d(n);
        for (int i = 0; i < n; ++i) {
            CurveJet j = curve.eval((i + 0.5) / n);
            p[i] = j.p;
            d[i] = j.d1;
        }
        double s = 0;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                Vec3 r = p[i] - p[j];
                double rn = norm(r);
                s += 2.0 * det3(d[i], d[j], r) / (rn * rn * rn);
            }
        }
        return s / (kFourPi * n * n);
    };
    int half = grid / 2;
    double wh = pass(half), wf = pass(grid);
    return wf + (wf - wh) / 3.0;
}

double total_twist(const Curve& curve, const Framing& framing, int grid) {
    if (grid < 8) throw std::invalid_argument("twist grid too small");
    double s = 0;
    for (int i = 0; i < grid; ++i) {
        double x = (i + 0.5) / grid;
        CurveJet j = curve.eval(x);
        FrameJet f = framing.eval(x);
        s += dot(cross(normalized(j.d1), f.u), f.du);
    }
    return s / (2.0 * kPi * grid);
}

}  // namespace knotcs
