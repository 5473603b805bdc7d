#include "knotcs/anomaly.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

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

// Surface volume of the unit k-sphere in R^{k+1}.
double sphere_volume(int k) {
    return 2.0 * std::pow(kPi, 0.5 * (k + 1)) / std::tgamma(0.5 * (k + 1));
}

// External positions sit on a line through the origin with direction a at
// heights eta_i; internal positions are free vectors omega_j. Scale and
// translation along the line are fixed by |z| = 1 and <z, l_a> = 0 with
// z = (eta, omega) and l_a = (1,..,1, a,..,a). The estimator integrates the
// same two-rows-per-edge determinant form over the sphere bundle, weighted by
// the fiber orientation relative to (l_a, z).
struct AnomalyCtx {
    int n, t, m, E;
    std::vector<std::pair<int, int>> chords;
    double static_sign, norm_const;

    explicit AnomalyCtx(const WilsonGraph& g, std::int64_t /*samples*/) {
        if (!g.is_trivalent())
            throw std::invalid_argument("anomaly estimation needs a trivalent graph");
        n = g.n_ext();
        t = g.n_int();
        m = n + 3 * t;
        chords = g.chords();
        E = static_cast<int>(chords.size());
        static_sign = g.sign() * dart_permutation_sign(g);
        // 1/(4 pi) per edge form, times the sampling-density compensation for
        // the base sphere and the fiber sphere. Normalized so the single-chord
        // diagram evaluates to exactly 2.
        norm_const = std::pow(1.0 / kFourPi, E) * kFourPi * sphere_volume(m - 2);
    }
};

struct Workspace {
    std::vector<double> z, lhat, fiber;  // fiber: (m-2) x m row-major
    std::vector<double> mat, omat;
    std::vector<Vec3> dp;
};

// Orthonormal basis of the orthogonal complement of {lhat, z}, plus the sign
// of det[lhat, z, F_1..F_{m-2}].
int fiber_basis(const std::vector<double>& lhat, const std::vector<double>& z, int m,
                std::vector<double>& fiber, std::vector<double>& scratch) {
    fiber.assign(static_cast<std::size_t>(m - 2) * m, 0.0);
    std::vector<std::vector<double>> basis;
    basis.reserve(m);
    basis.push_back(lhat);
    basis.push_back(z);
    for (int e = 0; e < m && static_cast<int>(basis.size()) < m; ++e) {
        std::vector<double> v(m, 0.0);
        v[e] = 1.0;
        for (const auto& b : basis) {
            double d = 0;
            for (int i = 0; i < m; ++i) d += v[i] * b[i];
            for (int i = 0; i < m; ++i) v[i] -= d * b[i];
        }
        double nn = 0;
        for (double x : v) nn += x * x;
        if (nn < 1e-12) continue;
        double inv = 1.0 / std::sqrt(nn);
        for (double& x : v) x *= inv;
        basis.push_back(std::move(v));
    }
    for (int k = 0; k + 2 < m; ++k)
        for (int i = 0; i < m; ++i) fiber[static_cast<std::size_t>(k) * m + i] = basis[k + 2][i];
    // orientation of the completed frame
    scratch.assign(static_cast<std::size_t>(m) * m, 0.0);
    for (int c = 0; c < m; ++c)
        for (int i = 0; i < m; ++i) scratch[static_cast<std::size_t>(i) * m + c] = basis[c][i];
    return det_inplace(scratch, m) < 0 ? -1 : +1;
}

// One evaluation of the form at a fixed (a, z) configuration.
double eval_form(const AnomalyCtx& gc, const Vec3& a, const Vec3& P, const Vec3& Q,
                 Workspace& ws) {
    const int m = gc.m, n = gc.n, t = gc.t;
    const std::vector<double>& z = ws.z;
    int sF = fiber_basis(ws.lhat, z, m, ws.fiber, ws.omat);

    // positions
    std::vector<Vec3> pos(n + t);
    for (int i = 0; i < n; ++i) pos[i] = a * z[i];
    for (int j = 0; j < t; ++j) pos[n + j] = Vec3{z[n + 3 * j], z[n + 3 * j + 1], z[n + 3 * j + 2]};

    // displacement of every vertex along each frame column: the two lifted base
    // directions (their constraint corrections point along l_a, which moves all
    // vertices together and drops out of every edge difference), then the fiber.
    ws.dp.assign(static_cast<std::size_t>(m) * (n + t), Vec3{});
    for (int i = 0; i < n; ++i) {
        ws.dp[0 * (n + t) + i] = P * z[i];
        ws.dp[1 * (n + t) + i] = Q * z[i];
    }
    for (int k = 0; k + 2 < m; ++k) {
        const double* F = &ws.fiber[static_cast<std::size_t>(k) * m];
        Vec3* row = &ws.dp[static_cast<std::size_t>(k + 2) * (n + t)];
        for (int i = 0; i < n; ++i) row[i] = a * F[i];
        for (int j = 0; j < t; ++j) row[n + j] = Vec3{F[n + 3 * j], F[n + 3 * j + 1], F[n + 3 * j + 2]};
    }

    ws.mat.assign(static_cast<std::size_t>(m) * m, 0.0);
    for (int e = 0; e < gc.E; ++e) {
        int u = gc.chords[e].first, v = gc.chords[e].second;
        Vec3 gv = pos[v] - pos[u];
        double r2 = norm2(gv);
        if (!(r2 > 1e-280)) return 0.0;
        double rinv = 1.0 / std::sqrt(r2);
        Vec3 uhat = gv * rinv, pe, qe;
        perp_frame(uhat, pe, qe);
        double* ra = &ws.mat[static_cast<std::size_t>(2 * e) * m];
        double* rb = ra + m;
        for (int c = 0; c < m; ++c) {
            Vec3 d = ws.dp[static_cast<std::size_t>(c) * (n + t) + v] -
                     ws.dp[static_cast<std::size_t>(c) * (n + t) + u];
            ra[c] = dot(pe, d) * rinv;
            rb[c] = dot(qe, d) * rinv;
        }
    }
    ws.omat = ws.mat;
    return det_inplace(ws.omat, m) * sF;
}

}  // namespace

McEstimate anomaly_coefficient(const WilsonGraph& g, const McOptions& opt) {
    AnomalyCtx gc(g, opt.samples);
    if (g.classify() != GraphKind::Primitive || g.null_integrand()) {
        McEstimate e;
        e.samples = opt.samples;
        return e;
    }

    const int chunk = 1 << std::clamp(opt.chunk_log2, 4, 20);
    const std::int64_t nchunks = std::max<std::int64_t>(1, (opt.samples + chunk - 1) / chunk);
    const std::int64_t total = nchunks * chunk;
    const int m = gc.m, n = gc.n, t = gc.t;

    std::vector<double> sums(nchunks, 0.0), sums2(nchunks, 0.0);
    std::atomic<std::int64_t> next{0};
    auto worker = [&]() {
        Workspace ws;
        ws.z.resize(m);
        ws.lhat.resize(m);
        for (;;) {
            std::int64_t c = next.fetch_add(1);
            if (c >= nchunks) break;
            Rng rng(chunk_seed(opt.seed, c));
            double s = 0, s2 = 0;
            for (int it = 0; it < chunk; ++it) {
                Vec3 a = rng.normal3();
                double an = norm(a);
                if (an < 1e-8) continue;
                a = a / an;
                Vec3 P, Q;
                perp_frame(a, P, Q);
                // unit normal of the constraint hyperplane
                double linv = 1.0 / std::sqrt(static_cast<double>(n + t));
                for (int i = 0; i < n; ++i) ws.lhat[i] = linv;
                for (int j = 0; j < t; ++j) {
                    ws.lhat[n + 3 * j] = a.x * linv;
                    ws.lhat[n + 3 * j + 1] = a.y * linv;
                    ws.lhat[n + 3 * j + 2] = a.z * linv;
                }
                // uniform point of the fiber sphere
                double dp = 0, nn = 0;
                for (int i = 0; i < m; ++i) ws.z[i] = rng.normal();
                for (int i = 0; i < m; ++i) dp += ws.z[i] * ws.lhat[i];
                for (int i = 0; i < m; ++i) {
                    ws.z[i] -= dp * ws.lhat[i];
                    nn += ws.z[i] * ws.z[i];
                }
                if (nn < 1e-12) continue;
                double zinv = 1.0 / std::sqrt(nn);
                for (int i = 0; i < m; ++i) ws.z[i] *= zinv;
                // the external heights must realize the Wilson cyclic order
                if (n >= 3) {
                    int descents = 0;
                    for (int i = 0; i < n; ++i)
                        if (ws.z[i] > ws.z[(i + 1) % n]) ++descents;
                    if (descents != 1) continue;
                }
                double f = eval_form(gc, a, P, Q, ws);
                // antithetic partner: internal positions reflected through the
                // plane spanned by the line and P; exact cancellation in even
                // degrees, where the anomaly vanishes.
                if (t > 0) {
                    for (int j = 0; j < t; ++j) {
                        Vec3 w{ws.z[n + 3 * j], ws.z[n + 3 * j + 1], ws.z[n + 3 * j + 2]};
                        w = w - Q * (2.0 * dot(Q, w));
                        ws.z[n + 3 * j] = w.x;
                        ws.z[n + 3 * j + 1] = w.y;
                        ws.z[n + 3 * j + 2] = w.z;
                    }
                    f = 0.5 * (f + eval_form(gc, a, P, Q, ws));
                }
                double v = gc.static_sign * gc.norm_const * f;
                s += v;
                s2 += v * v;
            }
            sums[c] = s;
            sums2[c] = s2;
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

    double s = 0, s2 = 0;
    for (std::int64_t c = 0; c < nchunks; ++c) {
        s += sums[c];
        s2 += sums2[c];
    }
    McEstimate e;
    e.samples = total;
    e.value = s / static_cast<double>(total);
    double var = (s2 - s * s / static_cast<double>(total)) / std::max<double>(1.0, total - 1);
    e.sigma = std::sqrt(std::max(var, 0.0) / static_cast<double>(total));
    return e;
}

}  // namespace knotcs
