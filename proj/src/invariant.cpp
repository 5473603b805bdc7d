#include "knotcs/invariant.hpp"

#include <cmath>
#include <stdexcept>

#include "knotcs/anomaly.hpp"
#include "mc_detail.hpp"

namespace knotcs {
namespace {

// Homogeneous degree-d basis coordinates together with per-entry variances.
struct Homog {
    std::vector<double> val;
    std::vector<double> var;
    explicit Homog(int dim = 0) : val(dim, 0.0), var(dim, 0.0) {}
};

// c += a * b through the graded product. Each output coordinate is a fixed
// bilinear form sum lambda_ij a_i b_j; the structure constants lambda are probed
// with unit vectors, and variances follow the independent-product rule
// (cross-covariances between coordinates of one estimate are not tracked).
void add_product(const Algebra& alg, int da, const Homog& a, int db, const Homog& b, Homog& c) {
    const int na = static_cast<int>(a.val.size());
    const int nb = static_cast<int>(b.val.size());
    std::vector<double> ea(na, 0.0), eb(nb, 0.0);
    for (int i = 0; i < na; ++i) {
        if (a.val[i] == 0.0 && a.var[i] == 0.0) continue;
        ea[i] = 1.0;
        for (int j = 0; j < nb; ++j) {
            if (b.val[j] == 0.0 && b.var[j] == 0.0) continue;
            eb[j] = 1.0;
            const std::vector<double> lam = alg.multiply(da, ea, db, eb);
            eb[j] = 0.0;
            for (std::size_t k = 0; k < lam.size(); ++k) {
                if (lam[k] == 0.0) continue;
                c.val[k] += lam[k] * a.val[i] * b.val[j];
                c.var[k] += lam[k] * lam[k] *
                            (a.var[i] * b.val[j] * b.val[j] + a.val[i] * a.val[i] * b.var[j] +
                             a.var[i] * b.var[j]);
            }
        }
        ea[i] = 0.0;
    }
}

// exp of a homogeneous-degree >= 1 series, with the degree-0 term implicit.
// Returns E with E[d-1] the degree-d part of exp(x) - 1.
std::vector<Homog> exp_homog(const Algebra& alg, const std::vector<Homog>& x, int max_degree) {
    std::vector<Homog> e, p;
    e.reserve(max_degree);
    for (int d = 1; d <= max_degree; ++d) e.emplace_back(alg.space(d).dimension());
    p = x;  // running homogeneous power x^k / 1
    for (int d = 0; d < max_degree; ++d)
        for (std::size_t k = 0; k < p[d].val.size(); ++k) {
            e[d].val[k] += p[d].val[k];
            e[d].var[k] += p[d].var[k];
        }
    double factorial = 1.0;
    for (int k = 2; k <= max_degree; ++k) {
        factorial *= k;
        std::vector<Homog> next;
        next.reserve(max_degree);
        for (int d = 1; d <= max_degree; ++d) next.emplace_back(alg.space(d).dimension());
        for (int d = k; d <= max_degree; ++d)
            for (int i = 1; i < d; ++i)
                add_product(alg, i, p[i - 1], d - i, x[d - i - 1], next[d - 1]);
        p = std::move(next);
        for (int d = 0; d < max_degree; ++d)
            for (std::size_t c = 0; c < p[d].val.size(); ++c) {
                e[d].val[c] += p[d].val[c] / factorial;
                e[d].var[c] += p[d].var[c] / (factorial * factorial);
            }
    }
    return e;
}

std::vector<Homog> series_to_homog(const Algebra& alg, const AnomalySeries& s, double scale,
                                   int max_degree) {
    std::vector<Homog> out;
    out.reserve(max_degree);
    for (int d = 1; d <= max_degree; ++d) {
        Homog h(alg.space(d).dimension());
        for (std::size_t k = 0; k < h.val.size(); ++k) {
            h.val[k] = scale * s.coords[d - 1][k];
            const double sg = scale * s.sigmas[d - 1][k];
            h.var[k] = sg * sg;
        }
        out.push_back(std::move(h));
    }
    return out;
}

CoefficientEstimate to_estimate(const Homog& h) {
    CoefficientEstimate est;
    est.coords = h.val;
    est.sigmas.resize(h.var.size());
    for (std::size_t k = 0; k < h.var.size(); ++k) est.sigmas[k] = std::sqrt(h.var[k]);
    return est;
}

std::uint64_t graph_seed(std::uint64_t base, int degree, int column) {
    const std::uint64_t mix = 0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(degree) +
                              0xBF58476D1CE4E5B9ull * static_cast<std::uint64_t>(column + 1);
    return detail::splitmix64(base ^ mix);
}

void check_degree(const Algebra& alg, int max_degree, const char* who) {
    if (max_degree < 1 || max_degree > alg.max_degree())
        throw std::invalid_argument(std::string(who) + ": max_degree out of range");
}

void check_series_shape(const Algebra& alg, const std::vector<std::vector<double>>& x,
                        int max_degree, const char* who) {
    if (static_cast<int>(x.size()) < max_degree)
        throw std::invalid_argument(std::string(who) + ": series too short for max_degree");
    for (int d = 1; d <= max_degree; ++d)
        if (static_cast<int>(x[d - 1].size()) != alg.space(d).dimension())
            throw std::invalid_argument(std::string(who) + ": coordinate length mismatch");
}

// Accumulate coeff * D(g) / |Aut g| into a coordinate table with variance.
void add_class(const DegreeSpace& space, const WilsonGraph& g, double value, double sigma,
               Homog& out) {
    const double aut = static_cast<double>(g.aut_info().aut);
    const std::vector<Rational> r = space.reduce_graph(g);
    for (std::size_t k = 0; k < r.size(); ++k) {
        const double c = to_double(r[k]) / aut;
        if (c == 0.0) continue;
        out.val[k] += c * value;
        out.var[k] += c * c * sigma * sigma;
    }
}

}  // namespace

AnomalySeries anomaly_series(const Algebra& alg, int max_degree, const McOptions& opt,
                             bool enable_degree3) {
    check_degree(alg, max_degree, "anomaly_series");
    AnomalySeries out;
    out.coords.resize(max_degree);
    out.sigmas.resize(max_degree);
    for (int d = 1; d <= max_degree; ++d) {
        const int dim = alg.space(d).dimension();
        out.coords[d - 1].assign(dim, 0.0);
        out.sigmas[d - 1].assign(dim, 0.0);
    }

    // Degree 1: the two-point chord graph has frame coefficient exactly 2 and
    // automorphism order 2, so alpha_1 = D(theta) / 2 with zero variance.
    {
        const DegreeSpace& s1 = alg.space(1);
        const std::vector<Rational> r = s1.reduce_graph(WilsonGraph::theta());
        for (std::size_t k = 0; k < r.size(); ++k) out.coords[0][k] = 0.5 * to_double(r[k]);
    }

    // Degree 2 vanishes identically (even-degree frame coefficients cancel under
    // the orientation-reversing pairing), and the degree-3 coefficients of all
    // graphs with internal vertices vanish pointwise, so the table stays zero
    // unless a direct Monte Carlo check of degree 3 is requested.
    if (max_degree >= 3 && enable_degree3) {
        const DegreeSpace& s3 = alg.space(3);
        Homog acc(s3.dimension());
        const std::vector<WilsonGraph>& cols = s3.columns();
        for (int c = 0; c < static_cast<int>(cols.size()); ++c) {
            const WilsonGraph& g = cols[c];
            if (g.null_integrand() || g.classify() != GraphKind::Primitive) continue;
            McOptions local = opt;
            local.seed = graph_seed(opt.seed, 3, c);
            const McEstimate est = anomaly_coefficient(g, local);
            add_class(s3, g, 0.5 * est.value, 0.5 * est.sigma, acc);
        }
        out.coords[2] = acc.val;
        for (std::size_t k = 0; k < acc.var.size(); ++k) out.sigmas[2][k] = std::sqrt(acc.var[k]);
    }
    return out;
}

std::vector<std::vector<double>> series_product(const Algebra& alg,
                                                const std::vector<std::vector<double>>& a,
                                                const std::vector<std::vector<double>>& b,
                                                int max_degree) {
    check_degree(alg, max_degree, "series_product");
    check_series_shape(alg, a, max_degree, "series_product");
    check_series_shape(alg, b, max_degree, "series_product");
    std::vector<std::vector<double>> c(max_degree);
    for (int d = 1; d <= max_degree; ++d) {
        c[d - 1].assign(alg.space(d).dimension(), 0.0);
        for (std::size_t k = 0; k < c[d - 1].size(); ++k)
            c[d - 1][k] = a[d - 1][k] + b[d - 1][k];
        for (int i = 1; i < d; ++i) {
            const std::vector<double> m = alg.multiply(i, a[i - 1], d - i, b[d - i - 1]);
            for (std::size_t k = 0; k < m.size(); ++k) c[d - 1][k] += m[k];
        }
    }
    return c;
}

std::vector<std::vector<double>> series_exp(const Algebra& alg,
                                            const std::vector<std::vector<double>>& x,
                                            int max_degree) {
    check_degree(alg, max_degree, "series_exp");
    check_series_shape(alg, x, max_degree, "series_exp");
    std::vector<Homog> hx;
    hx.reserve(max_degree);
    for (int d = 1; d <= max_degree; ++d) {
        Homog h(alg.space(d).dimension());
        h.val = x[d - 1];
        hx.push_back(std::move(h));
    }
    const std::vector<Homog> e = exp_homog(alg, hx, max_degree);
    std::vector<std::vector<double>> out(max_degree);
    for (int d = 0; d < max_degree; ++d) out[d] = e[d].val;
    return out;
}

InvariantResult compute_invariant(const Algebra& alg, const FramedKnot& knot,
                                  const InvariantOptions& opt) {
    if (!knot.curve || !knot.framing)
        throw std::invalid_argument("compute_invariant: missing curve or framing");
    check_degree(alg, opt.max_degree, "compute_invariant");
    if (opt.quad_grid < 8) throw std::invalid_argument("compute_invariant: quad_grid too small");

    InvariantResult res;
    res.max_degree = opt.max_degree;
    res.self_link = writhe_quadrature(*knot.curve, opt.quad_grid);
    res.tau = total_twist(*knot.curve, *knot.framing, 8 * opt.quad_grid);

    // Raw coefficients: Z_d = sum over graph classes of I(Gamma) D(Gamma) / |Aut|.
    std::vector<Homog> z;
    z.reserve(opt.max_degree);
    for (int d = 1; d <= opt.max_degree; ++d) {
        const DegreeSpace& space = alg.space(d);
        Homog acc(space.dimension());
        const std::vector<WilsonGraph>& cols = space.columns();
        for (int c = 0; c < static_cast<int>(cols.size()); ++c) {
            const WilsonGraph& g = cols[c];
            if (g.null_integrand()) continue;
            McOptions local = opt.mc;
            local.seed = graph_seed(opt.mc.seed, d, c);
            const McEstimate est = integrate_graph(g, *knot.curve, local);
            add_class(space, g, est.value, est.sigma, acc);
        }
        z.push_back(std::move(acc));
    }

    // Framing correction: Zhat = Z * exp(tau * alpha).
    McOptions aopt = opt.mc;
    aopt.seed = detail::splitmix64(opt.mc.seed ^ 0xA70Full);
    const AnomalySeries alpha = anomaly_series(alg, opt.max_degree, aopt, opt.degree3_anomaly);
    const std::vector<Homog> e =
        exp_homog(alg, series_to_homog(alg, alpha, res.tau, opt.max_degree), opt.max_degree);

    res.raw.reserve(opt.max_degree);
    res.corrected.reserve(opt.max_degree);
    res.basis_labels.resize(opt.max_degree);
    for (int d = 1; d <= opt.max_degree; ++d) {
        Homog corr(alg.space(d).dimension());
        for (std::size_t k = 0; k < corr.val.size(); ++k) {
            corr.val[k] = z[d - 1].val[k] + e[d - 1].val[k];
            corr.var[k] = z[d - 1].var[k] + e[d - 1].var[k];
        }
        for (int i = 1; i < d; ++i) add_product(alg, i, z[i - 1], d - i, e[d - i - 1], corr);
        res.raw.push_back(to_estimate(z[d - 1]));
        res.corrected.push_back(to_estimate(corr));
        const DegreeSpace& space = alg.space(d);
        for (int c : space.basis_columns())
            res.basis_labels[d - 1].push_back(space.column_label(c));
    }
    return res;
}

VassilievResult vassiliev_difference(const Algebra& alg, const SingularFamily& fam,
                                     const VassilievOptions& opt) {
    check_degree(alg, opt.max_degree, "vassiliev_difference");
    if (opt.quad_grid < 8)
        throw std::invalid_argument("vassiliev_difference: quad_grid too small");
    const int j = fam.crossings();
    if (j < 1 || j > 20) throw std::invalid_argument("vassiliev_difference: bad crossing count");
    const int nres = 1 << j;

    VassilievResult res;
    res.crossings = j;

    std::vector<CurvePtr> curves(nres);
    std::vector<double> weights(nres);
    res.writhes.resize(nres);
    for (int mask = 0; mask < nres; ++mask) {
        std::vector<int> eps(j);
        double w = 1.0;
        for (int b = 0; b < j; ++b) {
            eps[b] = (mask >> b & 1) ? 1 : -1;
            w *= eps[b];
        }
        curves[mask] = fam.curve(eps);
        weights[mask] = w;
        res.writhes[mask] = writhe_quadrature(*curves[mask], opt.quad_grid);
        if (mask == 0) res.tau = total_twist(*curves[mask], *fam.framing(eps), 8 * opt.quad_grid);
    }

    // Signed sums S_d = sum_eps w(eps) Z_d(K_eps), one weighted Monte Carlo run
    // per graph class so all resolutions share the same sample stream.
    std::vector<Homog> s;
    s.reserve(opt.max_degree);
    for (int d = 1; d <= opt.max_degree; ++d) {
        const DegreeSpace& space = alg.space(d);
        Homog acc(space.dimension());
        const std::vector<WilsonGraph>& cols = space.columns();
        for (int c = 0; c < static_cast<int>(cols.size()); ++c) {
            const WilsonGraph& g = cols[c];
            if (g.null_integrand()) continue;
            McOptions local = opt.mc;
            local.seed = graph_seed(opt.mc.seed, d, c);
            const McEstimate est = integrate_graph_weighted(g, curves, weights, local);
            add_class(space, g, est.value, est.sigma, acc);
        }
        s.push_back(std::move(acc));
    }

    // All resolutions carry the same twist, so the signed sum of the corrected
    // series is sum_eps w Zhat_d = S_d + sum_{i>=1} S_i E_{d-i}: the lone E_d
    // term drops because the weights sum to zero.
    McOptions aopt = opt.mc;
    aopt.seed = detail::splitmix64(opt.mc.seed ^ 0xA70Full);
    const AnomalySeries alpha = anomaly_series(alg, opt.max_degree, aopt, opt.degree3_anomaly);
    const std::vector<Homog> e =
        exp_homog(alg, series_to_homog(alg, alpha, res.tau, opt.max_degree), opt.max_degree);

    res.diff.reserve(opt.max_degree);
    for (int d = 1; d <= opt.max_degree; ++d) {
        Homog out(alg.space(d).dimension());
        for (std::size_t k = 0; k < out.val.size(); ++k) {
            out.val[k] = s[d - 1].val[k];
            out.var[k] = s[d - 1].var[k];
        }
        for (int i = 1; i < d; ++i) add_product(alg, i, s[i - 1], d - i, e[d - i - 1], out);
        res.diff.push_back(to_estimate(out));
    }
    return res;
}

}  // namespace knotcs
