// knotcs: command-line surface for the perturbative knot invariant toolkit.
//
// Subcommands
//   graphs     list trivalent Wilson graph classes of one degree
//   algebra    dimension and basis report of the diagram algebra
//   invariant  evaluate the framed invariant for a knot description file
//   anomaly    Monte Carlo table of frame-correction coefficients
//   verify     self-check suites (algebra | anomaly | vassiliev | reversal)
//
// Exit codes: 0 success, 1 I/O or input error, 2 capability cap, 3 verification
// failure.

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "knotcs/anomaly.hpp"
#include "knotcs/diagram_algebra.hpp"
#include "knotcs/enumeration.hpp"
#include "knotcs/invariant.hpp"
#include "knotcs/json_io.hpp"

namespace {

using namespace knotcs;

struct CapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Opts {
    int degree = 2;
    int order = 2;
    int threads = 0;
    int grid = 512;
    std::int64_t samples = 1 << 20;
    std::uint64_t seed = 1;
    std::string knot;
    std::string format = "json";
    std::string config;
    std::string out;
    std::string suite;
    bool degree3 = false;
};

// Option handles needed to tell "flag given" from "default" when merging --config.
struct OptionRefs {
    CLI::Option* degree = nullptr;
    CLI::Option* order = nullptr;
    CLI::Option* threads = nullptr;
    CLI::Option* grid = nullptr;
    CLI::Option* samples = nullptr;
    CLI::Option* seed = nullptr;
    CLI::Option* knot = nullptr;
    CLI::Option* format = nullptr;
    CLI::Option* out = nullptr;
    CLI::Option* suite = nullptr;
    CLI::Option* degree3 = nullptr;
};

// Values from the JSON config file fill in every option the command line left
// at its default, so a saved config reproduces a run.
void apply_config(Opts& o, const OptionRefs& r) {
    if (o.config.empty()) return;
    const Json c = load_json_file(o.config);
    if (!c.is_object()) throw InputError("config must be a JSON object");
    auto want = [&](const char* key, CLI::Option* opt) {
        return opt != nullptr && opt->count() == 0 && c.contains(key);
    };
    if (want("degree", r.degree)) o.degree = c["degree"].get<int>();
    if (want("order", r.order)) o.order = c["order"].get<int>();
    if (want("threads", r.threads)) o.threads = c["threads"].get<int>();
    if (want("grid", r.grid)) o.grid = c["grid"].get<int>();
    if (want("samples", r.samples)) o.samples = c["samples"].get<std::int64_t>();
    if (want("seed", r.seed)) o.seed = c["seed"].get<std::uint64_t>();
    if (want("knot", r.knot)) o.knot = c["knot"].get<std::string>();
    if (want("format", r.format)) o.format = c["format"].get<std::string>();
    if (want("out", r.out)) o.out = c["out"].get<std::string>();
    if (want("suite", r.suite)) o.suite = c["suite"].get<std::string>();
    if (want("degree3_anomaly", r.degree3)) o.degree3 = c["degree3_anomaly"].get<bool>();
}

McOptions mc_options(const Opts& o) {
    McOptions mc;
    mc.samples = o.samples;
    mc.seed = o.seed;
    mc.threads = o.threads;
    return mc;
}

void check_format(const Opts& o) {
    if (o.format != "json" && o.format != "table")
        throw InputError("--format must be json or table");
}

std::string graph_label(const WilsonGraph& g) {
    std::ostringstream os;
    os << "n" << g.n_ext() << "t" << g.n_int() << "[";
    for (std::size_t e = 0; e < g.chords().size(); ++e) {
        if (e) os << " ";
        os << g.chords()[e].first << "-" << g.chords()[e].second;
    }
    os << "]";
    return os.str();
}

const char* kind_name(GraphKind k) {
    switch (k) {
        case GraphKind::Primitive: return "primitive";
        case GraphKind::PrimeOnly: return "prime";
        default: return "product";
    }
}

void emit(const Opts& o, const Json& j) {
    if (!o.out.empty()) save_json_file(o.out, j);
    std::printf("%s\n", j.dump(2).c_str());
}

// deterministic per-graph seed used by the table commands
std::uint64_t table_seed(std::uint64_t base, int degree, int column) {
    return base + 977u * static_cast<unsigned>(degree) + 31u * static_cast<unsigned>(column);
}

// ---------------------------------------------------------------------------
// graphs
// ---------------------------------------------------------------------------

int cmd_graphs(const Opts& o) {
    check_format(o);
    if (o.degree < 0) throw InputError("--degree must be >= 0");
    if (o.degree > k_enumeration_degree_cap)
        throw CapError("degree " + std::to_string(o.degree) + " above enumeration cap " +
                       std::to_string(k_enumeration_degree_cap));

    Json rows = Json::array();
    if (o.degree > 0)
        for (const auto& g : trivalent_classes(o.degree)) {
            const AutInfo a = g.aut_info();
            rows.push_back(Json{{"label", graph_label(g)},
                                {"n", g.n_ext()},
                                {"t", g.n_int()},
                                {"aut", a.aut},
                                {"aut_plus", a.aut_plus},
                                {"null_class", a.null_class()},
                                {"null_integrand", g.null_integrand()},
                                {"kind", kind_name(g.classify())},
                                {"graph", graph_to_json(g)}});
        }
    Json out{{"degree", o.degree}, {"classes", rows}, {"count", rows.size()}};
    if (o.degree == 0) out["note"] = "degree 0 holds only the unit (empty diagram)";

    if (o.format == "json") {
        emit(o, out);
    } else {
        std::printf("degree %d: %zu classes\n", o.degree, static_cast<std::size_t>(rows.size()));
        if (o.degree == 0) std::printf("  (unit: the empty diagram)\n");
        for (const auto& r : rows)
            std::printf("  %-28s |Aut|=%-3ld |Aut+|=%-3ld %-9s%s%s\n",
                        r["label"].get<std::string>().c_str(), r["aut"].get<long>(),
                        r["aut_plus"].get<long>(), r["kind"].get<std::string>().c_str(),
                        r["null_class"].get<bool>() ? " null-class" : "",
                        r["null_integrand"].get<bool>() ? " null-integrand" : "");
    }
    return 0;
}

// ---------------------------------------------------------------------------
// algebra
// ---------------------------------------------------------------------------

int cmd_algebra(const Opts& o) {
    check_format(o);
    if (o.degree < 1) throw InputError("--degree must be >= 1");
    if (o.degree > k_enumeration_degree_cap)
        throw CapError("degree " + std::to_string(o.degree) + " above enumeration cap " +
                       std::to_string(k_enumeration_degree_cap));

    Json degrees = Json::array();
    for (int d = 1; d <= o.degree; ++d) {
        const DegreeSpace space(d);
        Json basis = Json::array();
        for (int c : space.basis_columns()) basis.push_back(space.column_label(c));
        degrees.push_back(Json{{"degree", d},
                               {"dimension", space.dimension()},
                               {"columns", space.columns().size()},
                               {"relations", space.num_relations()},
                               {"basis", std::move(basis)}});
    }
    Json out{{"max_degree", o.degree}, {"degrees", degrees}};

    if (o.format == "json") {
        emit(o, out);
    } else {
        for (const auto& d : degrees) {
            std::printf("degree %d: dim %d (%zu classes, %d relations)\n", d["degree"].get<int>(),
                        d["dimension"].get<int>(),
                        static_cast<std::size_t>(d["columns"].get<std::size_t>()),
                        d["relations"].get<int>());
            for (const auto& b : d["basis"])
                std::printf("    basis %s\n", b.get<std::string>().c_str());
        }
    }
    return 0;
}

// ---------------------------------------------------------------------------
// invariant
// ---------------------------------------------------------------------------

// 64-bit FNV-1a over the binary anomaly table; recorded so reports can be
// matched to the correction table that produced them.
std::uint64_t anomaly_table_hash(const AnomalySeries& a) {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&](double v) {
        std::uint64_t bits;
        static_assert(sizeof bits == sizeof v);
        std::memcpy(&bits, &v, sizeof bits);
        for (int byte = 0; byte < 8; ++byte) {
            h ^= (bits >> (8 * byte)) & 0xff;
            h *= 1099511628211ull;
        }
    };
    for (const auto& row : a.coords)
        for (double v : row) mix(v);
    return h;
}

int cmd_invariant(const Opts& o) {
    check_format(o);
    if (o.order < 1) throw InputError("--order must be >= 1");
    if (o.order > k_integration_degree_cap)
        throw CapError("order " + std::to_string(o.order) + " above integration cap " +
                       std::to_string(k_integration_degree_cap));
    if (o.knot.empty()) throw InputError("--knot FILE is required");
    if (o.samples < 64) throw InputError("--samples too small");

    const Json desc = load_json_file(o.knot);
    const Json& knot_json = desc.contains("knot") ? desc["knot"] : desc;
    CurvePtr curve = knot_from_json(knot_json);
    FramingPtr framing = desc.contains("framing")
                             ? framing_from_json(desc["framing"], curve)
                             : default_framing(curve);

    const Algebra alg(o.order);
    InvariantOptions iopt;
    iopt.max_degree = o.order;
    iopt.mc = mc_options(o);
    iopt.degree3_anomaly = o.degree3;
    iopt.quad_grid = o.grid;
    const InvariantResult res = compute_invariant(alg, {curve, framing}, iopt);

    Json out = invariant_result_to_json(res, desc, o.seed, o.samples, "mc+quadrature");
    out["threads"] = o.threads;
    const AnomalySeries alpha = anomaly_series(alg, o.order, iopt.mc, o.degree3);
    char hex[19];
    std::snprintf(hex, sizeof hex, "%016" PRIx64, anomaly_table_hash(alpha));
    out["anomaly_table_hash"] = hex;

    if (o.format == "json") {
        emit(o, out);
    } else {
        if (!o.out.empty()) save_json_file(o.out, out);
        std::printf("writhe %.9f   twist %.9f   writhe+twist %.9f\n", res.self_link, res.tau,
                    res.self_link + res.tau);
        for (int d = 1; d <= res.max_degree; ++d) {
            std::printf("degree %d\n", d);
            for (std::size_t k = 0; k < res.corrected[d - 1].coords.size(); ++k)
                std::printf("    %-24s raw % .6f +- %.6f   corrected % .6f +- %.6f\n",
                            res.basis_labels[d - 1][k].c_str(), res.raw[d - 1].coords[k],
                            res.raw[d - 1].sigmas[k], res.corrected[d - 1].coords[k],
                            res.corrected[d - 1].sigmas[k]);
        }
    }
    return 0;
}

// ---------------------------------------------------------------------------
// anomaly
// ---------------------------------------------------------------------------

int cmd_anomaly(const Opts& o) {
    check_format(o);
    if (o.degree < 1) throw InputError("--degree must be >= 1");
    if (o.degree > k_integration_degree_cap)
        throw CapError("degree " + std::to_string(o.degree) + " above integration cap " +
                       std::to_string(k_integration_degree_cap));

    const Algebra alg(o.degree);
    Json rows = Json::array();
    for (int d = 1; d <= o.degree; ++d) {
        const DegreeSpace& space = alg.space(d);
        const auto& cols = space.columns();
        for (int c = 0; c < static_cast<int>(cols.size()); ++c) {
            const WilsonGraph& g = cols[c];
            if (g.null_integrand() || g.classify() != GraphKind::Primitive) continue;
            McOptions mc = mc_options(o);
            mc.seed = table_seed(o.seed, d, c);
            const McEstimate est = anomaly_coefficient(g, mc);
            rows.push_back(Json{{"degree", d},
                                {"label", space.column_label(c)},
                                {"aut", g.aut_info().aut},
                                {"value", est.value},
                                {"std_error", est.sigma}});
        }
    }
    const AnomalySeries alpha = anomaly_series(alg, o.degree, mc_options(o), o.degree3);
    Json out{{"max_degree", o.degree},
             {"samples", o.samples},
             {"seed", o.seed},
             {"coefficients", rows},
             {"alpha", Json{{"coords", alpha.coords}, {"std_errors", alpha.sigmas}}}};

    if (o.format == "json") {
        emit(o, out);
    } else {
        for (const auto& r : rows)
            std::printf("degree %d  %-24s f = % .6f +- %.6f\n", r["degree"].get<int>(),
                        r["label"].get<std::string>().c_str(), r["value"].get<double>(),
                        r["std_error"].get<double>());
    }
    return 0;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

struct Checker {
    bool all_ok = true;
    void report(const std::string& name, bool ok, const std::string& detail) {
        std::printf("[%s] %s%s%s\n", ok ? "pass" : "FAIL", name.c_str(),
                    detail.empty() ? "" : ": ", detail.c_str());
        all_ok = all_ok && ok;
    }
};

void verify_algebra(Checker& ck) {
    for (int d = 1; d <= 3; ++d) {
        const DegreeSpace space(d);
        const DegreeSpace flipped(d, true);
        ck.report("degree " + std::to_string(d) + " dimension independent of elimination order",
                  space.dimension() == flipped.dimension(),
                  "dim " + std::to_string(space.dimension()));

        bool relations_zero = true;
        for (const auto& h : tetravalent_classes(d)) {
            std::vector<Rational> col(space.columns().size(), Rational(0));
            for (const auto& lift : h.lifts()) {
                auto [c, s] = space.column_of(lift.graph);
                if (c >= 0) col[c] += s;
            }
            for (const Rational& x : space.reduce(col))
                if (x != 0) relations_zero = false;
        }
        ck.report("degree " + std::to_string(d) + " relation images reduce to zero",
                  relations_zero, "");

        bool antisym = true;
        for (const auto& g : space.columns()) {
            const auto a = space.reduce_graph(g);
            const auto b = space.reduce_graph(g.negated());
            for (std::size_t k = 0; k < a.size(); ++k)
                if (a[k] + b[k] != 0) antisym = false;
        }
        ck.report("degree " + std::to_string(d) + " orientation flip negates classes", antisym,
                  "");
    }

    const Algebra alg(2);
    const WilsonGraph theta = WilsonGraph::theta();
    const auto d_theta = alg.space(1).reduce_graph(theta);
    const auto c_theta = alg.primitive_projection(theta);
    bool fixed = d_theta.size() == c_theta.size();
    for (std::size_t k = 0; fixed && k < d_theta.size(); ++k)
        if (d_theta[k] != c_theta[k]) fixed = false;
    ck.report("projector fixes the primitive two-point class", fixed, "");

    const auto c_sq = alg.primitive_projection(WilsonGraph::chord_diagram({{0, 1}, {2, 3}}));
    bool killed = true;
    for (const Rational& x : c_sq)
        if (x != 0) killed = false;
    ck.report("projector kills the squared two-point class", killed, "");
}

void verify_anomaly(Checker& ck, const Opts& o) {
    McOptions mc = mc_options(o);
    const McEstimate th = anomaly_coefficient(WilsonGraph::theta(), mc);
    {
        std::ostringstream os;
        os << "f = " << th.value << " +- " << th.sigma;
        ck.report("two-point frame coefficient equals 2",
                  std::abs(th.value - 2.0) <= std::max(3.0 * th.sigma, 1e-9), os.str());
    }
    for (const WilsonGraph& g : {WilsonGraph::mercedes(), WilsonGraph::wheel3()}) {
        const McEstimate est = anomaly_coefficient(g, mc);
        std::ostringstream os;
        os << "f = " << est.value << " +- " << est.sigma;
        ck.report("frame coefficient of " + graph_label(g) + " vanishes",
                  std::abs(est.value) <= 3.0 * est.sigma + 1e-9, os.str());
    }
}

void verify_vassiliev(Checker& ck, const Opts& o) {
    const Algebra alg(2);
    VassilievOptions vopt;
    vopt.max_degree = 2;
    vopt.mc = mc_options(o);
    vopt.quad_grid = o.grid;

    {
        auto fam = make_singular_preset(1);
        const auto r = vassiliev_difference(alg, *fam, vopt);
        const double handed = fam->handedness()[0];
        const double wq = 0.5 * (r.writhes[1] - r.writhes[0]);
        std::ostringstream os;
        os << "quadrature " << wq << ", mc " << r.diff[0].coords[0] << " +- "
           << r.diff[0].sigmas[0];
        const bool ok = std::abs(wq - handed) <= 2e-3 &&
                        std::abs(r.diff[0].coords[0] - handed) <=
                            3.5 * r.diff[0].sigmas[0] + 2e-3;
        ck.report("one-crossing difference equals the handedness", ok, os.str());
    }
    {
        auto fam = make_singular_preset(2);
        const auto r = vassiliev_difference(alg, *fam, vopt);
        double sw = 0.0;
        for (int mask = 0; mask < 4; ++mask)
            sw += ((mask & 1) ? 1 : -1) * ((mask >> 1 & 1) ? 1 : -1) * r.writhes[mask];
        {
            std::ostringstream os;
            os << "quadrature " << 0.5 * sw << ", mc " << r.diff[0].coords[0];
            ck.report("two-crossing first difference vanishes",
                      std::abs(0.5 * sw) <= 1e-3 && std::abs(r.diff[0].coords[0]) <= 1e-6,
                      os.str());
        }
        {
            std::ostringstream os;
            os << "off-chord " << r.diff[1].coords[0] << " +- " << r.diff[1].sigmas[0]
               << ", chord-diagram constant " << r.diff[1].coords[1] << " +- "
               << r.diff[1].sigmas[1];
            ck.report("two-crossing second difference lies on the chord diagram",
                      std::abs(r.diff[1].coords[0]) <= 4.0 * r.diff[1].sigmas[0] + 1e-3,
                      os.str());
        }
    }
}

// Wilson-orientation reversal: externals relabeled i -> (n - i) mod n. Whether
// classes satisfy D(reversed) = (-1)^n D(original) is an open question, so this
// suite only reports the tally and never fails.
WilsonGraph reverse_wilson(const WilsonGraph& g) {
    const int n = g.n_ext();
    auto map_v = [n](int v) { return v < n ? (n - v) % n : v; };
    std::vector<std::pair<int, int>> chords;
    for (auto [a, b] : g.chords()) chords.emplace_back(map_v(a), map_v(b));
    std::vector<std::vector<Dart>> orders(g.num_vertices());
    for (int v = 0; v < g.num_vertices(); ++v) orders[map_v(v)] = g.vertex_orders()[v];
    return WilsonGraph(n, g.n_int(), std::move(chords), std::move(orders), g.sign());
}

void verify_reversal(Checker& ck, const Opts& o) {
    const int top = std::min(std::max(o.degree, 1), k_enumeration_degree_cap);
    for (int d = 1; d <= top; ++d) {
        const DegreeSpace space(d);
        int holds = 0, differs = 0;
        for (const auto& g : space.columns()) {
            const auto a = space.reduce_graph(g);
            const auto b = space.reduce_graph(reverse_wilson(g));
            const int parity = g.n_ext() % 2 ? -1 : 1;
            bool same = true;
            for (std::size_t k = 0; k < a.size(); ++k)
                if (b[k] != parity * a[k]) same = false;
            (same ? holds : differs)++;
        }
        std::ostringstream os;
        os << holds << " classes match, " << differs << " differ (reported, not asserted)";
        ck.report("degree " + std::to_string(d) + " reversal parity survey", true, os.str());
    }
}

int cmd_verify(const Opts& o) {
    Checker ck;
    if (o.suite == "algebra")
        verify_algebra(ck);
    else if (o.suite == "anomaly")
        verify_anomaly(ck, o);
    else if (o.suite == "vassiliev")
        verify_vassiliev(ck, o);
    else if (o.suite == "reversal")
        verify_reversal(ck, o);
    else if (o.suite == "all") {
        verify_algebra(ck);
        verify_anomaly(ck, o);
        verify_vassiliev(ck, o);
        verify_reversal(ck, o);
    } else {
        throw InputError("unknown suite (want algebra | anomaly | vassiliev | reversal | all)");
    }
    std::printf("%s\n", ck.all_ok ? "verification passed" : "verification FAILED");
    return ck.all_ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"perturbative knot invariants from configuration-space integrals"};
    app.require_subcommand(1);

    Opts o;
    auto add_common = [&](CLI::App* sub, OptionRefs& r) {
        r.threads = sub->add_option("--threads", o.threads, "worker threads (0: auto)");
        r.seed = sub->add_option("--seed", o.seed, "random number seed");
        r.samples = sub->add_option("--samples", o.samples, "Monte Carlo samples per graph");
        sub->add_option("--config", o.config, "JSON file with defaults for these flags");
    };

    OptionRefs gr, ar, ir, nr, vr;
    CLI::App* graphs = app.add_subcommand("graphs", "list trivalent graph classes");
    gr.degree = graphs->add_option("--degree", o.degree, "diagram degree");
    gr.format = graphs->add_option("--format", o.format, "json | table");
    gr.out = graphs->add_option("--out", o.out, "also write the JSON report here");
    graphs->add_option("--config", o.config, "JSON file with defaults for these flags");

    CLI::App* algebra = app.add_subcommand("algebra", "diagram-algebra dimensions and bases");
    ar.degree = algebra->add_option("--degree", o.degree, "largest degree to report");
    ar.format = algebra->add_option("--format", o.format, "json | table");
    ar.out = algebra->add_option("--out", o.out, "also write the JSON report here");
    algebra->add_option("--config", o.config, "JSON file with defaults for these flags");

    CLI::App* invariant = app.add_subcommand("invariant", "evaluate the framed invariant");
    add_common(invariant, ir);
    ir.knot = invariant->add_option("--knot", o.knot, "knot description JSON file");
    ir.order = invariant->add_option("--order", o.order, "highest coefficient degree");
    ir.grid = invariant->add_option("--grid", o.grid, "writhe quadrature grid");
    ir.format = invariant->add_option("--format", o.format, "json | table");
    ir.out = invariant->add_option("--out", o.out, "also write the JSON report here");
    ir.degree3 = invariant->add_flag("--degree3-anomaly", o.degree3,
                                     "estimate the degree-3 correction by Monte Carlo");

    CLI::App* anomaly = app.add_subcommand("anomaly", "frame-correction coefficient table");
    add_common(anomaly, nr);
    nr.degree = anomaly->add_option("--degree", o.degree, "largest degree to tabulate");
    nr.format = anomaly->add_option("--format", o.format, "json | table");
    nr.out = anomaly->add_option("--out", o.out, "also write the JSON report here");
    nr.degree3 = anomaly->add_flag("--degree3-anomaly", o.degree3,
                                   "estimate the degree-3 correction by Monte Carlo");

    CLI::App* verify = app.add_subcommand("verify", "run a self-check suite");
    add_common(verify, vr);
    vr.suite = verify->add_option("--suite", o.suite,
                                  "algebra | anomaly | vassiliev | reversal | all");
    vr.degree = verify->add_option("--degree", o.degree, "degree range for the reversal survey");
    vr.grid = verify->add_option("--grid", o.grid, "writhe quadrature grid");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (graphs->parsed()) {
            apply_config(o, gr);
            return cmd_graphs(o);
        }
        if (algebra->parsed()) {
            apply_config(o, ar);
            return cmd_algebra(o);
        }
        if (invariant->parsed()) {
            apply_config(o, ir);
            return cmd_invariant(o);
        }
        if (anomaly->parsed()) {
            apply_config(o, nr);
            return cmd_anomaly(o);
        }
        if (verify->parsed()) {
            apply_config(o, vr);
            if (vr.suite->count() == 0 && o.suite.empty()) o.suite = "all";
            return cmd_verify(o);
        }
        return 1;
    } catch (const CapError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
