#include "knotcs/wilson_graph.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace knotcs {

namespace {

bool dart_less(const Dart& a, const Dart& b) {
    return std::tie(a.edge, a.end) < std::tie(b.edge, b.end);
}

// Parity of the permutation that sorts `keys` ascending (entries distinct).
template <class T>
int sort_parity(std::vector<T> keys) {
    int par = +1;
    for (size_t i = 0; i + 1 < keys.size(); ++i) {
        size_t m = i;
        for (size_t j = i + 1; j < keys.size(); ++j)
            if (keys[j] < keys[m]) m = j;
        if (m != i) {
            std::swap(keys[i], keys[m]);
            par = -par;
        }
    }
    return par;
}

// The two darts of a trivalent vertex other than `d`, in the cyclic order that
// starts right after `d`. Rotating a 3-element ordering is an even permutation,
// so this normalization never changes the orientation.
std::pair<Dart, Dart> remainder_after(const std::vector<Dart>& ord, const Dart& d) {
    if (ord.size() != 3) throw std::logic_error("remainder_after: vertex is not trivalent");
    for (int i = 0; i < 3; ++i)
        if (ord[i] == d) return {ord[(i + 1) % 3], ord[(i + 2) % 3]};
    throw std::logic_error("remainder_after: dart not incident");
}

}  // namespace

WilsonGraph::WilsonGraph(int n_ext, int n_int, std::vector<std::pair<int, int>> chords,
                         std::vector<std::vector<Dart>> vertex_order, int sign)
    : n_(n_ext), t_(n_int), chords_(std::move(chords)), order_(std::move(vertex_order)),
      sign_(sign) {
    validate();
}

WilsonGraph WilsonGraph::from_edges(int n_ext, int n_int,
                                    std::vector<std::pair<int, int>> chords, int sign) {
    std::vector<std::vector<Dart>> ord(n_ext + n_int);
    for (int e = 0; e < static_cast<int>(chords.size()); ++e) {
        ord.at(chords[e].first).push_back({e, 0});
        ord.at(chords[e].second).push_back({e, 1});
    }
    return WilsonGraph(n_ext, n_int, std::move(chords), std::move(ord), sign);
}

WilsonGraph WilsonGraph::theta() { return from_edges(2, 0, {{0, 1}}); }

WilsonGraph WilsonGraph::mercedes() { return from_edges(3, 1, {{0, 3}, {1, 3}, {2, 3}}); }

WilsonGraph WilsonGraph::wheel3() {
    return from_edges(3, 3, {{0, 3}, {1, 4}, {2, 5}, {3, 4}, {4, 5}, {5, 3}});
}

WilsonGraph WilsonGraph::chord_diagram(const std::vector<std::pair<int, int>>& pairs) {
    int n = 2 * static_cast<int>(pairs.size());
    std::vector<int> seen(n, 0);
    for (auto [a, b] : pairs) {
        if (a < 0 || a >= n || b < 0 || b >= n || a == b)
            throw std::invalid_argument("chord_diagram: bad pairing");
        ++seen[a];
        ++seen[b];
    }
    for (int v = 0; v < n; ++v)
        if (seen[v] != 1) throw std::invalid_argument("chord_diagram: not a perfect pairing");
    std::vector<std::pair<int, int>> ch(pairs.begin(), pairs.end());
    return from_edges(n, 0, std::move(ch));
}

void WilsonGraph::validate() const {
    if (n_ < 1 || t_ < 0) throw std::invalid_argument("graph needs n >= 1, t >= 0");
    if (sign_ != 1 && sign_ != -1) throw std::invalid_argument("sign must be +-1");
    int V = n_ + t_;
    if (static_cast<int>(order_.size()) != V)
        throw std::invalid_argument("vertex order table has wrong size");
    for (auto [a, b] : chords_)
        if (a < 0 || a >= V || b < 0 || b >= V)
            throw std::invalid_argument("chord endpoint out of range");

    // Each vertex ordering must list exactly the incident darts.
    std::vector<std::vector<Dart>> expect(V);
    for (int e = 0; e < static_cast<int>(chords_.size()); ++e) {
        expect[chords_[e].first].push_back({e, 0});
        expect[chords_[e].second].push_back({e, 1});
    }
    for (int v = 0; v < V; ++v) {
        auto a = order_[v];
        auto b = expect[v];
        std::sort(a.begin(), a.end(), dart_less);
        std::sort(b.begin(), b.end(), dart_less);
        if (a != b) throw std::invalid_argument("vertex ordering does not match incident darts");
    }
    for (int v = 0; v < V; ++v) {
        int need = is_external(v) ? 1 : 3;
        if (dart_count(v) < need) throw std::invalid_argument("vertex valence too small");
    }

    // Connectivity over the Wilson cycle plus all chords.
    std::vector<std::vector<int>> adj(V);
    for (int i = 0; i < n_ && n_ >= 2; ++i) {
        adj[i].push_back((i + 1) % n_);
        adj[(i + 1) % n_].push_back(i);
    }
    for (auto [a, b] : chords_) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    std::vector<char> vis(V, 0);
    std::queue<int> q;
    q.push(0);
    vis[0] = 1;
    int cnt = 1;
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int w : adj[v])
            if (!vis[w]) {
                vis[w] = 1;
                ++cnt;
                q.push(w);
            }
    }
    if (cnt != V) throw std::invalid_argument("graph is not connected");
}

bool WilsonGraph::is_trivalent() const {
    for (int v = 0; v < n_ + t_; ++v)
        if (dart_count(v) != (is_external(v) ? 1 : 3)) return false;
    return true;
}

int WilsonGraph::tetravalent_vertex() const {
    int found = -1;
    for (int v = 0; v < n_ + t_; ++v) {
        int d = dart_count(v);
        int tri = is_external(v) ? 1 : 3;
        if (d == tri) continue;
        if (d == tri + 1 && found < 0)
            found = v;
        else
            return -1;
    }
    return found;
}

int WilsonGraph::degree() const {
    if (is_trivalent()) return (n_ + t_) / 2;
    if (tetravalent_vertex() >= 0) return (n_ + t_ + 1) / 2;
    throw std::logic_error("degree: graph is neither trivalent nor tetravalent");
}

WilsonGraph WilsonGraph::negated() const {
    WilsonGraph g = *this;
    g.sign_ = -g.sign_;
    if (g.canon_ready_) g.canon_.sign = -g.canon_.sign;
    return g;
}

bool WilsonGraph::has_chord_loop() const {
    for (auto [a, b] : chords_)
        if (a == b) return true;
    return false;
}

bool WilsonGraph::null_integrand() const {
    if (has_chord_loop()) return true;
    std::map<std::pair<int, int>, int> mult;
    for (auto [a, b] : chords_)
        if (++mult[std::minmax(a, b)] > 1) return true;
    return false;
}

std::vector<EdgeRef> WilsonGraph::admissible_edges() const {
    std::vector<EdgeRef> out;
    if (n_ >= 2)
        for (int i = 0; i < n_; ++i) out.push_back({true, i});
    for (int e = 0; e < static_cast<int>(chords_.size()); ++e) {
        auto [a, b] = chords_[e];
        if ((a >= n_ || b >= n_) && a != b) out.push_back({false, e});
    }
    return out;
}

WilsonGraph WilsonGraph::contract(EdgeRef e) const {
    if (!is_trivalent()) throw std::invalid_argument("contract: graph must be trivalent");
    int V = n_ + t_;

    if (e.wilson) {
        if (n_ < 2) throw std::invalid_argument("contract: cannot contract a Wilson loop");
        if (e.index < 0 || e.index >= n_) throw std::invalid_argument("contract: bad Wilson edge");
        int k = e.index;
        int u0 = k, v0 = (k + 1) % n_;
        std::vector<int> L(V);
        if (k == n_ - 1) {
            for (int v = 0; v < n_ - 1; ++v) L[v] = v;
            L[n_ - 1] = 0;
        } else {
            for (int v = 0; v < n_; ++v) L[v] = (v <= k) ? v : v - 1;
        }
        for (int i = 0; i < t_; ++i) L[n_ + i] = (n_ - 1) + i;

        std::vector<std::pair<int, int>> ch;
        ch.reserve(chords_.size());
        for (auto [a, b] : chords_) ch.push_back({L[a], L[b]});
        std::vector<std::vector<Dart>> ord(V - 1);
        for (int v = 0; v < V; ++v) {
            if (v == u0 || v == v0) continue;
            ord[L[v]] = order_[v];
        }
        // The merged 4-valent Wilson vertex carries first the dart of the earlier
        // cycle vertex, then the dart of the later one.
        ord[L[u0]] = {order_[u0][0], order_[v0][0]};
        return WilsonGraph(n_ - 1, t_, std::move(ch), std::move(ord), sign_);
    }

    if (e.index < 0 || e.index >= static_cast<int>(chords_.size()))
        throw std::invalid_argument("contract: bad chord index");
    auto [A, B] = chords_[e.index];
    if (A == B) throw std::invalid_argument("contract: cannot contract a loop");
    bool Aint = A >= n_, Bint = B >= n_;
    if (!Aint && !Bint) throw std::invalid_argument("contract: edge is not admissible");

    auto remap_edge = [&](int ei) { return ei < e.index ? ei : ei - 1; };
    auto remap_dart = [&](Dart d) { return Dart{remap_edge(d.edge), d.end}; };

    if (Aint && Bint) {
        // Internal-internal: merge the head into the tail. The merged ordering is
        // (tail remainder, head remainder), each read cyclically after the
        // contracted dart.
        auto [a1, a2] = remainder_after(order_[A], Dart{e.index, 0});
        auto [b1, b2] = remainder_after(order_[B], Dart{e.index, 1});
        std::vector<int> L(V);
        for (int v = 0; v < V; ++v)
            L[v] = (v < B) ? v : (v == B ? (A < B ? A : A - 1) : v - 1);
        std::vector<std::pair<int, int>> ch;
        for (int ei = 0; ei < static_cast<int>(chords_.size()); ++ei) {
            if (ei == e.index) continue;
            ch.push_back({L[chords_[ei].first], L[chords_[ei].second]});
        }
        std::vector<std::vector<Dart>> ord(V - 1);
        for (int v = 0; v < V; ++v) {
            if (v == A || v == B) continue;
            for (auto d : order_[v]) ord[L[v]].push_back(remap_dart(d));
        }
        ord[L[A]] = {remap_dart(a1), remap_dart(a2), remap_dart(b1), remap_dart(b2)};
        return WilsonGraph(n_, t_ - 1, std::move(ch), std::move(ord), sign_);
    }

    // Internal-external: the external vertex absorbs the internal one and keeps
    // the internal remainder in cyclic order after the contracted dart.
    int X = Aint ? B : A;
    int I = Aint ? A : B;
    Dart dI{e.index, Aint ? 0 : 1};
    auto [a1, a2] = remainder_after(order_[I], dI);
    std::vector<int> L(V);
    for (int v = 0; v < V; ++v) L[v] = (v < I) ? v : (v == I ? X : v - 1);
    std::vector<std::pair<int, int>> ch;
    for (int ei = 0; ei < static_cast<int>(chords_.size()); ++ei) {
        if (ei == e.index) continue;
        ch.push_back({L[chords_[ei].first], L[chords_[ei].second]});
    }
    std::vector<std::vector<Dart>> ord(V - 1);
    for (int v = 0; v < V; ++v) {
        if (v == X || v == I) continue;
        for (auto d : order_[v]) ord[L[v]].push_back(remap_dart(d));
    }
    ord[X] = {remap_dart(a1), remap_dart(a2)};
    return WilsonGraph(n_, t_ - 1, std::move(ch), std::move(ord), sign_);
}

std::vector<GraphLift> WilsonGraph::lifts() const {
    int x = tetravalent_vertex();
    if (x < 0) throw std::logic_error("lifts: graph is not tetravalent");
    std::vector<GraphLift> out;

    auto fix_and_push = [&](WilsonGraph cand, EdgeRef e) {
        WilsonGraph back = cand.contract(e);
        auto s = isomorphic(back, *this);
        if (!s) throw std::logic_error("lifts: candidate does not contract back");
        if (*s < 0) cand = cand.negated();
        out.push_back({std::move(cand), e});
    };

    if (x >= n_) {
        // Split the 4-valent internal vertex along each of the three pairings of
        // its darts, in the stored cyclic order.
        const auto& f = order_[x];
        int W = n_ + t_;
        int E = static_cast<int>(chords_.size());
        static constexpr int P[3][4] = {{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}};
        for (auto& p : P) {
            auto ch = chords_;
            ch.push_back({x, W});
            auto redirect = [&](Dart d) {
                auto& pr = ch[d.edge];
                (d.end == 0 ? pr.first : pr.second) = W;
            };
            redirect(f[p[2]]);
            redirect(f[p[3]]);
            auto ord = order_;
            ord.emplace_back();
            ord[x] = {Dart{E, 0}, f[p[0]], f[p[1]]};
            ord[W] = {Dart{E, 1}, f[p[2]], f[p[3]]};
            fix_and_push(WilsonGraph(n_, t_ + 1, std::move(ch), std::move(ord), sign_),
                         EdgeRef{false, E});
        }
    } else {
        const Dart g = order_[x][0], h = order_[x][1];
        {
            // Push both darts off the Wilson line onto a new internal vertex.
            int W = n_ + t_;
            int E = static_cast<int>(chords_.size());
            auto ch = chords_;
            ch.push_back({x, W});
            auto redirect = [&](Dart d) {
                auto& pr = ch[d.edge];
                (d.end == 0 ? pr.first : pr.second) = W;
            };
            redirect(g);
            redirect(h);
            auto ord = order_;
            ord.emplace_back();
            ord[x] = {Dart{E, 0}};
            ord[W] = {Dart{E, 1}, g, h};
            fix_and_push(WilsonGraph(n_, t_ + 1, std::move(ch), std::move(ord), sign_),
                         EdgeRef{false, E});
        }
        for (int variant = 0; variant < 2; ++variant) {
            // Split x into consecutive Wilson vertices x, x+1, distributing the two
            // darts in both possible ways.
            std::vector<int> L(n_ + t_);
            for (int v = 0; v < n_ + t_; ++v) L[v] = (v <= x) ? v : v + 1;
            auto ch = chords_;
            for (auto& [a, b] : ch) {
                a = L[a];
                b = L[b];
            }
            Dart first = (variant == 0) ? g : h;
            Dart second = (variant == 0) ? h : g;
            auto& pr = ch[second.edge];
            (second.end == 0 ? pr.first : pr.second) = x + 1;
            std::vector<std::vector<Dart>> ord(n_ + t_ + 1);
            for (int v = 0; v < n_ + t_; ++v)
                if (v != x) ord[L[v]] = order_[v];
            ord[x] = {first};
            ord[x + 1] = {second};
            fix_and_push(WilsonGraph(n_ + 1, t_, std::move(ch), std::move(ord), sign_),
                         EdgeRef{true, x});
        }
    }
    return out;
}

GraphKind WilsonGraph::classify() const {
    if (!is_trivalent()) throw std::logic_error("classify: graph must be trivalent");
    int V = n_ + t_;

    auto connected = [&](bool use_wilson, int skip1, int skip2) {
        std::vector<std::vector<int>> adj(V);
        if (use_wilson && n_ >= 2)
            for (int i = 0; i < n_; ++i) {
                if (i == skip1 || i == skip2) continue;
                adj[i].push_back((i + 1) % n_);
                adj[(i + 1) % n_].push_back(i);
            }
        for (auto [a, b] : chords_) {
            adj[a].push_back(b);
            adj[b].push_back(a);
        }
        std::vector<char> vis(V, 0);
        std::queue<int> q;
        q.push(0);
        vis[0] = 1;
        int cnt = 1;
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (int w : adj[v])
                if (!vis[w]) {
                    vis[w] = 1;
                    ++cnt;
                    q.push(w);
                }
        }
        return cnt == V;
    };

    if (connected(false, -1, -1)) return GraphKind::Primitive;
    bool prime = true;
    for (int i = 0; i < n_ && prime; ++i)
        for (int j = i + 1; j < n_ && prime; ++j)
            if (!connected(true, i, j)) prime = false;
    return prime ? GraphKind::PrimeOnly : GraphKind::NotPrime;
}

// ---------------------------------------------------------------------------
// Canonical labeling.
//
// A labeling is a rotation of the Wilson cycle together with a permutation of the
// internal vertices (restricted to refinement classes of cheap invariants). Under a
// labeling the graph is encoded as [n, t] followed by, for each new vertex label, its
// sorted list of dart keys (other endpoint, parallel-copy id, loop end flag). The
// orientation sign of the encoding is the stored global sign times the parity of the
// per-vertex sorts. The canonical form is the lexicographically least encoding; the
// number of labelings achieving it is the vertex part of |Aut|, and the subset
// reproducing the least encoding's sign is the vertex part of |Aut+|.
//
// Loop reversals and swaps of parallel edges are dart-level automorphisms over the
// identity vertex map and are accounted for separately: parallel swaps are always
// orientation-preserving (a transposition at each of two vertices), loop reversals are
// orientation-reversing (one transposition), so any graph with a chord loop is a null
// class.
// ---------------------------------------------------------------------------

struct CanonicalSearch {
    const WilsonGraph& g;
    int V, n, t;
    bool rotate;

    bool have = false;
    std::vector<int32_t> best;
    int best_sign = +1;
    long hits = 0, hits_plus = 0;
    std::vector<char> rotation_hit;  // rotations achieving the minimum
    int current_rotation = 0;

    CanonicalSearch(const WilsonGraph& gg, bool allow_rotation)
        : g(gg), V(gg.n_ext() + gg.n_int()), n(gg.n_ext()), t(gg.n_int()),
          rotate(allow_rotation) {}

    void run() {
        int rmax = rotate ? std::max(n, 1) : 1;
        rotation_hit.assign(rmax, 0);
        std::vector<int> lab(V, -1);
        for (int r = 0; r < rmax; ++r) {
            current_rotation = r;
            for (int v = 0; v < n; ++v) lab[v] = (v - r + n) % n;
            auto classes = refine(lab);
            descend(classes, lab, 0, n);
        }
    }

    std::vector<std::vector<int>> refine(const std::vector<int>& extlab) const {
        std::vector<std::vector<int>> key(t);
        for (int w = 0; w < t; ++w) {
            int v = n + w;
            std::vector<int> toks;
            int loops = 0;
            for (auto d : g.vertex_orders()[v]) {
                auto [a, b] = g.chords()[d.edge];
                int other = (d.end == 0) ? b : a;
                if (other == v) {
                    ++loops;
                    continue;
                }
                toks.push_back(other < n ? extlab[other] : -1);
            }
            std::sort(toks.begin(), toks.end());
            key[w] = {static_cast<int>(g.vertex_orders()[v].size()), loops};
            key[w].insert(key[w].end(), toks.begin(), toks.end());
        }
        std::vector<int> cls(t, 0);
        for (int round = 0;; ++round) {
            std::map<std::vector<int>, int> id;
            for (auto& k : key) id.emplace(k, 0);
            int c = 0;
            for (auto& kv : id) kv.second = c++;
            for (int w = 0; w < t; ++w) cls[w] = id.at(key[w]);
            if (round == 2) break;
            for (int w = 0; w < t; ++w) {
                int v = n + w;
                std::vector<int> toks;
                for (auto d : g.vertex_orders()[v]) {
                    auto [a, b] = g.chords()[d.edge];
                    int other = (d.end == 0) ? b : a;
                    if (other >= n && other != v) toks.push_back(cls[other - n]);
                }
                std::sort(toks.begin(), toks.end());
                std::vector<int> nk{cls[w]};
                nk.insert(nk.end(), toks.begin(), toks.end());
                key[w] = std::move(nk);
            }
        }
        int nc = t ? *std::max_element(cls.begin(), cls.end()) + 1 : 0;
        std::vector<std::vector<int>> out(nc);
        for (int w = 0; w < t; ++w) out[cls[w]].push_back(n + w);
        return out;
    }

    void descend(std::vector<std::vector<int>>& classes, std::vector<int>& lab, size_t ci,
                 int next_label) {
        if (ci == classes.size()) {
            record(lab);
            return;
        }
        std::vector<int> perm = classes[ci];
        std::sort(perm.begin(), perm.end());
        do {
            for (size_t i = 0; i < perm.size(); ++i)
                lab[perm[i]] = next_label + static_cast<int>(i);
            descend(classes, lab, ci + 1, next_label + static_cast<int>(perm.size()));
        } while (std::next_permutation(perm.begin(), perm.end()));
    }

    void record(const std::vector<int>& L) {
        const auto& chords = g.chords();
        std::map<std::pair<int, int>, int> ctr;
        std::vector<int> copyid(chords.size());
        for (size_t e = 0; e < chords.size(); ++e) {
            auto [a, b] = chords[e];
            copyid[e] = ctr[std::minmax(L[a], L[b])]++;
        }
        std::vector<int> inv(V);
        for (int v = 0; v < V; ++v) inv[L[v]] = v;

        std::vector<int32_t> code{static_cast<int32_t>(n), static_cast<int32_t>(t)};
        int sgn = g.sign();
        std::vector<std::array<int, 3>> keys;
        for (int vl = 0; vl < V; ++vl) {
            int ov = inv[vl];
            keys.clear();
            for (auto d : g.vertex_orders()[ov]) {
                auto [a, b] = chords[d.edge];
                int other = (d.end == 0) ? b : a;
                bool loop = (a == b);
                keys.push_back({L[other], copyid[d.edge], loop ? d.end : 0});
            }
            sgn *= sort_parity(keys);
            std::sort(keys.begin(), keys.end());
            code.push_back(static_cast<int32_t>(keys.size()));
            for (auto& k : keys) {
                code.push_back(k[0]);
                code.push_back(k[1]);
                code.push_back(k[2]);
            }
        }

        if (!have || code < best) {
            have = true;
            best = std::move(code);
            best_sign = sgn;
            hits = 1;
            hits_plus = 1;
            std::fill(rotation_hit.begin(), rotation_hit.end(), 0);
            rotation_hit[current_rotation] = 1;
        } else if (code == best) {
            ++hits;
            if (sgn == best_sign) ++hits_plus;
            rotation_hit[current_rotation] = 1;
        }
    }
};

void WilsonGraph::compute_canonical() const {
    CanonicalSearch s(*this, true);
    s.run();
    canon_.code = std::move(s.best);
    canon_.sign = s.best_sign;

    long loops = 0;
    std::map<std::pair<int, int>, long> mult;
    for (auto [a, b] : chords_) {
        if (a == b)
            ++loops;
        else
            ++mult[std::minmax(a, b)];
    }
    long parf = 1;
    for (auto& kv : mult)
        for (long i = 2; i <= kv.second; ++i) parf *= i;

    aut_.aut = s.hits * parf * (1L << loops);
    bool null = loops > 0 || s.hits_plus < s.hits;
    aut_.aut_plus = null ? aut_.aut / 2 : aut_.aut;
    canon_ready_ = true;
}

const CanonicalForm& WilsonGraph::canonical() const {
    if (!canon_ready_) compute_canonical();
    return canon_;
}

AutInfo WilsonGraph::aut_info() const {
    canonical();
    return aut_;
}

long WilsonGraph::interior_aut_order() const {
    CanonicalSearch s(*this, false);
    s.run();
    long loops = 0;
    std::map<std::pair<int, int>, long> mult;
    for (auto [a, b] : chords_) {
        if (a == b)
            ++loops;
        else
            ++mult[std::minmax(a, b)];
    }
    long parf = 1;
    for (auto& kv : mult)
        for (long i = 2; i <= kv.second; ++i) parf *= i;
    return s.hits * parf * (1L << loops);
}

WilsonGraph WilsonGraph::canonical_rep() const {
    const auto& c = canonical().code;
    int n = c.at(0), t = c.at(1);
    size_t i = 2;
    std::map<std::tuple<int, int, int>, int> edge_id;
    std::vector<std::pair<int, int>> ch;
    std::vector<std::vector<Dart>> ord(n + t);
    for (int v = 0; v < n + t; ++v) {
        int len = c.at(i++);
        for (int k = 0; k < len; ++k) {
            int other = c.at(i), copy = c.at(i + 1), flag = c.at(i + 2);
            i += 3;
            if (other == v) {
                if (flag == 0) {
                    edge_id[{v, v, copy}] = static_cast<int>(ch.size());
                    ch.push_back({v, v});
                }
                ord[v].push_back({edge_id.at({v, v, copy}), flag});
            } else if (v < other) {
                edge_id[{v, other, copy}] = static_cast<int>(ch.size());
                ch.push_back({v, other});
                ord[v].push_back({static_cast<int>(ch.size()) - 1, 0});
            } else {
                ord[v].push_back({edge_id.at({other, v, copy}), 1});
            }
        }
    }
    return WilsonGraph(n, t, std::move(ch), std::move(ord), +1);
}

std::optional<int> WilsonGraph::isomorphic(const WilsonGraph& a, const WilsonGraph& b) {
    if (a.canonical().code != b.canonical().code) return std::nullopt;
    return a.canonical().sign * b.canonical().sign;
}

std::vector<int> WilsonGraph::aut_rotations() const {
    CanonicalSearch s(*this, true);
    s.run();
    int r0 = -1;
    for (int r = 0; r < static_cast<int>(s.rotation_hit.size()); ++r)
        if (s.rotation_hit[r]) {
            r0 = r;
            break;
        }
    std::vector<int> out;
    for (int r = 0; r < static_cast<int>(s.rotation_hit.size()); ++r)
        if (s.rotation_hit[r]) out.push_back((r - r0 + n_) % n_);
    std::sort(out.begin(), out.end());
    return out;
}

WilsonGraph WilsonGraph::rotated(int r) const {
    r = ((r % n_) + n_) % n_;
    auto lab = [&](int v) { return v < n_ ? (v - r + n_) % n_ : v; };
    std::vector<std::pair<int, int>> ch;
    ch.reserve(chords_.size());
    for (auto [a, b] : chords_) ch.push_back({lab(a), lab(b)});
    std::vector<std::vector<Dart>> ord(n_ + t_);
    for (int v = 0; v < n_ + t_; ++v) ord[lab(v)] = order_[v];
    return WilsonGraph(n_, t_, std::move(ch), std::move(ord), sign_);
}

WilsonGraph WilsonGraph::reversed() const {
    auto lab = [&](int v) { return v < n_ ? (n_ - v) % n_ : v; };
    std::vector<std::pair<int, int>> ch;
    ch.reserve(chords_.size());
    for (auto [a, b] : chords_) ch.push_back({lab(a), lab(b)});
    std::vector<std::vector<Dart>> ord(n_ + t_);
    for (int v = 0; v < n_ + t_; ++v) ord[lab(v)] = order_[v];
    return WilsonGraph(n_, t_, std::move(ch), std::move(ord), sign_);
}

std::pair<CanonicalForm, bool> WilsonGraph::marked_canonical(int wilson_edge) const {
    if (n_ < 1 || wilson_edge < 0 || wilson_edge >= std::max(n_, 1))
        throw std::invalid_argument("marked_canonical: bad Wilson edge");
    // Rotate so the marked edge becomes (n-1, 0); the marking then needs no
    // explicit encoding and rotations are excluded from the search.
    WilsonGraph rot = rotated((wilson_edge + 1) % std::max(n_, 1));
    CanonicalSearch s(rot, false);
    s.run();
    CanonicalForm f;
    f.code = std::move(s.best);
    f.sign = s.best_sign;
    bool null = rot.has_chord_loop() || s.hits_plus < s.hits;
    return {std::move(f), null};
}

std::string CanonicalForm::key() const {
    std::ostringstream os;
    for (size_t i = 0; i < code.size(); ++i) {
        if (i) os << ',';
        os << code[i];
    }
    return os.str();
}

}  // namespace knotcs
