#include "knotcs/enumeration.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>

namespace knotcs {
namespace {

struct Collector {
    std::map<std::string, WilsonGraph> classes;

    void offer(int n, int t, const std::vector<std::pair<int, int>>& edges) {
        // Connectivity over Wilson cycle + chords.
        int V = n + t;
        std::vector<std::vector<int>> adj(V);
        if (n >= 2)
            for (int i = 0; i < n; ++i) {
                adj[i].push_back((i + 1) % n);
                adj[(i + 1) % n].push_back(i);
            }
        for (auto [a, b] : edges)
            if (a != b) {
                adj[a].push_back(b);
                adj[b].push_back(a);
            }
        std::vector<char> vis(V, 0);
        std::vector<int> stack{0};
        vis[0] = 1;
        int cnt = 1;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int w : adj[v])
                if (!vis[w]) {
                    vis[w] = 1;
                    ++cnt;
                    stack.push_back(w);
                }
        }
        if (cnt != V) return;
        WilsonGraph g = WilsonGraph::from_edges(n, t, edges);
        classes.emplace(g.canonical().key(), g.canonical_rep());
    }

    std::vector<WilsonGraph> sorted() const {
        std::vector<WilsonGraph> out;
        out.reserve(classes.size());
        for (const auto& kv : classes) out.push_back(kv.second);
        return out;
    }
};

// Fills the remaining capacities of the internal vertices with internal edges.
// Loops are allowed only at `loop_vertex` (-1: nowhere), each consuming 2 slots.
void fill_internal(int n, int t, std::vector<int>& cap, int w1, int w2, int loop_vertex,
                   std::vector<std::pair<int, int>>& edges, Collector& col) {
    if (w1 == t) {
        for (int c : cap)
            if (c != 0) return;
        col.offer(n, t, edges);
        return;
    }
    if (w2 == t) {
        if (cap[w1] != 0) return;  // vertex w1 can no longer be saturated
        fill_internal(n, t, cap, w1 + 1, w1 + 2, loop_vertex, edges, col);
        return;
    }
    int maxm;
    if (w1 == w2) {
        maxm = (w1 == loop_vertex) ? cap[w1] / 2 : 0;
    } else {
        maxm = std::min(cap[w1], cap[w2]);
    }
    for (int m = 0; m <= maxm; ++m) {
        if (m > 0) {
            cap[w1] -= (w1 == w2) ? 2 * m : m;
            if (w1 != w2) cap[w2] -= m;
            for (int i = 0; i < m; ++i) edges.emplace_back(n + w1, n + w2);
        }
        fill_internal(n, t, cap, w1, w2 + 1, loop_vertex, edges, col);
        if (m > 0) {
            cap[w1] += (w1 == w2) ? 2 * m : m;
            if (w1 != w2) cap[w2] += m;
            edges.resize(edges.size() - m);
        }
    }
}

// Assigns external sockets in order: each socket either pairs with a later
// external socket, loops to its own vertex (4-valent externals only), or legs
// onto an internal vertex (vertices introduced in first-use order).
//
// `socket_vertex[k]` is the external vertex of socket k.
void assign_sockets(int n, int t, const std::vector<int>& socket_vertex, std::size_t k,
                    std::vector<char>& taken, std::vector<int>& cap, int used_internal,
                    bool allow_ext_loop, int loop_vertex,
                    std::vector<std::pair<int, int>>& edges, Collector& col) {
    if (k == socket_vertex.size()) {
        std::vector<int> cap2 = cap;
        fill_internal(n, t, cap2, 0, 0, loop_vertex, edges, col);
        return;
    }
    if (taken[k]) {
        assign_sockets(n, t, socket_vertex, k + 1, taken, cap, used_internal, allow_ext_loop,
                       loop_vertex, edges, col);
        return;
    }
    taken[k] = 1;
    // Pair with a later free socket.
    for (std::size_t j = k + 1; j < socket_vertex.size(); ++j) {
        if (taken[j]) continue;
        bool same_vertex = socket_vertex[j] == socket_vertex[k];
        if (same_vertex && !allow_ext_loop) continue;
        taken[j] = 1;
        edges.emplace_back(socket_vertex[k], socket_vertex[j]);
        assign_sockets(n, t, socket_vertex, k + 1, taken, cap, used_internal, allow_ext_loop,
                       loop_vertex, edges, col);
        edges.pop_back();
        taken[j] = 0;
    }
    // Leg onto an internal vertex; limit to first-use order to cut relabelings.
    int wmax = std::min(t - 1, used_internal);
    for (int w = 0; w <= wmax; ++w) {
        if (cap[w] == 0) continue;
        cap[w] -= 1;
        edges.emplace_back(socket_vertex[k], n + w);
        assign_sockets(n, t, socket_vertex, k + 1, taken, cap,
                       std::max(used_internal, w + 1), allow_ext_loop, loop_vertex, edges,
                       col);
        edges.pop_back();
        cap[w] += 1;
    }
    taken[k] = 0;
}

void enumerate_shape(int n, int t, int fat_external, int fat_internal, Collector& col) {
    // Socket list: one per external vertex, two for a 4-valent external.
    std::vector<int> socket_vertex;
    for (int v = 0; v < n; ++v) {
        socket_vertex.push_back(v);
        if (v == fat_external) socket_vertex.push_back(v);
    }
    std::vector<int> cap(t, 3);
    if (fat_internal >= 0) cap[fat_internal] = 4;
    std::vector<char> taken(socket_vertex.size(), 0);
    std::vector<std::pair<int, int>> edges;
    assign_sockets(n, t, socket_vertex, 0, taken, cap, 0, fat_external >= 0,
                   fat_internal >= 0 ? fat_internal : -1, edges, col);
}

}  // namespace

std::vector<WilsonGraph> trivalent_classes(int degree) {
    if (degree < 1 || degree > k_enumeration_degree_cap)
        throw std::invalid_argument("trivalent_classes: degree out of range");
    Collector col;
    for (int n = 1; n <= 2 * degree; ++n) {
        int t = 2 * degree - n;
        enumerate_shape(n, t, -1, -1, col);
    }
    return col.sorted();
}

std::vector<WilsonGraph> tetravalent_classes(int degree) {
    if (degree < 1 || degree > k_enumeration_degree_cap)
        throw std::invalid_argument("tetravalent_classes: degree out of range");
    Collector col;
    for (int n = 1; n <= 2 * degree - 1; ++n) {
        int t = 2 * degree - 1 - n;
        // One 4-valent external vertex; position 0 is representative up to rotation.
        enumerate_shape(n, t, 0, -1, col);
        // One 4-valent internal vertex, loops allowed there. The first-use-order
        // pruning of external legs pins labels, so try every position for the
        // 4-valent vertex; duplicates collapse by canonical key.
        for (int f = 0; f < t; ++f) enumerate_shape(n, t, -1, f, col);
    }
    return col.sorted();
}

std::vector<WilsonGraph> trivalent_classes_brute(int degree) {
    if (degree < 1 || degree > 3)
        throw std::invalid_argument("trivalent_classes_brute: degree capped at 3");
    Collector col;
    for (int n = 1; n <= 2 * degree; ++n) {
        int t = 2 * degree - n;
        // All darts: external v contributes dart v; internal w contributes three darts.
        // Recursively match the first unmatched dart with every later dart from a
        // different vertex.
        std::vector<int> dart_vertex;
        for (int v = 0; v < n; ++v) dart_vertex.push_back(v);
        for (int w = 0; w < t; ++w)
            for (int c = 0; c < 3; ++c) dart_vertex.push_back(n + w);
        std::vector<char> used(dart_vertex.size(), 0);
        std::vector<std::pair<int, int>> edges;
        auto rec = [&](auto&& self, std::size_t i) -> void {
            while (i < used.size() && used[i]) ++i;
            if (i == used.size()) {
                col.offer(n, t, edges);
                return;
            }
            used[i] = 1;
            for (std::size_t j = i + 1; j < used.size(); ++j) {
                if (used[j] || dart_vertex[j] == dart_vertex[i]) continue;
                used[j] = 1;
                edges.emplace_back(dart_vertex[i], dart_vertex[j]);
                self(self, i + 1);
                edges.pop_back();
                used[j] = 0;
            }
            used[i] = 0;
        };
        rec(rec, 0);
    }
    return col.sorted();
}

}  // namespace knotcs
