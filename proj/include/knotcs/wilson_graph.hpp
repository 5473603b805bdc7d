#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace knotcs {

// One end of a non-Wilson edge. `end` is 0 at the stored tail, 1 at the stored head.
struct Dart {
    int edge = -1;
    int end = 0;
    bool operator==(const Dart&) const = default;
};

// Names an edge of a graph: either the Wilson-cycle edge from vertex i to (i+1) mod n,
// or a chord (non-Wilson edge) by index into chords().
struct EdgeRef {
    bool wilson = false;
    int index = 0;
    bool operator==(const EdgeRef&) const = default;
};

enum class GraphKind { Primitive, PrimeOnly, NotPrime };

struct CanonicalForm {
    std::vector<int32_t> code;  // faithful encoding of the canonically relabeled graph
    int sign = +1;              // orientation of this graph relative to the canonical representative
    std::string key() const;    // code packed as bytes, usable as a map key
};

struct AutInfo {
    long aut = 1;       // order of the automorphism group
    long aut_plus = 1;  // order of the orientation-preserving subgroup
    bool null_class() const { return aut_plus < aut; }
};

struct GraphLift;

// A closed Wilson line with n marked (external) vertices in cyclic order 0..n-1,
// t internal vertices labeled n..n+t-1, and a set of non-Wilson edges ("chords" in a
// broad sense: external-external, external-internal and internal-internal all live in
// the same list). Each vertex carries an ordering of its incident non-Wilson darts;
// together with the global sign this is the vertex orientation of the graph.
//
// The Wilson cycle is implicit: edge i runs from vertex i to (i+1) mod n. For n == 1
// the cycle is a single closed edge at vertex 0.
class WilsonGraph {
public:
    WilsonGraph() = default;
    WilsonGraph(int n_ext, int n_int, std::vector<std::pair<int, int>> chords,
                std::vector<std::vector<Dart>> vertex_order, int sign = +1);

    // Builds vertex orders from the chord list (darts in edge-index order). Convenient
    // for chord diagrams and tests where the reference ordering is immaterial.
    static WilsonGraph from_edges(int n_ext, int n_int,
                                  std::vector<std::pair<int, int>> chords, int sign = +1);

    static WilsonGraph theta();            // two externals joined by one chord
    static WilsonGraph mercedes();         // three externals legged to one internal vertex
    static WilsonGraph wheel3();           // three externals legged to an internal triangle
    // t = 0 diagram from a pairing of 2k cyclic positions, e.g. {{0,2},{1,3}}.
    static WilsonGraph chord_diagram(const std::vector<std::pair<int, int>>& pairs);

    int n_ext() const { return n_; }
    int n_int() const { return t_; }
    int num_vertices() const { return n_ + t_; }
    bool is_external(int v) const { return v < n_; }
    const std::vector<std::pair<int, int>>& chords() const { return chords_; }
    const std::vector<std::vector<Dart>>& vertex_orders() const { return order_; }
    int sign() const { return sign_; }

    int dart_count(int v) const { return static_cast<int>(order_[v].size()); }
    bool is_trivalent() const;
    // Vertex index of the unique 4-valent vertex of an otherwise trivalent graph
    // (an external with two darts or an internal with four), or -1.
    int tetravalent_vertex() const;
    // (n + t) / 2 for trivalent graphs; (n + t + 1) / 2 for tetravalent ones, i.e. the
    // degree of the trivalent graphs it is a contraction of.
    int degree() const;

    WilsonGraph negated() const;

    // True when the configuration-space integrand vanishes identically: a chord
    // self-loop or a pair of parallel chords.
    bool null_integrand() const;

    bool has_chord_loop() const;

    // Edges whose contraction enters relation rows: Wilson edges (n >= 2) and chords
    // with at least one internal endpoint. Chords with both ends external are the
    // non-admissible ones; the n == 1 Wilson loop is omitted because contracting a
    // closed loop is undefined.
    std::vector<EdgeRef> admissible_edges() const;

    // Contraction of an admissible edge of a trivalent graph; the orientation of the
    // merged 4-valent vertex follows the conventions that make the lift-sum relations
    // hold with unit coefficients (see diagram_algebra).
    WilsonGraph contract(EdgeRef e) const;

    // The (at most three) trivalent lifts of a tetravalent graph.
    std::vector<GraphLift> lifts() const;

    GraphKind classify() const;  // trivalent graphs only

    const CanonicalForm& canonical() const;   // cached
    WilsonGraph canonical_rep() const;        // relabeled representative with sign +1
    AutInfo aut_info() const;                 // |Aut|, |Aut+|
    long interior_aut_order() const;          // automorphisms fixing every external vertex

    // Rotation parts of the automorphism group: the subgroup R of Z_n of cyclic
    // relabelings extendable to an automorphism. Orbits of Wilson edges under R are
    // the marking classes; representatives are edges 0 .. n/|R| - 1.
    std::vector<int> aut_rotations() const;

    // Relabeling v -> (v - r mod n) of the external vertices (same graph).
    WilsonGraph rotated(int r) const;
    // The graph with the Wilson cycle orientation reversed.
    WilsonGraph reversed() const;

    // Canonical form of the marked graph (this, Wilson edge e): rotation is pinned by
    // the marking, internal labels are searched. second = true when the marked class
    // is null (isomorphic to its negative through a marking-preserving map).
    std::pair<CanonicalForm, bool> marked_canonical(int wilson_edge) const;

    // Isomorphism test respecting the oriented Wilson cycle. Returns the orientation
    // sign relating a to b (a == sign * b) or nullopt.
    static std::optional<int> isomorphic(const WilsonGraph& a, const WilsonGraph& b);

    void validate() const;  // throws std::invalid_argument on malformed data

    bool same_labeled(const WilsonGraph& o) const {
        return n_ == o.n_ && t_ == o.t_ && chords_ == o.chords_ && order_ == o.order_ &&
               sign_ == o.sign_;
    }

private:
    int n_ = 0;
    int t_ = 0;
    std::vector<std::pair<int, int>> chords_;
    std::vector<std::vector<Dart>> order_;
    int sign_ = +1;

    mutable bool canon_ready_ = false;
    mutable CanonicalForm canon_;
    mutable AutInfo aut_;

    void compute_canonical() const;
    friend struct CanonicalSearch;
};

struct GraphLift {
    WilsonGraph graph;  // trivalent, sign adjusted so contract(edge) == +original
    EdgeRef edge;       // the edge whose contraction returns the tetravalent graph
};

}  // namespace knotcs
