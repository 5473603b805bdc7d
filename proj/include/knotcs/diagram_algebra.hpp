#pragma once
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "knotcs/rational.hpp"
#include "knotcs/wilson_graph.hpp"

namespace knotcs {

// ---------------------------------------------------------------------------
// Quotient space of one degree: the rational span of the non-null trivalent
// classes modulo the relation rows generated by the tetravalent classes (the sum
// of the three lifts of each reduces to zero).
// ---------------------------------------------------------------------------
class DegreeSpace {
public:
    // order_flip: eliminate with the reversed column order (used to confirm the
    // dimension is independent of the elimination order).
    explicit DegreeSpace(int degree, bool order_flip = false);

    int degree() const { return degree_; }
    const std::vector<WilsonGraph>& columns() const { return cols_; }
    int num_relations() const { return n_relations_; }
    int dimension() const { return static_cast<int>(basis_cols_.size()); }
    const std::vector<int>& basis_columns() const { return basis_cols_; }
    std::string column_label(int c) const;  // short text form of the class

    // (column index, orientation sign) of a trivalent graph's class; column -1 with
    // sign 0 for null classes. Throws if the graph's degree does not match.
    std::pair<int, int> column_of(const WilsonGraph& g) const;

    // Coordinates over basis_columns() of a single class / of a column vector.
    std::vector<Rational> reduce_graph(const WilsonGraph& g) const;
    std::vector<Rational> reduce(std::vector<Rational> column_vector) const;

private:
    int degree_;
    std::vector<WilsonGraph> cols_;
    std::map<std::string, int> col_index_;
    int n_relations_ = 0;
    std::vector<int> basis_cols_;          // non-pivot columns, ascending
    std::vector<int> pivot_row_of_col_;    // -1 for basis columns
    // Row-reduced relations: for pivot column c with row r, rref_[r][k] is the
    // coefficient of basis column basis_cols_[k] in the expression of column c.
    std::vector<std::vector<Rational>> rref_;

    void build(const std::vector<WilsonGraph>& tetravalent, bool order_flip);
};

// Formal rational combination of marked classes, keyed by marked canonical code.
// Null marked classes are dropped; a class and its negative merge with sign.
using MarkedVector = std::map<std::string, Rational>;

// ---------------------------------------------------------------------------
// Marked graphs and shuffle products
// ---------------------------------------------------------------------------

// All (n1,n2)-shuffles: permutations sigma of {0..n1+n2-1}, increasing on the first
// n1 labels and on the last n2; sigma[l] is the Wilson position of label l.
std::vector<std::vector<int>> shuffles(int n1, int n2);
// Multi-block generalization (blocks interleaved preserving inner order).
std::vector<std::vector<int>> multi_shuffles(const std::vector<int>& block_sizes);

// Shuffle product of (g1, mark e1) and (g2, mark e2) under sigma from
// shuffles(g1.n_ext(), g2.n_ext()). The result's marking is its Wilson edge N-1
// (the factors are rotated so their markings sit at the end, then interleaved).
WilsonGraph shuffle_product(const WilsonGraph& g1, int e1, const WilsonGraph& g2, int e2,
                            const std::vector<int>& sigma);
// m-fold version; parts given as (graph, marked edge) pairs.
WilsonGraph shuffle_product_multi(const std::vector<std::pair<const WilsonGraph*, int>>& parts,
                                  const std::vector<int>& sigma);

// Marking class representatives of g: Wilson edges 0 .. n/|R|-1 where R is the
// rotation subgroup of Aut.
std::vector<int> marking_classes(const WilsonGraph& g);

// Signed partition count n(gamma | parts): the number of tuples (marking class per
// part, shuffle) whose shuffle product is isomorphic to gamma, each counted with the
// isomorphism sign, divided by the number of marking classes of gamma. parts must
// have degrees summing to deg gamma; gamma must be non-null.
Rational partition_count(const WilsonGraph& gamma, const std::vector<const WilsonGraph*>& parts);

// ---------------------------------------------------------------------------
// The multi-degree algebra
// ---------------------------------------------------------------------------
class Algebra {
public:
    explicit Algebra(int max_degree);

    int max_degree() const { return static_cast<int>(spaces_.size()); }
    const DegreeSpace& space(int degree) const;

    // Connected sum along the Wilson lines (b appended after a).
    static WilsonGraph concat(const WilsonGraph& a, const WilsonGraph& b);

    // Chord-connected pieces of g, cut at external position 0, each with sign +1;
    // first element of the pair is g's own sign. Pieces are ordered by their lowest
    // external position.
    static std::pair<int, std::vector<WilsonGraph>> components(const WilsonGraph& g);

    // Coordinates of the product of two quotient elements (degrees da, db) in the
    // basis of space(da+db).
    std::vector<Rational> multiply(int da, const std::vector<Rational>& a, int db,
                                   const std::vector<Rational>& b) const;
    std::vector<double> multiply(int da, const std::vector<double>& a, int db,
                                 const std::vector<double>& b) const;

    // Projection of the class of g onto a complement of the span of products:
    // the alternating sum over ordered class tuples,
    //   c(g) = sum_m (-1)^(m+1)/m sum_tuples n(g | tuple) * product(tuple),
    // with n from partition_count. Kills products, acts as identity modulo them.
    std::vector<Rational> primitive_projection(const WilsonGraph& g) const;
    // Linear extension to quotient coordinates at one degree.
    std::vector<Rational> primitive_projection(int degree,
                                               const std::vector<Rational>& coords) const;

private:
    std::vector<DegreeSpace> spaces_;  // index d-1 holds degree d
    // cached structure constants: product of basis elements
    mutable std::map<std::tuple<int, int, int, int>, std::vector<Rational>> prod_cache_;

    const std::vector<Rational>& basis_product(int da, int ia, int db, int ib) const;
};

}  // namespace knotcs
