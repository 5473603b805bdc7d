#include "knotcs/diagram_algebra.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "knotcs/enumeration.hpp"

namespace knotcs {

// ---------------------------------------------------------------------------
// DegreeSpace
// ---------------------------------------------------------------------------

DegreeSpace::DegreeSpace(int degree, bool order_flip) : degree_(degree) {
    for (const auto& g : trivalent_classes(degree))
        if (!g.aut_info().null_class()) {
            col_index_.emplace(g.canonical().key(), static_cast<int>(cols_.size()));
            cols_.push_back(g);
        }
    build(tetravalent_classes(degree), order_flip);
}

std::string DegreeSpace::column_label(int c) const {
    const WilsonGraph& g = cols_.at(c);
    std::ostringstream os;
    os << "n" << g.n_ext() << "t" << g.n_int() << "[";
    for (std::size_t e = 0; e < g.chords().size(); ++e) {
        if (e) os << " ";
        os << g.chords()[e].first << "-" << g.chords()[e].second;
    }
    os << "]";
    return os.str();
}

std::pair<int, int> DegreeSpace::column_of(const WilsonGraph& g) const {
    if (!g.is_trivalent()) throw std::invalid_argument("column_of: graph is not trivalent");
    if (g.degree() != degree_) throw std::invalid_argument("column_of: degree mismatch");
    if (g.has_chord_loop() || g.aut_info().null_class()) return {-1, 0};
    auto it = col_index_.find(g.canonical().key());
    if (it == col_index_.end())
        throw std::logic_error("column_of: class missing from enumeration");
    return {it->second, g.canonical().sign};
}

void DegreeSpace::build(const std::vector<WilsonGraph>& tetravalent, bool order_flip) {
    const int C = static_cast<int>(cols_.size());
    std::vector<std::vector<Rational>> rows;
    for (const auto& h : tetravalent) {
        std::vector<Rational> row(C, Rational(0));
        bool nonzero = false;
        for (const auto& l : h.lifts()) {
            auto [c, s] = column_of(l.graph);
            if (c < 0) continue;
            row[c] += s;
        }
        for (const auto& x : row)
            if (x != 0) {
                nonzero = true;
                break;
            }
        if (nonzero) rows.push_back(std::move(row));
    }
    n_relations_ = static_cast<int>(rows.size());

    // Gaussian elimination over the chosen column order.
    std::vector<int> order(C);
    std::iota(order.begin(), order.end(), 0);
    if (order_flip) std::reverse(order.begin(), order.end());

    pivot_row_of_col_.assign(C, -1);
    std::size_t next_row = 0;
    for (int c : order) {
        std::size_t pr = next_row;
        while (pr < rows.size() && rows[pr][c] == 0) ++pr;
        if (pr == rows.size()) continue;
        std::swap(rows[next_row], rows[pr]);
        Rational inv = rows[next_row][c];
        for (auto& x : rows[next_row]) x /= inv;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == next_row || rows[r][c] == 0) continue;
            Rational f = rows[r][c];
            for (int k = 0; k < C; ++k) rows[r][k] -= f * rows[next_row][k];
        }
        pivot_row_of_col_[c] = static_cast<int>(next_row);
        ++next_row;
    }

    for (int c = 0; c < C; ++c)
        if (pivot_row_of_col_[c] < 0) basis_cols_.push_back(c);

    // Store each pivot row restricted to the basis columns.
    rref_.assign(next_row, std::vector<Rational>(basis_cols_.size(), Rational(0)));
    for (int c = 0; c < C; ++c) {
        int r = pivot_row_of_col_[c];
        if (r < 0) continue;
        for (std::size_t k = 0; k < basis_cols_.size(); ++k)
            rref_[r][k] = rows[r][basis_cols_[k]];
    }
}

std::vector<Rational> DegreeSpace::reduce(std::vector<Rational> v) const {
    if (static_cast<int>(v.size()) != static_cast<int>(cols_.size()))
        throw std::invalid_argument("reduce: wrong vector length");
    std::vector<Rational> out(basis_cols_.size(), Rational(0));
    for (std::size_t k = 0; k < basis_cols_.size(); ++k) out[k] = v[basis_cols_[k]];
    for (std::size_t c = 0; c < v.size(); ++c) {
        int r = pivot_row_of_col_[c];
        if (r < 0 || v[c] == 0) continue;
        for (std::size_t k = 0; k < basis_cols_.size(); ++k) out[k] -= v[c] * rref_[r][k];
    }
    return out;
}

std::vector<Rational> DegreeSpace::reduce_graph(const WilsonGraph& g) const {
    std::vector<Rational> v(cols_.size(), Rational(0));
    auto [c, s] = column_of(g);
    if (c >= 0) v[c] = s;
    return reduce(std::move(v));
}

// ---------------------------------------------------------------------------
// Shuffles and marked products
// ---------------------------------------------------------------------------

std::vector<std::vector<int>> shuffles(int n1, int n2) {
    return multi_shuffles({n1, n2});
}

std::vector<std::vector<int>> multi_shuffles(const std::vector<int>& block_sizes) {
    int total = std::accumulate(block_sizes.begin(), block_sizes.end(), 0);
    std::vector<std::vector<int>> out;
    std::vector<int> seq;  // block id at each position
    std::vector<int> left = block_sizes;
    auto rec = [&](auto&& self) -> void {
        if (static_cast<int>(seq.size()) == total) {
            std::vector<int> sigma(total);
            std::vector<int> base(block_sizes.size(), 0);
            for (std::size_t b = 1; b < block_sizes.size(); ++b)
                base[b] = base[b - 1] + block_sizes[b - 1];
            std::vector<int> taken(block_sizes.size(), 0);
            for (int pos = 0; pos < total; ++pos) {
                int b = seq[pos];
                sigma[base[b] + taken[b]++] = pos;
            }
            out.push_back(std::move(sigma));
            return;
        }
        for (std::size_t b = 0; b < block_sizes.size(); ++b) {
            if (left[b] == 0) continue;
            left[b]--;
            seq.push_back(static_cast<int>(b));
            self(self);
            seq.pop_back();
            left[b]++;
        }
    };
    rec(rec);
    return out;
}

WilsonGraph shuffle_product_multi(
    const std::vector<std::pair<const WilsonGraph*, int>>& parts,
    const std::vector<int>& sigma) {
    int N = 0, T = 0;
    std::vector<WilsonGraph> rot;
    rot.reserve(parts.size());
    for (auto [gp, e] : parts) {
        rot.push_back(gp->rotated((e + 1) % gp->n_ext()));
        N += gp->n_ext();
        T += gp->n_int();
    }
    if (static_cast<int>(sigma.size()) != N)
        throw std::invalid_argument("shuffle_product: sigma length mismatch");

    std::vector<std::pair<int, int>> chords;
    std::vector<std::vector<Dart>> ord(N + T);
    int base_label = 0, base_internal = 0, base_edge = 0, sign = 1;
    for (const auto& g : rot) {
        int n = g.n_ext(), t = g.n_int();
        auto relabel = [&](int v) {
            return v < n ? sigma[base_label + v] : N + base_internal + (v - n);
        };
        for (auto [a, b] : g.chords()) chords.emplace_back(relabel(a), relabel(b));
        for (int v = 0; v < n + t; ++v) {
            auto row = g.vertex_orders()[v];
            for (auto& d : row) d.edge += base_edge;
            ord[relabel(v)] = std::move(row);
        }
        sign *= g.sign();
        base_label += n;
        base_internal += t;
        base_edge += static_cast<int>(g.chords().size());
    }
    return WilsonGraph(N, T, std::move(chords), std::move(ord), sign);
}

WilsonGraph shuffle_product(const WilsonGraph& g1, int e1, const WilsonGraph& g2, int e2,
                            const std::vector<int>& sigma) {
    return shuffle_product_multi({{&g1, e1}, {&g2, e2}}, sigma);
}

std::vector<int> marking_classes(const WilsonGraph& g) {
    auto R = g.aut_rotations();
    int reps = g.n_ext() / static_cast<int>(R.size());
    std::vector<int> out(reps);
    std::iota(out.begin(), out.end(), 0);
    return out;
}

Rational partition_count(const WilsonGraph& gamma,
                         const std::vector<const WilsonGraph*>& parts) {
    int dsum = 0;
    for (auto* p : parts) dsum += p->degree();
    if (dsum != gamma.degree())
        throw std::invalid_argument("partition_count: degrees do not add up");
    if (gamma.aut_info().null_class())
        throw std::invalid_argument("partition_count: gamma must be non-null");

    const std::string key = gamma.canonical().key();
    const int gsign = gamma.canonical().sign;

    std::vector<int> blocks;
    std::vector<std::vector<int>> marks;
    for (auto* p : parts) {
        blocks.push_back(p->n_ext());
        marks.push_back(marking_classes(*p));
    }
    auto sigmas = multi_shuffles(blocks);

    long total = 0;
    std::vector<std::pair<const WilsonGraph*, int>> tuple(parts.size());
    auto rec = [&](auto&& self, std::size_t i) -> void {
        if (i == parts.size()) {
            for (const auto& sigma : sigmas) {
                WilsonGraph prod = shuffle_product_multi(tuple, sigma);
                const auto& cf = prod.canonical();
                if (cf.key() == key) total += cf.sign * gsign;
            }
            return;
        }
        for (int e : marks[i]) {
            tuple[i] = {parts[i], e};
            self(self, i + 1);
        }
    };
    rec(rec, 0);

    int mg = static_cast<int>(marking_classes(gamma).size());
    return Rational(total) / mg;
}

// ---------------------------------------------------------------------------
// Algebra
// ---------------------------------------------------------------------------

Algebra::Algebra(int max_degree) {
    if (max_degree < 1 || max_degree > k_enumeration_degree_cap)
        throw std::invalid_argument("Algebra: max_degree out of range");
    spaces_.reserve(max_degree);
    for (int d = 1; d <= max_degree; ++d) spaces_.emplace_back(d);
}

const DegreeSpace& Algebra::space(int degree) const {
    if (degree < 1 || degree > max_degree())
        throw std::invalid_argument("Algebra: degree out of range");
    return spaces_[degree - 1];
}

WilsonGraph Algebra::concat(const WilsonGraph& a, const WilsonGraph& b) {
    std::vector<int> sigma(a.n_ext() + b.n_ext());
    std::iota(sigma.begin(), sigma.end(), 0);
    return shuffle_product(a, a.n_ext() - 1, b, b.n_ext() - 1, sigma);
}

std::pair<int, std::vector<WilsonGraph>> Algebra::components(const WilsonGraph& g) {
    int V = g.num_vertices();
    std::vector<int> comp(V, -1);
    int nc = 0;
    for (int v0 = 0; v0 < V; ++v0) {
        if (comp[v0] >= 0) continue;
        comp[v0] = nc;
        std::vector<int> stack{v0};
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (auto [a, b] : g.chords()) {
                int w = -1;
                if (a == v) w = b;
                else if (b == v) w = a;
                if (w >= 0 && comp[w] < 0) {
                    comp[w] = nc;
                    stack.push_back(w);
                }
            }
        }
        ++nc;
    }
    // Order pieces by their lowest external position.
    std::vector<int> firstpos(nc, -1);
    std::vector<int> order;
    for (int v = 0; v < g.n_ext(); ++v)
        if (firstpos[comp[v]] < 0) {
            firstpos[comp[v]] = v;
            order.push_back(comp[v]);
        }
    if (static_cast<int>(order.size()) != nc)
        throw std::invalid_argument("components: piece without external vertex");

    std::vector<WilsonGraph> out;
    for (int piece : order) {
        // Externals of the piece in inherited order, internals after them.
        std::vector<int> verts;
        for (int v = 0; v < g.n_ext(); ++v)
            if (comp[v] == piece) verts.push_back(v);
        int pn = static_cast<int>(verts.size());
        for (int v = g.n_ext(); v < V; ++v)
            if (comp[v] == piece) verts.push_back(v);
        std::vector<int> newlab(V, -1);
        for (std::size_t i = 0; i < verts.size(); ++i) newlab[verts[i]] = static_cast<int>(i);

        std::vector<std::pair<int, int>> chords;
        std::vector<int> edgemap(g.chords().size(), -1);
        for (std::size_t e = 0; e < g.chords().size(); ++e) {
            auto [a, b] = g.chords()[e];
            if (comp[a] != piece) continue;
            edgemap[e] = static_cast<int>(chords.size());
            chords.emplace_back(newlab[a], newlab[b]);
        }
        std::vector<std::vector<Dart>> ord(verts.size());
        for (int v : verts) {
            auto row = g.vertex_orders()[v];
            for (auto& d : row) d.edge = edgemap[d.edge];
            ord[newlab[v]] = std::move(row);
        }
        out.emplace_back(pn, static_cast<int>(verts.size()) - pn, std::move(chords),
                         std::move(ord), +1);
    }
    return {g.sign(), std::move(out)};
}

const std::vector<Rational>& Algebra::basis_product(int da, int ia, int db, int ib) const {
    auto key = std::make_tuple(da, ia, db, ib);
    auto it = prod_cache_.find(key);
    if (it != prod_cache_.end()) return it->second;
    const auto& sa = space(da);
    const auto& sb = space(db);
    WilsonGraph prod = concat(sa.columns()[sa.basis_columns()[ia]],
                              sb.columns()[sb.basis_columns()[ib]]);
    auto red = space(da + db).reduce_graph(prod);
    return prod_cache_.emplace(key, std::move(red)).first->second;
}

std::vector<Rational> Algebra::multiply(int da, const std::vector<Rational>& a, int db,
                                        const std::vector<Rational>& b) const {
    const auto& target = space(da + db);
    std::vector<Rational> out(target.dimension(), Rational(0));
    for (int i = 0; i < space(da).dimension(); ++i) {
        if (a[i] == 0) continue;
        for (int j = 0; j < space(db).dimension(); ++j) {
            if (b[j] == 0) continue;
            const auto& pr = basis_product(da, i, db, j);
            Rational f = a[i] * b[j];
            for (std::size_t k = 0; k < pr.size(); ++k) out[k] += f * pr[k];
        }
    }
    return out;
}

std::vector<double> Algebra::multiply(int da, const std::vector<double>& a, int db,
                                      const std::vector<double>& b) const {
    const auto& target = space(da + db);
    std::vector<double> out(target.dimension(), 0.0);
    for (int i = 0; i < space(da).dimension(); ++i) {
        if (a[i] == 0) continue;
        for (int j = 0; j < space(db).dimension(); ++j) {
            if (b[j] == 0) continue;
            const auto& pr = basis_product(da, i, db, j);
            double f = a[i] * b[j];
            for (std::size_t k = 0; k < pr.size(); ++k) out[k] += f * to_double(pr[k]);
        }
    }
    return out;
}

std::vector<Rational> Algebra::primitive_projection(const WilsonGraph& g) const {
    int d = g.degree();
    const auto& target = space(d);
    std::vector<Rational> out(target.dimension(), Rational(0));
    auto [col, sgn] = target.column_of(g);
    if (col < 0) return out;
    WilsonGraph rep = target.columns()[col];

    // Partition sum over ordered tuples of non-null classes with degrees summing
    // to d; the m-th layer carries (-1)^(m+1)/m.
    std::vector<const WilsonGraph*> tuple;
    auto add_term = [&](const Rational& coeff) {
        // coeff * n(rep | tuple) * [product of tuple classes]
        Rational nv = partition_count(rep, tuple);
        if (nv == 0) return;
        WilsonGraph prod = *tuple[0];
        for (std::size_t i = 1; i < tuple.size(); ++i) prod = concat(prod, *tuple[i]);
        auto red = target.reduce_graph(prod);
        for (std::size_t k = 0; k < red.size(); ++k) out[k] += coeff * nv * red[k];
    };
    auto rec = [&](auto&& self, int remaining) -> void {
        if (remaining == 0) {
            int m = static_cast<int>(tuple.size());
            Rational coeff = Rational((m % 2) ? 1 : -1) / m;
            add_term(coeff);
            return;
        }
        for (int dd = 1; dd <= remaining; ++dd) {
            for (const auto& cls : space(dd).columns()) {
                tuple.push_back(&cls);
                self(self, remaining - dd);
                tuple.pop_back();
            }
        }
    };
    rec(rec, d);
    if (sgn < 0)
        for (auto& x : out) x = -x;
    return out;
}

std::vector<Rational> Algebra::primitive_projection(int degree,
                                                    const std::vector<Rational>& coords) const {
    const auto& sp = space(degree);
    std::vector<Rational> out(sp.dimension(), Rational(0));
    for (int k = 0; k < sp.dimension(); ++k) {
        if (coords[k] == 0) continue;
        auto pk = primitive_projection(sp.columns()[sp.basis_columns()[k]]);
        for (std::size_t j = 0; j < pk.size(); ++j) out[j] += coords[k] * pk[j];
    }
    return out;
}

}  // namespace knotcs
