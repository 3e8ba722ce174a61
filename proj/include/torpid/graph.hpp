#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "torpid/types.hpp"

namespace torpid {

/// A d-regular bipartite graph with explicit partition classes.
///
/// Vertices are addressed as (side, index) with index local to the class.
/// Global ids run even class first: even i -> i, odd j -> n_even + j.
/// Immutable after construction; every operation here is a pure function.
class BipartiteGraph {
public:
    BipartiteGraph(int n_even, int n_odd, int degree,
                   std::vector<std::vector<int>> adj_even);

    int n_even() const { return n_even_; }
    int n_odd() const { return n_odd_; }
    int degree() const { return degree_; }
    int num_vertices() const { return n_even_ + n_odd_; }  // N
    int half_vertices() const { return num_vertices() / 2; }  // M
    long long num_edges() const {
        return static_cast<long long>(n_even_) * degree_;
    }

    const std::vector<int>& neighbours(Side side, int index) const;
    const std::vector<int>& neighbours_global(int v) const;

    int global_id(Side side, int index) const {
        return side == Side::Even ? index : n_even_ + index;
    }
    Vertex vertex_of(int global) const {
        return global < n_even_ ? Vertex{Side::Even, global}
                                : Vertex{Side::Odd, global - n_even_};
    }

private:
    int n_even_;
    int n_odd_;
    int degree_;
    std::vector<std::vector<int>> adj_even_;  // adj_even_[i] = odd indices
    std::vector<std::vector<int>> adj_odd_;   // adj_odd_[j]  = even indices
};

// Constructors for the graph families used throughout.

/// d-dimensional hypercube on bit strings; the even class holds the strings of
/// even popcount. Class index = rank of the string's integer value within its
/// class (ascending).
BipartiteGraph build_hypercube(int d);

/// Cycle on n vertices (n even, n >= 4), vertex v even/odd by parity,
/// class index v/2 resp. (v-1)/2.
BipartiteGraph build_even_cycle(int n);

/// Complete d-regular bipartite graph K_{d,d}.
BipartiteGraph build_complete_bipartite(int d);

/// Discrete torus on {0..L-1}^d, L >= 4 even; strings adjacent when they
/// differ by 1 (mod L) on exactly one coordinate. Degree 2d.
BipartiteGraph build_torus(int L, int d);

/// Union of d uniformly random perfect matchings, rejecting multigraphs.
/// Throws InvalidInput after max_attempts rejections.
BipartiteGraph build_random_regular(int n_even, int d, std::uint64_t seed,
                                    int max_attempts = 1000);

// Hypercube labelling helpers (for mapping bit strings to class indices).
std::vector<int> hypercube_class_bits(int d, Side side);
Vertex hypercube_vertex(int d, int bits);

// Structural operations.

/// N(A): union of the members' neighbourhoods, on the opposite side.
VertexSet neighbourhood(const BipartiteGraph& g, const VertexSet& a);

/// [A] = {x on A's side : N(x) subseteq N(A)}. Always contains A.
VertexSet external_closure(const BipartiteGraph& g, const VertexSet& a);

/// I(T) = {x in N(T) : N(x) subseteq T}, on the side opposite T.
VertexSet internal_closure(const BipartiteGraph& g, const VertexSet& t);

/// |[A]| <= N/4.
bool is_small(const BipartiteGraph& g, const VertexSet& a);

struct ExpansionResult {
    Rational delta;
    bool vacuous = false;    // no small nonempty subset exists
    VertexSet witness;       // a minimiser (empty when vacuous)
};

/// Exact bipartite expansion: min over small nonempty A within one class of
/// (|N(A)| - |[A]|) / |N(A)|. Exhaustive over both classes; throws
/// GuardExceeded when a class exceeds max_class_size.
ExpansionResult bipartite_expansion(const BipartiteGraph& g,
                                    int max_class_size = 20);

struct LocalityResult {
    int ell;
    Vertex edge_even;  // an edge attaining the extreme independent set
    Vertex edge_odd;
    int max_independent;  // = 2d - ell
};

/// Locality: 2d minus the largest independent set inside N(x) u N(y), worst
/// case over edges xy. Exact via Koenig's theorem (the induced subgraph is
/// bipartite, so independence number = vertices - maximum matching).
LocalityResult locality(const BipartiteGraph& g);

/// Number of connected components of the subgraph induced by the subset.
int component_count(const BipartiteGraph& g, const VertexSubset& s);

/// Maximum matching size of the subgraph induced by the subset
/// (augmenting-path search).
int maximum_matching_size(const BipartiteGraph& g, const VertexSubset& s);

/// Exact independence number of the induced subgraph, via Koenig.
int max_independent_set_size(const BipartiteGraph& g, const VertexSubset& s);

/// True for every valid construction; exposed as a sanity check.
bool has_perfect_matching(const BipartiteGraph& g);

/// All members of one class, as a VertexSet.
VertexSet whole_class(const BipartiteGraph& g, Side side);

/// The whole vertex set as a VertexSubset.
VertexSubset whole_graph(const BipartiteGraph& g);

// Text format: "bipartite <n_even> <n_odd> <d>" then one "u v" line per edge.
// Blank lines and '#' comments are ignored. The loader re-validates
// regularity, simplicity and the perfect-matching sanity check.
void write_graph(std::ostream& out, const BipartiteGraph& g);
BipartiteGraph read_graph(std::istream& in);

}  // namespace torpid
