#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <vector>

#include "torpid/colouring.hpp"
#include "torpid/graph.hpp"

namespace torpid {

/// Integer-valued graph homomorphism to Z: pinned to 0 at the root, adjacent
/// values differ by exactly 1. Values are indexed by global vertex id.
struct HeightFunction {
    int root = 0;  // global id
    std::vector<int> values;

    friend bool operator==(const HeightFunction&, const HeightFunction&) = default;
};

bool is_valid_height_function(const BipartiteGraph& g, const HeightFunction& f);

/// Number of distinct values taken.
int range_size(const HeightFunction& f);

/// chi(v) = f(v) mod 3. Always a proper 3-colouring with chi(root) = 0.
Colouring to_colouring(const BipartiteGraph& g, const HeightFunction& f);

/// The level-by-level construction needs: any two vertices at distance k from
/// the root with a common neighbour at distance k+1 also have a common
/// neighbour at distance k-1. Returns a violating triple (a, b, upper) if the
/// property fails; requires a connected graph.
std::optional<std::array<Vertex, 3>> check_level_structure(
    const BipartiteGraph& g, int root);

/// Inverse of to_colouring: the unique height function with the given image.
/// Preconditions: chi proper with chi(root) = 0, and the level structure
/// holds (otherwise StructuralFailure with the witness triple).
HeightFunction to_height_function(const BipartiteGraph& g, const Colouring& chi,
                                  int root);

/// Exhaustive enumeration of all height functions pinned at the root,
/// extending level by level. Independent of to_height_function.
std::vector<HeightFunction> enumerate_height_functions(const BipartiteGraph& g,
                                                       int root,
                                                       int max_vertices = 32);

/// Pull one extreme level in by two: lowers the largest strictly positive
/// value if one exists, otherwise raises the minimum. Among candidates the
/// lowest global id is chosen, so paths are deterministic. Requires
/// range_size > 2.
HeightFunction reduction_step(const BipartiteGraph& g, const HeightFunction& f);

struct PathMove {
    Vertex vertex;
    int old_colour;
    int new_colour;
};

/// A sequence of single-vertex recolourings (each a legal chain move) from
/// chi down to a 2-colouring constant on each class.
struct ErgodicityPath {
    std::vector<Colouring> states;  // states.front() == chi
    std::vector<PathMove> moves;    // states.size() == moves.size() + 1
};

ErgodicityPath ergodicity_path(const BipartiteGraph& g, const Colouring& chi,
                               int root);

/// The frozen 4-colouring of the 3-cube: seed colours 0..3 on a vertex and
/// its neighbours, extended by the rule that every face shows all four
/// colours. No single-site recolouring applies to the result.
Colouring frozen_four_colouring(const BipartiteGraph& q3);

/// No single-vertex recolouring yields a different proper colouring.
bool is_frozen(const BipartiteGraph& g, const Colouring& chi);

// Text format: one line per vertex, "side index value".
void write_height_function(std::ostream& out, const BipartiteGraph& g,
                           const HeightFunction& f);

/// Moves as lines "side index old_colour new_colour".
void write_path_moves(std::ostream& out, const ErgodicityPath& path);

}  // namespace torpid
