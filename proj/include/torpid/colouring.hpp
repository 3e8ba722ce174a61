#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "torpid/graph.hpp"
#include "torpid/types.hpp"

namespace torpid {

/// Total colour assignment over global vertex ids (even class first).
/// Properness is checked by operations, never assumed.
struct Colouring {
    int q = 3;
    std::vector<std::uint8_t> values;

    int at(const BipartiteGraph& g, Side side, int index) const {
        return values[g.global_id(side, index)];
    }

    friend bool operator==(const Colouring&, const Colouring&) = default;
    friend auto operator<=>(const Colouring&, const Colouring&) = default;
};

bool is_proper(const BipartiteGraph& g, const Colouring& chi);

/// Visit every proper q-colouring exactly once, in lexicographic order of the
/// value string (even class by index, then odd class by index). Backtracking
/// over that vertex order. Throws GuardExceeded past max_vertices.
void for_each_colouring(const BipartiteGraph& g, int q,
                        const std::function<void(const Colouring&)>& visit,
                        int max_vertices = 32);

std::vector<Colouring> enumerate_colourings(const BipartiteGraph& g, int q,
                                            int max_vertices = 32);

/// |C_q| by the same backtracking walk, without materialising states.
BigInt count_colourings(const BipartiteGraph& g, int q, int max_vertices = 32);

/// A candidate zero-colour set (one subset per class) plus everything the
/// counting identity needs: the cores I(E), I(O), the remainder region and
/// whether the pair spans an edge.
struct ZeroSetPair {
    VertexSet e_zero;   // even-side preimage of colour 0
    VertexSet o_zero;   // odd-side preimage of colour 0
    VertexSet e_core;   // I(e_zero): odd vertices with all neighbours in e_zero
    VertexSet o_core;   // I(o_zero): even vertices with all neighbours in o_zero
    VertexSubset rest;  // everything else
    bool compatible = false;  // no edge joins e_zero and o_zero
};

ZeroSetPair make_zero_set_pair(const BipartiteGraph& g, const VertexSet& e_zero,
                               const VertexSet& o_zero);

/// Number of proper 3-colourings whose preimage of 0 is exactly
/// e_zero u o_zero: 0 when incompatible, else
/// 2^(|I(E)| + |I(O)| + comp(rest)).
BigInt count_zero_set(const BipartiteGraph& g, const ZeroSetPair& pair);

/// Sum of count_zero_set over all compatible pairs; equals |C_3|.
/// Guarded on the class size (the scan is 4^n in the worst case).
BigInt count_via_decomposition(const BipartiteGraph& g, int max_class_size = 8);

enum class Phase : std::uint8_t { EHeavy, OHeavy, Balanced };

char phase_char(Phase p);

/// Per-colour balance labels at threshold rho: colour i is E-heavy when
/// |chi^-1(i) n E| > |chi^-1(i) n O| + rho*N/2, O-heavy symmetrically,
/// balanced otherwise. Comparisons are exact rationals.
struct PhaseLabel {
    std::array<Phase, 3> labels;

    /// No colour balanced (the chain's long-lived region).
    bool heavy_on_all() const {
        for (Phase p : labels)
            if (p == Phase::Balanced) return false;
        return true;
    }
};

PhaseLabel phase_label(const BipartiteGraph& g, const Colouring& chi,
                       const Rational& rho);

/// | |chi^-1(i) n E| / |E|  -  |chi^-1(i) n O| / |O| |, exact.
Rational imbalance(const BipartiteGraph& g, const Colouring& chi, int colour);

/// Exact per-colour class sizes at threshold rho (q = 3).
struct ClassSizes {
    struct Row {
        BigInt balanced, e_heavy, o_heavy;
    };
    std::array<Row, 3> by_colour;
    BigInt total;
};

ClassSizes class_sizes(const BipartiteGraph& g, const Rational& rho,
                       int max_vertices = 32);

/// Exhaustive check of comp(rest) <= 2M/ell over every compatible pair.
struct ComponentBoundReport {
    int max_components = 0;
    Rational bound;         // 2M / ell
    bool holds = true;
    ZeroSetPair witness;    // a pair attaining max_components
};

ComponentBoundReport verify_component_bound(const BipartiteGraph& g,
                                            int max_class_size = 8);

// Text format: one line per vertex, "side index colour".
void write_colouring(std::ostream& out, const BipartiteGraph& g,
                     const Colouring& chi);
Colouring read_colouring(std::istream& in, const BipartiteGraph& g, int q);

/// CSV with columns colour,balanced,e_heavy,o_heavy.
void write_class_sizes_csv(std::ostream& out, const ClassSizes& sizes);

}  // namespace torpid
