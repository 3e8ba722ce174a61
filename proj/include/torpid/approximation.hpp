#pragma once

#include <compare>
#include <iosfwd>
#include <vector>

#include "torpid/graph.hpp"
#include "torpid/types.hpp"

namespace torpid {

/// Coarse certificate for a set A within one class: a subset of N(A) plus a
/// superset of [A], tied together by degree-slack conditions. With A on side
/// s, nbr_subset lives on the opposite side and closure_superset on s.
struct ApproximationPair {
    VertexSet nbr_subset;        // contained in N(A)
    VertexSet closure_superset;  // contains [A]
    double slack = 0.0;          // psi; the degree conditions use d - psi
};

struct ApproxCheck {
    bool ok = true;
    int failed_condition = 0;  // 1: F not in N(A); 2: [A] not in S;
                               // 3: d_F(u) < d-psi; 4: d_{C\S}(v) < d-psi
    Vertex witness{Side::Even, -1};
};

/// Validity check, reporting the first violated condition with a witness.
ApproxCheck is_approximation(const BipartiteGraph& g, const VertexSet& a,
                             const ApproximationPair& pair);

/// (N(A), [A]): valid for every A and any slack >= 0.
ApproximationPair trivial_approximation(const BipartiteGraph& g,
                                        const VertexSet& a,
                                        double slack = -1.0);  // -1: sqrt(d)

/// Closure and core statistics of a compatible pair; the invariant class of
/// a pair under the counting machinery.
struct PairStats {
    int e_closure = 0;    // |[E]|
    int e_nbrs = 0;       // |N(E)|
    int e_core = 0;       // |I(E)|
    int e_core_nbrs = 0;  // |N(I(E))|
    int o_core = 0;       // |I(O)|
    int o_core_nbrs = 0;  // |N(I(O))|

    int closure_slack() const { return e_nbrs - e_closure; }
    int core_slack() const { return e_core_nbrs - e_core; }
    int o_core_slack() const { return o_core_nbrs - o_core; }

    friend bool operator==(const PairStats&, const PairStats&) = default;
    friend auto operator<=>(const PairStats&, const PairStats&) = default;
};

PairStats pair_stats(const BipartiteGraph& g, const VertexSet& e_zero,
                     const VertexSet& o_zero);

using SetPair = std::pair<VertexSet, VertexSet>;  // (even set, odd set)

/// All compatible pairs with exactly these statistics (exhaustive scan).
std::vector<SetPair> enumerate_stats_class(const BipartiteGraph& g,
                                           const PairStats& stats,
                                           int max_class_size = 8);

/// Census over all compatible pairs: (stats, multiplicity), stats ascending.
std::vector<std::pair<PairStats, long long>> stats_census(
    const BipartiteGraph& g, int max_class_size = 8);

/// Approximations of E, I(E) and I(O) bundled; approximates the pair (E, O).
struct ZeroSetApproximation {
    ApproximationPair for_e;       // even-side target
    ApproximationPair for_e_core;  // odd-side target I(E)
    ApproximationPair for_o_core;  // even-side target I(O)
};

ZeroSetApproximation trivial_zero_set_approximation(const BipartiteGraph& g,
                                                    const VertexSet& e_zero,
                                                    const VertexSet& o_zero,
                                                    double slack = -1.0);

/// The three size inequalities linking each certificate's parts:
/// |S| <= |F| + 3*slack/sqrt(d) for slacks t, s, s' respectively. They are
/// asymptotic statements, so failures at small d are data, not errors.
struct SizeInequalityReport {
    bool e_ok = true;
    bool e_core_ok = true;
    bool o_core_ok = true;
    bool all() const { return e_ok && e_core_ok && o_core_ok; }
};

SizeInequalityReport check_size_inequalities(const ZeroSetApproximation& approx,
                                             const PairStats& stats, int d);

/// Which branch the reconstruction takes for each certificate component
/// (tight = the superset is close to its minimum possible size).
struct ReconstructionFlags {
    bool e_tight = false;       // branch on for_e.closure_superset
    bool e_core_tight = false;  // branch on for_e_core.closure_superset
    bool o_core_tight = false;  // branch on for_o_core.closure_superset
};

/// Candidate pairs (E, O) generated by the branch-dependent choice procedure.
/// For ANY flag setting the output contains every pair in the stats class
/// satisfying the containment relations
///   F in N(E), S >= [E], P in N(I), Q >= I, P' in N(J), Q' >= J.
/// With strict=true the output is filtered to compatible pairs whose
/// statistics equal `stats`. Guarded by a cap on generated candidates.
std::vector<SetPair> reconstruct_candidates(const BipartiteGraph& g,
                                            const ZeroSetApproximation& approx,
                                            const PairStats& stats,
                                            const ReconstructionFlags& flags,
                                            bool strict = true,
                                            long long max_candidates = 1 << 22);

/// Containment relations above, as a standalone predicate (used to define the
/// brute-force comparison set).
bool satisfies_containments(const BipartiteGraph& g,
                            const ZeroSetApproximation& approx,
                            const VertexSet& e_zero, const VertexSet& o_zero);

// Fixture format: six lines, one vertex set per line as "side idx idx ...",
// in the order F S P Q P' Q' with sides O E E O O E. The slack applies to
// all three pairs (sqrt(d) when negative).
void write_zero_set_approximation(std::ostream& out,
                                  const ZeroSetApproximation& approx);
ZeroSetApproximation read_zero_set_approximation(std::istream& in,
                                                 const BipartiteGraph& g,
                                                 double slack = -1.0);

}  // namespace torpid
