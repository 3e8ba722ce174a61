#include "torpid/approximation.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "pair_scan.hpp"

namespace torpid {

using detail::PairScanner;
using detail::check_pair_guard;

ApproxCheck is_approximation(const BipartiteGraph& g, const VertexSet& a,
                             const ApproximationPair& pair) {
    if (pair.nbr_subset.side != opposite(a.side) ||
        pair.closure_superset.side != a.side)
        throw InvalidInput("approximation pair sides do not match the target");
    VertexSet na = neighbourhood(g, a);
    for (int v : pair.nbr_subset.members)
        if (!na.contains(v)) return {false, 1, Vertex{pair.nbr_subset.side, v}};
    VertexSet closure = external_closure(g, a);
    for (int v : closure.members)
        if (!pair.closure_superset.contains(v))
            return {false, 2, Vertex{a.side, v}};
    double min_degree = g.degree() - pair.slack;
    for (int u : pair.closure_superset.members) {
        int deg = 0;
        for (int w : g.neighbours(a.side, u))
            if (pair.nbr_subset.contains(w)) ++deg;
        if (deg < min_degree) return {false, 3, Vertex{a.side, u}};
    }
    int n_opp = a.side == Side::Even ? g.n_odd() : g.n_even();
    for (int v = 0; v < n_opp; ++v) {
        if (pair.nbr_subset.contains(v)) continue;
        int deg = 0;
        for (int w : g.neighbours(opposite(a.side), v))
            if (!pair.closure_superset.contains(w)) ++deg;
        if (deg < min_degree) return {false, 4, Vertex{opposite(a.side), v}};
    }
    return {};
}

ApproximationPair trivial_approximation(const BipartiteGraph& g,
                                        const VertexSet& a, double slack) {
    if (slack < 0) slack = std::sqrt(static_cast<double>(g.degree()));
    return ApproximationPair{neighbourhood(g, a), external_closure(g, a), slack};
}

PairStats pair_stats(const BipartiteGraph& g, const VertexSet& e_zero,
                     const VertexSet& o_zero) {
    if (e_zero.side != Side::Even || o_zero.side != Side::Odd)
        throw InvalidInput("pair statistics need (even, odd) sides");
    PairStats st;
    st.e_closure = external_closure(g, e_zero).size();
    st.e_nbrs = neighbourhood(g, e_zero).size();
    VertexSet e_core = internal_closure(g, e_zero);
    st.e_core = e_core.size();
    st.e_core_nbrs = neighbourhood(g, e_core).size();
    VertexSet o_core = internal_closure(g, o_zero);
    st.o_core = o_core.size();
    st.o_core_nbrs = neighbourhood(g, o_core).size();
    return st;
}

namespace {

PairStats stats_from_masks(const PairScanner& sc, std::uint64_t emask,
                           std::uint64_t omask) {
    PairStats st;
    st.e_closure = std::popcount(sc.closure_of_even_set(emask));
    st.e_nbrs = std::popcount(sc.nbrs_of_even_set(emask));
    std::uint64_t e_core = sc.core_of_even_set(emask);
    st.e_core = std::popcount(e_core);
    st.e_core_nbrs = std::popcount(sc.nbrs_of_odd_set(e_core));
    std::uint64_t o_core = sc.core_of_odd_set(omask);
    st.o_core = std::popcount(o_core);
    st.o_core_nbrs = std::popcount(sc.nbrs_of_even_set(o_core));
    return st;
}

}  // namespace

std::vector<SetPair> enumerate_stats_class(const BipartiteGraph& g,
                                           const PairStats& stats,
                                           int max_class_size) {
    check_pair_guard(g, max_class_size);
    PairScanner sc(g);
    std::vector<SetPair> out;
    sc.for_each_compatible([&](std::uint64_t emask, std::uint64_t omask) {
        if (stats_from_masks(sc, emask, omask) == stats)
            out.emplace_back(sc.to_set(Side::Even, emask),
                             sc.to_set(Side::Odd, omask));
    });
    return out;
}

std::vector<std::pair<PairStats, long long>> stats_census(
    const BipartiteGraph& g, int max_class_size) {
    check_pair_guard(g, max_class_size);
    PairScanner sc(g);
    std::map<PairStats, long long> census;
    sc.for_each_compatible([&](std::uint64_t emask, std::uint64_t omask) {
        ++census[stats_from_masks(sc, emask, omask)];
    });
    return {census.begin(), census.end()};
}

ZeroSetApproximation trivial_zero_set_approximation(const BipartiteGraph& g,
                                                    const VertexSet& e_zero,
                                                    const VertexSet& o_zero,
                                                    double slack) {
    ZeroSetApproximation approx;
    approx.for_e = trivial_approximation(g, e_zero, slack);
    approx.for_e_core = trivial_approximation(g, internal_closure(g, e_zero), slack);
    approx.for_o_core = trivial_approximation(g, internal_closure(g, o_zero), slack);
    return approx;
}

SizeInequalityReport check_size_inequalities(const ZeroSetApproximation& approx,
                                             const PairStats& stats, int d) {
    double root_d = std::sqrt(static_cast<double>(d));
    auto holds = [&](const ApproximationPair& pair, int slack_param) {
        return pair.closure_superset.size() <=
               pair.nbr_subset.size() + 3.0 * slack_param / root_d;
    };
    SizeInequalityReport report;
    report.e_ok = holds(approx.for_e, stats.closure_slack());
    report.e_core_ok = holds(approx.for_e_core, stats.core_slack());
    report.o_core_ok = holds(approx.for_o_core, stats.o_core_slack());
    return report;
}

bool satisfies_containments(const BipartiteGraph& g,
                            const ZeroSetApproximation& approx,
                            const VertexSet& e_zero, const VertexSet& o_zero) {
    auto subset = [](const VertexSet& inner, const VertexSet& outer) {
        for (int v : inner.members)
            if (!outer.contains(v)) return false;
        return true;
    };
    VertexSet e_core = internal_closure(g, e_zero);
    VertexSet o_core = internal_closure(g, o_zero);
    return subset(approx.for_e.nbr_subset, neighbourhood(g, e_zero)) &&
           subset(external_closure(g, e_zero), approx.for_e.closure_superset) &&
           subset(approx.for_e_core.nbr_subset, neighbourhood(g, e_core)) &&
           subset(e_core, approx.for_e_core.closure_superset) &&
           subset(approx.for_o_core.nbr_subset, neighbourhood(g, o_core)) &&
           subset(o_core, approx.for_o_core.closure_superset);
}

namespace {

// Enumerate submasks of `mask` (including 0 and mask itself).
template <typename F>
void for_each_submask(std::uint64_t mask, F&& f) {
    std::uint64_t sub = mask;
    while (true) {
        f(sub);
        if (sub == 0) break;
        sub = (sub - 1) & mask;
    }
}

template <typename F>
void for_each_submask_of_size(std::uint64_t mask, int size, F&& f) {
    for_each_submask(mask, [&](std::uint64_t sub) {
        if (std::popcount(sub) == size) f(sub);
    });
}

}  // namespace

std::vector<SetPair> reconstruct_candidates(const BipartiteGraph& g,
                                            const ZeroSetApproximation& approx,
                                            const PairStats& stats,
                                            const ReconstructionFlags& flags,
                                            bool strict,
                                            long long max_candidates) {
    check_pair_guard(g, 16);
    PairScanner sc(g);
    std::uint64_t f_mask = sc.to_mask(approx.for_e.nbr_subset);        // odd
    std::uint64_t s_mask = sc.to_mask(approx.for_e.closure_superset);  // even
    std::uint64_t p_mask = sc.to_mask(approx.for_e_core.nbr_subset);   // even
    std::uint64_t q_mask = sc.to_mask(approx.for_e_core.closure_superset);  // odd
    std::uint64_t pp_mask = sc.to_mask(approx.for_o_core.nbr_subset);  // odd
    std::uint64_t qp_mask = sc.to_mask(approx.for_o_core.closure_superset);  // even

    long long generated = 0;
    auto charge = [&] {
        if (++generated > max_candidates)
            throw GuardExceeded("reconstruction exceeded " +
                                std::to_string(max_candidates) + " candidates");
    };

    std::set<std::pair<std::uint64_t, std::uint64_t>> results;

    auto emit = [&](std::uint64_t emask, std::uint64_t omask) {
        charge();
        if (strict) {
            if (sc.nbrs_of_even_set(emask) & omask) return;  // incompatible
            if (!(stats_from_masks(sc, emask, omask) == stats)) return;
        }
        results.emplace(emask, omask);
    };

    // Given a fully specified E, enumerate the O side.
    auto specify_o = [&](std::uint64_t emask) {
        std::uint64_t ne = sc.nbrs_of_even_set(emask);
        if (flags.o_core_tight) {
            // choose J inside Q' with |J| = o_core, then D' = N(J)
            for_each_submask_of_size(qp_mask, stats.o_core, [&](std::uint64_t j) {
                std::uint64_t dp = sc.nbrs_of_even_set(j);  // odd side
                std::uint64_t free = sc.full_odd() & ~ne & ~dp;
                for_each_submask(free, [&](std::uint64_t extra) {
                    emit(emask, dp | extra);
                });
            });
        } else {
            std::uint64_t dp = pp_mask;
            std::uint64_t free = sc.full_odd() & ~ne & ~dp;
            for_each_submask(free, [&](std::uint64_t extra) {
                emit(emask, dp | extra);
            });
        }
    };

    // Complete E from a cheaply specified subset D.
    auto specify_e_from = [&](std::uint64_t d_mask) {
        if (flags.e_tight) {
            for_each_submask(s_mask & ~d_mask, [&](std::uint64_t extra) {
                specify_o(d_mask | extra);
            });
        } else {
            // first pin down N(E) = F u Y with Y inside N(S) \ F, then draw
            // the remainder of E from the implied closure
            std::uint64_t ns = sc.nbrs_of_even_set(s_mask);
            for_each_submask(ns & ~f_mask, [&](std::uint64_t y) {
                std::uint64_t ne_candidate = f_mask | y;
                std::uint64_t closure = 0;
                for (int i = 0; i < sc.ne; ++i)
                    if ((sc.nbr_e[i] & ~ne_candidate) == 0) closure |= 1ull << i;
                for_each_submask(closure & ~d_mask, [&](std::uint64_t extra) {
                    specify_o(d_mask | extra);
                });
            });
        }
    };

    if (flags.e_core_tight) {
        for_each_submask_of_size(q_mask, stats.e_core, [&](std::uint64_t i_mask) {
            specify_e_from(sc.nbrs_of_odd_set(i_mask));
        });
    } else {
        specify_e_from(p_mask);
    }

    std::vector<SetPair> out;
    out.reserve(results.size());
    for (const auto& [emask, omask] : results)
        out.emplace_back(sc.to_set(Side::Even, emask), sc.to_set(Side::Odd, omask));
    return out;
}

namespace {

void write_set_line(std::ostream& out, const VertexSet& s) {
    out << side_char(s.side);
    for (int m : s.members) out << ' ' << m;
    out << '\n';
}

VertexSet read_set_line(std::istream& in, const BipartiteGraph& g, Side want) {
    std::string line;
    while (std::getline(in, line)) {
        auto pos = line.find('#');
        if (pos != std::string::npos) line.erase(pos);
        if (line.find_first_not_of(" \t\r") != std::string::npos) break;
        line.clear();
    }
    std::istringstream row(line);
    char side = 0;
    row >> side;
    if ((side != 'E' && side != 'O') || (side == 'E') != (want == Side::Even))
        throw InvalidInput("fixture line has the wrong side: " + line);
    int n = want == Side::Even ? g.n_even() : g.n_odd();
    std::vector<int> members;
    for (int m; row >> m;) {
        if (m < 0 || m >= n) throw InvalidInput("fixture index out of range");
        members.push_back(m);
    }
    return make_vertex_set(want, std::move(members));
}

}  // namespace

void write_zero_set_approximation(std::ostream& out,
                                  const ZeroSetApproximation& approx) {
    write_set_line(out, approx.for_e.nbr_subset);
    write_set_line(out, approx.for_e.closure_superset);
    write_set_line(out, approx.for_e_core.nbr_subset);
    write_set_line(out, approx.for_e_core.closure_superset);
    write_set_line(out, approx.for_o_core.nbr_subset);
    write_set_line(out, approx.for_o_core.closure_superset);
}

ZeroSetApproximation read_zero_set_approximation(std::istream& in,
                                                 const BipartiteGraph& g,
                                                 double slack) {
    if (slack < 0) slack = std::sqrt(static_cast<double>(g.degree()));
    ZeroSetApproximation approx;
    approx.for_e.nbr_subset = read_set_line(in, g, Side::Odd);
    approx.for_e.closure_superset = read_set_line(in, g, Side::Even);
    approx.for_e.slack = slack;
    approx.for_e_core.nbr_subset = read_set_line(in, g, Side::Even);
    approx.for_e_core.closure_superset = read_set_line(in, g, Side::Odd);
    approx.for_e_core.slack = slack;
    approx.for_o_core.nbr_subset = read_set_line(in, g, Side::Odd);
    approx.for_o_core.closure_superset = read_set_line(in, g, Side::Even);
    approx.for_o_core.slack = slack;
    return approx;
}

}  // namespace torpid
