#include "torpid/colouring.hpp"

#include <algorithm>
#include <bit>
#include <istream>
#include <ostream>
#include <sstream>

#include "pair_scan.hpp"

namespace torpid {

bool is_proper(const BipartiteGraph& g, const Colouring& chi) {
    if (static_cast<int>(chi.values.size()) != g.num_vertices()) return false;
    for (auto v : chi.values)
        if (v >= chi.q) return false;
    for (int i = 0; i < g.n_even(); ++i)
        for (int j : g.neighbours(Side::Even, i))
            if (chi.values[i] == chi.values[g.n_even() + j]) return false;
    return true;
}

void for_each_colouring(const BipartiteGraph& g, int q,
                        const std::function<void(const Colouring&)>& visit,
                        int max_vertices) {
    if (q < 1 || q > 200) throw InvalidInput("colour count out of range");
    if (g.num_vertices() > max_vertices)
        throw GuardExceeded("colouring enumeration over " +
                            std::to_string(g.num_vertices()) +
                            " vertices exceeds the cap of " +
                            std::to_string(max_vertices));
    int n = g.num_vertices();
    Colouring chi{q, std::vector<std::uint8_t>(n, 0)};
    // Assign in global-id order; only already-assigned neighbours constrain.
    auto rec = [&](auto&& self, int v) -> void {
        if (v == n) {
            visit(chi);
            return;
        }
        const auto& nb = g.neighbours_global(v);
        int base = v < g.n_even() ? g.n_even() : 0;
        for (int c = 0; c < q; ++c) {
            bool ok = true;
            for (int w : nb) {
                int wg = base + w;
                if (wg < v && chi.values[wg] == c) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                chi.values[v] = static_cast<std::uint8_t>(c);
                self(self, v + 1);
            }
        }
        chi.values[v] = 0;
    };
    rec(rec, 0);
}

std::vector<Colouring> enumerate_colourings(const BipartiteGraph& g, int q,
                                            int max_vertices) {
    std::vector<Colouring> out;
    for_each_colouring(g, q, [&](const Colouring& c) { out.push_back(c); },
                       max_vertices);
    return out;
}

BigInt count_colourings(const BipartiteGraph& g, int q, int max_vertices) {
    BigInt n = 0;
    for_each_colouring(g, q, [&](const Colouring&) { ++n; }, max_vertices);
    return n;
}

ZeroSetPair make_zero_set_pair(const BipartiteGraph& g, const VertexSet& e_zero,
                               const VertexSet& o_zero) {
    if (e_zero.side != Side::Even || o_zero.side != Side::Odd)
        throw InvalidInput("zero-set pair sides must be (even, odd)");
    ZeroSetPair p;
    p.e_zero = e_zero;
    p.o_zero = o_zero;
    VertexSet ne = neighbourhood(g, e_zero);
    p.compatible = true;
    for (int j : o_zero.members)
        if (ne.contains(j)) p.compatible = false;
    p.e_core = internal_closure(g, e_zero);
    p.o_core = internal_closure(g, o_zero);
    std::vector<char> even_used(g.n_even(), 0), odd_used(g.n_odd(), 0);
    for (int i : e_zero.members) even_used[i] = 1;
    for (int i : p.o_core.members) even_used[i] = 1;
    for (int j : o_zero.members) odd_used[j] = 1;
    for (int j : p.e_core.members) odd_used[j] = 1;
    for (int i = 0; i < g.n_even(); ++i)
        if (!even_used[i]) p.rest.even_members.push_back(i);
    for (int j = 0; j < g.n_odd(); ++j)
        if (!odd_used[j]) p.rest.odd_members.push_back(j);
    return p;
}

BigInt count_zero_set(const BipartiteGraph& g, const ZeroSetPair& pair) {
    if (!pair.compatible) return 0;
    int exponent = pair.e_core.size() + pair.o_core.size() +
                   component_count(g, pair.rest);
    return BigInt(1) << exponent;
}

using detail::PairScanner;
using detail::check_pair_guard;

BigInt count_via_decomposition(const BipartiteGraph& g, int max_class_size) {
    check_pair_guard(g, max_class_size);
    PairScanner sc(g);
    std::uint64_t full_e = (1ull << sc.ne) - 1, full_o = (1ull << sc.no) - 1;
    BigInt total = 0;
    sc.for_each_compatible([&](std::uint64_t emask, std::uint64_t omask) {
        std::uint64_t ce = sc.core_of_even_set(emask);
        std::uint64_t co = sc.core_of_odd_set(omask);
        std::uint64_t e_rest = full_e & ~emask & ~co;
        std::uint64_t o_rest = full_o & ~omask & ~ce;
        int exponent = std::popcount(ce) + std::popcount(co) +
                       sc.comp_rest(e_rest, o_rest);
        total += BigInt(1) << exponent;
    });
    return total;
}

char phase_char(Phase p) {
    switch (p) {
        case Phase::EHeavy: return 'E';
        case Phase::OHeavy: return 'O';
        case Phase::Balanced: return 'b';
    }
    return '?';
}

namespace {

std::pair<int, int> colour_counts(const BipartiteGraph& g, const Colouring& chi,
                                  int colour) {
    int ne = 0, no = 0;
    for (int i = 0; i < g.n_even(); ++i)
        if (chi.values[i] == colour) ++ne;
    for (int j = 0; j < g.n_odd(); ++j)
        if (chi.values[g.n_even() + j] == colour) ++no;
    return {ne, no};
}

Phase classify(int diff, int n, const Rational& rho) {
    // E-heavy iff diff > rho*N/2, i.e. 2*diff > rho*N.
    Rational lhs(2 * diff);
    Rational threshold = rho * n;
    if (lhs > threshold) return Phase::EHeavy;
    if (-lhs > threshold) return Phase::OHeavy;
    return Phase::Balanced;
}

}  // namespace

PhaseLabel phase_label(const BipartiteGraph& g, const Colouring& chi,
                       const Rational& rho) {
    if (!is_proper(g, chi)) throw InvalidInput("phase label needs a proper colouring");
    PhaseLabel out{};
    for (int i = 0; i < 3; ++i) {
        auto [ne, no] = colour_counts(g, chi, i);
        out.labels[i] = classify(ne - no, g.num_vertices(), rho);
    }
    return out;
}

Rational imbalance(const BipartiteGraph& g, const Colouring& chi, int colour) {
    if (!is_proper(g, chi)) throw InvalidInput("imbalance needs a proper colouring");
    if (colour < 0 || colour >= chi.q) throw InvalidInput("colour out of range");
    auto [ne, no] = colour_counts(g, chi, colour);
    Rational r = Rational(ne, g.n_even()) - Rational(no, g.n_odd());
    return r < 0 ? -r : r;
}

ClassSizes class_sizes(const BipartiteGraph& g, const Rational& rho,
                       int max_vertices) {
    ClassSizes out{};
    out.total = 0;
    for_each_colouring(
        g, 3,
        [&](const Colouring& chi) {
            ++out.total;
            for (int i = 0; i < 3; ++i) {
                auto [ne, no] = colour_counts(g, chi, i);
                switch (classify(ne - no, g.num_vertices(), rho)) {
                    case Phase::EHeavy: ++out.by_colour[i].e_heavy; break;
                    case Phase::OHeavy: ++out.by_colour[i].o_heavy; break;
                    case Phase::Balanced: ++out.by_colour[i].balanced; break;
                }
            }
        },
        max_vertices);
    return out;
}

ComponentBoundReport verify_component_bound(const BipartiteGraph& g,
                                            int max_class_size) {
    check_pair_guard(g, max_class_size);
    LocalityResult loc = locality(g);
    if (loc.ell <= 0) throw InvalidInput("component bound needs locality > 0");
    ComponentBoundReport report;
    report.bound = Rational(g.num_vertices(), loc.ell);  // 2M = N
    PairScanner sc(g);
    std::uint64_t full_e = (1ull << sc.ne) - 1, full_o = (1ull << sc.no) - 1;
    std::uint64_t best_e = 0, best_o = 0;
    sc.for_each_compatible([&](std::uint64_t emask, std::uint64_t omask) {
        std::uint64_t ce = sc.core_of_even_set(emask);
        std::uint64_t co = sc.core_of_odd_set(omask);
        int comps = sc.comp_rest(full_e & ~emask & ~co, full_o & ~omask & ~ce);
        if (comps > report.max_components) {
            report.max_components = comps;
            best_e = emask;
            best_o = omask;
        }
    });
    report.holds = Rational(report.max_components) <= report.bound;
    report.witness = make_zero_set_pair(g, sc.to_set(Side::Even, best_e),
                                        sc.to_set(Side::Odd, best_o));
    return report;
}

void write_colouring(std::ostream& out, const BipartiteGraph& g,
                     const Colouring& chi) {
    for (int i = 0; i < g.n_even(); ++i)
        out << "E " << i << ' ' << static_cast<int>(chi.values[i]) << '\n';
    for (int j = 0; j < g.n_odd(); ++j)
        out << "O " << j << ' '
            << static_cast<int>(chi.values[g.n_even() + j]) << '\n';
}

Colouring read_colouring(std::istream& in, const BipartiteGraph& g, int q) {
    Colouring chi{q, std::vector<std::uint8_t>(g.num_vertices(), 0)};
    std::vector<char> seen(g.num_vertices(), 0);
    std::string line;
    while (std::getline(in, line)) {
        auto pos = line.find('#');
        if (pos != std::string::npos) line.erase(pos);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream row(line);
        char side;
        int idx, colour;
        row >> side >> idx >> colour;
        if (row.fail() || (side != 'E' && side != 'O'))
            throw InvalidInput("bad colouring line: " + line);
        Side s = side == 'E' ? Side::Even : Side::Odd;
        int n = s == Side::Even ? g.n_even() : g.n_odd();
        if (idx < 0 || idx >= n || colour < 0 || colour >= q)
            throw InvalidInput("colouring entry out of range: " + line);
        int gid = g.global_id(s, idx);
        if (seen[gid]) throw InvalidInput("duplicate colouring entry: " + line);
        seen[gid] = 1;
        chi.values[gid] = static_cast<std::uint8_t>(colour);
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end())
        throw InvalidInput("colouring file does not cover every vertex");
    return chi;
}

void write_class_sizes_csv(std::ostream& out, const ClassSizes& sizes) {
    out << "colour,balanced,e_heavy,o_heavy\n";
    for (int i = 0; i < 3; ++i)
        out << i << ',' << sizes.by_colour[i].balanced << ','
            << sizes.by_colour[i].e_heavy << ',' << sizes.by_colour[i].o_heavy
            << '\n';
}

}  // namespace torpid
