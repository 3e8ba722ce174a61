#include "torpid/graph.hpp"

#include <algorithm>
#include <bit>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <string>

namespace torpid {

namespace {

void check_vertex_set(const BipartiteGraph& g, const VertexSet& a) {
    int n = a.side == Side::Even ? g.n_even() : g.n_odd();
    for (std::size_t i = 0; i < a.members.size(); ++i) {
        int m = a.members[i];
        if (m < 0 || m >= n) throw InvalidInput("vertex index out of range");
        if (i > 0 && a.members[i - 1] >= m)
            throw InvalidInput("vertex set not sorted/unique");
    }
}

void check_subset(const BipartiteGraph& g, const VertexSubset& s) {
    check_vertex_set(g, VertexSet{Side::Even, s.even_members});
    check_vertex_set(g, VertexSet{Side::Odd, s.odd_members});
}

}  // namespace

BipartiteGraph::BipartiteGraph(int n_even, int n_odd, int degree,
                               std::vector<std::vector<int>> adj_even)
    : n_even_(n_even), n_odd_(n_odd), degree_(degree),
      adj_even_(std::move(adj_even)), adj_odd_(n_odd) {
    if (n_even <= 0 || n_odd <= 0 || degree <= 0)
        throw InvalidInput("graph dimensions must be positive");
    if (n_even != n_odd)
        throw InvalidInput("a d-regular bipartite graph needs equal classes");
    if (static_cast<int>(adj_even_.size()) != n_even)
        throw InvalidInput("adjacency size mismatch");
    for (int i = 0; i < n_even; ++i) {
        auto& row = adj_even_[i];
        if (static_cast<int>(row.size()) != degree)
            throw InvalidInput("even vertex " + std::to_string(i) +
                               " has degree " + std::to_string(row.size()));
        std::sort(row.begin(), row.end());
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (row[k] < 0 || row[k] >= n_odd)
                throw InvalidInput("edge endpoint out of range");
            if (k > 0 && row[k] == row[k - 1])
                throw InvalidInput("parallel edge at even vertex " +
                                   std::to_string(i));
        }
        for (int j : row) adj_odd_[j].push_back(i);
    }
    for (int j = 0; j < n_odd; ++j) {
        if (static_cast<int>(adj_odd_[j].size()) != degree)
            throw InvalidInput("odd vertex " + std::to_string(j) +
                               " has degree " + std::to_string(adj_odd_[j].size()));
        std::sort(adj_odd_[j].begin(), adj_odd_[j].end());
    }
}

const std::vector<int>& BipartiteGraph::neighbours(Side side, int index) const {
    const auto& table = side == Side::Even ? adj_even_ : adj_odd_;
    if (index < 0 || index >= static_cast<int>(table.size()))
        throw InvalidInput("vertex index out of range");
    return table[index];
}

const std::vector<int>& BipartiteGraph::neighbours_global(int v) const {
    if (v < n_even_) return adj_even_[v];
    return adj_odd_[v - n_even_];
}

BipartiteGraph build_hypercube(int d) {
    if (d < 1) throw InvalidInput("hypercube dimension must be >= 1");
    if (d > 20) throw InvalidInput("hypercube dimension too large");
    int n = 1 << d;
    std::vector<int> evens, odds;
    for (int v = 0; v < n; ++v)
        (std::popcount(static_cast<unsigned>(v)) % 2 == 0 ? evens : odds)
            .push_back(v);
    std::vector<int> oidx(n, -1);
    for (std::size_t j = 0; j < odds.size(); ++j) oidx[odds[j]] = static_cast<int>(j);
    std::vector<std::vector<int>> adj(evens.size());
    for (std::size_t i = 0; i < evens.size(); ++i)
        for (int k = 0; k < d; ++k)
            adj[i].push_back(oidx[evens[i] ^ (1 << k)]);
    return BipartiteGraph(static_cast<int>(evens.size()),
                          static_cast<int>(odds.size()), d, std::move(adj));
}

BipartiteGraph build_even_cycle(int n) {
    if (n < 4 || n % 2 != 0) throw InvalidInput("cycle length must be even, >= 4");
    std::vector<std::vector<int>> adj(n / 2);
    for (int v = 0; v < n; v += 2) {
        int i = v / 2;
        adj[i] = {((v + 1) % n) / 2, ((v + n - 1) % n) / 2};
    }
    return BipartiteGraph(n / 2, n / 2, 2, std::move(adj));
}

BipartiteGraph build_complete_bipartite(int d) {
    if (d < 1) throw InvalidInput("degree must be >= 1");
    std::vector<int> all(d);
    std::iota(all.begin(), all.end(), 0);
    return BipartiteGraph(d, d, d, std::vector<std::vector<int>>(d, all));
}

BipartiteGraph build_torus(int L, int d) {
    if (L < 4 || L % 2 != 0) throw InvalidInput("torus side must be even, >= 4");
    if (d < 1) throw InvalidInput("torus dimension must be >= 1");
    long long n = 1;
    for (int k = 0; k < d; ++k) {
        n *= L;
        if (n > (1 << 22)) throw InvalidInput("torus too large");
    }
    auto coord_sum = [&](long long v) {
        int s = 0;
        for (int k = 0; k < d; ++k) { s += static_cast<int>(v % L); v /= L; }
        return s;
    };
    std::vector<long long> evens, odds;
    for (long long v = 0; v < n; ++v)
        (coord_sum(v) % 2 == 0 ? evens : odds).push_back(v);
    std::vector<int> oidx(n, -1);
    for (std::size_t j = 0; j < odds.size(); ++j) oidx[odds[j]] = static_cast<int>(j);
    std::vector<std::vector<int>> adj(evens.size());
    for (std::size_t i = 0; i < evens.size(); ++i) {
        long long v = evens[i], stride = 1;
        for (int k = 0; k < d; ++k) {
            int c = static_cast<int>(v / stride % L);
            long long up = v + ((c + 1) % L - c) * stride;
            long long down = v + ((c + L - 1) % L - c) * stride;
            adj[i].push_back(oidx[up]);
            adj[i].push_back(oidx[down]);
            stride *= L;
        }
    }
    return BipartiteGraph(static_cast<int>(evens.size()),
                          static_cast<int>(odds.size()), 2 * d, std::move(adj));
}

BipartiteGraph build_random_regular(int n_even, int d, std::uint64_t seed,
                                    int max_attempts) {
    if (n_even < 1 || d < 1) throw InvalidInput("dimensions must be positive");
    if (d > n_even) throw InvalidInput("degree exceeds class size");
    std::mt19937_64 rng(seed);
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        std::vector<std::vector<int>> adj(n_even);
        bool simple = true;
        for (int m = 0; m < d && simple; ++m) {
            std::vector<int> perm(n_even);
            std::iota(perm.begin(), perm.end(), 0);
            for (int i = n_even - 1; i > 0; --i) {
                auto j = static_cast<int>(rng() % static_cast<std::uint64_t>(i + 1));
                std::swap(perm[i], perm[j]);
            }
            for (int i = 0; i < n_even; ++i) {
                if (std::find(adj[i].begin(), adj[i].end(), perm[i]) != adj[i].end()) {
                    simple = false;
                    break;
                }
                adj[i].push_back(perm[i]);
            }
        }
        if (simple) return BipartiteGraph(n_even, n_even, d, std::move(adj));
    }
    throw InvalidInput("random regular graph: rejection limit reached");
}

std::vector<int> hypercube_class_bits(int d, Side side) {
    std::vector<int> out;
    for (int v = 0; v < (1 << d); ++v) {
        bool even = std::popcount(static_cast<unsigned>(v)) % 2 == 0;
        if ((side == Side::Even) == even) out.push_back(v);
    }
    return out;
}

Vertex hypercube_vertex(int d, int bits) {
    Side side = std::popcount(static_cast<unsigned>(bits)) % 2 == 0 ? Side::Even
                                                                    : Side::Odd;
    auto cls = hypercube_class_bits(d, side);
    auto it = std::lower_bound(cls.begin(), cls.end(), bits);
    if (it == cls.end() || *it != bits) throw InvalidInput("bits out of range");
    return Vertex{side, static_cast<int>(it - cls.begin())};
}

VertexSet neighbourhood(const BipartiteGraph& g, const VertexSet& a) {
    check_vertex_set(g, a);
    int n = a.side == Side::Even ? g.n_odd() : g.n_even();
    std::vector<char> mark(n, 0);
    for (int m : a.members)
        for (int w : g.neighbours(a.side, m)) mark[w] = 1;
    VertexSet out{opposite(a.side), {}};
    for (int i = 0; i < n; ++i)
        if (mark[i]) out.members.push_back(i);
    return out;
}

VertexSet external_closure(const BipartiteGraph& g, const VertexSet& a) {
    check_vertex_set(g, a);
    VertexSet na = neighbourhood(g, a);
    int n = a.side == Side::Even ? g.n_odd() : g.n_even();
    std::vector<char> in_na(n, 0);
    for (int m : na.members) in_na[m] = 1;
    int same = a.side == Side::Even ? g.n_even() : g.n_odd();
    VertexSet out{a.side, {}};
    for (int x = 0; x < same; ++x) {
        const auto& nx = g.neighbours(a.side, x);
        if (std::all_of(nx.begin(), nx.end(), [&](int w) { return in_na[w]; }))
            out.members.push_back(x);
    }
    return out;
}

VertexSet internal_closure(const BipartiteGraph& g, const VertexSet& t) {
    check_vertex_set(g, t);
    int same = t.side == Side::Even ? g.n_even() : g.n_odd();
    std::vector<char> in_t(same, 0);
    for (int m : t.members) in_t[m] = 1;
    Side other = opposite(t.side);
    int n = other == Side::Even ? g.n_even() : g.n_odd();
    VertexSet out{other, {}};
    for (int x = 0; x < n; ++x) {
        const auto& nx = g.neighbours(other, x);
        if (std::all_of(nx.begin(), nx.end(), [&](int w) { return in_t[w]; }))
            out.members.push_back(x);
    }
    return out;
}

bool is_small(const BipartiteGraph& g, const VertexSet& a) {
    return 4 * external_closure(g, a).size() <= g.num_vertices();
}

namespace {

// Mask kernel for the exhaustive expansion scan; class sizes are guarded to
// fit in 64-bit masks well before this is reached.
struct MaskSide {
    std::vector<std::uint64_t> nbr;       // neighbour mask per vertex, opposite side
    std::vector<std::uint64_t> nbr_back;  // per opposite-side vertex, mask on this side
};

MaskSide build_masks(const BipartiteGraph& g, Side side) {
    int n = side == Side::Even ? g.n_even() : g.n_odd();
    int m = side == Side::Even ? g.n_odd() : g.n_even();
    MaskSide ms;
    ms.nbr.assign(n, 0);
    ms.nbr_back.assign(m, 0);
    for (int i = 0; i < n; ++i)
        for (int w : g.neighbours(side, i)) ms.nbr[i] |= 1ull << w;
    for (int j = 0; j < m; ++j)
        for (int w : g.neighbours(opposite(side), j)) ms.nbr_back[j] |= 1ull << w;
    return ms;
}

}  // namespace

ExpansionResult bipartite_expansion(const BipartiteGraph& g, int max_class_size) {
    if (g.n_even() > max_class_size)
        throw GuardExceeded("expansion scan over 2^" + std::to_string(g.n_even()) +
                            " subsets exceeds the configured cap of 2^" +
                            std::to_string(max_class_size));
    ExpansionResult best{Rational(1), true, {}};
    int n_total = g.num_vertices();  // smallness test: 4*|[A]| <= N
    for (Side side : {Side::Even, Side::Odd}) {
        MaskSide ms = build_masks(g, side);
        int n = static_cast<int>(ms.nbr.size());
        int m = static_cast<int>(ms.nbr_back.size());
        for (std::uint64_t a = 1; a < (1ull << n); ++a) {
            std::uint64_t na = 0;
            for (std::uint64_t rest = a; rest;) {
                int i = std::countr_zero(rest);
                rest &= rest - 1;
                na |= ms.nbr[i];
            }
            int closure = 0;
            for (int x = 0; x < n; ++x)
                if ((ms.nbr[x] & ~na) == 0) ++closure;
            if (4 * closure > n_total) continue;  // not small
            int na_size = 0;
            for (int j = 0; j < m; ++j)
                if (na >> j & 1) ++na_size;
            Rational ratio(na_size - closure, na_size);
            if (best.vacuous || ratio < best.delta) {
                best.delta = ratio;
                best.vacuous = false;
                best.witness = VertexSet{side, {}};
                for (int i = 0; i < n; ++i)
                    if (a >> i & 1) best.witness.members.push_back(i);
            }
        }
    }
    return best;
}

LocalityResult locality(const BipartiteGraph& g) {
    int worst = -1;
    LocalityResult res{0, {}, {}, 0};
    for (int i = 0; i < g.n_even(); ++i) {
        for (int j : g.neighbours(Side::Even, i)) {
            VertexSubset s;
            s.even_members = g.neighbours(Side::Odd, j);
            s.odd_members = g.neighbours(Side::Even, i);
            int alpha = max_independent_set_size(g, s);
            if (alpha > worst) {
                worst = alpha;
                res = LocalityResult{2 * g.degree() - alpha, Vertex{Side::Even, i},
                                     Vertex{Side::Odd, j}, alpha};
            }
        }
    }
    return res;
}

int component_count(const BipartiteGraph& g, const VertexSubset& s) {
    check_subset(g, s);
    std::vector<char> in(g.num_vertices(), 0), seen(g.num_vertices(), 0);
    for (int i : s.even_members) in[i] = 1;
    for (int j : s.odd_members) in[g.n_even() + j] = 1;
    int comps = 0;
    std::vector<int> stack;
    for (int v = 0; v < g.num_vertices(); ++v) {
        if (!in[v] || seen[v]) continue;
        ++comps;
        stack.push_back(v);
        seen[v] = 1;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            const auto& nb = g.neighbours_global(u);
            int base = u < g.n_even() ? g.n_even() : 0;
            for (int w : nb) {
                int wg = base + w;
                if (in[wg] && !seen[wg]) {
                    seen[wg] = 1;
                    stack.push_back(wg);
                }
            }
        }
    }
    return comps;
}

int maximum_matching_size(const BipartiteGraph& g, const VertexSubset& s) {
    check_subset(g, s);
    std::vector<char> in_odd(g.n_odd(), 0);
    for (int j : s.odd_members) in_odd[j] = 1;
    std::vector<int> match_odd(g.n_odd(), -1);
    std::vector<char> visited(g.n_odd(), 0);
    auto augment = [&](auto&& self, int i) -> bool {
        for (int j : g.neighbours(Side::Even, i)) {
            if (!in_odd[j] || visited[j]) continue;
            visited[j] = 1;
            if (match_odd[j] == -1 || self(self, match_odd[j])) {
                match_odd[j] = i;
                return true;
            }
        }
        return false;
    };
    int size = 0;
    for (int i : s.even_members) {
        std::fill(visited.begin(), visited.end(), 0);
        if (augment(augment, i)) ++size;
    }
    return size;
}

int max_independent_set_size(const BipartiteGraph& g, const VertexSubset& s) {
    // Koenig: in a bipartite graph, independence number = n - matching number.
    return s.size() - maximum_matching_size(g, s);
}

bool has_perfect_matching(const BipartiteGraph& g) {
    return maximum_matching_size(g, whole_graph(g)) == g.n_even();
}

VertexSet whole_class(const BipartiteGraph& g, Side side) {
    int n = side == Side::Even ? g.n_even() : g.n_odd();
    VertexSet out{side, std::vector<int>(n)};
    std::iota(out.members.begin(), out.members.end(), 0);
    return out;
}

VertexSubset whole_graph(const BipartiteGraph& g) {
    VertexSubset s;
    s.even_members.resize(g.n_even());
    s.odd_members.resize(g.n_odd());
    std::iota(s.even_members.begin(), s.even_members.end(), 0);
    std::iota(s.odd_members.begin(), s.odd_members.end(), 0);
    return s;
}

void write_graph(std::ostream& out, const BipartiteGraph& g) {
    out << "bipartite " << g.n_even() << ' ' << g.n_odd() << ' ' << g.degree()
        << '\n';
    for (int i = 0; i < g.n_even(); ++i)
        for (int j : g.neighbours(Side::Even, i)) out << i << ' ' << j << '\n';
}

BipartiteGraph read_graph(std::istream& in) {
    std::string line;
    int n_even = -1, n_odd = -1, d = -1;
    std::vector<std::vector<int>> adj;
    auto next_line = [&](std::string& s) {
        while (std::getline(in, s)) {
            auto pos = s.find('#');
            if (pos != std::string::npos) s.erase(pos);
            if (s.find_first_not_of(" \t\r") != std::string::npos) return true;
        }
        return false;
    };
    if (!next_line(line)) throw InvalidInput("empty graph file");
    {
        std::istringstream hdr(line);
        std::string tag;
        hdr >> tag >> n_even >> n_odd >> d;
        if (tag != "bipartite" || hdr.fail())
            throw InvalidInput("bad graph header: " + line);
        if (n_even <= 0 || n_odd <= 0 || d <= 0)
            throw InvalidInput("bad graph dimensions");
    }
    adj.resize(n_even);
    long long edges = 0;
    while (next_line(line)) {
        std::istringstream row(line);
        int u = -1, v = -1;
        row >> u >> v;
        if (row.fail()) throw InvalidInput("bad edge line: " + line);
        if (u < 0 || u >= n_even || v < 0 || v >= n_odd)
            throw InvalidInput("edge endpoint out of range: " + line);
        adj[u].push_back(v);
        ++edges;
    }
    if (edges != static_cast<long long>(n_even) * d)
        throw InvalidInput("edge count does not match a " + std::to_string(d) +
                           "-regular graph");
    BipartiteGraph g(n_even, n_odd, d, std::move(adj));
    if (!has_perfect_matching(g))
        throw InvalidInput("graph fails the perfect-matching sanity check");
    return g;
}

}  // namespace torpid
