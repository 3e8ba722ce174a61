#include "torpid/heights.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <deque>
#include <ostream>
#include <set>

namespace torpid {

namespace {

// BFS distances from the root; throws on disconnected graphs.
std::vector<int> level_of(const BipartiteGraph& g, int root) {
    if (root < 0 || root >= g.num_vertices())
        throw InvalidInput("root out of range");
    std::vector<int> dist(g.num_vertices(), -1);
    std::deque<int> queue{root};
    dist[root] = 0;
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        int base = v < g.n_even() ? g.n_even() : 0;
        for (int w : g.neighbours_global(v)) {
            int wg = base + w;
            if (dist[wg] == -1) {
                dist[wg] = dist[v] + 1;
                queue.push_back(wg);
            }
        }
    }
    if (std::find(dist.begin(), dist.end(), -1) != dist.end())
        throw InvalidInput("height functions need a connected graph");
    return dist;
}

std::vector<int> bfs_order(const BipartiteGraph& g,
                           const std::vector<int>& dist) {
    std::vector<int> order(g.num_vertices());
    for (int v = 0; v < g.num_vertices(); ++v) order[v] = v;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return dist[a] != dist[b] ? dist[a] < dist[b] : a < b;
    });
    return order;
}

std::vector<int> global_neighbours(const BipartiteGraph& g, int v) {
    std::vector<int> out;
    int base = v < g.n_even() ? g.n_even() : 0;
    for (int w : g.neighbours_global(v)) out.push_back(base + w);
    return out;
}

}  // namespace

bool is_valid_height_function(const BipartiteGraph& g, const HeightFunction& f) {
    if (static_cast<int>(f.values.size()) != g.num_vertices()) return false;
    if (f.root < 0 || f.root >= g.num_vertices()) return false;
    if (f.values[f.root] != 0) return false;
    for (int i = 0; i < g.n_even(); ++i)
        for (int j : g.neighbours(Side::Even, i))
            if (std::abs(f.values[i] - f.values[g.n_even() + j]) != 1)
                return false;
    return true;
}

int range_size(const HeightFunction& f) {
    std::set<int> values(f.values.begin(), f.values.end());
    return static_cast<int>(values.size());
}

Colouring to_colouring(const BipartiteGraph& g, const HeightFunction& f) {
    if (!is_valid_height_function(g, f))
        throw InvalidInput("not a valid height function");
    Colouring chi{3, std::vector<std::uint8_t>(g.num_vertices())};
    for (int v = 0; v < g.num_vertices(); ++v)
        chi.values[v] = static_cast<std::uint8_t>(((f.values[v] % 3) + 3) % 3);
    return chi;
}

std::optional<std::array<Vertex, 3>> check_level_structure(
    const BipartiteGraph& g, int root) {
    std::vector<int> dist = level_of(g, root);
    for (int v = 0; v < g.num_vertices(); ++v) {
        if (dist[v] < 2) continue;
        std::vector<int> lower;
        for (int w : global_neighbours(g, v))
            if (dist[w] == dist[v] - 1) lower.push_back(w);
        for (std::size_t a = 0; a < lower.size(); ++a) {
            for (std::size_t b = a + 1; b < lower.size(); ++b) {
                auto na = global_neighbours(g, lower[a]);
                auto nb = global_neighbours(g, lower[b]);
                bool found = false;
                for (int x : na) {
                    if (dist[x] != dist[v] - 2) continue;
                    if (std::find(nb.begin(), nb.end(), x) != nb.end()) {
                        found = true;
                        break;
                    }
                }
                if (!found)
                    return std::array<Vertex, 3>{g.vertex_of(lower[a]),
                                                 g.vertex_of(lower[b]),
                                                 g.vertex_of(v)};
            }
        }
    }
    return std::nullopt;
}

HeightFunction to_height_function(const BipartiteGraph& g, const Colouring& chi,
                                  int root) {
    if (chi.q != 3 || !is_proper(g, chi))
        throw InvalidInput("height construction needs a proper 3-colouring");
    if (chi.values[root] != 0)
        throw InvalidInput("height construction needs colour 0 at the root");
    if (auto witness = check_level_structure(g, root)) {
        const auto& w = *witness;
        throw StructuralFailure(
            "level structure fails: two vertices share an upper but no lower "
            "neighbour",
            w[0], w[1], w[2]);
    }
    std::vector<int> dist = level_of(g, root);
    HeightFunction f{root, std::vector<int>(g.num_vertices(), 0)};
    for (int v : bfs_order(g, dist)) {
        if (v == root) continue;
        int lo = 0, hi = 0;
        bool first = true;
        for (int w : global_neighbours(g, v)) {
            if (dist[w] != dist[v] - 1) continue;
            int val = f.values[w];
            if (first) {
                lo = hi = val;
                first = false;
            } else {
                lo = std::min(lo, val);
                hi = std::max(hi, val);
            }
        }
        int target = chi.values[v];
        int value;
        if (lo == hi) {
            // free choice between lo-1 and lo+1; the colour picks exactly one
            if (((lo + 1) % 3 + 3) % 3 == target)
                value = lo + 1;
            else if (((lo - 1) % 3 + 3) % 3 == target)
                value = lo - 1;
            else
                throw InvalidInput("colouring inconsistent at a level vertex");
        } else if (hi - lo == 2) {
            value = lo + 1;
            if ((value % 3 + 3) % 3 != target)
                throw InvalidInput("colouring inconsistent at a level vertex");
        } else {
            // unreachable once the level-structure check passed
            throw StructuralFailure("lower neighbours spread more than 2",
                                    g.vertex_of(v), g.vertex_of(v),
                                    g.vertex_of(v));
        }
        f.values[v] = value;
    }
    return f;
}

std::vector<HeightFunction> enumerate_height_functions(const BipartiteGraph& g,
                                                       int root,
                                                       int max_vertices) {
    if (g.num_vertices() > max_vertices)
        throw GuardExceeded("height enumeration over " +
                            std::to_string(g.num_vertices()) +
                            " vertices exceeds the cap of " +
                            std::to_string(max_vertices));
    std::vector<int> dist = level_of(g, root);
    std::vector<int> order = bfs_order(g, dist);
    std::vector<HeightFunction> out;
    HeightFunction f{root, std::vector<int>(g.num_vertices(), 0)};
    auto rec = [&](auto&& self, std::size_t k) -> void {
        if (k == order.size()) {
            out.push_back(f);
            return;
        }
        int v = order[k];
        if (v == root) {
            self(self, k + 1);
            return;
        }
        // intersect {f(w) +- 1} over the already-assigned lower neighbours
        int lo = 0, hi = 0;
        bool first = true;
        for (int w : global_neighbours(g, v)) {
            if (dist[w] != dist[v] - 1) continue;
            if (first) {
                lo = hi = f.values[w];
                first = false;
            } else {
                lo = std::min(lo, f.values[w]);
                hi = std::max(hi, f.values[w]);
            }
        }
        if (hi - lo == 0) {
            for (int value : {lo - 1, lo + 1}) {
                f.values[v] = value;
                self(self, k + 1);
            }
        } else if (hi - lo == 2) {
            f.values[v] = lo + 1;
            self(self, k + 1);
        }
        // spread > 2: dead branch
        f.values[v] = 0;
    };
    rec(rec, 0);
    return out;
}

HeightFunction reduction_step(const BipartiteGraph& g, const HeightFunction& f) {
    if (!is_valid_height_function(g, f))
        throw InvalidInput("not a valid height function");
    if (range_size(f) <= 2)
        throw InvalidInput("height function already two-valued");
    int hi = *std::max_element(f.values.begin(), f.values.end());
    HeightFunction next = f;
    if (hi > 0) {
        for (int v = 0; v < g.num_vertices(); ++v) {
            if (f.values[v] == hi) {
                next.values[v] = hi - 2;
                return next;
            }
        }
    }
    // no strictly positive values: mirror the procedure on the minimum
    int lo = *std::min_element(f.values.begin(), f.values.end());
    for (int v = 0; v < g.num_vertices(); ++v) {
        if (f.values[v] == lo) {
            next.values[v] = lo + 2;
            return next;
        }
    }
    throw std::logic_error("reduction found no extreme vertex");
}

ErgodicityPath ergodicity_path(const BipartiteGraph& g, const Colouring& chi,
                               int root) {
    HeightFunction f = to_height_function(g, chi, root);
    ErgodicityPath path;
    path.states.push_back(chi);
    while (range_size(f) > 2) {
        HeightFunction next = reduction_step(g, f);
        Colouring state = to_colouring(g, next);
        for (int v = 0; v < g.num_vertices(); ++v) {
            if (next.values[v] != f.values[v]) {
                path.moves.push_back(PathMove{g.vertex_of(v),
                                              path.states.back().values[v],
                                              state.values[v]});
                break;
            }
        }
        path.states.push_back(state);
        f = std::move(next);
    }
    return path;
}

Colouring frozen_four_colouring(const BipartiteGraph& q3) {
    if (q3.n_even() != 4 || q3.n_odd() != 4 || q3.degree() != 3)
        throw InvalidInput("frozen colouring is constructed on the 3-cube");
    BipartiteGraph canonical = build_hypercube(3);
    for (int i = 0; i < 4; ++i)
        if (q3.neighbours(Side::Even, i) != canonical.neighbours(Side::Even, i))
            throw InvalidInput("frozen colouring needs the canonical 3-cube labelling");
    // faces: for each pair of odd vertices with two common even neighbours
    struct Face {
        std::array<int, 4> verts;  // global ids
    };
    std::vector<Face> faces;
    for (int j1 = 0; j1 < 4; ++j1) {
        for (int j2 = j1 + 1; j2 < 4; ++j2) {
            const auto& n1 = q3.neighbours(Side::Odd, j1);
            const auto& n2 = q3.neighbours(Side::Odd, j2);
            std::vector<int> common;
            for (int e : n1)
                if (std::find(n2.begin(), n2.end(), e) != n2.end())
                    common.push_back(e);
            if (common.size() == 2)
                faces.push_back(Face{{common[0], q3.global_id(Side::Odd, j1),
                                      common[1], q3.global_id(Side::Odd, j2)}});
        }
    }
    if (faces.size() != 6) throw InvalidInput("graph is not the 3-cube");
    std::vector<int> colour(8, -1);
    // seed: colour 0 at the all-zero string, colour k on the string with the
    // single bit 1 << (3 - k)
    colour[0] = 0;
    for (int k = 1; k <= 3; ++k) {
        Vertex v = hypercube_vertex(3, 1 << (3 - k));
        colour[q3.global_id(v.side, v.index)] = k;
    }
    // propagate: each face must show all four colours
    for (bool changed = true; changed;) {
        changed = false;
        for (const Face& face : faces) {
            int missing = -1, count = 0, used = 0;
            for (int v : face.verts) {
                if (colour[v] == -1)
                    missing = v;
                else {
                    ++count;
                    used |= 1 << colour[v];
                }
            }
            if (count == 3 && missing != -1) {
                for (int c = 0; c < 4; ++c) {
                    if (!(used >> c & 1)) {
                        colour[missing] = c;
                        changed = true;
                        break;
                    }
                }
            }
        }
    }
    Colouring chi{4, std::vector<std::uint8_t>(8)};
    for (int v = 0; v < 8; ++v) {
        if (colour[v] == -1)
            throw std::logic_error("face propagation left a vertex uncoloured");
        chi.values[v] = static_cast<std::uint8_t>(colour[v]);
    }
    if (!is_proper(q3, chi))
        throw std::logic_error("face propagation produced an improper colouring");
    return chi;
}

bool is_frozen(const BipartiteGraph& g, const Colouring& chi) {
    if (!is_proper(g, chi)) throw InvalidInput("frozenness needs a proper colouring");
    for (int v = 0; v < g.num_vertices(); ++v) {
        int base = v < g.n_even() ? g.n_even() : 0;
        for (int c = 0; c < chi.q; ++c) {
            if (c == chi.values[v]) continue;
            bool ok = true;
            for (int w : g.neighbours_global(v))
                if (chi.values[base + w] == c) {
                    ok = false;
                    break;
                }
            if (ok) return false;
        }
    }
    return true;
}

void write_height_function(std::ostream& out, const BipartiteGraph& g,
                           const HeightFunction& f) {
    for (int i = 0; i < g.n_even(); ++i)
        out << "E " << i << ' ' << f.values[i] << '\n';
    for (int j = 0; j < g.n_odd(); ++j)
        out << "O " << j << ' ' << f.values[g.n_even() + j] << '\n';
}

void write_path_moves(std::ostream& out, const ErgodicityPath& path) {
    for (const PathMove& m : path.moves)
        out << side_char(m.vertex.side) << ' ' << m.vertex.index << ' '
            << m.old_colour << ' ' << m.new_colour << '\n';
}

}  // namespace torpid
