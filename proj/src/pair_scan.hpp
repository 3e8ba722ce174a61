#pragma once

// Private mask kernel shared by the exhaustive pair scans. Class sizes are
// guarded well below 64, so subsets of one class fit in a single word.

#include <bit>
#include <cstdint>
#include <vector>

#include "torpid/graph.hpp"
#include "torpid/types.hpp"

namespace torpid::detail {

struct PairScanner {
    const BipartiteGraph& g;
    int ne, no;
    std::vector<std::uint64_t> nbr_e, nbr_o;  // neighbour masks per vertex

    explicit PairScanner(const BipartiteGraph& graph) : g(graph) {
        ne = g.n_even();
        no = g.n_odd();
        nbr_e.assign(ne, 0);
        nbr_o.assign(no, 0);
        for (int i = 0; i < ne; ++i)
            for (int j : g.neighbours(Side::Even, i)) nbr_e[i] |= 1ull << j;
        for (int j = 0; j < no; ++j)
            for (int i : g.neighbours(Side::Odd, j)) nbr_o[j] |= 1ull << i;
    }

    std::uint64_t full_even() const { return (1ull << ne) - 1; }
    std::uint64_t full_odd() const { return (1ull << no) - 1; }

    std::uint64_t nbrs_of_even_set(std::uint64_t emask) const {
        std::uint64_t m = 0;
        while (emask) {
            m |= nbr_e[std::countr_zero(emask)];
            emask &= emask - 1;
        }
        return m;
    }

    std::uint64_t nbrs_of_odd_set(std::uint64_t omask) const {
        std::uint64_t m = 0;
        while (omask) {
            m |= nbr_o[std::countr_zero(omask)];
            omask &= omask - 1;
        }
        return m;
    }

    // I(E): odd x with N(x) subseteq emask (empty when emask = 0, as d >= 1).
    std::uint64_t core_of_even_set(std::uint64_t emask) const {
        std::uint64_t m = 0;
        for (int j = 0; j < no; ++j)
            if ((nbr_o[j] & ~emask) == 0) m |= 1ull << j;
        return m;
    }

    std::uint64_t core_of_odd_set(std::uint64_t omask) const {
        std::uint64_t m = 0;
        for (int i = 0; i < ne; ++i)
            if ((nbr_e[i] & ~omask) == 0) m |= 1ull << i;
        return m;
    }

    // [A] for A on the even side: even x with N(x) subseteq N(A).
    std::uint64_t closure_of_even_set(std::uint64_t emask) const {
        std::uint64_t na = nbrs_of_even_set(emask);
        std::uint64_t m = 0;
        for (int i = 0; i < ne; ++i)
            if ((nbr_e[i] & ~na) == 0) m |= 1ull << i;
        return m;
    }

    std::uint64_t closure_of_odd_set(std::uint64_t omask) const {
        std::uint64_t na = nbrs_of_odd_set(omask);
        std::uint64_t m = 0;
        for (int j = 0; j < no; ++j)
            if ((nbr_o[j] & ~na) == 0) m |= 1ull << j;
        return m;
    }

    int comp_rest(std::uint64_t e_rest, std::uint64_t o_rest) const {
        std::uint64_t seen_e = 0, seen_o = 0;
        int comps = 0;
        std::vector<int> stack;  // even ids as-is, odd ids offset by ne
        for (int s = 0; s < ne; ++s) {
            if (!(e_rest >> s & 1) || (seen_e >> s & 1)) continue;
            ++comps;
            seen_e |= 1ull << s;
            stack.push_back(s);
            while (!stack.empty()) {
                int v = stack.back();
                stack.pop_back();
                if (v < ne) {
                    std::uint64_t cand = nbr_e[v] & o_rest & ~seen_o;
                    while (cand) {
                        int j = std::countr_zero(cand);
                        cand &= cand - 1;
                        seen_o |= 1ull << j;
                        stack.push_back(ne + j);
                    }
                } else {
                    std::uint64_t cand = nbr_o[v - ne] & e_rest & ~seen_e;
                    while (cand) {
                        int i = std::countr_zero(cand);
                        cand &= cand - 1;
                        seen_e |= 1ull << i;
                        stack.push_back(i);
                    }
                }
            }
        }
        for (int j = 0; j < no; ++j)
            if ((o_rest >> j & 1) && !(seen_o >> j & 1)) ++comps;
        return comps;
    }

    // Visit every compatible pair (emask, omask), including the empty ones.
    template <typename F>
    void for_each_compatible(F&& f) const {
        for (std::uint64_t emask = 0; emask < (1ull << ne); ++emask) {
            std::uint64_t free = full_odd() & ~nbrs_of_even_set(emask);
            std::uint64_t omask = free;
            while (true) {
                f(emask, omask);
                if (omask == 0) break;
                omask = (omask - 1) & free;
            }
        }
    }

    VertexSet to_set(Side side, std::uint64_t mask) const {
        VertexSet out{side, {}};
        int n = side == Side::Even ? ne : no;
        for (int i = 0; i < n; ++i)
            if (mask >> i & 1) out.members.push_back(i);
        return out;
    }

    std::uint64_t to_mask(const VertexSet& s) const {
        std::uint64_t m = 0;
        for (int i : s.members) m |= 1ull << i;
        return m;
    }
};

inline void check_pair_guard(const BipartiteGraph& g, int max_class_size) {
    if (g.n_even() > max_class_size || g.n_even() > 30)
        throw GuardExceeded("pair scan over 4^" + std::to_string(g.n_even()) +
                            " subsets exceeds the cap of 4^" +
                            std::to_string(std::min(max_class_size, 30)));
}

}  // namespace torpid::detail
