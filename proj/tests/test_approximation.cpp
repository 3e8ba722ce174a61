#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>

#include "test_util.hpp"
#include "torpid/approximation.hpp"

using namespace torpid;
using namespace torpid::testing;

namespace {

using MaskPair = std::pair<std::uint64_t, std::uint64_t>;

MaskPair to_masks(const SetPair& p) {
    std::uint64_t e = 0, o = 0;
    for (int i : p.first.members) e |= 1ull << i;
    for (int j : p.second.members) o |= 1ull << j;
    return {e, o};
}

std::set<MaskPair> to_mask_set(const std::vector<SetPair>& pairs) {
    std::set<MaskPair> out;
    for (const auto& p : pairs) out.insert(to_masks(p));
    return out;
}

// every compatible pair of the graph, via the public closure operations
std::vector<SetPair> compatible_pairs(const BipartiteGraph& g) {
    std::vector<SetPair> out;
    for (const VertexSet& e : all_subsets(g, Side::Even)) {
        VertexSet ne = neighbourhood(g, e);
        for (const VertexSet& o : all_subsets(g, Side::Odd)) {
            bool clash = false;
            for (int j : o.members) clash = clash || ne.contains(j);
            if (!clash) out.emplace_back(e, o);
        }
    }
    return out;
}

}  // namespace

TEST_CASE("trivial approximations are valid everywhere") {
    for (auto g : {build_hypercube(2), build_hypercube(3), build_even_cycle(6)}) {
        for (Side side : {Side::Even, Side::Odd}) {
            for (const VertexSet& a : all_subsets(g, side)) {
                CHECK(is_approximation(g, a, trivial_approximation(g, a)).ok);
                CHECK(is_approximation(g, a, trivial_approximation(g, a, 0.0)).ok);
            }
        }
    }
}

TEST_CASE("approximation checks report the violated condition") {
    BipartiteGraph q3 = build_hypercube(3);
    VertexSet a = bits_set(3, Side::Even, {0b000});

    ApproximationPair empty_nbrs{VertexSet{Side::Odd, {}},
                                 whole_class(q3, Side::Even),
                                 std::sqrt(3.0)};
    ApproxCheck check = is_approximation(q3, a, empty_nbrs);
    CHECK_FALSE(check.ok);
    CHECK(check.failed_condition == 3);  // d_F(u) = 0 < d - sqrt(d)

    ApproximationPair exact{bits_set(3, Side::Odd, {0b100, 0b010, 0b001}),
                            bits_set(3, Side::Even, {0b000}), std::sqrt(3.0)};
    CHECK(is_approximation(q3, a, exact).ok);

    ApproximationPair too_wide{
        neighbourhood(q3, whole_class(q3, Side::Even)),  // not within N(A)
        bits_set(3, Side::Even, {0b000}), std::sqrt(3.0)};
    ApproxCheck wide_check = is_approximation(q3, a, too_wide);
    CHECK_FALSE(wide_check.ok);
    CHECK(wide_check.failed_condition == 1);

    ApproximationPair not_covering{bits_set(3, Side::Odd, {0b100, 0b010, 0b001}),
                                   VertexSet{Side::Even, {}}, std::sqrt(3.0)};
    ApproxCheck cover_check = is_approximation(q3, a, not_covering);
    CHECK_FALSE(cover_check.ok);
    CHECK(cover_check.failed_condition == 2);

    ApproximationPair swapped{a, bits_set(3, Side::Odd, {0b100}), 1.0};
    CHECK_THROWS_AS(is_approximation(q3, a, swapped), InvalidInput);
}

TEST_CASE("pair statistics on the worked examples") {
    BipartiteGraph q2 = build_hypercube(2);
    PairStats both = pair_stats(q2, bits_set(2, Side::Even, {0b00, 0b11}),
                                VertexSet{Side::Odd, {}});
    CHECK(both == PairStats{2, 2, 2, 2, 0, 0});

    BipartiteGraph q3 = build_hypercube(3);
    PairStats single = pair_stats(q3, bits_set(3, Side::Even, {0b000}),
                                  VertexSet{Side::Odd, {}});
    CHECK(single == PairStats{1, 3, 0, 0, 0, 0});
}

TEST_CASE("statistics are consistent on every compatible pair") {
    for (auto g : {build_hypercube(2), build_even_cycle(6)}) {
        for (const auto& [e, o] : compatible_pairs(g)) {
            PairStats st = pair_stats(g, e, o);
            CHECK(st.e_closure <= st.e_nbrs);
            CHECK(st.e_core <= st.e_core_nbrs);
            CHECK(st.o_core <= st.o_core_nbrs);
            CHECK(st.closure_slack() >= 0);
            CHECK(st.core_slack() >= 0);
            CHECK(st.o_core_slack() >= 0);
            // core neighbourhoods point back into the zero sets
            for (int i : neighbourhood(g, internal_closure(g, e)).members)
                CHECK(e.contains(i));
            for (int j : neighbourhood(g, internal_closure(g, o)).members)
                CHECK(o.contains(j));
        }
    }
}

TEST_CASE("the census partitions the compatible pairs") {
    BipartiteGraph q2 = build_hypercube(2);
    auto census2 = stats_census(q2);
    long long total2 = 0;
    for (const auto& [stats, count] : census2) {
        total2 += count;
        CHECK(static_cast<long long>(enumerate_stats_class(q2, stats).size()) ==
              count);
    }
    CHECK(total2 == 7);
    CHECK(total2 == static_cast<long long>(compatible_pairs(q2).size()));

    BipartiteGraph c6 = build_even_cycle(6);
    auto census6 = stats_census(c6);
    long long total6 = 0;
    for (const auto& [stats, count] : census6) total6 += count;
    CHECK(total6 == 18);
    CHECK(total6 == static_cast<long long>(compatible_pairs(c6).size()));

    BipartiteGraph q3 = build_hypercube(3);
    long long total3 = 0;
    for (const auto& [stats, count] : stats_census(q3)) total3 += count;
    CHECK(total3 == 35);
}

TEST_CASE("size inequalities") {
    BipartiteGraph q2 = build_hypercube(2);
    VertexSet e = bits_set(2, Side::Even, {0b00, 0b11});
    VertexSet o{Side::Odd, {}};
    ZeroSetApproximation trivial = trivial_zero_set_approximation(q2, e, o);
    CHECK(check_size_inequalities(trivial, pair_stats(q2, e, o), 2).all());

    // an intentionally loose hull: |S| = 4 > 0 + 3*2/sqrt(3)
    BipartiteGraph q3 = build_hypercube(3);
    VertexSet e3 = bits_set(3, Side::Even, {0b000});
    PairStats st3 = pair_stats(q3, e3, VertexSet{Side::Odd, {}});
    ZeroSetApproximation loose = trivial_zero_set_approximation(
        q3, e3, VertexSet{Side::Odd, {}});
    loose.for_e.nbr_subset = VertexSet{Side::Odd, {}};
    loose.for_e.closure_superset = whole_class(q3, Side::Even);
    SizeInequalityReport report = check_size_inequalities(loose, st3, 3);
    CHECK_FALSE(report.e_ok);
    CHECK(report.e_core_ok);
    CHECK_FALSE(report.all());

    // when the slack is zero, the first inequality pins |S| <= |F|
    PairStats zero_slack{2, 2, 0, 0, 0, 0};
    ZeroSetApproximation tight = trivial_zero_set_approximation(q2, e, o);
    CHECK(check_size_inequalities(tight, zero_slack, 2).e_ok);
}

TEST_CASE("reconstruction contains the generating pair") {
    BipartiteGraph q2 = build_hypercube(2);
    VertexSet e = bits_set(2, Side::Even, {0b00, 0b11});
    VertexSet o{Side::Odd, {}};
    PairStats stats = pair_stats(q2, e, o);
    ZeroSetApproximation approx = trivial_zero_set_approximation(q2, e, o);
    for (int mask = 0; mask < 8; ++mask) {
        ReconstructionFlags flags{(mask & 1) != 0, (mask & 2) != 0,
                                  (mask & 4) != 0};
        auto produced = reconstruct_candidates(q2, approx, stats, flags);
        CHECK(to_mask_set(produced).count(to_masks({e, o})) == 1);
    }
}

TEST_CASE("reconstruction is a superset of the containment class, exhaustively") {
    for (auto g : {build_hypercube(2), build_even_cycle(6)}) {
        for (const auto& [e, o] : compatible_pairs(g)) {
            PairStats stats = pair_stats(g, e, o);
            ZeroSetApproximation approx = trivial_zero_set_approximation(g, e, o);
            std::set<MaskPair> target;
            for (const auto& member : enumerate_stats_class(g, stats))
                if (satisfies_containments(g, approx, member.first, member.second))
                    target.insert(to_masks(member));
            CHECK(target.count(to_masks({e, o})) == 1);
            for (int mask = 0; mask < 8; ++mask) {
                ReconstructionFlags flags{(mask & 1) != 0, (mask & 2) != 0,
                                          (mask & 4) != 0};
                std::set<MaskPair> produced =
                    to_mask_set(reconstruct_candidates(g, approx, stats, flags));
                CHECK(std::includes(produced.begin(), produced.end(),
                                    target.begin(), target.end()));
            }
        }
    }
}

TEST_CASE("reconstruction with an unmatchable class is empty under the filter") {
    BipartiteGraph q2 = build_hypercube(2);
    PairStats absent{1, 1, 1, 1, 1, 1};
    CHECK(enumerate_stats_class(q2, absent).empty());
    ZeroSetApproximation empty;
    empty.for_e = ApproximationPair{VertexSet{Side::Odd, {}},
                                    VertexSet{Side::Even, {}}, 1.0};
    empty.for_e_core = ApproximationPair{VertexSet{Side::Even, {}},
                                         VertexSet{Side::Odd, {}}, 1.0};
    empty.for_o_core = ApproximationPair{VertexSet{Side::Odd, {}},
                                         VertexSet{Side::Even, {}}, 1.0};
    for (int mask = 0; mask < 8; ++mask) {
        ReconstructionFlags flags{(mask & 1) != 0, (mask & 2) != 0,
                                  (mask & 4) != 0};
        CHECK(reconstruct_candidates(q2, empty, absent, flags).empty());
    }
}

TEST_CASE("sextuple fixtures survive a round trip") {
    BipartiteGraph q2 = build_hypercube(2);
    VertexSet e = bits_set(2, Side::Even, {0b00, 0b11});
    VertexSet o{Side::Odd, {}};
    ZeroSetApproximation approx = trivial_zero_set_approximation(q2, e, o);
    std::stringstream buffer;
    write_zero_set_approximation(buffer, approx);
    ZeroSetApproximation copy = read_zero_set_approximation(buffer, q2);
    CHECK(copy.for_e.nbr_subset == approx.for_e.nbr_subset);
    CHECK(copy.for_e.closure_superset == approx.for_e.closure_superset);
    CHECK(copy.for_e_core.closure_superset == approx.for_e_core.closure_superset);
    CHECK(copy.for_o_core.nbr_subset == approx.for_o_core.nbr_subset);

    std::stringstream wrong("E 0\nE 0\nE 0\nO 0\nO 0\nE 0\n");
    CHECK_THROWS_AS(read_zero_set_approximation(wrong, q2), InvalidInput);
}

TEST_CASE("reconstruction guard") {
    // the empty pair leaves the whole odd class free, 16 candidates
    BipartiteGraph q3 = build_hypercube(3);
    VertexSet e{Side::Even, {}};
    VertexSet o{Side::Odd, {}};
    ZeroSetApproximation approx = trivial_zero_set_approximation(q3, e, o);
    PairStats stats = pair_stats(q3, e, o);
    CHECK_THROWS_AS(reconstruct_candidates(q3, approx, stats,
                                           ReconstructionFlags{}, true, 2),
                    GuardExceeded);
    CHECK(reconstruct_candidates(q3, approx, stats, ReconstructionFlags{})
              .size() > 1);
}
