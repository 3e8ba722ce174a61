#include <doctest.h>

#include <algorithm>
#include <array>
#include <map>
#include <sstream>

#include "test_util.hpp"
#include "torpid/colouring.hpp"

using namespace torpid;
using namespace torpid::testing;

namespace {

// Layer-pairing oracle for |C_3(Q_3)|: the 3-cube is two 4-cycles joined by a
// perfect matching, so its colourings are pairs of C_4 colourings differing
// at every vertex. Built from scratch, independent of the library.
int cube_count_by_layer_pairing() {
    std::vector<std::array<int, 4>> ring;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c)
                for (int d = 0; d < 3; ++d)
                    if (a != b && b != c && c != d && d != a)
                        ring.push_back({a, b, c, d});
    int pairs = 0;
    for (const auto& top : ring)
        for (const auto& bottom : ring) {
            bool apart = true;
            for (int k = 0; k < 4; ++k) apart = apart && top[k] != bottom[k];
            if (apart) ++pairs;
        }
    return pairs;
}

// zero set of a colouring, as masks over class indices
std::pair<std::uint64_t, std::uint64_t> zero_masks(const BipartiteGraph& g,
                                                   const Colouring& chi) {
    std::uint64_t e = 0, o = 0;
    for (int i = 0; i < g.n_even(); ++i)
        if (chi.values[i] == 0) e |= 1ull << i;
    for (int j = 0; j < g.n_odd(); ++j)
        if (chi.values[g.n_even() + j] == 0) o |= 1ull << j;
    return {e, o};
}

}  // namespace

TEST_CASE("is_proper") {
    BipartiteGraph q2 = build_hypercube(2);
    Colouring two{3, {0, 0, 1, 1}};  // evens 0, odds 1
    CHECK(is_proper(q2, two));
    Colouring constant{3, {0, 0, 0, 0}};
    CHECK_FALSE(is_proper(q2, constant));

    BipartiteGraph k2 = build_hypercube(1);
    CHECK_FALSE(is_proper(k2, Colouring{3, {0, 0}}));
    CHECK(is_proper(k2, Colouring{3, {0, 1}}));
}

TEST_CASE("enumeration counts, order, guard") {
    CHECK(count_colourings(build_hypercube(1), 3) == 6);
    CHECK(count_colourings(build_hypercube(2), 3) == 18);
    CHECK(count_colourings(build_hypercube(3), 3) == 114);
    CHECK(count_colourings(build_even_cycle(6), 3) == 66);

    auto states = enumerate_colourings(build_hypercube(2), 3);
    CHECK(states.size() == 18);
    CHECK(std::is_sorted(states.begin(), states.end()));
    CHECK(std::adjacent_find(states.begin(), states.end()) == states.end());
    for (const Colouring& chi : states) CHECK(is_proper(build_hypercube(2), chi));

    CHECK_THROWS_AS(count_colourings(build_hypercube(4), 3, 8), GuardExceeded);
}

TEST_CASE("layer-pairing oracle agrees on the 3-cube") {
    CHECK(cube_count_by_layer_pairing() == 114);
}

TEST_CASE("zero-set count examples") {
    BipartiteGraph q2 = build_hypercube(2);
    ZeroSetPair pair = make_zero_set_pair(q2, bits_set(2, Side::Even, {0b00, 0b11}),
                                          VertexSet{Side::Odd, {}});
    CHECK(pair.compatible);
    CHECK(pair.e_core == whole_class(q2, Side::Odd));
    CHECK(pair.o_core.empty());
    CHECK(pair.rest.empty());
    CHECK(count_zero_set(q2, pair) == 4);

    // cross-check by enumeration: colourings whose zero set is exactly that
    int matching = 0;
    for (const Colouring& chi : enumerate_colourings(q2, 3))
        if (zero_masks(q2, chi) == std::pair<std::uint64_t, std::uint64_t>{3, 0})
            ++matching;
    CHECK(matching == 4);

    ZeroSetPair empty = make_zero_set_pair(q2, VertexSet{Side::Even, {}},
                                           VertexSet{Side::Odd, {}});
    CHECK(count_zero_set(q2, empty) == 2);  // 2^comp(V), connected graph

    ZeroSetPair clash = make_zero_set_pair(q2, bits_set(2, Side::Even, {0b00}),
                                           bits_set(2, Side::Odd, {0b01}));
    CHECK_FALSE(clash.compatible);
    CHECK(count_zero_set(q2, clash) == 0);
}

TEST_CASE("decomposition count equals enumeration") {
    CHECK(count_via_decomposition(build_hypercube(1)) == 6);
    CHECK(count_via_decomposition(build_hypercube(2)) == 18);
    CHECK(count_via_decomposition(build_hypercube(3)) == 114);
    CHECK(count_via_decomposition(build_even_cycle(6)) == 66);
    CHECK_THROWS_AS(count_via_decomposition(build_hypercube(4), 4), GuardExceeded);
}

TEST_CASE("pointwise counting identity, exhaustive") {
    for (auto g : {build_hypercube(2), build_even_cycle(6)}) {
        std::map<std::pair<std::uint64_t, std::uint64_t>, int> observed;
        for (const Colouring& chi : enumerate_colourings(g, 3))
            ++observed[zero_masks(g, chi)];
        // every pair of subsets, compatible or not
        for (const VertexSet& e : all_subsets(g, Side::Even)) {
            for (const VertexSet& o : all_subsets(g, Side::Odd)) {
                ZeroSetPair pair = make_zero_set_pair(g, e, o);
                std::uint64_t em = 0, om = 0;
                for (int i : e.members) em |= 1ull << i;
                for (int j : o.members) om |= 1ull << j;
                auto it = observed.find({em, om});
                BigInt seen = it == observed.end() ? 0 : it->second;
                CHECK(count_zero_set(g, pair) == seen);
            }
        }
    }
}

TEST_CASE("class sizes at rho = 1/5") {
    BipartiteGraph q2 = build_hypercube(2);
    ClassSizes sizes = class_sizes(q2, Rational(1, 5));
    CHECK(sizes.total == 18);
    for (int i = 0; i < 3; ++i) {
        CHECK(sizes.by_colour[i].balanced == 2);
        CHECK(sizes.by_colour[i].e_heavy == 8);
        CHECK(sizes.by_colour[i].o_heavy == 8);
    }
    // trivial lower bound 2^(N/2), witnessed by the all-0-on-evens colourings
    CHECK(sizes.by_colour[0].e_heavy >= 4);

    BipartiteGraph q3 = build_hypercube(3);
    ClassSizes q3_sizes = class_sizes(q3, Rational(1, 5));
    for (int i = 0; i < 3; ++i) {
        CHECK(q3_sizes.by_colour[i].balanced + q3_sizes.by_colour[i].e_heavy +
                  q3_sizes.by_colour[i].o_heavy ==
              114);
    }
}

TEST_CASE("class-swap symmetry and partition across rho values") {
    for (auto g : {build_hypercube(2), build_hypercube(3), build_even_cycle(6),
                   build_complete_bipartite(3)}) {
        for (Rational rho : {Rational(1, 10), Rational(1, 5), Rational(11, 50)}) {
            ClassSizes sizes = class_sizes(g, rho);
            for (int i = 0; i < 3; ++i) {
                CHECK(sizes.by_colour[i].e_heavy == sizes.by_colour[i].o_heavy);
                CHECK(sizes.by_colour[i].balanced + sizes.by_colour[i].e_heavy +
                          sizes.by_colour[i].o_heavy ==
                      sizes.total);
            }
        }
    }
}

TEST_CASE("phase labels and imbalance") {
    BipartiteGraph q3 = build_hypercube(3);
    // 0 on the even class, odds alternating 1/2
    Colouring extreme{3, {0, 0, 0, 0, 1, 2, 1, 2}};
    REQUIRE(is_proper(q3, extreme));
    PhaseLabel label = phase_label(q3, extreme, Rational(1, 5));
    CHECK(label.labels[0] == Phase::EHeavy);
    CHECK(label.labels[1] == Phase::OHeavy);
    CHECK(label.labels[2] == Phase::OHeavy);
    CHECK(label.heavy_on_all());
    CHECK(imbalance(q3, extreme, 0) == Rational(1));

    BipartiteGraph q2 = build_hypercube(2);
    Colouring zero_on_evens{3, {0, 0, 1, 2}};
    REQUIRE(is_proper(q2, zero_on_evens));
    CHECK(phase_label(q2, zero_on_evens, Rational(1, 5)).labels[0] ==
          Phase::EHeavy);

    // the colour counts telescope, so all-E-heavy is impossible
    for (const Colouring& chi : enumerate_colourings(q2, 3)) {
        PhaseLabel l = phase_label(q2, chi, Rational(1, 5));
        CHECK_FALSE(std::all_of(l.labels.begin(), l.labels.end(),
                                [](Phase p) { return p == Phase::EHeavy; }));
        for (int i = 0; i < 3; ++i) {
            Rational im = imbalance(q2, chi, i);
            CHECK(im >= 0);
            CHECK(im <= 1);
        }
    }

    Colouring improper{3, {0, 0, 0, 0}};
    CHECK_THROWS_AS(phase_label(q2, improper, Rational(1, 5)), InvalidInput);
    CHECK_THROWS_AS(imbalance(q2, improper, 0), InvalidInput);
}

TEST_CASE("component bound verified exhaustively") {
    ComponentBoundReport q2 = verify_component_bound(build_hypercube(2));
    CHECK(q2.bound == Rational(2));
    CHECK(q2.max_components <= 2);
    CHECK(q2.holds);

    ComponentBoundReport q3 = verify_component_bound(build_hypercube(3));
    CHECK(q3.bound == Rational(8, 3));
    CHECK(q3.max_components <= 2);
    CHECK(q3.holds);

    ComponentBoundReport c6 = verify_component_bound(build_even_cycle(6));
    CHECK(c6.bound == Rational(3));
    CHECK(c6.holds);
}

TEST_CASE("colouring text round trip") {
    BipartiteGraph q2 = build_hypercube(2);
    Colouring chi{3, {0, 2, 1, 1}};
    std::stringstream buffer;
    write_colouring(buffer, q2, chi);
    Colouring copy = read_colouring(buffer, q2, 3);
    CHECK(copy == chi);

    std::stringstream partial("E 0 1\n");
    CHECK_THROWS_AS(read_colouring(partial, q2, 3), InvalidInput);
}

TEST_CASE("class sizes CSV") {
    ClassSizes sizes = class_sizes(build_hypercube(2), Rational(1, 5));
    std::stringstream buffer;
    write_class_sizes_csv(buffer, sizes);
    CHECK(buffer.str() ==
          "colour,balanced,e_heavy,o_heavy\n0,2,8,8\n1,2,8,8\n2,2,8,8\n");
}
