#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "test_util.hpp"
#include "torpid/dynamics.hpp"
#include "torpid/heights.hpp"

using namespace torpid;
using namespace torpid::testing;

namespace {

int hamming(const Colouring& a, const Colouring& b) {
    int d = 0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        d += a.values[i] != b.values[i];
    return d;
}

}  // namespace

TEST_CASE("transition matrix on the single edge") {
    BipartiteGraph k2 = build_hypercube(1);
    TransitionMatrix t = build_transition_matrix(k2, ChainSpec{});
    CHECK(t.size() == 6);
    for (int i = 0; i < t.size(); ++i) {
        CHECK(t.row_sum(i) == 1);
        CHECK(t.off_diag[i].size() == 2);
        for (const auto& [j, p] : t.off_diag[i]) CHECK(p == Rational(1, 6));
        CHECK(t.diag[i] == Rational(2, 3));
    }
}

TEST_CASE("rows are exactly stochastic") {
    for (auto variant : {ChainVariant::Plain, ChainVariant::Restricted}) {
        TransitionMatrix t = build_transition_matrix(
            build_hypercube(2), ChainSpec{3, variant, Rational(1, 5)});
        CHECK(t.size() == 18);
        for (int i = 0; i < t.size(); ++i) CHECK(t.row_sum(i) == 1);
    }
    TransitionMatrix q3 = build_transition_matrix(build_hypercube(3), ChainSpec{});
    CHECK(q3.size() == 114);
    for (int i = 0; i < q3.size(); ++i) CHECK(q3.row_sum(i) == 1);
}

TEST_CASE("detailed balance under the uniform distribution") {
    CHECK(check_detailed_balance(
        build_transition_matrix(build_hypercube(2), ChainSpec{})));
    CHECK(check_detailed_balance(
        build_transition_matrix(build_hypercube(3), ChainSpec{})));
    // the restricted proposal depends only on neighbour colours, which agree
    // across any Hamming-1 pair, so it is symmetric too
    CHECK(check_detailed_balance(build_transition_matrix(
        build_hypercube(2), ChainSpec{3, ChainVariant::Restricted, Rational(1, 5)})));
}

TEST_CASE("off-diagonal support is exactly the Hamming-1 proper pairs") {
    for (auto g : {build_hypercube(2), build_hypercube(3)}) {
        TransitionMatrix t = build_transition_matrix(g, ChainSpec{});
        for (int i = 0; i < t.size(); ++i)
            for (int j = 0; j < t.size(); ++j) {
                if (i == j) continue;
                bool adjacent = hamming(t.states[i], t.states[j]) == 1;
                CHECK((t.entry(i, j) != 0) == adjacent);
                if (adjacent)
                    CHECK(t.entry(i, j) ==
                          Rational(1, 3LL * g.num_vertices()));
            }
    }
}

TEST_CASE("uniform row vector is stationary") {
    TransitionMatrix t = build_transition_matrix(build_hypercube(2), ChainSpec{});
    for (int j = 0; j < t.size(); ++j) {
        Rational column = t.diag[j];
        for (int i = 0; i < t.size(); ++i)
            if (i != j) column += t.entry(i, j);
        CHECK(column == 1);
    }
}

TEST_CASE("ergodicity") {
    CHECK(check_ergodic(build_transition_matrix(build_hypercube(2), ChainSpec{})));
    CHECK(check_ergodic(build_transition_matrix(build_hypercube(3), ChainSpec{})));

    BipartiteGraph q3 = build_hypercube(3);
    TransitionMatrix four = build_transition_matrix(
        q3, ChainSpec{4, ChainVariant::Plain, Rational(1, 5)});
    CHECK(four.size() == 2652);
    CHECK_FALSE(check_ergodic(four));

    // the frozen state is isolated: unit holding probability, no exits
    int frozen = four.find_state(frozen_four_colouring(q3));
    REQUIRE(frozen >= 0);
    CHECK(four.off_diag[frozen].empty());
    CHECK(four.diag[frozen] == 1);
}

TEST_CASE("exact mixing times") {
    MixingReport k2 = exact_mixing_time(
        build_transition_matrix(build_hypercube(1), ChainSpec{}));
    CHECK(k2.tau == 4);

    MixingReport q2 = exact_mixing_time(
        build_transition_matrix(build_hypercube(2), ChainSpec{}));
    CHECK(q2.tau == 20);
    CHECK(*std::max_element(q2.per_start_tau.begin(), q2.per_start_tau.end()) ==
          q2.tau);

    // the worst-start TV curve never increases
    for (const MixingReport& report : {k2, q2}) {
        for (std::size_t t = 1; t < report.tv_curve.size(); ++t)
            CHECK(report.tv_curve[t] <= report.tv_curve[t - 1] + 1e-15);
        CHECK(report.tv_curve.back() <= 1.0 / std::exp(1.0) + 1e-12);
    }

    // one-state chain mixes immediately
    TransitionMatrix single;
    single.states.push_back(Colouring{3, {0, 1}});
    single.off_diag.resize(1);
    single.diag.push_back(Rational(1));
    CHECK(exact_mixing_time(single).tau == 0);

    TransitionMatrix four = build_transition_matrix(
        build_hypercube(3), ChainSpec{4, ChainVariant::Plain, Rational(1, 5)});
    CHECK_THROWS_AS(exact_mixing_time(four), InvalidInput);
}

TEST_CASE("phase cut, blocking condition and the bottleneck bound") {
    BipartiteGraph q2 = build_hypercube(2);
    TransitionMatrix t2 = build_transition_matrix(q2, ChainSpec{});
    BottleneckCut cut2 = make_phase_cut(t2, q2, Rational(1, 5), 0);
    CHECK(cut2.pi_a == Rational(4, 9));
    CHECK(cut2.pi_m == Rational(1, 9));
    CHECK(verify_bottleneck_condition(t2, cut2).ok);
    CHECK(bottleneck_lower_bound(t2, cut2) == Rational(1, 2));

    BipartiteGraph q3 = build_hypercube(3);
    TransitionMatrix t3 = build_transition_matrix(q3, ChainSpec{});
    BottleneckCut cut3 = make_phase_cut(t3, q3, Rational(1, 5), 0);
    CHECK(cut3.pi_a == Rational(26, 57));
    CHECK(cut3.pi_m == Rational(5, 57));
    CHECK(verify_bottleneck_condition(t3, cut3).ok);
    CHECK(bottleneck_lower_bound(t3, cut3) == Rational(13, 20));

    // the mirror cut has the same measure, and the three parts tile the space
    BottleneckCut mirror = make_phase_cut(t3, q3, Rational(1, 5), 0, Side::Odd);
    CHECK(mirror.pi_a == cut3.pi_a);
    CHECK(cut3.pi_m == Rational(1) - 2 * cut3.pi_a);

    // bound below the exact mixing time, strictly
    CHECK(bottleneck_lower_bound(t2, cut2) < Rational(exact_mixing_time(t2).tau));
    CHECK(bottleneck_lower_bound(t3, cut3) < Rational(exact_mixing_time(t3).tau));

    BipartiteGraph k2 = build_hypercube(1);
    TransitionMatrix t1 = build_transition_matrix(k2, ChainSpec{});
    BottleneckCut cut1 = make_phase_cut(t1, k2, Rational(1, 5), 0);
    CHECK(cut1.pi_a == Rational(1, 3));
    CHECK(verify_bottleneck_condition(t1, cut1).ok);
    CHECK(bottleneck_lower_bound(t1, cut1) == Rational(1, 8));
    CHECK(bottleneck_lower_bound(t1, cut1) < Rational(exact_mixing_time(t1).tau));
}

TEST_CASE("an ergodic chain always escapes a strict subset") {
    TransitionMatrix t = build_transition_matrix(build_hypercube(2), ChainSpec{});
    BottleneckCut leaky;
    leaky.a_states = {0, 1, 2};
    leaky.pi_a = Rational(3, t.size());
    leaky.pi_m = Rational(0);
    BlockingCheck check = verify_bottleneck_condition(t, leaky);
    CHECK_FALSE(check.ok);
    CHECK(check.witness_from >= 0);
    CHECK(t.entry(check.witness_from, check.witness_to) != 0);
    CHECK_THROWS_AS(bottleneck_lower_bound(t, leaky), InvalidInput);
}

TEST_CASE("chain steps move at most one vertex and stay proper") {
    BipartiteGraph q3 = build_hypercube(3);
    Colouring chi{3, {0, 0, 0, 0, 1, 2, 1, 2}};
    Rng rng(42);
    for (int i = 0; i < 10000; ++i) {
        Colouring next = glauber_step(q3, chi, ChainSpec{}, rng);
        CHECK(hamming(chi, next) <= 1);
        CHECK(is_proper(q3, next));
        chi = next;
    }
    CHECK_THROWS_AS(glauber_step(q3, Colouring{3, {0, 0, 0, 0, 0, 0, 0, 0}},
                                 ChainSpec{}, rng),
                    InvalidInput);
    // colour-count mismatch between state and chain
    CHECK_THROWS_AS(glauber_step(q3, Colouring{4, {0, 0, 0, 0, 1, 2, 1, 2}},
                                 ChainSpec{}, rng),
                    InvalidInput);
}

TEST_CASE("the frozen 4-colouring never moves") {
    BipartiteGraph q3 = build_hypercube(3);
    Colouring frozen = frozen_four_colouring(q3);
    ChainSpec spec{4, ChainVariant::Plain, Rational(1, 5)};
    Rng rng(7);
    for (int i = 0; i < 1000; ++i)
        CHECK(glauber_step(q3, frozen, spec, rng) == frozen);
}

TEST_CASE("one-step empirical frequencies match the exact row") {
    BipartiteGraph k2 = build_hypercube(1);
    TransitionMatrix t = build_transition_matrix(k2, ChainSpec{});
    Colouring start{3, {0, 1}};
    int from = t.find_state(start);
    REQUIRE(from >= 0);
    const int trials = 100000;
    Rng rng(2024);
    std::map<int, int> hits;
    for (int i = 0; i < trials; ++i) {
        Colouring next = glauber_step(k2, start, ChainSpec{}, rng);
        ++hits[t.find_state(next)];
    }
    for (int to = 0; to < t.size(); ++to) {
        double p = static_cast<double>(t.entry(from, to));
        double expected = trials * p;
        double sigma = std::sqrt(trials * p * (1 - p));
        CHECK(std::abs(hits[to] - expected) <= 3 * sigma + 1e-9);
    }
}

TEST_CASE("restricted steps match the restricted matrix row") {
    BipartiteGraph k2 = build_hypercube(1);
    ChainSpec spec{3, ChainVariant::Restricted, Rational(1, 5)};
    TransitionMatrix t = build_transition_matrix(k2, spec);
    Colouring start{3, {0, 1}};
    int from = t.find_state(start);
    REQUIRE(from >= 0);
    const int trials = 100000;
    Rng rng(515);
    std::map<int, int> hits;
    for (int i = 0; i < trials; ++i) {
        Colouring next = glauber_step(k2, start, spec, rng);
        CHECK(hamming(start, next) <= 1);
        ++hits[t.find_state(next)];
    }
    for (int to = 0; to < t.size(); ++to) {
        double p = static_cast<double>(t.entry(from, to));
        double sigma = std::sqrt(trials * p * (1 - p));
        CHECK(std::abs(hits[to] - trials * p) <= 3 * sigma + 1e-9);
    }
}

TEST_CASE("trajectories are reproducible from the seed") {
    BipartiteGraph q3 = build_hypercube(3);
    Colouring start = heavy_start(q3, 0, Side::Even);
    ChainSpec spec{3, ChainVariant::Plain, Rational(1, 5)};
    TrajectoryStats a = simulate_trajectory(q3, start, spec, 2000, 99);
    TrajectoryStats b = simulate_trajectory(q3, start, spec, 2000, 99);
    CHECK(a.final_state == b.final_state);
    CHECK(a.zero_diff == b.zero_diff);
    CHECK(a.first_balanced_hit == b.first_balanced_hit);

    // the canonical heavy start is heavy on every colour
    PhaseLabel at0 = a.labels.front();
    CHECK(at0.labels[0] == Phase::EHeavy);
    CHECK(at0.heavy_on_all());
}

TEST_CASE("escape times are deterministic and eventually hit balance") {
    BipartiteGraph q2 = build_hypercube(2);
    ChainSpec spec{3, ChainVariant::Plain, Rational(1, 5)};
    EscapeResult a = phase_escape_time(q2, spec, 0, Side::Even, 11, 100000);
    EscapeResult b = phase_escape_time(q2, spec, 0, Side::Even, 11, 100000);
    CHECK(a.escaped);
    CHECK(a.steps >= 1);
    CHECK(a.escaped == b.escaped);
    CHECK(a.steps == b.steps);
}

TEST_CASE("trajectory CSV export") {
    BipartiteGraph q2 = build_hypercube(2);
    TrajectoryStats stats =
        simulate_trajectory(q2, heavy_start(q2, 0, Side::Even),
                            ChainSpec{3, ChainVariant::Plain, Rational(1, 5)},
                            3, 5);
    std::ostringstream csv;
    write_trajectory_csv(csv, q2, stats);
    std::string text = csv.str();
    CHECK(text.substr(0, text.find('\n')) ==
          "t,phase_0,phase_1,phase_2,zero_imbalance");
    CHECK(std::count(text.begin(), text.end(), '\n') == 5);
}
