#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include "torpid/colouring.hpp"
#include "torpid/graph.hpp"
#include "torpid/types.hpp"

namespace torpid {

enum class ChainVariant {
    Plain,       // propose any colour, reject improper moves
    Restricted,  // propose uniformly among colours unused by the neighbours
};

/// Single-site chain description. rho is the declared locality used by the
/// phase machinery; Glauber itself recolours one vertex per step, so it is
/// rho-local for any rho >= 1/N.
struct ChainSpec {
    int q = 3;
    ChainVariant variant = ChainVariant::Plain;
    Rational rho = Rational(1, 5);
};

/// Seedable, reproducible generator. Bounded draws use rejection sampling, so
/// the stream is unbiased and bitwise stable for a given seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    /// Uniform value in [0, n).
    std::uint64_t bounded(std::uint64_t n);

    /// Stream for trajectory k, derived as seed xor k.
    static Rng stream(std::uint64_t seed, std::uint64_t index) {
        return Rng(seed ^ index);
    }

private:
    std::mt19937_64 gen_;
};

struct StepResult {
    int vertex = -1;          // global id of the proposed vertex
    int old_colour = -1;
    int new_colour = -1;
    bool moved = false;       // state actually changed
};

/// One chain step in place. Draw order: vertex, then colour (plain) or index
/// into the sorted allowed set (restricted).
StepResult glauber_step_inplace(const BipartiteGraph& g, Colouring& chi,
                                const ChainSpec& spec, Rng& rng);

/// Pure step: returns the successor state, differing in at most one vertex.
Colouring glauber_step(const BipartiteGraph& g, const Colouring& chi,
                       const ChainSpec& spec, Rng& rng);

/// Exact row-stochastic transition matrix over the enumerated state space.
/// Off-diagonal entries exist only between colourings at Hamming distance 1.
struct TransitionMatrix {
    int q = 3;
    ChainVariant variant = ChainVariant::Plain;
    std::vector<Colouring> states;  // canonical enumeration order
    std::vector<std::vector<std::pair<int, Rational>>> off_diag;  // sorted cols
    std::vector<Rational> diag;

    int size() const { return static_cast<int>(states.size()); }
    int find_state(const Colouring& chi) const;  // -1 when absent
    Rational entry(int from, int to) const;
    Rational row_sum(int row) const;
};

TransitionMatrix build_transition_matrix(const BipartiteGraph& g,
                                         const ChainSpec& spec,
                                         int max_states = 20000);

/// Uniform pi is stationary iff the matrix is symmetric; exact comparison.
bool check_detailed_balance(const TransitionMatrix& t);

/// Strong connectivity of the nonzero-transition digraph. (Aperiodicity is
/// automatic here: every proper state retains positive holding probability.)
bool check_ergodic(const TransitionMatrix& t);

struct MixingReport {
    long long tau = 0;
    std::vector<double> tv_curve;        // max over starts, per step
    std::vector<long long> per_start_tau;
};

/// Exact mixing time: least t with max-start total-variation distance to
/// uniform <= 1/e. Powering in long double; a state is declared mixed when
/// tv <= 1/e + tolerance (documented tolerance, default 1e-12).
MixingReport exact_mixing_time(const TransitionMatrix& t,
                               double tolerance = 1e-12,
                               long long max_steps = 1000000);

/// A bottleneck cut: the chain may leave a_states only through m_states,
/// measures taken under uniform pi.
struct BottleneckCut {
    std::vector<int> a_states;
    std::vector<int> m_states;
    Rational pi_a;
    Rational pi_m;
};

/// Cut for one colour: A = states heavy on `heavy_side`, M = balanced states.
BottleneckCut make_phase_cut(const TransitionMatrix& t, const BipartiteGraph& g,
                             const Rational& rho, int colour,
                             Side heavy_side = Side::Even);

struct BlockingCheck {
    bool ok = true;
    int witness_from = -1;  // a transition A -> outside(A u M), when !ok
    int witness_to = -1;
};

/// Exhaustively confirm no nonzero transition leaves A except into M.
BlockingCheck verify_bottleneck_condition(const TransitionMatrix& t,
                                          const BottleneckCut& cut);

/// pi(A) / (8 pi(M)); requires pi(A) <= 1/2 and the blocking condition.
Rational bottleneck_lower_bound(const TransitionMatrix& t,
                                const BottleneckCut& cut);

struct TrajectoryStats {
    long long steps = 0;
    bool recorded = false;
    std::vector<PhaseLabel> labels;      // per step, t = 0..steps (if recorded)
    std::vector<int> zero_diff;          // |chi^-1(0) n E| - |chi^-1(0) n O|
    long long occupancy[3][3] = {};      // [colour][phase as ordinal]
    std::map<std::string, long long> region_occupancy;  // label triple -> count
    std::optional<long long> first_balanced_hit;  // first t with any balanced colour
    Colouring final_state;
};

TrajectoryStats simulate_trajectory(const BipartiteGraph& g,
                                    const Colouring& start,
                                    const ChainSpec& spec, long long steps,
                                    std::uint64_t seed, bool record_steps = true);

/// Canonical extreme start: `side` entirely `colour`, the other side
/// alternating between the remaining two colours by index parity.
Colouring heavy_start(const BipartiteGraph& g, int colour, Side side);

struct EscapeResult {
    bool escaped = false;  // false = timeout, reported as data not error
    long long steps = 0;
};

/// First time any colour becomes balanced, starting from the canonical heavy
/// start for (colour, side).
EscapeResult phase_escape_time(const BipartiteGraph& g, const ChainSpec& spec,
                               int colour, Side side, std::uint64_t seed,
                               long long max_steps);

/// CSV columns: t,phase_0,phase_1,phase_2,zero_imbalance.
void write_trajectory_csv(std::ostream& out, const BipartiteGraph& g,
                          const TrajectoryStats& stats);

}  // namespace torpid
