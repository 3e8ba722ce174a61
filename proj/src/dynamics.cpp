#include "torpid/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <ostream>
#include <string>

namespace torpid {

std::uint64_t Rng::bounded(std::uint64_t n) {
    if (n == 0) throw InvalidInput("bounded(0)");
    std::uint64_t threshold = (-n) % n;
    for (;;) {
        std::uint64_t r = gen_();
        if (r >= threshold) return r % n;
    }
}

namespace {

bool colour_allowed(const BipartiteGraph& g, const Colouring& chi, int v, int c) {
    const auto& nb = g.neighbours_global(v);
    int base = v < g.n_even() ? g.n_even() : 0;
    for (int w : nb)
        if (chi.values[base + w] == c) return false;
    return true;
}

std::vector<int> allowed_colours(const BipartiteGraph& g, const Colouring& chi,
                                 int v) {
    std::vector<int> out;
    for (int c = 0; c < chi.q; ++c)
        if (colour_allowed(g, chi, v, c)) out.push_back(c);
    return out;
}

}  // namespace

StepResult glauber_step_inplace(const BipartiteGraph& g, Colouring& chi,
                                const ChainSpec& spec, Rng& rng) {
    int v = static_cast<int>(rng.bounded(g.num_vertices()));
    StepResult res;
    res.vertex = v;
    res.old_colour = chi.values[v];
    if (spec.variant == ChainVariant::Plain) {
        int c = static_cast<int>(rng.bounded(spec.q));
        res.new_colour = res.old_colour;
        if (c != res.old_colour && colour_allowed(g, chi, v, c)) {
            chi.values[v] = static_cast<std::uint8_t>(c);
            res.new_colour = c;
            res.moved = true;
        }
    } else {
        auto allowed = allowed_colours(g, chi, v);
        // A proper state always allows the current colour, so the set is
        // nonempty; stay in place if it somehow is not.
        res.new_colour = res.old_colour;
        if (!allowed.empty()) {
            int c = allowed[rng.bounded(allowed.size())];
            if (c != res.old_colour) {
                chi.values[v] = static_cast<std::uint8_t>(c);
                res.new_colour = c;
                res.moved = true;
            }
        }
    }
    return res;
}

Colouring glauber_step(const BipartiteGraph& g, const Colouring& chi,
                       const ChainSpec& spec, Rng& rng) {
    if (chi.q != spec.q)
        throw InvalidInput("state and chain disagree on the colour count");
    if (!is_proper(g, chi)) throw InvalidInput("chain step needs a proper state");
    Colouring next = chi;
    glauber_step_inplace(g, next, spec, rng);
    return next;
}

int TransitionMatrix::find_state(const Colouring& chi) const {
    auto it = std::lower_bound(states.begin(), states.end(), chi);
    if (it == states.end() || !(*it == chi)) return -1;
    return static_cast<int>(it - states.begin());
}

Rational TransitionMatrix::entry(int from, int to) const {
    if (from == to) return diag[from];
    const auto& row = off_diag[from];
    auto it = std::lower_bound(row.begin(), row.end(), to,
                               [](const auto& e, int col) { return e.first < col; });
    if (it == row.end() || it->first != to) return Rational(0);
    return it->second;
}

Rational TransitionMatrix::row_sum(int row) const {
    Rational s = diag[row];
    for (const auto& [col, p] : off_diag[row]) s += p;
    return s;
}

TransitionMatrix build_transition_matrix(const BipartiteGraph& g,
                                         const ChainSpec& spec, int max_states) {
    TransitionMatrix t;
    t.q = spec.q;
    t.variant = spec.variant;
    for_each_colouring(g, spec.q, [&](const Colouring& chi) {
        if (static_cast<int>(t.states.size()) >= max_states)
            throw GuardExceeded("state space exceeds the cap of " +
                                std::to_string(max_states) + " states");
        t.states.push_back(chi);
    });
    int s = t.size();
    int n = g.num_vertices();
    t.off_diag.resize(s);
    t.diag.resize(s);
    for (int k = 0; k < s; ++k) {
        const Colouring& chi = t.states[k];
        std::map<int, Rational> row;
        for (int v = 0; v < n; ++v) {
            Rational per_colour;
            if (spec.variant == ChainVariant::Plain) {
                per_colour = Rational(1, static_cast<long long>(n) * spec.q);
            } else {
                auto allowed = allowed_colours(g, chi, v);
                per_colour = Rational(1, static_cast<long long>(n) *
                                             static_cast<long long>(allowed.size()));
            }
            for (int c = 0; c < spec.q; ++c) {
                if (c == chi.values[v]) continue;
                if (!colour_allowed(g, chi, v, c)) continue;
                Colouring next = chi;
                next.values[v] = static_cast<std::uint8_t>(c);
                int idx = t.find_state(next);
                if (idx < 0) throw InvalidInput("successor state missing");
                row[idx] += per_colour;
            }
        }
        Rational off_total = 0;
        for (auto& [col, p] : row) {
            t.off_diag[k].emplace_back(col, p);
            off_total += p;
        }
        t.diag[k] = Rational(1) - off_total;
    }
    return t;
}

bool check_detailed_balance(const TransitionMatrix& t) {
    for (int i = 0; i < t.size(); ++i)
        for (const auto& [j, p] : t.off_diag[i])
            if (t.entry(j, i) != p) return false;
    return true;
}

bool check_ergodic(const TransitionMatrix& t) {
    int s = t.size();
    if (s == 0) return false;
    if (s == 1) return true;
    std::vector<std::vector<int>> rev(s);
    for (int i = 0; i < s; ++i)
        for (const auto& [j, p] : t.off_diag[i])
            if (p != 0) rev[j].push_back(i);
    auto reach = [&](bool forward) {
        std::vector<char> seen(s, 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        int count = 1;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            if (forward) {
                for (const auto& [w, p] : t.off_diag[v])
                    if (p != 0 && !seen[w]) {
                        seen[w] = 1;
                        ++count;
                        stack.push_back(w);
                    }
            } else {
                for (int w : rev[v])
                    if (!seen[w]) {
                        seen[w] = 1;
                        ++count;
                        stack.push_back(w);
                    }
            }
        }
        return count == s;
    };
    return reach(true) && reach(false);
}

namespace {

struct SparseRows {
    std::vector<std::vector<std::pair<int, long double>>> rows;  // incl. diag

    explicit SparseRows(const TransitionMatrix& t) {
        rows.resize(t.size());
        for (int i = 0; i < t.size(); ++i) {
            rows[i].reserve(t.off_diag[i].size() + 1);
            for (const auto& [j, p] : t.off_diag[i])
                rows[i].emplace_back(j, static_cast<long double>(p));
            if (t.diag[i] != 0)
                rows[i].emplace_back(i, static_cast<long double>(t.diag[i]));
        }
    }

    void apply(const std::vector<long double>& p,
               std::vector<long double>& out) const {
        std::fill(out.begin(), out.end(), 0.0L);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (p[i] == 0.0L) continue;
            long double pi = p[i];
            for (const auto& [j, w] : rows[i]) out[j] += pi * w;
        }
    }
};

long double tv_to_uniform(const std::vector<long double>& p) {
    long double u = 1.0L / static_cast<long double>(p.size());
    long double s = 0.0L;
    for (long double x : p) s += std::fabs(x - u);
    return s / 2.0L;
}

}  // namespace

MixingReport exact_mixing_time(const TransitionMatrix& t, double tolerance,
                               long long max_steps) {
    if (!check_ergodic(t))
        throw InvalidInput("mixing time is defined for ergodic chains only");
    int s = t.size();
    SparseRows rows(t);
    const long double threshold =
        1.0L / std::exp(1.0L) + static_cast<long double>(tolerance);
    MixingReport report;
    report.per_start_tau.resize(s, 0);
    auto run_start = [&](int start, long long horizon,
                         std::vector<double>* curve) -> long long {
        std::vector<long double> p(s, 0.0L), q(s, 0.0L);
        p[start] = 1.0L;
        for (long long step = 0;; ++step) {
            long double tv = tv_to_uniform(p);
            if (curve) {
                if (static_cast<long long>(curve->size()) <= step)
                    curve->resize(step + 1, 0.0);
                (*curve)[step] = std::max((*curve)[step], static_cast<double>(tv));
            }
            if (horizon >= 0) {
                if (step == horizon) return step;
            } else if (tv <= threshold) {
                return step;
            }
            if (step >= max_steps)
                throw GuardExceeded("mixing-time powering exceeded " +
                                    std::to_string(max_steps) + " steps");
            rows.apply(p, q);
            std::swap(p, q);
        }
    };
    long long tau = 0;
    for (int start = 0; start < s; ++start) {
        report.per_start_tau[start] = run_start(start, -1, nullptr);
        tau = std::max(tau, report.per_start_tau[start]);
    }
    report.tau = tau;
    report.tv_curve.assign(tau + 1, 0.0);
    for (int start = 0; start < s; ++start) run_start(start, tau, &report.tv_curve);
    return report;
}

namespace {

// Integer comparison form of the balance classification: E-heavy iff
// 2*diff*den > num*N  with rho = num/den.
struct FastClassifier {
    long long num_n;  // num * N
    long long two_den;

    FastClassifier(const Rational& rho, int n) {
        if (rho < 0) throw InvalidInput("rho must be non-negative");
        BigInt nn = numerator(rho) * n;
        BigInt td = denominator(rho) * 2;
        BigInt limit = BigInt(1) << 62;
        if (nn >= limit || td * n >= limit)
            throw InvalidInput("rho out of range for fast classification");
        num_n = static_cast<long long>(nn);
        two_den = static_cast<long long>(td);
    }

    Phase operator()(int diff) const {
        long long lhs = two_den * diff;
        if (lhs > num_n) return Phase::EHeavy;
        if (-lhs > num_n) return Phase::OHeavy;
        return Phase::Balanced;
    }
};

}  // namespace

BottleneckCut make_phase_cut(const TransitionMatrix& t, const BipartiteGraph& g,
                             const Rational& rho, int colour, Side heavy_side) {
    if (colour < 0 || colour >= t.q) throw InvalidInput("colour out of range");
    FastClassifier classify(rho, g.num_vertices());
    BottleneckCut cut;
    for (int k = 0; k < t.size(); ++k) {
        int ne = 0, no = 0;
        const auto& vals = t.states[k].values;
        for (int i = 0; i < g.n_even(); ++i)
            if (vals[i] == colour) ++ne;
        for (int j = 0; j < g.n_odd(); ++j)
            if (vals[g.n_even() + j] == colour) ++no;
        Phase p = classify(ne - no);
        Phase target = heavy_side == Side::Even ? Phase::EHeavy : Phase::OHeavy;
        if (p == target)
            cut.a_states.push_back(k);
        else if (p == Phase::Balanced)
            cut.m_states.push_back(k);
    }
    cut.pi_a = Rational(static_cast<long long>(cut.a_states.size()), t.size());
    cut.pi_m = Rational(static_cast<long long>(cut.m_states.size()), t.size());
    return cut;
}

BlockingCheck verify_bottleneck_condition(const TransitionMatrix& t,
                                          const BottleneckCut& cut) {
    std::vector<char> in_a(t.size(), 0), in_m(t.size(), 0);
    for (int k : cut.a_states) in_a[k] = 1;
    for (int k : cut.m_states) {
        if (in_a[k]) throw InvalidInput("cut sets must be disjoint");
        in_m[k] = 1;
    }
    for (int k : cut.a_states)
        for (const auto& [j, p] : t.off_diag[k])
            if (p != 0 && !in_a[j] && !in_m[j]) return {false, k, j};
    return {};
}

Rational bottleneck_lower_bound(const TransitionMatrix& t,
                                const BottleneckCut& cut) {
    if (cut.pi_a > Rational(1, 2))
        throw InvalidInput("bottleneck bound needs pi(A) <= 1/2");
    if (cut.m_states.empty())
        throw InvalidInput("bottleneck bound needs a nonempty bottleneck set");
    BlockingCheck check = verify_bottleneck_condition(t, cut);
    if (!check.ok)
        throw InvalidInput("blocking condition fails: transition " +
                           std::to_string(check.witness_from) + " -> " +
                           std::to_string(check.witness_to));
    return cut.pi_a / (8 * cut.pi_m);
}

namespace {

std::string label_string(const PhaseLabel& label) {
    std::string s;
    for (Phase p : label.labels) s += phase_char(p);
    return s;
}

}  // namespace

TrajectoryStats simulate_trajectory(const BipartiteGraph& g,
                                    const Colouring& start,
                                    const ChainSpec& spec, long long steps,
                                    std::uint64_t seed, bool record_steps) {
    if (start.q != spec.q)
        throw InvalidInput("start state and chain disagree on the colour count");
    if (!is_proper(g, start)) throw InvalidInput("trajectory needs a proper start");
    FastClassifier classify(spec.rho, g.num_vertices());
    Rng rng(seed);
    Colouring chi = start;
    // live per-colour counts on each class
    std::vector<int> ne(std::max(spec.q, 3), 0), no(std::max(spec.q, 3), 0);
    for (int i = 0; i < g.n_even(); ++i) ++ne[chi.values[i]];
    for (int j = 0; j < g.n_odd(); ++j) ++no[chi.values[g.n_even() + j]];

    TrajectoryStats stats;
    stats.steps = steps;
    stats.recorded = record_steps;
    if (record_steps) {
        stats.labels.reserve(steps + 1);
        stats.zero_diff.reserve(steps + 1);
    }
    auto observe = [&](long long t) {
        PhaseLabel label{};
        bool any_balanced = false;
        for (int i = 0; i < 3; ++i) {
            label.labels[i] = classify(ne[i] - no[i]);
            any_balanced |= label.labels[i] == Phase::Balanced;
        }
        for (int i = 0; i < 3; ++i)
            ++stats.occupancy[i][static_cast<int>(label.labels[i])];
        ++stats.region_occupancy[label_string(label)];
        if (any_balanced && !stats.first_balanced_hit) stats.first_balanced_hit = t;
        if (record_steps) {
            stats.labels.push_back(label);
            stats.zero_diff.push_back(ne[0] - no[0]);
        }
    };
    observe(0);
    for (long long t = 1; t <= steps; ++t) {
        StepResult res = glauber_step_inplace(g, chi, spec, rng);
        if (res.moved) {
            bool even_side = res.vertex < g.n_even();
            auto& cls = even_side ? ne : no;
            --cls[res.old_colour];
            ++cls[res.new_colour];
        }
        observe(t);
    }
    stats.final_state = chi;
    return stats;
}

Colouring heavy_start(const BipartiteGraph& g, int colour, Side side) {
    if (colour < 0 || colour > 2) throw InvalidInput("colour out of range");
    Colouring chi{3, std::vector<std::uint8_t>(g.num_vertices(), 0)};
    int other1 = (colour + 1) % 3, other2 = (colour + 2) % 3;
    for (int i = 0; i < g.n_even(); ++i)
        chi.values[i] = static_cast<std::uint8_t>(
            side == Side::Even ? colour : (i % 2 ? other2 : other1));
    for (int j = 0; j < g.n_odd(); ++j)
        chi.values[g.n_even() + j] = static_cast<std::uint8_t>(
            side == Side::Odd ? colour : (j % 2 ? other2 : other1));
    return chi;
}

EscapeResult phase_escape_time(const BipartiteGraph& g, const ChainSpec& spec,
                               int colour, Side side, std::uint64_t seed,
                               long long max_steps) {
    if (spec.q != 3) throw InvalidInput("phase escape is a 3-colour notion");
    FastClassifier classify(spec.rho, g.num_vertices());
    Colouring chi = heavy_start(g, colour, side);
    if (!is_proper(g, chi)) throw InvalidInput("heavy start is not proper");
    Rng rng(seed);
    std::vector<int> ne(3, 0), no(3, 0);
    for (int i = 0; i < g.n_even(); ++i) ++ne[chi.values[i]];
    for (int j = 0; j < g.n_odd(); ++j) ++no[chi.values[g.n_even() + j]];
    auto balanced_now = [&] {
        for (int i = 0; i < 3; ++i)
            if (classify(ne[i] - no[i]) == Phase::Balanced) return true;
        return false;
    };
    if (balanced_now()) return {true, 0};
    for (long long t = 1; t <= max_steps; ++t) {
        StepResult res = glauber_step_inplace(g, chi, spec, rng);
        if (res.moved) {
            auto& cls = res.vertex < g.n_even() ? ne : no;
            --cls[res.old_colour];
            ++cls[res.new_colour];
            if (balanced_now()) return {true, t};
        }
    }
    return {false, max_steps};
}

void write_trajectory_csv(std::ostream& out, const BipartiteGraph& g,
                          const TrajectoryStats& stats) {
    if (!stats.recorded)
        throw InvalidInput("trajectory was simulated without step recording");
    out << "t,phase_0,phase_1,phase_2,zero_imbalance\n";
    double m = g.half_vertices();
    for (std::size_t t = 0; t < stats.labels.size(); ++t) {
        const auto& l = stats.labels[t].labels;
        out << t << ',' << phase_char(l[0]) << ',' << phase_char(l[1]) << ','
            << phase_char(l[2]) << ','
            << std::abs(stats.zero_diff[t]) / m << '\n';
    }
}

}  // namespace torpid
