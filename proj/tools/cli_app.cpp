#include "cli_app.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include "torpid/approximation.hpp"
#include "torpid/bounds.hpp"
#include "torpid/colouring.hpp"
#include "torpid/dynamics.hpp"
#include "torpid/graph.hpp"
#include "torpid/heights.hpp"
#include "torpid/types.hpp"

namespace torpid::cli {

namespace {

using json = nlohmann::ordered_json;

json json_big(const BigInt& value) {
    if (value >= std::numeric_limits<std::int64_t>::min() &&
        value <= std::numeric_limits<std::int64_t>::max())
        return static_cast<std::int64_t>(value);
    return value.str();
}

json json_rational(const Rational& value) { return to_string(value); }

struct CommonOptions {
    std::string graph_spec;
    int q = 3;
    std::string rho_text = "0.2";
    std::uint64_t seed = 0;
    long long steps = 10000;
    int guard_states = 20000;
    int guard_enum = 32;
    int guard_pairs = 8;
    int guard_expansion = 20;
    std::string variant = "plain";
    std::string format = "json";
    std::string out_path;

    Rational rho() const { return rational_from_decimal(rho_text); }
    ChainVariant chain_variant() const {
        if (variant == "plain") return ChainVariant::Plain;
        if (variant == "restricted") return ChainVariant::Restricted;
        throw InvalidInput("variant must be plain or restricted");
    }
    ChainSpec chain_spec() const { return ChainSpec{q, chain_variant(), rho()}; }
};

BipartiteGraph parse_graph(const CommonOptions& opts) {
    const std::string& spec = opts.graph_spec;
    if (spec.empty()) throw InvalidInput("missing --graph");
    auto colon = spec.find(':');
    std::string family = colon == std::string::npos ? spec : spec.substr(0, colon);
    auto args = [&] {
        std::vector<long long> values;
        if (colon == std::string::npos) return values;
        std::stringstream rest(spec.substr(colon + 1));
        std::string item;
        while (std::getline(rest, item, ','))
            values.push_back(std::stoll(item));
        return values;
    };
    try {
        if (family == "hypercube") {
            auto a = args();
            if (a.size() != 1) throw InvalidInput("hypercube:<d>");
            return build_hypercube(static_cast<int>(a[0]));
        }
        if (family == "cycle") {
            auto a = args();
            if (a.size() != 1) throw InvalidInput("cycle:<n>");
            return build_even_cycle(static_cast<int>(a[0]));
        }
        if (family == "complete") {
            auto a = args();
            if (a.size() != 1) throw InvalidInput("complete:<d>");
            return build_complete_bipartite(static_cast<int>(a[0]));
        }
        if (family == "torus") {
            auto a = args();
            if (a.size() != 2) throw InvalidInput("torus:<L>,<d>");
            return build_torus(static_cast<int>(a[0]), static_cast<int>(a[1]));
        }
        if (family == "random") {
            auto a = args();
            if (a.size() != 2) throw InvalidInput("random:<n_even>,<d>");
            return build_random_regular(static_cast<int>(a[0]),
                                        static_cast<int>(a[1]), opts.seed);
        }
    } catch (const std::invalid_argument&) {
        throw InvalidInput("bad graph parameters in '" + spec + "'");
    }
    std::ifstream file(spec);
    if (!file) throw InvalidInput("cannot open graph file '" + spec + "'");
    return read_graph(file);
}

void emit(const CommonOptions& opts, std::ostream& fallback,
          const std::string& text) {
    if (opts.out_path.empty()) {
        fallback << text;
        return;
    }
    std::ofstream file(opts.out_path, std::ios::binary);
    if (!file) throw InvalidInput("cannot open output file '" + opts.out_path + "'");
    file << text;
}

json occupancy_json(const TrajectoryStats& stats) {
    json occ = json::object();
    for (int colour = 0; colour < 3; ++colour) {
        occ[std::to_string(colour)] = {
            {"e_heavy", stats.occupancy[colour][0]},
            {"o_heavy", stats.occupancy[colour][1]},
            {"balanced", stats.occupancy[colour][2]},
        };
    }
    return occ;
}

int cmd_graph(const CommonOptions& opts, const std::string& emit_path,
              std::ostream& out) {
    BipartiteGraph g = parse_graph(opts);
    ExpansionResult expansion = bipartite_expansion(g, opts.guard_expansion);
    LocalityResult loc = locality(g);
    json report{
        {"n_even", g.n_even()},
        {"n_odd", g.n_odd()},
        {"degree", g.degree()},
        {"n", g.num_vertices()},
        {"edges", g.num_edges()},
        {"delta", json_rational(expansion.delta)},
        {"vacuous", expansion.vacuous},
        {"ell", loc.ell},
        {"perfect_matching", has_perfect_matching(g)},
    };
    if (!expansion.vacuous) {
        report["delta_witness"] = {
            {"side", std::string(1, side_char(expansion.witness.side))},
            {"members", expansion.witness.members}};
    }
    if (!emit_path.empty()) {
        std::ofstream file(emit_path, std::ios::binary);
        if (!file) throw InvalidInput("cannot open '" + emit_path + "'");
        write_graph(file, g);
        report["emitted"] = emit_path;
    }
    emit(opts, out, report.dump(2) + "\n");
    return 0;
}

int cmd_count(const CommonOptions& opts, std::ostream& out) {
    BipartiteGraph g = parse_graph(opts);
    BigInt enumerated = count_colourings(g, 3, opts.guard_enum);
    BigInt decomposed = count_via_decomposition(g, opts.guard_pairs);
    ClassSizes sizes = class_sizes(g, opts.rho(), opts.guard_enum);
    if (opts.format == "csv") {
        std::ostringstream csv;
        write_class_sizes_csv(csv, sizes);
        emit(opts, out, csv.str());
        return 0;
    }
    json per_colour = json::array();
    for (int i = 0; i < 3; ++i)
        per_colour.push_back({{"colour", i},
                              {"balanced", json_big(sizes.by_colour[i].balanced)},
                              {"e_heavy", json_big(sizes.by_colour[i].e_heavy)},
                              {"o_heavy", json_big(sizes.by_colour[i].o_heavy)}});
    json report{
        {"backtracking", json_big(enumerated)},
        {"decomposition", json_big(decomposed)},
        {"agree", enumerated == decomposed},
        {"rho", opts.rho_text},
        {"class_sizes", per_colour},
    };
    emit(opts, out, report.dump(2) + "\n");
    return 0;
}

int cmd_mix(const CommonOptions& opts, bool with_curve, std::ostream& out) {
    BipartiteGraph g = parse_graph(opts);
    TransitionMatrix t = build_transition_matrix(g, opts.chain_spec(),
                                                 opts.guard_states);
    bool ergodic = check_ergodic(t);
    json report{
        {"states", t.size()},
        {"ergodic", ergodic},
        {"detailed_balance", check_detailed_balance(t)},
    };
    if (ergodic) {
        MixingReport mix = exact_mixing_time(t);
        report["tau"] = mix.tau;
        report["tv_curve"] = mix.tv_curve;
        if (with_curve) report["per_start_tau"] = mix.per_start_tau;
    } else {
        report["tau"] = nullptr;
    }
    emit(opts, out, report.dump(2) + "\n");
    return 0;
}

int cmd_conductance(const CommonOptions& opts, int colour, bool with_tau,
                    std::ostream& out) {
    BipartiteGraph g = parse_graph(opts);
    ChainSpec spec = opts.chain_spec();
    TransitionMatrix t = build_transition_matrix(g, spec, opts.guard_states);
    BottleneckCut cut = make_phase_cut(t, g, opts.rho(), colour, Side::Even);
    BlockingCheck blocking = verify_bottleneck_condition(t, cut);
    json report{
        {"states", t.size()},
        {"colour", colour},
        {"rho", opts.rho_text},
        {"pi_A", json_rational(cut.pi_a)},
        {"pi_M", json_rational(cut.pi_m)},
        {"blocking_ok", blocking.ok},
    };
    if (!blocking.ok) {
        report["blocking_witness"] = {{"from", blocking.witness_from},
                                      {"to", blocking.witness_to}};
    }
    if (blocking.ok && cut.pi_a <= Rational(1, 2) && !cut.m_states.empty()) {
        Rational bound = bottleneck_lower_bound(t, cut);
        report["dfj_bound"] = json_rational(bound);
        if (with_tau && check_ergodic(t)) {
            MixingReport mix = exact_mixing_time(t);
            report["tau"] = mix.tau;
            report["bound_below_tau"] = bound < Rational(mix.tau);
        }
    }
    emit(opts, out, report.dump(2) + "\n");
    return 0;
}

int cmd_simulate(const CommonOptions& opts, int colour, const std::string& side,
                 int trajectories, std::ostream& out) {
    BipartiteGraph g = parse_graph(opts);
    ChainSpec spec = opts.chain_spec();
    Side heavy_side = side == "O" ? Side::Odd : Side::Even;
    bool want_csv = !opts.out_path.empty();
    if (want_csv && trajectories != 1)
        throw InvalidInput("CSV export covers a single trajectory");
    if (spec.q < 3) throw InvalidInput("the simulated start uses three colours");
    Colouring start = heavy_start(g, colour, heavy_side);
    start.q = spec.q;  // a proper 3-colouring is proper for any larger q
    json runs = json::array();
    for (int k = 0; k < trajectories; ++k) {
        std::uint64_t stream_seed = opts.seed ^ static_cast<std::uint64_t>(k);
        TrajectoryStats stats = simulate_trajectory(g, start, spec, opts.steps,
                                                    stream_seed, want_csv);
        json run{
            {"trajectory", k},
            {"seed", stream_seed},
            {"steps", stats.steps},
            {"occupancy", occupancy_json(stats)},
            {"region_occupancy", stats.region_occupancy},
        };
        if (stats.first_balanced_hit)
            run["first_balanced_hit"] = *stats.first_balanced_hit;
        else
            run["first_balanced_hit"] = nullptr;
        runs.push_back(run);
        if (want_csv) {
            std::ofstream file(opts.out_path, std::ios::binary);
            if (!file)
                throw InvalidInput("cannot open '" + opts.out_path + "'");
            write_trajectory_csv(file, g, stats);
        }
    }
    json report{{"rho", opts.rho_text},
                {"colour", colour},
                {"side", side},
                {"trajectories", runs}};
    out << report.dump(2) << "\n";
    return 0;
}

int cmd_heights(const CommonOptions& opts, std::ostream& out) {
    BipartiteGraph g = parse_graph(opts);
    int root = g.global_id(Side::Even, 0);
    if (auto witness = check_level_structure(g, root)) {
        const auto& w = *witness;
        throw StructuralFailure("level structure fails", w[0], w[1], w[2]);
    }
    auto heights = enumerate_height_functions(g, root, opts.guard_enum);
    long long pinned = 0, roundtrip_ok = 0, path_max = 0, path_total = 0;
    bool all_ok = true;
    for_each_colouring(
        g, 3,
        [&](const Colouring& chi) {
            if (chi.values[root] != 0) return;
            ++pinned;
            HeightFunction f = to_height_function(g, chi, root);
            if (to_colouring(g, f) == chi) ++roundtrip_ok;
            ErgodicityPath path = ergodicity_path(g, chi, root);
            auto len = static_cast<long long>(path.moves.size());
            path_max = std::max(path_max, len);
            path_total += len;
            const Colouring& last = path.states.back();
            all_ok = all_ok && is_proper(g, last);
        },
        opts.guard_enum);
    json report{
        {"height_functions", static_cast<long long>(heights.size())},
        {"pinned_colourings", pinned},
        {"bijection_ok",
         pinned == static_cast<long long>(heights.size()) && roundtrip_ok == pinned},
        {"roundtrip_ok", roundtrip_ok},
        {"path_length_max", path_max},
        {"path_length_total", path_total},
        {"paths_proper", all_ok},
    };
    if (g.n_even() == 4 && g.n_odd() == 4 && g.degree() == 3) {
        Colouring frozen = frozen_four_colouring(g);
        report["frozen_four_colouring"] = {
            {"values", std::vector<int>(frozen.values.begin(), frozen.values.end())},
            {"frozen", is_frozen(g, frozen)},
        };
    }
    emit(opts, out, report.dump(2) + "\n");
    return 0;
}

int cmd_approx(const CommonOptions& opts, bool force_reconstruction,
               std::ostream& out) {
    BipartiteGraph g = parse_graph(opts);
    auto census = stats_census(g, opts.guard_pairs);
    long long pair_count = 0;
    json census_json = json::array();
    for (const auto& [stats, count] : census) {
        pair_count += count;
        census_json.push_back({{"e_closure", stats.e_closure},
                               {"e_nbrs", stats.e_nbrs},
                               {"e_core", stats.e_core},
                               {"e_core_nbrs", stats.e_core_nbrs},
                               {"o_core", stats.o_core},
                               {"o_core_nbrs", stats.o_core_nbrs},
                               {"count", count}});
    }
    // trivial-approximation sweep over every subset of both classes
    bool trivial_ok = true;
    for (Side side : {Side::Even, Side::Odd}) {
        int n = side == Side::Even ? g.n_even() : g.n_odd();
        if (n > 20) throw GuardExceeded("trivial sweep beyond 2^20 subsets");
        for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
            VertexSet a{side, {}};
            for (int i = 0; i < n; ++i)
                if (mask >> i & 1) a.members.push_back(i);
            trivial_ok =
                trivial_ok && is_approximation(g, a, trivial_approximation(g, a)).ok;
        }
    }
    json report{{"pairs", pair_count},
                {"census_classes", static_cast<long long>(census.size())},
                {"census", census_json},
                {"trivial_approximation_ok", trivial_ok}};
    // reconstruction superset sweep (exhaustive; cheap only on tiny graphs)
    if (pair_count <= 64 || force_reconstruction) {
        bool superset_ok = true;
        long long checked = 0;
        for (const auto& [stats, count] : census) {
            auto members = enumerate_stats_class(g, stats, opts.guard_pairs);
            for (const auto& [e_zero, o_zero] : members) {
                ZeroSetApproximation approx =
                    trivial_zero_set_approximation(g, e_zero, o_zero);
                std::vector<SetPair> target;
                for (const auto& cand : members)
                    if (satisfies_containments(g, approx, cand.first, cand.second))
                        target.push_back(cand);
                for (int mask = 0; mask < 8; ++mask) {
                    ReconstructionFlags flags{(mask & 1) != 0, (mask & 2) != 0,
                                              (mask & 4) != 0};
                    auto produced =
                        reconstruct_candidates(g, approx, stats, flags, true);
                    auto has = [&](const SetPair& p) {
                        for (const auto& q : produced)
                            if (q.first.members == p.first.members &&
                                q.second.members == p.second.members)
                                return true;
                        return false;
                    };
                    for (const auto& p : target)
                        superset_ok = superset_ok && has(p);
                    ++checked;
                }
            }
        }
        report["reconstruction"] = {{"flag_runs", checked},
                                    {"superset_ok", superset_ok}};
    } else {
        report["reconstruction"] = {
            {"skipped", "pair space too large; pass --force-reconstruction"}};
    }
    emit(opts, out, report.dump(2) + "\n");
    return 0;
}

int cmd_bounds(const CommonOptions& opts, BoundParameters params,
               bool have_graph, std::ostream& out) {
    if (have_graph) {
        BipartiteGraph g = parse_graph(opts);
        ExpansionResult expansion = bipartite_expansion(g, opts.guard_expansion);
        params.delta = static_cast<double>(expansion.delta);
        params.ell = locality(g).ell;
        params.d = g.degree();
        params.n_vertices = g.num_vertices();
    }
    params.rho = static_cast<double>(opts.rho());
    bool chernoff_ok = true;
    for (int m = 1; m <= 200; ++m) {
        for (int k = 1; k <= 10; ++k) {
            Rational beta(k, 20);  // 0.05 .. 0.50
            chernoff_ok = chernoff_ok && binomial_tail_entropy_bound(m, beta);
            if (static_cast<double>(beta) <= std::exp(-1.0))
                chernoff_ok = chernoff_ok && binomial_tail_loglinear_bound(m, beta);
        }
    }
    BoundExponents exponents = bound_exponents(params);
    json report{
        {"rho", params.rho},
        {"rho_star", rho_star()},
        {"alpha", alpha_threshold(params.rho)},
        {"chernoff_ok", chernoff_ok},
        {"inputs",
         {{"delta", params.delta},
          {"ell", params.ell},
          {"d", params.d},
          {"n", params.n_vertices},
          {"C1", params.c1},
          {"C1_prime", params.c1_prime},
          {"C2", params.c2},
          {"d0", params.d0}}},
        {"exponents",
         {{"mixing_lower", exponents.mixing_lower},
          {"balanced_upper", exponents.balanced_upper},
          {"cube_mixing", exponents.cube_mixing},
          {"cube_imbalance", exponents.cube_imbalance}}},
        {"gates",
         {{"delta_gate", exponents.delta_gate},
          {"degree_gate", exponents.degree_gate},
          {"rho_feasible", exponents.rho_feasible}}},
    };
    emit(opts, out, report.dump(2) + "\n");
    return 0;
}

json error_json(int code, const std::string& kind, const std::string& message) {
    return json{{"error", {{"code", code}, {"kind", kind}, {"message", message}}}};
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"exact desk-scale analysis of colouring dynamics on regular "
                 "bipartite graphs"};
    app.require_subcommand(1);

    CommonOptions opts;
    auto add_common = [&](CLI::App* cmd, bool needs_graph) {
        if (needs_graph)
            cmd->add_option("--graph", opts.graph_spec,
                            "family:params (hypercube:d, cycle:n, complete:d, "
                            "torus:L,d, random:n,d) or a graph file path");
        cmd->add_option("--q", opts.q, "number of colours");
        cmd->add_option("--rho", opts.rho_text, "locality threshold (exact rational)");
        cmd->add_option("--seed", opts.seed, "64-bit RNG seed");
        cmd->add_option("--steps", opts.steps, "simulation steps");
        cmd->add_option("--guard-states", opts.guard_states, "state-space cap");
        cmd->add_option("--guard-enum", opts.guard_enum, "enumeration vertex cap");
        cmd->add_option("--guard-pairs", opts.guard_pairs, "pair-scan class cap");
        cmd->add_option("--guard-expansion", opts.guard_expansion,
                        "expansion-scan class cap");
        cmd->add_option("--variant", opts.variant, "plain|restricted");
        cmd->add_option("--format", opts.format, "json|csv");
        cmd->add_option("--out", opts.out_path, "output file");
    };

    std::string emit_path, side = "E";
    int colour = 0, trajectories = 1;
    bool with_curve = false, no_tau = false, force_reconstruction = false;
    BoundParameters params;
    bool graph_given_for_bounds = false;

    CLI::App* graph_cmd = app.add_subcommand("graph", "structural invariants");
    add_common(graph_cmd, true);
    graph_cmd->add_option("--emit", emit_path, "write the graph text format");

    CLI::App* count_cmd = app.add_subcommand("count", "exact colouring counts");
    add_common(count_cmd, true);

    CLI::App* mix_cmd = app.add_subcommand("mix", "exact mixing analysis");
    add_common(mix_cmd, true);
    mix_cmd->add_flag("--curve", with_curve, "include per-start mixing times");

    CLI::App* cond_cmd = app.add_subcommand("conductance", "bottleneck bound");
    add_common(cond_cmd, true);
    cond_cmd->add_option("--colour", colour, "cut colour");
    cond_cmd->add_flag("--no-tau", no_tau, "skip the mixing-time comparison");

    CLI::App* sim_cmd = app.add_subcommand("simulate", "seeded trajectories");
    add_common(sim_cmd, true);
    sim_cmd->add_option("--colour", colour, "heavy colour of the start");
    sim_cmd->add_option("--side", side, "heavy side of the start (E|O)");
    sim_cmd->add_option("--trajectories", trajectories, "independent streams");

    CLI::App* heights_cmd =
        app.add_subcommand("heights", "height-function correspondence");
    add_common(heights_cmd, true);

    CLI::App* approx_cmd =
        app.add_subcommand("approx", "approximation machinery census");
    add_common(approx_cmd, true);
    approx_cmd->add_flag("--force-reconstruction", force_reconstruction,
                         "run the reconstruction sweep regardless of size");

    CLI::App* bounds_cmd = app.add_subcommand("bounds", "analytic evaluators");
    add_common(bounds_cmd, true);
    bounds_cmd->add_option("--d", params.d, "degree");
    bounds_cmd->add_option("--delta", params.delta, "bipartite expansion");
    bounds_cmd->add_option("--ell", params.ell, "locality");
    bounds_cmd->add_option("--n", params.n_vertices, "vertex count");
    bounds_cmd->add_option("--C1", params.c1, "constant C1");
    bounds_cmd->add_option("--C1p", params.c1_prime, "constant C1'");
    bounds_cmd->add_option("--C2", params.c2, "constant C2");
    bounds_cmd->add_option("--d0", params.d0, "degree threshold d0");

    std::vector<const char*> argv;
    argv.push_back("torpid");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << error_json(3, "usage", e.what()).dump(2) << "\n";
        return 3;
    }

    try {
        if (graph_cmd->parsed()) return cmd_graph(opts, emit_path, out);
        if (count_cmd->parsed()) return cmd_count(opts, out);
        if (mix_cmd->parsed()) return cmd_mix(opts, with_curve, out);
        if (cond_cmd->parsed()) return cmd_conductance(opts, colour, !no_tau, out);
        if (sim_cmd->parsed())
            return cmd_simulate(opts, colour, side, trajectories, out);
        if (heights_cmd->parsed()) return cmd_heights(opts, out);
        if (approx_cmd->parsed())
            return cmd_approx(opts, force_reconstruction, out);
        if (bounds_cmd->parsed()) {
            graph_given_for_bounds = !opts.graph_spec.empty();
            return cmd_bounds(opts, params, graph_given_for_bounds, out);
        }
        err << error_json(3, "usage", "no subcommand").dump(2) << "\n";
        return 3;
    } catch (const GuardExceeded& e) {
        out << error_json(2, "guard", e.what()).dump(2) << "\n";
        return 2;
    } catch (const StructuralFailure& e) {
        json report = error_json(4, "structure", e.what());
        auto vertex_json = [](const Vertex& v) {
            return json{{"side", std::string(1, side_char(v.side))},
                        {"index", v.index}};
        };
        report["error"]["witness"] = {{"a", vertex_json(e.witness_a)},
                                      {"b", vertex_json(e.witness_b)},
                                      {"upper", vertex_json(e.witness_upper)}};
        out << report.dump(2) << "\n";
        return 4;
    } catch (const InvalidInput& e) {
        out << error_json(3, "input", e.what()).dump(2) << "\n";
        return 3;
    } catch (const std::exception& e) {
        out << error_json(3, "internal", e.what()).dump(2) << "\n";
        return 3;
    }
}

}  // namespace torpid::cli
