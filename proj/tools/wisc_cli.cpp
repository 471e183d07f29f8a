// Command-line surface for the counting pipelines: parse/emit graph
// documents, run the drivers, export decomposition trees, and generate
// class-specific test instances.
//
// Exit codes: 0 success, 2 parse error, 3 class rejection, 4 chain budget
// exceeded, 5 oracle mismatch.

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "wisc/wisc.hpp"

namespace {

using namespace wisc;

constexpr int kExitParse = 2;
constexpr int kExitRejected = 3;
constexpr int kExitBudget = 4;
constexpr int kExitMismatch = 5;

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

WeightedGraph load_graph(const std::string& path) {
    std::string text = read_input(path);
    size_t first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && (text[first] == 'p' || text[first] == 'c'))
        return graph_from_dimacs(text);  // DIMACS-like edge list, unit weights
    return graph_from_string(text);
}

OracleLimits oracle_limits_from_env() {
    OracleLimits lim;
    if (const char* cap = std::getenv("WISC_ORACLE_CAP")) {
        int v = std::atoi(cap);
        if (v > 0) {
            lim.weight_vector_cap = v;
            lim.oddhole_cap = v;
        }
    }
    return lim;
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    out << text;
}

Json trace_json(const PipelineTrace& t) {
    Json j;
    j["atoms_small_alpha"] = t.atoms_small_alpha;
    j["atoms_elementary"] = t.atoms_elementary;
    j["augments_replaced"] = t.augments_replaced;
    j["permanent_calls"] = t.permanent_calls;
    j["exact_cap_fallbacks"] = t.exact_cap_fallbacks;
    j["cutset_stages"] = t.cutset_stages;
    j["modular_leaves"] = t.modular_leaves;
    j["partition_terms"] = t.partition_terms;
    return j;
}

struct CommonCountArgs {
    std::string input;
    std::string klass = "claw";
    std::string engine = "exact";
    double epsilon = 0.1;
    std::uint64_t seed = 0;
};

DriverKind parse_class(const std::string& s) {
    return s == "fork" ? DriverKind::fork_odd_hole_free : DriverKind::claw_odd_hole_free;
}

EngineConfig make_engine(const CommonCountArgs& a) {
    EngineConfig cfg;
    cfg.kind = a.engine == "mcmc" ? EngineKind::mcmc : EngineKind::exact;
    cfg.seed = a.seed;
    return cfg;
}

int run_count(const CommonCountArgs& args, bool max_only) {
    WeightedGraph g = load_graph(args.input);
    EngineConfig cfg = make_engine(args);
    PipelineTrace trace;
    auto t0 = std::chrono::steady_clock::now();
    Estimate est = max_only
                       ? count_max_weight(g, parse_class(args.klass), args.epsilon, cfg, &trace)
                       : run_driver(parse_class(args.klass), g, args.epsilon, cfg, &trace);
    auto t1 = std::chrono::steady_clock::now();

    Json report;
    report["command"] = max_only ? "count --max-only" : "count";
    report["class"] = args.klass;
    report["engine"] = engine_name(est.engine);
    report["epsilon_requested"] = args.epsilon;
    report["eps"] = est.eps;
    report["seed"] = args.seed;
    report[max_only ? "W_alpha" : "W"] = weight_str(est.value);
    report[max_only ? "W_alpha_decimal" : "W_decimal"] = est.value.get_d();
    report["trace"] = trace_json(trace);
    report["wall_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    std::cout << report.dump(2) << "\n";
    return 0;
}

int run_decompose(const std::string& input, const std::string& tree,
                  const std::string& dot_path) {
    WeightedGraph g = load_graph(input);
    Json report;
    std::string dot;
    if (tree == "cutset") {
        WeightedGraph h = normalize(g);
        Json comps = Json::array();
        std::string all_dot;
        for (const auto& comp : connected_components(h)) {
            CutsetTree t = decompose_cutsets(induced_subgraph(h, comp));
            Json jt;
            jt["atoms"] = t.atoms;
            jt["cliques"] = t.cliques;
            comps.push_back(std::move(jt));
            all_dot += cutset_tree_to_dot(t);
        }
        report["cutset_trees"] = std::move(comps);
        dot = all_dot;
    } else {
        StandardModularTree st = standard_modular_tree(g);
        ExtendedModularTree ext = extended_tree(g);
        Json jst;
        jst["nodes"] = st.nodes;
        jst["parent"] = st.parent;
        Json jext = Json::array();
        for (const auto& s : ext.steps)
            jext.push_back(Json{{"leaf", s.leaf}, {"contracted_as", s.rep}});
        report["standard_tree"] = std::move(jst);
        report["extended_tree"] = std::move(jext);
        dot = modular_trees_to_dot(st, ext);
    }
    report["dot"] = dot;
    std::cout << report.dump(2) << "\n";
    if (!dot_path.empty()) write_output(dot_path, dot);
    return 0;
}

int run_generate(const std::string& klass, int size, std::uint64_t seed,
                 const std::string& weights, const std::string& out) {
    std::mt19937_64 rng(seed);
    WeightStyle style = weights == "random" ? WeightStyle::random_rational : WeightStyle::unit;
    WeightedGraph g;
    if (klass == "lg-bipartite") {
        BipartiteRootSpec spec;
        spec.n_left = std::max(2, size / 3);
        spec.n_right = std::max(2, size - size / 3 - size / 3);
        spec.edge_prob = 0.55;
        spec.parallel_prob = 0.15;
        g = generate_lg_bipartite(spec, style, rng);
    } else if (klass == "augmented") {
        BipartiteRootSpec spec;
        spec.n_left = std::max(2, size / 4);
        spec.n_right = std::max(2, size / 4);
        g = generate_augmented(1 + (size > 10), spec, style, rng).graph;
    } else if (klass == "peculiar") {
        PeculiarSpec spec;
        std::uniform_int_distribution<int> extra(0, std::max(0, (size - 9) / 3));
        for (int i = 0; i < 3; ++i) {
            spec.a_sizes[i] = 1 + extra(rng);
            spec.b_sizes[i] = 1 + extra(rng);
            spec.k_sizes[i] = 1 + extra(rng);
        }
        g = generate_peculiar(spec, style, rng);
    } else if (klass == "cutset-glued") {
        std::vector<WeightedGraph> parts;
        int budget = std::max(6, size);
        while (budget > 0) {
            BipartiteRootSpec spec;
            spec.n_left = 2;
            spec.n_right = 2 + static_cast<int>(rng() % 2);
            spec.edge_prob = 0.8;
            WeightedGraph part = generate_lg_bipartite(spec, style, rng);
            parts.push_back(part);
            budget -= part.n();
        }
        g = glue_at_vertices(parts, rng);
    } else if (klass == "module-subst") {
        g = generate_module_substituted(size, style, rng);
    } else if (klass == "fork-free-prime") {
        g = generate_crown(std::max(3, size), style, rng);
    } else {
        throw ParseError("unknown generator class '" + klass + "'");
    }
    Json provenance;
    provenance["generator"] = klass;
    provenance["size"] = size;
    provenance["seed"] = seed;
    provenance["weights"] = weights;
    write_output(out, graph_to_string(g, provenance));
    return 0;
}

int run_verify(const CommonCountArgs& args) {
    WeightedGraph g = load_graph(args.input);
    OracleLimits lim = oracle_limits_from_env();
    Weight truth = brute_total_weight(g, lim);

    Json report;
    report["command"] = "verify";
    report["class"] = args.klass;
    report["oracle_W"] = weight_str(truth);
    EngineConfig cfg = make_engine(args);
    try {
        Estimate est = run_driver(parse_class(args.klass), g, args.epsilon, cfg);
        report["W"] = weight_str(est.value);
        report["engine"] = engine_name(est.engine);
        if (est.engine == EngineKind::exact) {
            bool match = est.value == truth;
            report["result"] = match ? "exact match" : "mismatch";
            std::cout << report.dump(2) << "\n";
            return match ? 0 : kExitMismatch;
        }
        double rel = truth == 0 ? est.value.get_d()
                                : std::abs(est.value.get_d() / truth.get_d() - 1.0);
        report["relative_error"] = rel;
        bool ok = rel <= args.epsilon;
        report["result"] = ok ? "within tolerance" : "outside tolerance";
        std::cout << report.dump(2) << "\n";
        return ok ? 0 : kExitMismatch;
    } catch (const NotInClassError& ex) {
        report["result"] = "rejected";
        report["rejection"] = ex.what();
        std::cout << report.dump(2) << "\n";
        return kExitRejected;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"weighted independent set counting via graph decompositions"};
    app.require_subcommand(1);

    CommonCountArgs count_args;
    bool max_only = false;
    auto* count = app.add_subcommand("count", "count weighted independent sets");
    count->add_option("input", count_args.input, "graph document (JSON or DIMACS), - for stdin")
        ->required();
    count->add_option("--class", count_args.klass, "graph class driver")
        ->check(CLI::IsMember({"claw", "fork"}));
    count->add_option("--engine", count_args.engine, "permanent engine")
        ->check(CLI::IsMember({"exact", "mcmc"}));
    count->add_option("--epsilon", count_args.epsilon, "relative error target");
    count->add_option("--seed", count_args.seed, "root seed for randomized engines");
    count->add_flag("--max-only", max_only, "report only the maximum-size stratum W_alpha");

    std::string dec_input, dec_tree = "cutset", dec_dot;
    auto* dec = app.add_subcommand("decompose", "export decomposition trees");
    dec->add_option("input", dec_input, "graph document")->required();
    dec->add_option("--tree", dec_tree, "which decomposition")
        ->check(CLI::IsMember({"cutset", "modular"}));
    dec->add_option("--dot", dec_dot, "also write the DOT rendering to this path");

    std::string gen_class = "lg-bipartite", gen_weights = "unit", gen_out;
    int gen_size = 12;
    std::uint64_t gen_seed = 0;
    auto* gen = app.add_subcommand("generate", "emit a class-specific instance");
    gen->add_option("--class", gen_class, "instance family")
        ->check(CLI::IsMember({"lg-bipartite", "augmented", "peculiar", "cutset-glued",
                               "module-subst", "fork-free-prime"}));
    gen->add_option("--size", gen_size, "target size parameter");
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("--weights", gen_weights, "weight style")
        ->check(CLI::IsMember({"unit", "random"}));
    gen->add_option("--out", gen_out, "output path (default stdout)");

    CommonCountArgs verify_args;
    bool against_oracle = true;
    auto* ver = app.add_subcommand("verify", "run a driver against the brute-force oracle");
    ver->add_option("input", verify_args.input, "graph document")->required();
    ver->add_option("--class", verify_args.klass, "graph class driver")
        ->check(CLI::IsMember({"claw", "fork"}));
    ver->add_option("--engine", verify_args.engine, "permanent engine")
        ->check(CLI::IsMember({"exact", "mcmc"}));
    ver->add_option("--epsilon", verify_args.epsilon, "relative error target");
    ver->add_option("--seed", verify_args.seed, "root seed");
    ver->add_flag("--against-oracle", against_oracle, "compare with the enumeration oracle");

    CLI11_PARSE(app, argc, argv);

    try {
        if (count->parsed()) return run_count(count_args, max_only);
        if (dec->parsed()) return run_decompose(dec_input, dec_tree, dec_dot);
        if (gen->parsed())
            return run_generate(gen_class, gen_size, gen_seed, gen_weights, gen_out);
        if (ver->parsed()) return run_verify(verify_args);
    } catch (const ParseError& ex) {
        std::cerr << "parse error: " << ex.what() << "\n";
        return kExitParse;
    } catch (const std::invalid_argument& ex) {
        std::cerr << "input error: " << ex.what() << "\n";
        return kExitParse;
    } catch (const NotInClassError& ex) {
        std::cerr << "class violation: " << ex.what() << "\n";
        return kExitRejected;
    } catch (const BudgetExceededError& ex) {
        std::cerr << "chain budget exceeded: " << ex.what() << "\n";
        return kExitBudget;
    } catch (const CapExceededError& ex) {
        std::cerr << "cap exceeded: " << ex.what() << "\n";
        return kExitParse;
    }
    return 0;
}
