// mimsolve: solve d-stable locally checkable coloring problems on graphs
// with a binary decomposition tree.
//
// Exit codes: 0 feasible, 1 verification mismatch, 2 usage/input error,
// 3 infeasible, 4 budget exceeded.

#include "CLI11.hpp"

#include "mimsolve/dp.hpp"
#include "mimsolve/gen.hpp"
#include "mimsolve/oracle.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

using namespace mimsolve;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_mismatch = 1;
constexpr int exit_usage = 2;
constexpr int exit_infeasible = 3;
constexpr int exit_budget = 4;

int log_level_from_env() {
    const char* v = std::getenv("MIMSOLVE_LOG");
    return v ? std::atoi(v) : 0;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file `" + path + "`");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open `" + path + "` for writing");
    out << text;
}

struct DecompSource {
    std::string decomp_path;
    std::string order_csv;
    std::string interval_path;

    void add_flags(CLI::App* cmd) {
        auto* a = cmd->add_option("--decomp", decomp_path, "decomposition tree file");
        auto* b = cmd->add_option("--order", order_csv, "comma-separated 1-based vertex order for a caterpillar");
        auto* c = cmd->add_option("--intervals", interval_path, "interval file; left-endpoint order drives the caterpillar");
        a->excludes(b)->excludes(c);
        b->excludes(c);
    }

    DecompTree build(const Graph& g) const {
        int given = !decomp_path.empty() + !order_csv.empty() + !interval_path.empty();
        if (given != 1)
            throw ParseError("exactly one of --decomp/--order/--intervals is required");
        if (!decomp_path.empty()) return load_decomposition(read_file(decomp_path), g);
        if (!order_csv.empty()) {
            std::vector<int> order;
            std::istringstream ss(order_csv);
            std::string item;
            while (std::getline(ss, item, ',')) order.push_back(std::stoi(item) - 1);
            return DecompTree::caterpillar(g, order);
        }
        std::istringstream in(read_file(interval_path));
        return DecompTree::caterpillar(g, interval_order(load_intervals(in, g.n())));
    }
};

struct ProblemSource {
    std::string catalog_desc;
    std::string file_path;
    std::string sizes_override;

    void add_flags(CLI::App* cmd) {
        auto* a = cmd->add_option("--problem", catalog_desc,
                                  "catalog problem, e.g. mis or k-roman:k=2");
        auto* b = cmd->add_option("--problem-file", file_path, "problem definition file");
        a->excludes(b);
        cmd->add_option("--sizes", sizes_override,
                        "override size constraints: `all` or explicit tuples `a,b;c,d`");
    }

    ProblemSpec build(int n) const {
        ProblemSpec spec;
        if (!file_path.empty()) spec = load_problem_file(read_file(file_path));
        else if (!catalog_desc.empty()) spec = catalog_parse(catalog_desc, n);
        else throw ParseError("one of --problem/--problem-file is required");
        if (!sizes_override.empty()) {
            if (sizes_override == "all") {
                spec.sizes = SizeConstraintSet::all();
            } else {
                std::set<std::vector<int>> tuples;
                std::istringstream ss(sizes_override);
                std::string tup;
                while (std::getline(ss, tup, ';')) {
                    std::vector<int> t;
                    std::istringstream ts(tup);
                    std::string item;
                    while (std::getline(ts, item, ',')) t.push_back(std::stoi(item));
                    if (static_cast<int>(t.size()) != spec.q)
                        throw ParseError("--sizes tuple arity differs from q");
                    tuples.insert(std::move(t));
                }
                spec.sizes = SizeConstraintSet::explicit_tuples(std::move(tuples));
            }
        }
        return spec;
    }
};

int run_solve(const std::string& graph_path, const DecompSource& dsrc, const ProblemSource& psrc,
              const std::string& out_path, int threads, std::uint64_t budget_keys,
              std::uint64_t budget_pool) {
    std::istringstream gin(read_file(graph_path));
    Graph g = load_graph(gin);
    DecompTree t = dsrc.build(g);
    ProblemSpec spec = psrc.build(g.n());
    SolveOptions opts;
    opts.threads = threads;
    opts.budget_keys = budget_keys;
    opts.budget_pool = budget_pool;
    opts.log_level = log_level_from_env();
    if (opts.log_level > 0) opts.log = &std::cerr;
    SolveResult res = solve(spec, g, t, opts);
    std::string text = format_result(res, spec, g);
    if (out_path.empty()) std::cout << text;
    else write_file(out_path, text);
    return res.status == SolveResult::Status::Feasible ? exit_ok : exit_infeasible;
}

int run_verify(const std::string& problem, const std::string& problem_file, int trials, int max_n,
               std::uint64_t seed, std::uint64_t oracle_budget) {
    // negative control for the harness itself: corrupt the solver's answers
    const bool fault = std::getenv("MIMSOLVE_VERIFY_FAULT") != nullptr;
    std::string file_text;
    if (!problem_file.empty()) file_text = read_file(problem_file);
    std::vector<std::uint64_t> failures;
    Rng rng(seed);
    for (int trial = 0; trial < trials; ++trial) {
        std::uint64_t trial_seed = rng.next();
        Rng local(trial_seed);
        int n = 3 + static_cast<int>(local.below(std::max(1, max_n - 2)));
        Graph g = gen_gnp_no_isolated(n, 0.25 + 0.5 * local.unit(), local.next());
        DecompTree t = DecompTree::caterpillar(g, random_order(n, local.next()));
        ProblemSpec spec =
            file_text.empty() ? catalog_parse(problem, n) : load_problem_file(file_text);
        OracleOptions oopt;
        oopt.budget = oracle_budget;
        SolveResult res = solve(spec, g, t);
        if (fault && res.status == SolveResult::Status::Feasible) res.weight += 1;
        OracleResult oracle = brute_solve(spec, g, oopt);
        bool ok = (res.status == SolveResult::Status::Feasible) == oracle.feasible &&
                  (!oracle.feasible || res.weight == oracle.weight);
        if (ok && oracle.feasible) {
            ColoringReport rep = validate_coloring(spec, g, res.witness);
            ok = rep.ok() && rep.weight == res.weight;
        }
        if (!ok) failures.push_back(trial_seed);
    }
    if (failures.empty()) {
        std::cout << "verify " << problem << ": " << trials << " trials ok\n";
        return exit_ok;
    }
    std::cout << "verify " << problem << ": " << failures.size() << " mismatches; seeds:";
    for (auto s : failures) std::cout << " " << s;
    std::cout << "\n";
    return exit_mismatch;
}

int run_gen(const std::string& kind, int n, double p, std::uint64_t seed,
            const std::string& out_prefix) {
    if (out_prefix.empty()) throw ParseError("--out prefix is required");
    if (n < 1) throw ParseError("--n must be at least 1");
    if (kind == "path") {
        write_file(out_prefix + ".gr", graph_to_text(gen_path(n)));
    } else if (kind == "cycle") {
        write_file(out_prefix + ".gr", graph_to_text(gen_cycle(n)));
    } else if (kind == "gnp") {
        write_file(out_prefix + ".gr", graph_to_text(gen_gnp(n, p, seed)));
    } else if (kind == "interval") {
        IntervalInstance inst = gen_interval(n, seed);
        write_file(out_prefix + ".gr", graph_to_text(inst.graph));
        write_file(out_prefix + ".intervals", intervals_to_text(inst.intervals));
    } else {
        throw ParseError("unknown kind `" + kind + "` (path|cycle|gnp|interval)");
    }
    return exit_ok;
}

int run_classes(const std::string& graph_path, const DecompSource& dsrc, int d, int q) {
    if (d < 1 || q < 1) throw ParseError("--d and --q must be at least 1");
    std::istringstream gin(read_file(graph_path));
    Graph g = load_graph(gin);
    DecompTree t = dsrc.build(g);
    FamilyCache fc = FamilyCache::build(g, t, d, 2'000'000);
    std::cout << "node\tside\tclasses\n";
    for (int id = 0; id < t.size(); ++id) {
        std::cout << id << "\tinner\t" << fc.inner[id].size() << "\n";
        std::cout << id << "\touter\t" << fc.outer[id].size() << "\n";
    }
    SnecStats st = snec_stats(fc, q);
    std::cout << "snec_d\t" << st.snec_scalar << "\n";
    std::cout << "snec_dq\t" << st.snec_tuple << "\n";
    return exit_ok;
}

int run_catalog() {
    for (const auto& e : catalog_list()) {
        std::cout << e.name;
        if (!e.params.empty()) std::cout << ":" << e.params << "=<int>";
        std::cout << "\t" << e.summary << "\n";
    }
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"solver for locally checkable coloring problems with size and "
                 "connectivity constraints over binary decomposition trees"};
    app.require_subcommand(1);

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "solve a problem on a graph");
    std::string graph_path, out_path;
    DecompSource dsrc;
    ProblemSource psrc;
    int threads = 1;
    std::uint64_t budget_keys = 2'000'000, budget_pool = 8'000'000, seed = 1;
    solve_cmd->add_option("--graph", graph_path, "graph file")->required();
    dsrc.add_flags(solve_cmd);
    psrc.add_flags(solve_cmd);
    solve_cmd->add_option("--out", out_path, "write the result here instead of stdout");
    solve_cmd->add_option("--threads", threads, "worker threads for the reduction phase");
    solve_cmd->add_option("--budget-keys", budget_keys, "max realized table keys per node");
    solve_cmd->add_option("--budget-pool", budget_pool, "max pooled candidates per node");
    solve_cmd->add_option("--seed", seed, "accepted for interface uniformity");

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "randomized solver-vs-oracle equivalence");
    std::string verify_problem = "mis";
    int trials = 50, max_n = 8;
    std::uint64_t verify_seed = 1, oracle_budget = 2'000'000;
    verify_cmd->add_option("--problem", verify_problem, "catalog problem to verify");
    std::string verify_problem_file;
    verify_cmd->add_option("--problem-file", verify_problem_file, "verify a problem-definition file instead");
    verify_cmd->add_option("--trials", trials, "number of random instances");
    verify_cmd->add_option("--max-n", max_n, "largest vertex count");
    verify_cmd->add_option("--seed", verify_seed, "master seed");
    verify_cmd->add_option("--oracle-budget", oracle_budget, "max colorings per oracle run");

    // gen
    auto* gen_cmd = app.add_subcommand("gen", "generate instance files");
    std::string kind = "gnp", out_prefix;
    int gen_n = 10;
    double gen_p = 0.4;
    std::uint64_t gen_seed = 1;
    gen_cmd->add_option("--kind", kind, "path|cycle|gnp|interval");
    gen_cmd->add_option("--n", gen_n, "vertex count");
    gen_cmd->add_option("--p", gen_p, "edge probability for gnp");
    gen_cmd->add_option("--seed", gen_seed, "seed; outputs are byte-identical per seed");
    gen_cmd->add_option("--out", out_prefix, "output path prefix")->required();

    // classes
    auto* classes_cmd = app.add_subcommand("classes", "print per-node class counts as TSV");
    std::string classes_graph;
    DecompSource classes_dsrc;
    int classes_d = 1, classes_q = 2;
    classes_cmd->add_option("--graph", classes_graph, "graph file")->required();
    classes_dsrc.add_flags(classes_cmd);
    classes_cmd->add_option("--d", classes_d, "stability threshold");
    classes_cmd->add_option("--q", classes_q, "colors used for the tuple statistic");

    // catalog
    app.add_subcommand("catalog", "list built-in problems");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (solve_cmd->parsed())
            return run_solve(graph_path, dsrc, psrc, out_path, threads, budget_keys, budget_pool);
        if (verify_cmd->parsed())
            return run_verify(verify_problem, verify_problem_file, trials, max_n, verify_seed, oracle_budget);
        if (gen_cmd->parsed()) return run_gen(kind, gen_n, gen_p, gen_seed, out_prefix);
        if (classes_cmd->parsed()) return run_classes(classes_graph, classes_dsrc, classes_d, classes_q);
        return run_catalog();
    } catch (const BudgetError& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return exit_budget;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
}
