#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "rdbsc/generator.hpp"
#include "rdbsc/grid_index.hpp"
#include "rdbsc/io.hpp"
#include "rdbsc/np_reduction.hpp"
#include "rdbsc/objective.hpp"
#include "rdbsc/rng.hpp"
#include "rdbsc/simulate.hpp"
#include "rdbsc/solvers.hpp"
#include "rdbsc/trajectory.hpp"
#include "rdbsc/verify.hpp"

namespace {

using namespace rdbsc;

struct GlobalFlags {
    uint64_t seed = 0;
    std::string format = "csv";
    std::string out;
    bool quiet = false;
    bool parallel = false;
};

ExecMode exec_of(const GlobalFlags& g) { return g.parallel ? ExecMode::parallel : ExecMode::serial; }

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

WaitPolicy parse_policy(const std::string& s) {
    return s == "wait" ? WaitPolicy::wait : WaitPolicy::strict;
}

int cmd_generate(const GlobalFlags& g, const GeneratorConfig& cfg_in, const std::string& trajectories) {
    GeneratorConfig cfg = cfg_in;
    cfg.seed = g.seed;
    std::string prefix = g.out.empty() ? "instance" : g.out;

    std::vector<Task> tasks;
    std::vector<Worker> workers;
    if (!trajectories.empty()) {
        std::ifstream f(trajectories);
        if (!f) {
            std::cerr << "cannot open " << trajectories << "\n";
            return 1;
        }
        IngestOptions opt;
        opt.p_lo = cfg.p_lo;
        opt.p_hi = cfg.p_hi;
        opt.seed = g.seed;
        IngestResult ing = ingest_trajectories(f, opt);
        workers = std::move(ing.workers);
        if (!g.quiet && (ing.skipped_single_point || ing.skipped_zero_time || ing.skipped_zero_length))
            std::cerr << "warning: skipped " << ing.skipped_single_point << " single-point, "
                      << ing.skipped_zero_time << " zero-time, " << ing.skipped_zero_length
                      << " zero-length trajectories\n";
        GeneratorConfig tcfg = cfg;
        tcfg.n = 1;  // tasks only
        tasks = generate_instance(tcfg).first;
    } else {
        auto inst = generate_instance(cfg);
        tasks = std::move(inst.first);
        workers = std::move(inst.second);
    }

    std::ofstream tf(prefix + "_tasks.csv"), wf(prefix + "_workers.csv");
    if (!tf || !wf) {
        std::cerr << "cannot write instance files with prefix " << prefix << "\n";
        return 1;
    }
    write_tasks_csv(tf, tasks);
    write_workers_csv(wf, workers);
    if (!g.quiet)
        std::cout << "generated " << tasks.size() << " tasks, " << workers.size() << " workers -> "
                  << prefix << "_tasks.csv, " << prefix << "_workers.csv\n";
    return 0;
}

int cmd_solve(const GlobalFlags& g, const std::string& algo, const std::string& tasks_path,
              const std::string& workers_path, double epsilon, double delta, long long gamma,
              int dcw_cap, long long k_cap, const std::string& policy_s, double now, bool use_index,
              double eta) {
    auto tasks = load_tasks(tasks_path);
    auto workers = load_workers(workers_path);
    WaitPolicy policy = parse_policy(policy_s);
    ExecMode exec = exec_of(g);

    auto t0 = std::chrono::steady_clock::now();
    std::vector<CandidatePair> pairs;
    if (use_index) {
        double use_eta = eta;
        if (use_eta <= 0.0) {
            double v_max = 1e-3;
            for (const auto& w : workers) v_max = std::max(v_max, w.velocity);
            use_eta = std::clamp(solve_cell_size(v_max, 2.0, std::max<long long>(2, tasks.size())),
                                 1e-3, 0.5);
        }
        GridIndex index(tasks, workers, use_eta, now, policy);
        pairs = index.retrieve_valid_pairs(now, exec);
    } else {
        pairs = brute_force_pairs(tasks, workers, now, policy, exec);
    }
    double pair_s = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    Assignment result;
    std::string extra;
    if (algo == "greedy") {
        result = greedy_solve(tasks, workers, pairs, {}, exec);
    } else if (algo == "sampling") {
        SamplePlan plan = sample_size(worker_degrees(pairs), epsilon, delta, k_cap);
        result = sampling_solve(tasks, workers, pairs, plan, g.seed, {}, exec);
        extra = " k_hat=" + std::to_string(plan.k_hat) + (plan.cap_hit ? " (cap hit)" : "");
    } else {
        DcConfig cfg;
        cfg.gamma = gamma;
        cfg.dcw_cap = dcw_cap;
        cfg.seed = g.seed;
        cfg.epsilon = epsilon;
        cfg.delta = delta;
        cfg.k_cap = k_cap;
        cfg.exec = exec;
        result = algo == "gtruth" ? gtruth_solve(tasks, workers, pairs, cfg)
                                  : dc_solve(tasks, workers, pairs, cfg);
    }
    double solve_s = seconds_since(t0);

    auto conf = confidence_map(workers);
    ObjectiveVector obj = objective(result, tasks, conf, {}, exec);
    if (!g.quiet)
        std::cout << "algo=" << algo << " pairs=" << pairs.size() << " assigned=" << result.size()
                  << " min_rel=" << obj.min_rel << " total_std=" << obj.total_std << extra
                  << " pair_time=" << pair_s << "s solve_time=" << solve_s << "s\n";
    if (!g.out.empty()) {
        std::ofstream f(g.out);
        if (!f) {
            std::cerr << "cannot write " << g.out << "\n";
            return 1;
        }
        write_assignment_csv(f, result);
    }
    return 0;
}

int cmd_simulate(const GlobalFlags& g, const std::string& tasks_path, const std::string& workers_path,
                 const SimulationConfig& cfg_in, const std::string& algo,
                 const std::string& policy_s) {
    SimulationConfig cfg = cfg_in;
    cfg.seed = g.seed;
    cfg.exec = exec_of(g);
    cfg.policy = parse_policy(policy_s);
    if (algo == "greedy")
        cfg.solver = SolverChoice::greedy;
    else if (algo == "sampling")
        cfg.solver = SolverChoice::sampling;
    else if (algo == "dc")
        cfg.solver = SolverChoice::dc;
    else
        cfg.solver = SolverChoice::gtruth;

    auto tasks = load_tasks(tasks_path);
    auto workers = load_workers(workers_path);
    SimulationReport rep = simulate_incremental(tasks, workers, cfg);
    if (!g.quiet)
        std::cout << "rounds=" << rep.rounds << " assigned=" << rep.assigned << " successes="
                  << rep.successes << " failures=" << rep.failures << " pending=" << rep.pending
                  << " min_rel=" << rep.min_rel << " total_std=" << rep.total_std
                  << " solve_ms=" << rep.solve_ms << " retrieval_ms=" << rep.retrieval_ms << "\n";
    if (!g.out.empty())
        save_text(g.out, g.format == "json" ? report_to_json(rep) : report_to_csv(rep));
    return 0;
}

int cmd_verify(const GlobalFlags& g, const std::string& suite, int trials) {
    SuiteResult r;
    if (suite == "lemma1")
        r = verify_lemma1(trials, g.seed);
    else if (suite == "bounds")
        r = verify_bounds(trials, g.seed);
    else if (suite == "pruning")
        r = verify_pruning(trials, g.seed);
    else if (suite == "sampling-rank")
        r = verify_sampling_rank(trials, g.seed);
    else if (suite == "np-reduction")
        r = verify_np_reduction(trials, g.seed);
    else
        r = verify_index_equivalence(trials, g.seed);
    std::cout << "suite " << suite << ": " << (r.pass ? "PASS" : "FAIL") << " (" << r.detail
              << ")\n";
    return r.pass ? 0 : 1;
}

int cmd_index_bench(const GlobalFlags& g, long long m, std::vector<long long> ns, double l_max,
                    const std::string& policy_s) {
    WaitPolicy policy = parse_policy(policy_s);
    ExecMode exec = exec_of(g);
    std::ostringstream table;
    table << "n,build_s,indexed_s,brute_s,saving_pct\n";
    if (!g.quiet) std::cout << "n\tbuild_s\tindexed_s\tbrute_s\tsaving%\n";
    for (long long n : ns) {
        GeneratorConfig cfg;
        cfg.m = m;
        cfg.n = n;
        cfg.seed = g.seed;
        auto [tasks, workers] = generate_instance(cfg);

        double use_l = l_max;
        if (use_l <= 0.0) {
            double v_max = 1e-3;
            for (const auto& w : workers) v_max = std::max(v_max, w.velocity);
            use_l = v_max;  // an hour of travel
        }
        double eta = std::clamp(solve_cell_size(use_l, 2.0, std::max<long long>(2, m)), 1e-3, 0.5);

        auto t0 = std::chrono::steady_clock::now();
        GridIndex index(tasks, workers, eta, 0.0, policy);
        double build_s = seconds_since(t0);

        t0 = std::chrono::steady_clock::now();
        auto got = index.retrieve_valid_pairs(0.0, exec);
        double index_s = seconds_since(t0);

        t0 = std::chrono::steady_clock::now();
        auto want = brute_force_pairs(tasks, workers, 0.0, policy, exec);
        double brute_s = seconds_since(t0);

        if (want != got) {
            std::cerr << "index/brute mismatch at n=" << n << "\n";
            return 1;
        }
        double saving = 100.0 * (1.0 - index_s / brute_s);
        if (!g.quiet)
            std::cout << n << "\t" << build_s << "\t" << index_s << "\t" << brute_s << "\t"
                      << saving << "\n";
        table << n << ',' << build_s << ',' << index_s << ',' << brute_s << ',' << saving << "\n";
    }
    if (!g.out.empty()) save_text(g.out, table.str());
    return 0;
}

int cmd_reduce_np(const GlobalFlags& g, const std::vector<long long>& a) {
    auto inst = reduction_from_number_partition(a);
    std::string prefix = g.out.empty() ? "npinst" : g.out;
    std::ofstream tf(prefix + "_tasks.csv"), wf(prefix + "_workers.csv");
    if (!tf || !wf) {
        std::cerr << "cannot write instance files with prefix " << prefix << "\n";
        return 1;
    }
    write_tasks_csv(tf, inst.tasks);
    write_workers_csv(wf, inst.workers);
    if (!g.quiet)
        std::cout << "reduced |A|=" << inst.a.size() << " -> " << inst.tasks.size() << " tasks, "
                  << inst.workers.size() << " workers (solve with --policy wait) -> " << prefix
                  << "_tasks.csv, " << prefix << "_workers.csv\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reliability- and diversity-aware spatial task assignment"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may appear after the subcommand

    GlobalFlags g;
    app.add_option("--seed", g.seed, "Seed for all randomized steps");
    app.add_option("--format", g.format, "Report format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", g.out, "Output path (or path prefix)");
    app.add_flag("--quiet", g.quiet, "Suppress the human-readable summary");
    app.add_flag("--parallel", g.parallel, "Run data-parallel kernels with OpenMP");

    // generate
    auto* gen = app.add_subcommand("generate", "Write a synthetic instance as CSV");
    GeneratorConfig gcfg;
    std::string dist = "uniform", trajectories;
    gen->add_option("--m", gcfg.m, "Task count");
    gen->add_option("--n", gcfg.n, "Worker count");
    gen->add_option("--dist", dist, "uniform|skewed")->check(CLI::IsMember({"uniform", "skewed"}));
    gen->add_option("--rt-lo", gcfg.rt_lo, "Min expiration span (hours)");
    gen->add_option("--rt-hi", gcfg.rt_hi, "Max expiration span (hours)");
    gen->add_option("--p-lo", gcfg.p_lo, "Min worker confidence");
    gen->add_option("--p-hi", gcfg.p_hi, "Max worker confidence");
    gen->add_option("--v-lo", gcfg.v_lo, "Min speed");
    gen->add_option("--v-hi", gcfg.v_hi, "Max speed");
    gen->add_option("--angle-width", gcfg.width_hi, "Max direction-cone width (radians)");
    gen->add_option("--beta-lo", gcfg.beta_lo, "Min beta");
    gen->add_option("--beta-hi", gcfg.beta_hi, "Max beta");
    gen->add_flag("--gaussian-speed", gcfg.gaussian_speed, "Gaussian instead of uniform speeds");
    gen->add_option("--trajectories", trajectories, "Build workers from a trajectory CSV instead");

    // solve
    auto* solve = app.add_subcommand("solve", "Assign workers to tasks");
    std::string algo = "greedy", tasks_path, workers_path, policy = "strict";
    double epsilon = 0.1, delta = 0.9, now = 0.0, eta = 0.0;
    long long gamma = 8, k_cap = 100000;
    int dcw_cap = 20;
    bool use_index = false;
    solve->add_option("tasks", tasks_path, "Task CSV")->required();
    solve->add_option("workers", workers_path, "Worker CSV")->required();
    solve->add_option("--algo", algo, "greedy|sampling|dc|gtruth")
        ->check(CLI::IsMember({"greedy", "sampling", "dc", "gtruth"}));
    solve->add_option("--epsilon", epsilon, "Sampling rank error bound");
    solve->add_option("--delta", delta, "Sampling confidence");
    solve->add_option("--gamma", gamma, "Divide-and-conquer base-case task count");
    solve->add_option("--dcw-cap", dcw_cap, "Max conflict-group size enumerated exactly");
    solve->add_option("--k-cap", k_cap, "Sample count cap");
    solve->add_option("--policy", policy, "strict|wait")->check(CLI::IsMember({"strict", "wait"}));
    solve->add_option("--now", now, "Clock at solve time (hours)");
    solve->add_flag("--use-index", use_index, "Retrieve pairs through the grid index");
    solve->add_option("--eta", eta, "Grid cell size (0 = cost model)");

    // simulate
    auto* sim = app.add_subcommand("simulate", "Run the periodic-reassignment simulator");
    SimulationConfig scfg;
    std::string sim_tasks, sim_workers, sim_algo = "greedy", sim_policy = "strict";
    sim->add_option("tasks", sim_tasks, "Task CSV")->required();
    sim->add_option("workers", sim_workers, "Worker CSV")->required();
    sim->add_option("--t-interval", scfg.t_interval, "Hours between reassignment rounds");
    sim->add_option("--horizon", scfg.horizon, "Simulated hours");
    sim->add_option("--algo", sim_algo, "greedy|sampling|dc|gtruth")
        ->check(CLI::IsMember({"greedy", "sampling", "dc", "gtruth"}));
    sim->add_option("--policy", sim_policy, "strict|wait")->check(CLI::IsMember({"strict", "wait"}));
    sim->add_option("--epsilon", scfg.epsilon, "Sampling rank error bound");
    sim->add_option("--delta", scfg.delta, "Sampling confidence");
    sim->add_option("--gamma", scfg.gamma, "Divide-and-conquer base-case task count");
    sim->add_option("--eta", scfg.eta, "Grid cell size (0 = cost model)");

    // verify
    auto* ver = app.add_subcommand("verify", "Run a property suite against its oracle");
    std::string suite;
    int trials = 1000;
    ver->add_option("--suite", suite, "Suite name")
        ->required()
        ->check(CLI::IsMember({"lemma1", "bounds", "pruning", "sampling-rank", "np-reduction",
                               "index-equivalence"}));
    ver->add_option("--trials", trials, "Trial count");

    // index-bench
    auto* bench = app.add_subcommand("index-bench", "Time indexed vs brute-force pair retrieval");
    long long bench_m = 10000;
    std::vector<long long> bench_ns = {1000, 5000, 10000, 30000};
    double bench_lmax = 0.0;
    std::string bench_policy = "strict";
    bench->add_option("--m", bench_m, "Task count");
    bench->add_option("--n", bench_ns, "Worker counts to sweep");
    bench->add_option("--l-max", bench_lmax, "Cost-model displacement bound (0 = derive)");
    bench->add_option("--policy", bench_policy, "strict|wait")
        ->check(CLI::IsMember({"strict", "wait"}));

    // reduce-np
    auto* np = app.add_subcommand("reduce-np", "Emit the number-partition instance");
    std::vector<long long> np_a;
    np->add_option("--a", np_a, "Positive integers")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed()) return cmd_generate(g, gcfg, trajectories);
        if (solve->parsed())
            return cmd_solve(g, algo, tasks_path, workers_path, epsilon, delta, gamma, dcw_cap,
                             k_cap, policy, now, use_index, eta);
        if (sim->parsed()) return cmd_simulate(g, sim_tasks, sim_workers, scfg, sim_algo, sim_policy);
        if (ver->parsed()) return cmd_verify(g, suite, trials);
        if (bench->parsed()) return cmd_index_bench(g, bench_m, bench_ns, bench_lmax, bench_policy);
        if (np->parsed()) return cmd_reduce_np(g, np_a);
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
