// Times the serial reference path against the OpenMP path for the
// data-parallel kernels, plus indexed vs brute-force pair retrieval.

#include <chrono>
#include <iostream>

#include "rdbsc/generator.hpp"
#include "rdbsc/grid_index.hpp"
#include "rdbsc/objective.hpp"
#include "rdbsc/rng.hpp"
#include "rdbsc/solvers.hpp"

using namespace rdbsc;

namespace {

template <typename Fn>
double time_s(Fn&& fn) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void row(const std::string& name, double serial_s, double parallel_s) {
    std::cout << name << "\t" << serial_s << "\t" << parallel_s << "\t"
              << (parallel_s > 0 ? serial_s / parallel_s : 0.0) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    long long m = argc > 1 ? std::atoll(argv[1]) : 2000;
    long long n = argc > 2 ? std::atoll(argv[2]) : 4000;
    uint64_t seed = argc > 3 ? std::strtoull(argv[3], nullptr, 10) : 42;

    GeneratorConfig cfg;
    cfg.m = m;
    cfg.n = n;
    cfg.seed = seed;
    auto [tasks, workers] = generate_instance(cfg);
    auto conf = confidence_map(workers);

    std::cout << "kernel\tserial_s\tparallel_s\tspeedup\n";

    std::vector<CandidatePair> pairs_serial, pairs_parallel;
    double sweep_s = time_s([&] {
        pairs_serial = brute_force_pairs(tasks, workers, 0.0, WaitPolicy::wait, ExecMode::serial);
    });
    double s = sweep_s;
    double p = time_s([&] {
        pairs_parallel = brute_force_pairs(tasks, workers, 0.0, WaitPolicy::wait, ExecMode::parallel);
    });
    row("pair_sweep", s, p);
    if (pairs_serial != pairs_parallel) {
        std::cerr << "pair sweep mismatch between modes\n";
        return 1;
    }
    const auto& pairs = pairs_serial;

    SamplePlan plan = sample_size(worker_degrees(pairs), 0.1, 0.9, 100000);
    plan.k_hat = std::max<long long>(plan.k_hat, 200);  // enough samples to spread over cores
    Assignment samp_serial, samp_parallel;
    s = time_s([&] {
        samp_serial = sampling_solve(tasks, workers, pairs, plan, seed, {}, ExecMode::serial);
    });
    p = time_s([&] {
        samp_parallel = sampling_solve(tasks, workers, pairs, plan, seed, {}, ExecMode::parallel);
    });
    row("sampling", s, p);

    ObjectiveVector obj_serial{}, obj_parallel{};
    s = time_s([&] {
        for (int rep = 0; rep < 200; ++rep)
            obj_serial = objective(samp_serial, tasks, conf, {}, ExecMode::serial);
    });
    p = time_s([&] {
        for (int rep = 0; rep < 200; ++rep)
            obj_parallel = objective(samp_serial, tasks, conf, {}, ExecMode::parallel);
    });
    row("objective_x200", s, p);
    if (obj_serial.min_rel != obj_parallel.min_rel || obj_serial.total_std != obj_parallel.total_std) {
        std::cerr << "objective mismatch between modes\n";
        return 1;
    }

    GeneratorConfig small = cfg;
    small.m = 100;
    small.n = 800;
    auto [stasks, sworkers] = generate_instance(small);
    auto spairs = brute_force_pairs(stasks, sworkers, 0.0, WaitPolicy::wait);
    Assignment g_serial, g_parallel;
    s = time_s([&] { g_serial = greedy_solve(stasks, sworkers, spairs, {}, ExecMode::serial); });
    p = time_s([&] { g_parallel = greedy_solve(stasks, sworkers, spairs, {}, ExecMode::parallel); });
    row("greedy", s, p);
    if (!(g_serial.pairs() == g_parallel.pairs())) {
        std::cerr << "greedy mismatch between modes\n";
        return 1;
    }

    double v_max = 1e-3;
    for (const auto& w : workers) v_max = std::max(v_max, w.velocity);
    double eta = std::clamp(solve_cell_size(v_max, 2.0, std::max<long long>(2, m)), 1e-3, 0.5);
    GridIndex index(tasks, workers, eta, 0.0, WaitPolicy::wait);
    std::vector<CandidatePair> via_index;
    double idx_s = time_s([&] { via_index = index.retrieve_valid_pairs(0.0, ExecMode::serial); });
    std::cout << "index_retrieval\t" << idx_s << "\t(vs brute " << sweep_s << ")\n";
    if (via_index != pairs) {
        std::cerr << "index retrieval mismatch\n";
        return 1;
    }
    std::cout << "retrieval_saving_pct\t" << 100.0 * (1.0 - idx_s / sweep_s) << "\n";
    return 0;
}
