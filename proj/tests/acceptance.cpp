// Acceptance suite: one line per criterion, nonzero exit if any ran red.
// Run all with no arguments, or a single one with --criterion N.

#include <chrono>
#include <cstring>
#include <iostream>
#include <vector>

#include "rdbsc/verify.hpp"

using namespace rdbsc;

namespace {

constexpr uint64_t kSeed = 20240917;

struct Criterion {
    int id;
    const char* name;
    double budget_s;  // 0 = untimed
    SuiteResult (*run)();
};

SuiteResult c1() { return verify_lemma1(1000, kSeed); }
SuiteResult c2() { return verify_reliability_monotone(1000, kSeed); }
SuiteResult c3() {
    SuiteResult b = verify_bounds(1000, kSeed);
    SuiteResult p = verify_pruning(1000, kSeed);
    SuiteResult res;
    res.pass = b.pass && p.pass;
    res.max_err = std::max(b.max_err, p.max_err);
    res.detail = b.detail + "; " + p.detail;
    return res;
}
SuiteResult c4() { return verify_sampling_rank(1000, kSeed); }
SuiteResult c5() { return verify_sample_size_oracle(kSeed); }
SuiteResult c6() { return verify_dc_benchmark(100, kSeed); }
SuiteResult c7() { return verify_small_m_greedy(50, kSeed); }
SuiteResult c8() { return verify_index_equivalence(200, kSeed); }
SuiteResult c9() { return verify_cost_model(200, kSeed); }
SuiteResult c10() { return verify_np_reduction(50, kSeed); }
SuiteResult c11() { return verify_scaling(kSeed); }

const std::vector<Criterion> kCriteria = {
    {1, "expected diversity: polynomial path equals the possible-worlds oracle", 30, c1},
    {2, "add-a-worker: exact reliability delta, non-decreasing diversity", 60, c2},
    {3, "delta bounds contain the oracle delta; rank winner survives pruning", 60, c3},
    {4, "sampling rank guarantee at (eps=0.1, delta=0.9)", 300, c4},
    {5, "sample size matches the exact rational evaluation", 0, c5},
    {6, "divide-and-conquer vs sampling vs the tenfold baseline", 600, c6},
    {7, "small task counts: sampling and d&c medians beat greedy", 0, c7},
    {8, "index retrieval equals brute force under mixed mutations", 120, c8},
    {9, "cell-size cost model: closed form and stationarity", 0, c9},
    {10, "number-partition reduction: optima correspond exactly", 120, c10},
    {11, "greedy scaling envelope; indexed retrieval beats brute force", 0, c11},
};

int run_one(const Criterion& c) {
    auto t0 = std::chrono::steady_clock::now();
    SuiteResult r = c.run();
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_budget = c.budget_s <= 0.0 || secs <= c.budget_s;
    bool pass = r.pass && in_budget;
    std::cout << "[" << (pass ? "PASS" : "FAIL") << "] criterion " << c.id << ": " << c.name
              << " | " << r.detail;
    if (!in_budget) std::cout << " | OVER BUDGET";
    std::cout << " | " << secs << "s";
    if (c.budget_s > 0) std::cout << " (budget " << c.budget_s << "s)";
    std::cout << "\n";
    return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i + 1 < argc + 1; ++i) {
        if (i + 1 < argc && std::strcmp(argv[i], "--criterion") == 0) only = std::atoi(argv[i + 1]);
    }
    int failures = 0;
    for (const auto& c : kCriteria) {
        if (only != 0 && c.id != only) continue;
        failures += run_one(c);
    }
    return failures == 0 ? 0 : 1;
}
