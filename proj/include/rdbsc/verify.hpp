#pragma once

#include <cstdint>
#include <string>

namespace rdbsc {

struct SuiteResult {
    bool pass = false;
    double max_err = 0.0;
    std::string detail;
};

// Property suites backing the `verify` subcommand and the acceptance tests.
SuiteResult verify_lemma1(int trials, uint64_t seed);             // poly == brute force
SuiteResult verify_reliability_monotone(int trials, uint64_t seed);  // add-a-worker deltas
SuiteResult verify_bounds(int trials, uint64_t seed);             // delta containment
SuiteResult verify_pruning(int trials, uint64_t seed);            // winner survives
SuiteResult verify_sampling_rank(int trials, uint64_t seed);      // (eps, delta) rank bound
SuiteResult verify_sample_size_oracle(uint64_t seed);             // exact rational k-hat
SuiteResult verify_dc_benchmark(int trials, uint64_t seed);       // dc vs sampling vs gtruth
SuiteResult verify_small_m_greedy(int trials, uint64_t seed);     // solver medians at small m
SuiteResult verify_index_equivalence(int trials, uint64_t seed);  // index == brute force
SuiteResult verify_cost_model(int trials, uint64_t seed);         // cell-size stationarity
SuiteResult verify_np_reduction(int trials, uint64_t seed);       // dual enumeration
SuiteResult verify_scaling(uint64_t seed);                        // greedy growth + index speed

}  // namespace rdbsc
