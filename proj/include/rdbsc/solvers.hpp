#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rdbsc/diversity.hpp"
#include "rdbsc/exec.hpp"
#include "rdbsc/model.hpp"
#include "rdbsc/objective.hpp"

namespace rdbsc {

// ---------------------------------------------------------------------------
// Dominance utilities
// ---------------------------------------------------------------------------

struct RankPoint {
    double x = 0.0;
    double y = 0.0;
    int64_t id1 = 0;  // primary tie-break id (worker id / sample index), lower wins
    int64_t id2 = 0;  // secondary tie-break id (task id)
};

// Index of the point dominating the most others. Ties broken by higher x,
// then higher y, then lower id1, then lower id2. Throws on empty input.
std::size_t dominance_rank(std::span<const RankPoint> points);

// Candidate gain of committing one pair: increase of the global minimum
// reliability, bounds on the expected-diversity increase, and (for prune
// survivors) the exact increase.
struct PairGain {
    CandidatePair pair;
    double delta_min_rel = 0.0;
    DeltaBounds delta_std;
    double exact_delta_std = 0.0;
};

// Keeps gains that no other gain prunes: q is dropped when some p has
// delta_min_rel(p) >= delta_min_rel(q) and lb(p) > ub(q). Preserves order.
std::vector<PairGain> dominance_prune(std::vector<PairGain> gains);

// Increase of the minimum per-task reliability if `pair` were committed.
double delta_min_rel(const Assignment& assignment, std::span<const Task> tasks,
                     const CandidatePair& pair,
                     const std::unordered_map<WorkerId, double>& confidence,
                     const ProblemContext& ctx = {});

// ---------------------------------------------------------------------------
// Greedy
// ---------------------------------------------------------------------------

inline constexpr std::size_t kGreedySurvivorCap = 256;

struct GreedyStats {
    std::size_t rounds = 0;
    std::size_t pruned = 0;
    std::size_t survivor_overflows = 0;  // rounds where the 256-survivor cap hit
};

Assignment greedy_solve(std::span<const Task> tasks, std::span<const Worker> workers,
                        std::span<const CandidatePair> pairs, const ProblemContext& ctx = {},
                        ExecMode exec = ExecMode::serial, GreedyStats* stats = nullptr);

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

struct SamplePlan {
    double epsilon = 0.1;
    double delta = 0.9;
    long long k_hat = 1;
    long long k_cap = 100000;
    double log_p = 0.0;  // log of prod 1/deg(w)
    double log_n = 0.0;  // log of the population size, equals -log_p
    bool cap_hit = false;
};

// Smallest sample count K whose tail statistic F(K) = C1 * C2^K * C(M, K)
// drops to 1-delta, searched over ((ceil of the closed-form lower bound),
// min(k_cap, floor(M))]. Everything is evaluated in log space through
// lgamma so astronomically large populations are fine.
SamplePlan sample_size(std::span<const long long> degrees, double epsilon, double delta,
                       long long k_cap = 100000);

// Log of F(K) for the given population; exposed for the monotonicity checks.
double log_sample_tail(double log_n, double epsilon, long long k);

Assignment sampling_solve(std::span<const Task> tasks, std::span<const Worker> workers,
                          std::span<const CandidatePair> pairs, const SamplePlan& plan,
                          uint64_t seed, const ProblemContext& ctx = {},
                          ExecMode exec = ExecMode::serial);

// Per-worker counts of reachable tasks, over workers that occur in `pairs`.
std::vector<long long> worker_degrees(std::span<const CandidatePair> pairs);

// ---------------------------------------------------------------------------
// Divide and conquer
// ---------------------------------------------------------------------------

struct BgPartitionResult {
    std::vector<Task> tasks1, tasks2;
    std::vector<Worker> workers1, workers2;
    std::vector<CandidatePair> pairs1, pairs2;
};

// Splits tasks into two nonempty location clusters (2-means with a median
// fallback on degenerate geometry); workers whose reachable tasks straddle
// the cut are duplicated into both sides.
BgPartitionResult bg_partition(std::span<const Task> tasks, std::span<const Worker> workers,
                               std::span<const CandidatePair> pairs, uint64_t seed);

struct MergeStats {
    std::size_t conflicting_workers = 0;
    std::size_t dcw_groups = 0;
    std::size_t oversize_groups = 0;  // groups past dcw_cap, resolved sequentially
};

// Resolves workers assigned in both sub-answers: per conflict group, keeps one
// copy of each worker, choosing the dominance-best of the enumerated keep-side
// combinations (ties prefer side 1). Non-conflicting pairs pass through
// verbatim.
Assignment sa_merge(const Assignment& sub1, const Assignment& sub2, std::span<const Task> tasks,
                    std::span<const Worker> workers, int dcw_cap = 20,
                    const ProblemContext& ctx = {}, ExecMode exec = ExecMode::serial,
                    MergeStats* stats = nullptr);

enum class SubSolver { greedy, sampling };

struct DcConfig {
    long long gamma = 8;  // recurse while the task count exceeds this
    SubSolver sub_solver = SubSolver::sampling;
    int dcw_cap = 20;
    uint64_t seed = 0;
    double epsilon = 0.1;
    double delta = 0.9;
    long long k_cap = 100000;
    int sample_multiplier = 1;  // scales k_hat before capping
    ExecMode exec = ExecMode::serial;
};

Assignment dc_solve(std::span<const Task> tasks, std::span<const Worker> workers,
                    std::span<const CandidatePair> pairs, const DcConfig& cfg,
                    const ProblemContext& ctx = {});

// Sub-optimal baseline: divide and conquer with a tenfold sampling budget.
Assignment gtruth_solve(std::span<const Task> tasks, std::span<const Worker> workers,
                        std::span<const CandidatePair> pairs, DcConfig cfg,
                        const ProblemContext& ctx = {});

// All-pairs reachability sweep; the unindexed way to produce solver input.
std::vector<CandidatePair> brute_force_pairs(std::span<const Task> tasks,
                                             std::span<const Worker> workers, double now,
                                             WaitPolicy policy, ExecMode exec = ExecMode::serial);

}  // namespace rdbsc
