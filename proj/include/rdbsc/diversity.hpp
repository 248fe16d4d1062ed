#pragma once

#include <functional>
#include <span>
#include <vector>

#include "rdbsc/entropy.hpp"
#include "rdbsc/model.hpp"

namespace rdbsc {

// One worker's contribution to a task: success probability, approach angle,
// arrival time. worker_id is -1 for fixed baseline contributions (answers
// already received, workers already in flight).
struct ViewEntry {
    WorkerId worker_id = -1;
    double confidence = 1.0;
    double angle = 0.0;
    double arrival = 0.0;
};

// Per-task view with both sort orders materialized. Angles are strictly
// increasing in [0, 2*pi) and arrivals strictly increasing within [start, end];
// ties are separated by the smallest representable step so that cyclic gaps
// and sub-intervals stay positive.
struct TaskView {
    double start = 0.0;
    double end = 1.0;
    double beta = 0.5;

    std::vector<double> angles;            // angle-sorted
    std::vector<double> p_by_angle;
    std::vector<double> arrival_by_angle;  // arrival of the i-th angle-sorted worker
    std::vector<WorkerId> id_by_angle;

    std::vector<double> arrivals;          // arrival-sorted
    std::vector<double> p_by_arrival;

    std::size_t size() const { return angles.size(); }

    // Cyclic gaps A_1..A_r between consecutive angles (sums to 2*pi).
    std::vector<double> gaps() const;
    // Sub-interval lengths I_1..I_{r+1} of [start, end] (sums to end-start).
    std::vector<double> intervals() const;
};

TaskView build_view(const Task& task, std::vector<ViewEntry> entries);

using ConfidenceFn = std::function<double(WorkerId)>;

TaskView build_view(const Task& task, std::span<const CandidatePair> pairs,
                    const ConfidenceFn& confidence_of);

// Square tables whose summed entries give the expected diversity without
// enumerating possible worlds. m_sd[j][k] covers the merged arc from worker j
// to worker k (both succeed, everyone cyclically between them fails); the
// j == k full-circle case is zero by the entropy convention, so a lone
// successful worker needs no extra row. m_td[j][k] covers merged interval
// I_{j+1}..I_{k+1}: its two bounding events succeed (the window edges count as
// always-present events) and all arrivals strictly inside fail; entries below
// the diagonal are zero.
struct DiversityMatrices {
    std::size_t r = 0;
    std::vector<double> m_sd;  // r x r, row-major
    std::vector<double> m_td;  // (r+1) x (r+1), row-major

    double sd(std::size_t j, std::size_t k) const { return m_sd[j * r + k]; }
    double td(std::size_t j, std::size_t k) const { return m_td[j * (r + 1) + k]; }
};

DiversityMatrices msd_matrix(const TaskView& view);
DiversityMatrices mtd_matrix(const TaskView& view);

// beta * sum(m_sd) + (1-beta) * sum(m_td), computed without materializing the
// tables. O(r^2).
double expected_std_poly(const TaskView& view);

struct DiversityBounds {
    double lb = 0.0;
    double ub = 0.0;
};

// ub: diversity of the all-succeed world. lb: probability-weighted minimum
// non-zero diversity (two workers at the narrowest gap for SD, the most
// lopsided single arrival for TD). O(r).
DiversityBounds std_bounds(const TaskView& view);

struct DeltaBounds {
    double lb = 0.0;
    double ub = 0.0;
};

// Bounds on the expected-diversity increase from before to after.
inline DeltaBounds delta_bounds(const DiversityBounds& before, const DiversityBounds& after) {
    return {after.lb - before.ub, after.ub - before.lb};
}

inline DeltaBounds delta_bounds(const TaskView& before, const TaskView& after) {
    return delta_bounds(std_bounds(before), std_bounds(after));
}

// Exact expected diversity of "this view plus one worker" in O(r), using the
// decomposition: inserting w multiplies every table entry whose merged arc or
// interval strictly contains w by (1-p_w), and adds the entries where w is an
// endpoint. Crossing sums per gap/interval slot are precomputed once (O(r^2),
// the cost of one polynomial evaluation).
class TaskDeltaCache {
public:
    explicit TaskDeltaCache(const TaskView& view);

    double expected_std() const {
        return view_->beta * e_sd_ + (1.0 - view_->beta) * e_td_;
    }
    double expected_std_with(double confidence, double angle, double arrival) const;

private:
    const TaskView* view_;
    std::vector<double> gaps_;
    double e_sd_ = 0.0, e_td_ = 0.0;
    std::vector<double> cross_sd_;  // per gap slot: entries whose arc spans it
    std::vector<double> cross_td_;  // per interval slot, 1..r+1
};

// Aggregates over one view that let the bounds of "this view plus one worker"
// be evaluated in O(log r) without rebuilding anything. Greedy scans every
// candidate pair each round through this.
class TaskBoundsCache {
public:
    explicit TaskBoundsCache(const TaskView& view);

    const DiversityBounds& bounds() const { return bounds_; }
    DiversityBounds bounds_with(double confidence, double angle, double arrival) const;

private:
    const TaskView* view_;
    DiversityBounds bounds_;
    double sd_full_ = 0.0, td_full_ = 0.0;
    std::size_t certain_ = 0;      // workers with p == 1
    double fail_rest_ = 1.0;       // prod (1-p) over p < 1
    double odds_sum_ = 0.0;        // sum p/(1-p) over p < 1
    double gap_min1_ = 0.0, gap_min2_ = 0.0;
    double min_td_single_ = 0.0;
};

}  // namespace rdbsc
