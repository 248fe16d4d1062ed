#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "rdbsc/geometry.hpp"

namespace rdbsc {

using TaskId = int64_t;
using WorkerId = int64_t;

// A located unit of work, valid during [start, end] (hours), with a per-task
// weight beta blending spatial against temporal diversity.
struct Task {
    TaskId id = 0;
    Point loc;
    double start = 0.0;
    double end = 0.0;
    double beta = 0.5;
};

// A moving agent: position, speed (space units per hour), an acceptable
// travel-direction cone [angle_lo, angle_hi] (angle_hi may exceed 2*pi to
// encode the wrap), and a success probability.
struct Worker {
    WorkerId id = 0;
    Point loc;
    double velocity = 1.0;
    double angle_lo = 0.0;
    double angle_hi = two_pi;
    double confidence = 1.0;
    double available_at = 0.0;
};

inline void validate(const Task& t) {
    if (!(t.start < t.end)) throw std::invalid_argument("task: start must precede end");
    if (t.beta < 0.0 || t.beta > 1.0) throw std::invalid_argument("task: beta out of [0,1]");
    if (t.loc.x < 0.0 || t.loc.x > 1.0 || t.loc.y < 0.0 || t.loc.y > 1.0)
        throw std::invalid_argument("task: location outside unit square");
}

inline void validate(const Worker& w) {
    if (!(w.velocity > 0.0)) throw std::invalid_argument("worker: velocity must be positive");
    if (w.confidence < 0.0 || w.confidence > 1.0)
        throw std::invalid_argument("worker: confidence out of [0,1]");
    double width = w.angle_hi - w.angle_lo;
    if (!(width > 0.0) || width > two_pi + 1e-12)
        throw std::invalid_argument("worker: cone width must lie in (0, 2*pi]");
    if (w.loc.x < 0.0 || w.loc.x > 1.0 || w.loc.y < 0.0 || w.loc.y > 1.0)
        throw std::invalid_argument("worker: location outside unit square");
}

enum class WaitPolicy {
    strict,  // arrival time itself must fall inside [start, end]
    wait     // arriving early is allowed; the worker waits until start
};

// A feasible (task, worker) pairing: the arrival time and the angle of the
// ray from the task location toward the worker's starting location.
struct CandidatePair {
    TaskId task_id = 0;
    WorkerId worker_id = 0;
    double arrival = 0.0;
    double approach_angle = 0.0;
};

inline bool operator==(const CandidatePair& a, const CandidatePair& b) {
    return a.task_id == b.task_id && a.worker_id == b.worker_id &&
           a.arrival == b.arrival && a.approach_angle == b.approach_angle;
}

// Straight-line reachability test. Returns the candidate pair when the worker
// can serve the task starting to travel at `now`, or nothing. Total function:
// any violated precondition yields an empty result.
std::optional<CandidatePair> reachability_check(const Worker& worker, const Task& task,
                                                double now, WaitPolicy policy);

// A worker-disjoint set of candidate pairs plus the derived per-task grouping.
class Assignment {
public:
    void add(const CandidatePair& p) {
        if (by_worker_.count(p.worker_id)) throw std::invalid_argument("worker already assigned");
        by_worker_.emplace(p.worker_id, pairs_.size());
        per_task_[p.task_id].push_back(p);
        pairs_.push_back(p);
    }

    bool has_worker(WorkerId w) const { return by_worker_.count(w) != 0; }

    const std::vector<CandidatePair>& pairs() const { return pairs_; }

    const std::vector<CandidatePair>* task_pairs(TaskId t) const {
        auto it = per_task_.find(t);
        return it == per_task_.end() ? nullptr : &it->second;
    }

    const std::map<TaskId, std::vector<CandidatePair>>& per_task() const { return per_task_; }

    std::size_t size() const { return pairs_.size(); }
    bool empty() const { return pairs_.empty(); }

private:
    std::vector<CandidatePair> pairs_;
    std::map<WorkerId, std::size_t> by_worker_;
    std::map<TaskId, std::vector<CandidatePair>> per_task_;
};

struct ObjectiveVector {
    double min_rel = 0.0;
    double total_std = 0.0;
};

// True when a is at least as good as b on both axes and strictly better on one.
inline bool dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
    return a.min_rel >= b.min_rel && a.total_std >= b.total_std &&
           (a.min_rel > b.min_rel || a.total_std > b.total_std);
}

}  // namespace rdbsc
