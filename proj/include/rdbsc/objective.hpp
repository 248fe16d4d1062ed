#pragma once

#include <unordered_map>

#include "rdbsc/diversity.hpp"
#include "rdbsc/exec.hpp"
#include "rdbsc/model.hpp"

namespace rdbsc {

// Fixed per-task contributions that participate in reliability and diversity
// but are not up for (re)assignment: received answers (confidence 1) and
// workers already in flight.
struct ProblemContext {
    std::unordered_map<TaskId, std::vector<ViewEntry>> baseline;

    const std::vector<ViewEntry>* task_baseline(TaskId t) const {
        auto it = baseline.find(t);
        return it == baseline.end() ? nullptr : &it->second;
    }
    bool empty() const { return baseline.empty(); }
};

// View of one task combining baseline contributions and assigned pairs.
TaskView task_view(const Task& task, const Assignment& assignment, const ProblemContext& ctx,
                   const std::unordered_map<WorkerId, double>& confidence);

// Minimum per-task reliability over all tasks (unassigned tasks count as 0)
// and the summed polynomial expected diversity.
ObjectiveVector objective(const Assignment& assignment, std::span<const Task> tasks,
                          const std::unordered_map<WorkerId, double>& confidence,
                          const ProblemContext& ctx = {}, ExecMode exec = ExecMode::serial);

inline std::unordered_map<WorkerId, double> confidence_map(std::span<const Worker> workers) {
    std::unordered_map<WorkerId, double> m;
    m.reserve(workers.size());
    for (const auto& w : workers) m.emplace(w.id, w.confidence);
    return m;
}

}  // namespace rdbsc
