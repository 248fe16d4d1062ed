#include "rdbsc/objective.hpp"

#include "rdbsc/reliability.hpp"

namespace rdbsc {

TaskView task_view(const Task& task, const Assignment& assignment, const ProblemContext& ctx,
                   const std::unordered_map<WorkerId, double>& confidence) {
    std::vector<ViewEntry> entries;
    if (const auto* base = ctx.task_baseline(task.id)) entries = *base;
    if (const auto* pairs = assignment.task_pairs(task.id)) {
        for (const auto& p : *pairs)
            entries.push_back({p.worker_id, confidence.at(p.worker_id), p.approach_angle, p.arrival});
    }
    return build_view(task, std::move(entries));
}

ObjectiveVector objective(const Assignment& assignment, std::span<const Task> tasks,
                          const std::unordered_map<WorkerId, double>& confidence,
                          const ProblemContext& ctx, ExecMode exec) {
    std::vector<double> rel(tasks.size(), 0.0);
    std::vector<double> estd(tasks.size(), 0.0);
    for_each_index(tasks.size(), exec, [&](std::size_t i) {
        TaskView view = task_view(tasks[i], assignment, ctx, confidence);
        rel[i] = reliability(view.p_by_angle);
        estd[i] = expected_std_poly(view);
    });
    ObjectiveVector obj;
    obj.min_rel = tasks.empty() ? 0.0 : 1.0;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        obj.min_rel = std::min(obj.min_rel, rel[i]);
        obj.total_std += estd[i];
    }
    return obj;
}

}  // namespace rdbsc
