#include "rdbsc/model.hpp"

namespace rdbsc {

std::optional<CandidatePair> reachability_check(const Worker& worker, const Task& task,
                                                double now, WaitPolicy policy) {
    if (now < 0.0 || worker.available_at > now) return std::nullopt;
    double d = dist(worker.loc, task.loc);
    if (d > 0.0) {
        // A co-located worker passes the direction test vacuously.
        double travel_dir = bearing(worker.loc, task.loc);
        if (!angle_in_arc(travel_dir, worker.angle_lo, worker.angle_hi)) return std::nullopt;
    }
    double raw = now + d / worker.velocity;
    double arrival = raw;
    if (policy == WaitPolicy::strict) {
        if (raw < task.start || raw > task.end) return std::nullopt;
    } else {
        if (raw > task.end) return std::nullopt;
        arrival = std::max(raw, task.start);
    }
    return CandidatePair{task.id, worker.id, arrival, bearing(task.loc, worker.loc)};
}

}  // namespace rdbsc
