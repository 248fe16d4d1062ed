#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <unordered_map>
#include <unordered_set>

#include "rdbsc/reliability.hpp"
#include "rdbsc/solvers.hpp"

namespace rdbsc {

namespace {

std::size_t pick_by_score(std::span<const RankPoint> points, std::span<const std::size_t> score) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < points.size(); ++i) {
        const auto& a = points[i];
        const auto& b = points[best];
        if (score[i] != score[best]) {
            if (score[i] > score[best]) best = i;
        } else if (a.x != b.x) {
            if (a.x > b.x) best = i;
        } else if (a.y != b.y) {
            if (a.y > b.y) best = i;
        } else if (a.id1 != b.id1) {
            if (a.id1 < b.id1) best = i;
        } else if (a.id2 < b.id2) {
            best = i;
        }
    }
    return best;
}

// Dominance counts for every point in O(n log n): sweep x-ascending, count
// already-inserted y-ranks <= own, subtract exact duplicates.
std::vector<std::size_t> dominance_counts_sweep(std::span<const RankPoint> points) {
    std::size_t n = points.size();
    std::vector<double> ys(n);
    for (std::size_t i = 0; i < n; ++i) ys[i] = points[i].y;
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
    auto y_rank = [&](double y) {
        return static_cast<std::size_t>(std::lower_bound(ys.begin(), ys.end(), y) - ys.begin()) + 1;
    };
    std::vector<std::size_t> tree(ys.size() + 1, 0);
    auto add = [&](std::size_t i) {
        for (; i < tree.size(); i += i & (~i + 1)) ++tree[i];
    };
    auto query = [&](std::size_t i) {
        std::size_t s = 0;
        for (; i > 0; i -= i & (~i + 1)) s += tree[i];
        return s;
    };

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return points[a].x < points[b].x; });

    std::vector<std::pair<double, double>> xy(n);
    for (std::size_t i = 0; i < n; ++i) xy[i] = {points[i].x, points[i].y};
    std::sort(xy.begin(), xy.end());
    auto dup = [&](double x, double y) {
        auto range = std::equal_range(xy.begin(), xy.end(), std::pair<double, double>{x, y});
        return static_cast<std::size_t>(range.second - range.first);
    };

    std::vector<std::size_t> count(n, 0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && points[order[j]].x == points[order[i]].x) ++j;
        for (std::size_t k = i; k < j; ++k) add(y_rank(points[order[k]].y));
        for (std::size_t k = i; k < j; ++k) {
            const auto& p = points[order[k]];
            count[order[k]] = query(y_rank(p.y)) - dup(p.x, p.y);
        }
        i = j;
    }
    return count;
}

}  // namespace

std::size_t dominance_rank(std::span<const RankPoint> points) {
    if (points.empty()) throw std::invalid_argument("dominance_rank: empty input");
    std::size_t n = points.size();
    if (n > 4096) {
        auto count = dominance_counts_sweep(points);
        return pick_by_score(points, count);
    }
    std::vector<std::size_t> score(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const auto& a = points[i];
            const auto& b = points[j];
            if (a.x >= b.x && a.y >= b.y && (a.x > b.x || a.y > b.y)) ++score[i];
        }
    }
    return pick_by_score(points, score);
}

std::vector<PairGain> dominance_prune(std::vector<PairGain> gains) {
    std::size_t n = gains.size();
    if (n <= 1) return gains;
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return gains[a].delta_min_rel > gains[b].delta_min_rel;
    });
    std::vector<char> pruned(n, 0);
    double max_lb = -std::numeric_limits<double>::infinity();
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && gains[order[j]].delta_min_rel == gains[order[i]].delta_min_rel) ++j;
        // Equal-reliability gains may prune one another, so fold the whole
        // group into the running max before testing its members.
        for (std::size_t k = i; k < j; ++k) max_lb = std::max(max_lb, gains[order[k]].delta_std.lb);
        for (std::size_t k = i; k < j; ++k)
            if (max_lb > gains[order[k]].delta_std.ub) pruned[order[k]] = 1;
        i = j;
    }
    std::vector<PairGain> out;
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k)
        if (!pruned[k]) out.push_back(std::move(gains[k]));
    return out;
}

double delta_min_rel(const Assignment& assignment, std::span<const Task> tasks,
                     const CandidatePair& pair,
                     const std::unordered_map<WorkerId, double>& confidence,
                     const ProblemContext& ctx) {
    double before = 1.0, after = 1.0;
    for (const auto& t : tasks) {
        std::vector<double> ps;
        if (const auto* base = ctx.task_baseline(t.id))
            for (const auto& e : *base) ps.push_back(e.confidence);
        if (const auto* tp = assignment.task_pairs(t.id))
            for (const auto& p : *tp) ps.push_back(confidence.at(p.worker_id));
        double r = reliability(ps);
        before = std::min(before, r);
        if (t.id == pair.task_id) {
            ps.push_back(confidence.at(pair.worker_id));
            r = reliability(ps);
        }
        after = std::min(after, r);
    }
    return after - before;
}

std::vector<CandidatePair> brute_force_pairs(std::span<const Task> tasks,
                                             std::span<const Worker> workers, double now,
                                             WaitPolicy policy, ExecMode exec) {
    std::vector<std::vector<CandidatePair>> per_worker(workers.size());
    for_each_index(workers.size(), exec, [&](std::size_t wi) {
        for (const auto& t : tasks)
            if (auto p = reachability_check(workers[wi], t, now, policy))
                per_worker[wi].push_back(*p);
    });
    std::vector<CandidatePair> out;
    for (auto& v : per_worker) out.insert(out.end(), v.begin(), v.end());
    std::sort(out.begin(), out.end(), [](const CandidatePair& a, const CandidatePair& b) {
        if (a.worker_id != b.worker_id) return a.worker_id < b.worker_id;
        return a.task_id < b.task_id;
    });
    return out;
}

namespace {

// Per-task state greedy keeps current between rounds.
struct TaskState {
    std::vector<ViewEntry> entries;
    TaskView view;
    std::unique_ptr<TaskBoundsCache> cache;
    std::unique_ptr<TaskDeltaCache> delta;
    double rel = 0.0;
    double estd = 0.0;
};

}  // namespace

Assignment greedy_solve(std::span<const Task> tasks, std::span<const Worker> workers,
                        std::span<const CandidatePair> pairs, const ProblemContext& ctx,
                        ExecMode exec, GreedyStats* stats) {
    auto conf = confidence_map(workers);
    std::unordered_map<TaskId, std::size_t> task_idx;
    for (std::size_t i = 0; i < tasks.size(); ++i) task_idx.emplace(tasks[i].id, i);

    std::size_t m = tasks.size();
    std::vector<TaskState> state(m);
    auto refresh_task = [&](std::size_t i) {
        TaskState& s = state[i];
        s.view = build_view(tasks[i], s.entries);
        s.cache = std::make_unique<TaskBoundsCache>(s.view);
        s.delta = std::make_unique<TaskDeltaCache>(s.view);
        s.rel = reliability(s.view.p_by_angle);
        s.estd = s.delta->expected_std();
    };
    for (std::size_t i = 0; i < m; ++i) {
        if (const auto* base = ctx.task_baseline(tasks[i].id)) state[i].entries = *base;
        refresh_task(i);
    }

    // Live pairs as flat arrays: one slot per pair, cheaper to rescan every
    // round than materializing per-pair structs.
    std::size_t n_live = pairs.size();
    std::vector<CandidatePair> live(pairs.begin(), pairs.end());
    std::vector<std::size_t> live_task(n_live);
    std::vector<double> live_conf(n_live);
    for (std::size_t i = 0; i < n_live; ++i) {
        live_task[i] = task_idx.at(live[i].task_id);
        live_conf[i] = conf.at(live[i].worker_id);
    }
    std::vector<double> gx(n_live), glb(n_live), gub(n_live);
    std::vector<std::size_t> order, kept;
    std::vector<char> pruned_flag(n_live);

    Assignment out;
    GreedyStats local;

    while (n_live > 0) {
        ++local.rounds;
        // Minimum and second-minimum reliability; a pair raises the global
        // minimum only when its task holds the unique minimum.
        double m1 = 1.0, m2 = std::numeric_limits<double>::infinity();
        std::size_t cnt1 = 0;
        for (std::size_t i = 0; i < m; ++i) m1 = std::min(m1, state[i].rel);
        for (std::size_t i = 0; i < m; ++i) {
            if (state[i].rel == m1)
                ++cnt1;
            else
                m2 = std::min(m2, state[i].rel);
        }

        // Per-pair work is light; forking threads only pays off on big rounds.
        ExecMode round_exec = n_live >= 4096 ? exec : ExecMode::serial;
        for_each_index(n_live, round_exec, [&](std::size_t gi) {
            const auto& p = live[gi];
            const TaskState& s = state[live_task[gi]];
            double pw = live_conf[gi];
            double others = s.rel > m1 ? m1 : (cnt1 > 1 ? m1 : m2);
            double new_rel = 1.0 - (1.0 - s.rel) * (1.0 - pw);
            gx[gi] = std::max(0.0, std::min(others, new_rel) - m1);
            DiversityBounds after = s.cache->bounds_with(pw, p.approach_angle, p.arrival);
            glb[gi] = after.lb - s.cache->bounds().ub;
            gub[gi] = after.ub - s.cache->bounds().lb;
        });

        // Same sweep as dominance_prune, over indices.
        order.resize(n_live);
        for (std::size_t i = 0; i < n_live; ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return gx[a] > gx[b]; });
        double max_lb = -std::numeric_limits<double>::infinity();
        std::size_t gi = 0;
        while (gi < n_live) {
            std::size_t gj = gi;
            while (gj < n_live && gx[order[gj]] == gx[order[gi]]) ++gj;
            for (std::size_t k = gi; k < gj; ++k) max_lb = std::max(max_lb, glb[order[k]]);
            for (std::size_t k = gi; k < gj; ++k) pruned_flag[order[k]] = max_lb > gub[order[k]];
            gi = gj;
        }
        kept.clear();
        for (std::size_t i = 0; i < n_live; ++i)
            if (!pruned_flag[i]) kept.push_back(i);
        local.pruned += n_live - kept.size();

        auto by_bounds = [&](std::size_t a, std::size_t b) {
            if (gx[a] != gx[b]) return gx[a] > gx[b];
            if (gub[a] != gub[b]) return gub[a] > gub[b];
            if (glb[a] != glb[b]) return glb[a] > glb[b];
            if (live[a].worker_id != live[b].worker_id) return live[a].worker_id < live[b].worker_id;
            return live[a].task_id < live[b].task_id;
        };
        if (kept.size() > kGreedySurvivorCap) {
            ++local.survivor_overflows;
            std::partial_sort(kept.begin(), kept.begin() + kGreedySurvivorCap, kept.end(), by_bounds);
            kept.resize(kGreedySurvivorCap);
        }

        std::vector<double> exact(kept.size());
        for_each_index(kept.size(), ExecMode::serial, [&](std::size_t si) {
            std::size_t i = kept[si];
            const TaskState& s = state[live_task[i]];
            exact[si] =
                s.delta->expected_std_with(live_conf[i], live[i].approach_angle, live[i].arrival) -
                s.estd;
        });

        std::vector<RankPoint> points(kept.size());
        for (std::size_t si = 0; si < kept.size(); ++si)
            points[si] = {gx[kept[si]], exact[si], live[kept[si]].worker_id, live[kept[si]].task_id};
        const CandidatePair win = live[kept[dominance_rank(points)]];

        std::size_t ti = task_idx.at(win.task_id);
        state[ti].entries.push_back(
            {win.worker_id, conf.at(win.worker_id), win.approach_angle, win.arrival});
        refresh_task(ti);
        out.add(win);

        // Compact the committed worker's pairs out of the flat arrays.
        std::size_t w = 0;
        for (std::size_t i = 0; i < n_live; ++i) {
            if (live[i].worker_id == win.worker_id) continue;
            live[w] = live[i];
            live_task[w] = live_task[i];
            live_conf[w] = live_conf[i];
            ++w;
        }
        n_live = w;
    }

    if (stats) *stats = local;
    return out;
}

}  // namespace rdbsc
