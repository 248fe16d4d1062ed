#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>

#include "rdbsc/reliability.hpp"
#include "rdbsc/rng.hpp"
#include "rdbsc/solvers.hpp"

namespace rdbsc {

namespace {

// Returns side (0/1) per task: 2-means on locations, with a median split along
// the higher-variance axis when clustering degenerates or lands more than 80%
// of tasks on one side.
std::vector<int> split_tasks(std::span<const Task> tasks, uint64_t seed) {
    std::size_t m = tasks.size();
    std::vector<int> side(m, 0);
    auto rng = make_rng(seed, 0xB6);
    std::uniform_int_distribution<std::size_t> pick(0, m - 1);
    std::size_t i0 = pick(rng), i1 = pick(rng);
    for (int tries = 0; tries < 16 && i1 == i0; ++tries) i1 = pick(rng);
    Point c0 = tasks[i0].loc, c1 = tasks[i1].loc;
    for (int iter = 0; iter < 50; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < m; ++i) {
            int s = dist(tasks[i].loc, c0) <= dist(tasks[i].loc, c1) ? 0 : 1;
            if (s != side[i]) {
                side[i] = s;
                changed = true;
            }
        }
        double sx[2] = {0, 0}, sy[2] = {0, 0};
        std::size_t cnt[2] = {0, 0};
        for (std::size_t i = 0; i < m; ++i) {
            sx[side[i]] += tasks[i].loc.x;
            sy[side[i]] += tasks[i].loc.y;
            ++cnt[side[i]];
        }
        if (cnt[0] == 0 || cnt[1] == 0) break;
        c0 = {sx[0] / cnt[0], sy[0] / cnt[0]};
        c1 = {sx[1] / cnt[1], sy[1] / cnt[1]};
        if (!changed) break;
    }
    std::size_t n1 = std::accumulate(side.begin(), side.end(), std::size_t{0});
    std::size_t n0 = m - n1;
    if (n0 == 0 || n1 == 0 || n0 > (m * 4) / 5 || n1 > (m * 4) / 5) {
        double mx = 0, my = 0;
        for (const auto& t : tasks) {
            mx += t.loc.x;
            my += t.loc.y;
        }
        mx /= m;
        my /= m;
        double vx = 0, vy = 0;
        for (const auto& t : tasks) {
            vx += (t.loc.x - mx) * (t.loc.x - mx);
            vy += (t.loc.y - my) * (t.loc.y - my);
        }
        std::vector<std::size_t> order(m);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            double ca = vx >= vy ? tasks[a].loc.x : tasks[a].loc.y;
            double cb = vx >= vy ? tasks[b].loc.x : tasks[b].loc.y;
            if (ca != cb) return ca < cb;
            return tasks[a].id < tasks[b].id;
        });
        for (std::size_t i = 0; i < m; ++i) side[order[i]] = i < m / 2 ? 0 : 1;
    }
    return side;
}

}  // namespace

BgPartitionResult bg_partition(std::span<const Task> tasks, std::span<const Worker> workers,
                               std::span<const CandidatePair> pairs, uint64_t seed) {
    if (tasks.size() < 2) throw std::invalid_argument("bg_partition: need at least two tasks");
    auto side = split_tasks(tasks, seed);

    BgPartitionResult res;
    std::unordered_map<TaskId, int> task_side;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        task_side.emplace(tasks[i].id, side[i]);
        (side[i] == 0 ? res.tasks1 : res.tasks2).push_back(tasks[i]);
    }
    std::unordered_map<WorkerId, unsigned> reach;  // bit 0: side 1, bit 1: side 2
    for (const auto& p : pairs) reach[p.worker_id] |= task_side.at(p.task_id) == 0 ? 1u : 2u;
    for (const auto& w : workers) {
        auto it = reach.find(w.id);
        if (it == reach.end()) continue;  // worker with no reachable task: drop
        if (it->second & 1u) res.workers1.push_back(w);
        if (it->second & 2u) res.workers2.push_back(w);
    }
    for (const auto& p : pairs)
        (task_side.at(p.task_id) == 0 ? res.pairs1 : res.pairs2).push_back(p);
    return res;
}

namespace {

struct DisjointSet {
    std::vector<std::size_t> parent;
    explicit DisjointSet(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

// Incremental objective state over one task list: per-task entry lists with
// cached reliability and expected diversity.
struct MergeState {
    std::span<const Task> tasks;
    const std::unordered_map<WorkerId, double>* conf;
    std::unordered_map<TaskId, std::size_t> task_idx;
    std::vector<std::vector<ViewEntry>> entries;
    std::vector<double> rel, estd;

    MergeState(std::span<const Task> t, const std::unordered_map<WorkerId, double>& c,
               const ProblemContext& ctx)
        : tasks(t), conf(&c), entries(t.size()), rel(t.size()), estd(t.size()) {
        for (std::size_t i = 0; i < t.size(); ++i) {
            task_idx.emplace(t[i].id, i);
            if (const auto* base = ctx.task_baseline(t[i].id)) entries[i] = *base;
            refresh(i);
        }
    }

    void refresh(std::size_t i) {
        TaskView v = build_view(tasks[i], entries[i]);
        rel[i] = reliability(v.p_by_angle);
        estd[i] = expected_std_poly(v);
    }

    void commit(const CandidatePair& p) {
        std::size_t i = task_idx.at(p.task_id);
        entries[i].push_back({p.worker_id, conf->at(p.worker_id), p.approach_angle, p.arrival});
        refresh(i);
    }
};

}  // namespace

Assignment sa_merge(const Assignment& sub1, const Assignment& sub2, std::span<const Task> tasks,
                    std::span<const Worker> workers, int dcw_cap, const ProblemContext& ctx,
                    ExecMode exec, MergeStats* stats) {
    auto conf = confidence_map(workers);
    std::map<WorkerId, const CandidatePair*> a1, a2;
    for (const auto& p : sub1.pairs()) a1.emplace(p.worker_id, &p);
    for (const auto& p : sub2.pairs()) a2.emplace(p.worker_id, &p);

    std::vector<WorkerId> conflicting;
    for (const auto& [w, _] : a1)
        if (a2.count(w)) conflicting.push_back(w);

    Assignment out;
    for (const auto& p : sub1.pairs())
        if (!a2.count(p.worker_id)) out.add(p);
    for (const auto& p : sub2.pairs())
        if (!a1.count(p.worker_id)) out.add(p);

    MergeStats local;
    local.conflicting_workers = conflicting.size();
    if (conflicting.empty()) {
        if (stats) *stats = local;
        return out;
    }

    // Group conflicting workers that share an assigned task; singleton groups
    // are the independently resolvable ones.
    DisjointSet dsu(conflicting.size());
    std::map<TaskId, std::vector<std::size_t>> by_task;
    for (std::size_t i = 0; i < conflicting.size(); ++i) {
        by_task[a1.at(conflicting[i])->task_id].push_back(i);
        by_task[a2.at(conflicting[i])->task_id].push_back(i);
    }
    for (const auto& [_, members] : by_task)
        for (std::size_t i = 1; i < members.size(); ++i) dsu.unite(members[0], members[i]);
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < conflicting.size(); ++i) groups[dsu.find(i)].push_back(i);

    MergeState state(tasks, conf, ctx);
    for (const auto& p : out.pairs()) state.commit(p);

    // Scores one keep-side combination for `members`. Each affected task only
    // depends on the handful of members with a copy targeting it, so per task
    // all 2^(local members) configurations are evaluated once up front and the
    // full combination sweep reduces to table lookups.
    auto resolve_group = [&](const std::vector<std::size_t>& members) {
        std::size_t k = members.size();
        std::vector<TaskId> affected;
        for (std::size_t i : members) {
            affected.push_back(a1.at(conflicting[i])->task_id);
            affected.push_back(a2.at(conflicting[i])->task_id);
        }
        std::sort(affected.begin(), affected.end());
        affected.erase(std::unique(affected.begin(), affected.end()), affected.end());

        double rest_min = 1.0, rest_sum = 0.0;
        {
            std::set<TaskId> aff(affected.begin(), affected.end());
            bool any_rest = false;
            for (std::size_t i = 0; i < tasks.size(); ++i) {
                if (aff.count(tasks[i].id)) continue;
                rest_min = std::min(rest_min, state.rel[i]);
                rest_sum += state.estd[i];
                any_rest = true;
            }
            if (!any_rest) rest_min = std::numeric_limits<double>::infinity();
        }

        struct LocalTask {
            std::vector<std::size_t> bits;        // group bits whose choice lands here
            std::vector<char> side;               // side (0/1) that targets this task
            std::vector<const CandidatePair*> cp;
            std::vector<double> rel, estd;        // indexed by local sub-mask
        };
        std::vector<LocalTask> locals(affected.size());
        for (std::size_t a = 0; a < affected.size(); ++a) {
            LocalTask& lt = locals[a];
            std::vector<const CandidatePair*> fixed;  // both copies land here
            for (std::size_t b = 0; b < k; ++b) {
                const CandidatePair* p1 = a1.at(conflicting[members[b]]);
                const CandidatePair* p2 = a2.at(conflicting[members[b]]);
                if (p1->task_id == affected[a] && p2->task_id == affected[a]) {
                    fixed.push_back(p1);  // identical pair either way
                } else if (p1->task_id == affected[a]) {
                    lt.bits.push_back(b);
                    lt.side.push_back(0);
                    lt.cp.push_back(p1);
                } else if (p2->task_id == affected[a]) {
                    lt.bits.push_back(b);
                    lt.side.push_back(1);
                    lt.cp.push_back(p2);
                }
            }
            std::size_t ti = state.task_idx.at(affected[a]);
            auto base = state.entries[ti];
            for (const CandidatePair* p : fixed)
                base.push_back({p->worker_id, conf.at(p->worker_id), p->approach_angle, p->arrival});
            std::size_t subs = std::size_t{1} << lt.bits.size();
            lt.rel.resize(subs);
            lt.estd.resize(subs);
            for (std::size_t sub = 0; sub < subs; ++sub) {
                auto ent = base;
                for (std::size_t j = 0; j < lt.bits.size(); ++j)
                    if ((sub >> j) & 1u)
                        ent.push_back({lt.cp[j]->worker_id, conf.at(lt.cp[j]->worker_id),
                                       lt.cp[j]->approach_angle, lt.cp[j]->arrival});
                TaskView v = build_view(state.tasks[ti], std::move(ent));
                lt.rel[sub] = reliability(v.p_by_angle);
                lt.estd[sub] = expected_std_poly(v);
            }
        }

        std::size_t combos = std::size_t{1} << k;
        std::vector<ObjectiveVector> scored(combos);
        for_each_index(combos, exec, [&](std::size_t mask) {
            double min_rel = rest_min, sum = rest_sum;
            for (const LocalTask& lt : locals) {
                std::size_t sub = 0;
                for (std::size_t j = 0; j < lt.bits.size(); ++j)
                    if (((mask >> lt.bits[j]) & 1u) == static_cast<std::size_t>(lt.side[j]))
                        sub |= std::size_t{1} << j;
                min_rel = std::min(min_rel, lt.rel[sub]);
                sum += lt.estd[sub];
            }
            scored[mask] = {std::isfinite(min_rel) ? min_rel : 0.0, sum};
        });
        std::vector<RankPoint> points(combos);
        for (std::size_t c = 0; c < combos; ++c)
            points[c] = {scored[c].min_rel, scored[c].total_std, static_cast<int64_t>(c), 0};
        std::size_t best = dominance_rank(points);
        for (std::size_t b = 0; b < k; ++b) {
            const CandidatePair* keep =
                (best >> b) & 1u ? a2.at(conflicting[members[b]]) : a1.at(conflicting[members[b]]);
            out.add(*keep);
            state.commit(*keep);
        }
    };

    for (const auto& [_, members] : groups) {
        if (members.size() > 1) ++local.dcw_groups;
        if (static_cast<int>(members.size()) <= dcw_cap) {
            resolve_group(members);
        } else {
            ++local.oversize_groups;
            for (std::size_t i : members) resolve_group({i});
        }
    }
    if (stats) *stats = local;
    return out;
}

namespace {

Assignment dc_recurse(std::span<const Task> tasks, std::span<const Worker> workers,
                      std::span<const CandidatePair> pairs, const DcConfig& cfg,
                      const ProblemContext& ctx, uint64_t node) {
    if (static_cast<long long>(tasks.size()) <= cfg.gamma || tasks.size() < 2) {
        if (cfg.sub_solver == SubSolver::greedy)
            return greedy_solve(tasks, workers, pairs, ctx, cfg.exec);
        auto deg = worker_degrees(pairs);
        if (deg.empty()) return {};
        SamplePlan plan = sample_size(deg, cfg.epsilon, cfg.delta, cfg.k_cap);
        plan.k_hat = std::min(plan.k_hat * cfg.sample_multiplier, cfg.k_cap);
        return sampling_solve(tasks, workers, pairs, plan, mix_seed(cfg.seed, node), ctx, cfg.exec);
    }
    auto part = bg_partition(tasks, workers, pairs, mix_seed(cfg.seed, node ^ 0xD1CEull));
    Assignment s1 = dc_recurse(part.tasks1, part.workers1, part.pairs1, cfg, ctx, 2 * node + 1);
    Assignment s2 = dc_recurse(part.tasks2, part.workers2, part.pairs2, cfg, ctx, 2 * node + 2);
    return sa_merge(s1, s2, tasks, workers, cfg.dcw_cap, ctx, cfg.exec);
}

}  // namespace

Assignment dc_solve(std::span<const Task> tasks, std::span<const Worker> workers,
                    std::span<const CandidatePair> pairs, const DcConfig& cfg,
                    const ProblemContext& ctx) {
    if (cfg.gamma < 2) throw std::invalid_argument("dc_solve: gamma must be >= 2");
    if (cfg.dcw_cap < 1) throw std::invalid_argument("dc_solve: dcw_cap must be >= 1");
    if (tasks.empty() || pairs.empty()) return {};
    return dc_recurse(tasks, workers, pairs, cfg, ctx, 0);
}

Assignment gtruth_solve(std::span<const Task> tasks, std::span<const Worker> workers,
                        std::span<const CandidatePair> pairs, DcConfig cfg,
                        const ProblemContext& ctx) {
    cfg.sub_solver = SubSolver::sampling;
    cfg.sample_multiplier = 10;
    return dc_solve(tasks, workers, pairs, cfg, ctx);
}

}  // namespace rdbsc
