#include "rdbsc/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

#include "rdbsc/generator.hpp"
#include "rdbsc/grid_index.hpp"
#include "rdbsc/np_reduction.hpp"
#include "rdbsc/objective.hpp"
#include "rdbsc/oracle.hpp"
#include "rdbsc/reliability.hpp"
#include "rdbsc/rng.hpp"
#include "rdbsc/solvers.hpp"

namespace rdbsc {

namespace {

using Rat = boost::multiprecision::cpp_rational;
using Int = boost::multiprecision::cpp_int;

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

Task random_task(std::mt19937_64& rng, TaskId id) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    Task t;
    t.id = id;
    t.loc = {uni(rng), uni(rng)};
    t.start = uni(rng) * 10.0;
    t.end = t.start + 0.5 + uni(rng) * 2.5;
    t.beta = uni(rng);
    return t;
}

ViewEntry random_entry(std::mt19937_64& rng, const Task& t, WorkerId id) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    return {id, 0.05 + 0.9 * uni(rng), uni(rng) * two_pi,
            t.start + uni(rng) * (t.end - t.start)};
}

// One-sided lower confidence bound for a binomial proportion (Wilson score).
double wilson_lower(std::size_t successes, std::size_t n, double z) {
    if (n == 0) return 0.0;
    double ph = static_cast<double>(successes) / static_cast<double>(n);
    double z2 = z * z;
    double denom = 1.0 + z2 / n;
    double center = ph + z2 / (2.0 * n);
    double spread = z * std::sqrt(ph * (1.0 - ph) / n + z2 / (4.0 * n * n));
    return (center - spread) / denom;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

SuiteResult verify_lemma1(int trials, uint64_t seed) {
    SuiteResult res;
    auto rng = make_rng(seed, 1);
    std::uniform_int_distribution<int> rdist(1, 12);
    for (int t = 0; t < trials; ++t) {
        Task task = random_task(rng, t);
        int r = rdist(rng);
        std::vector<ViewEntry> entries;
        for (int i = 0; i < r; ++i) entries.push_back(random_entry(rng, task, i));
        TaskView view = build_view(task, std::move(entries));
        double err = std::abs(expected_std_poly(view) - expected_std_bruteforce(view));
        res.max_err = std::max(res.max_err, err);
    }
    res.pass = res.max_err <= 1e-9;
    res.detail = "max |poly - oracle| = " + fmt(res.max_err);
    return res;
}

SuiteResult verify_reliability_monotone(int trials, uint64_t seed) {
    SuiteResult res;
    auto rng = make_rng(seed, 2);
    std::uniform_int_distribution<int> rdist(0, 10);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    double max_rel_err = 0.0, worst_drop = 0.0;
    for (int t = 0; t < trials; ++t) {
        Task task = random_task(rng, t);
        int r = rdist(rng);
        std::vector<ViewEntry> entries;
        std::vector<double> ps;
        for (int i = 0; i < r; ++i) {
            entries.push_back(random_entry(rng, task, i));
            ps.push_back(entries.back().confidence);
        }
        ViewEntry extra = random_entry(rng, task, r);

        double before_r = log_reliability(ps);
        ps.push_back(extra.confidence);
        double after_r = log_reliability(ps);
        max_rel_err =
            std::max(max_rel_err, std::abs((after_r - before_r) - neg_log1m(extra.confidence)));

        TaskView before = build_view(task, entries);
        entries.push_back(extra);
        TaskView after = build_view(task, std::move(entries));
        double drop = expected_std_bruteforce(before) - expected_std_bruteforce(after);
        worst_drop = std::max(worst_drop, drop);
        (void)uni;
    }
    res.max_err = std::max(max_rel_err, worst_drop);
    res.pass = max_rel_err <= 1e-12 && worst_drop <= 1e-12;
    res.detail = "reliability delta err = " + fmt(max_rel_err) + ", worst diversity drop = " +
                 fmt(worst_drop);
    return res;
}

namespace {

struct Round {
    std::vector<Task> tasks;
    std::vector<std::vector<ViewEntry>> committed;   // current worker sets
    std::vector<CandidatePair> candidates;
    std::unordered_map<WorkerId, double> conf;
};

Round random_round(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> mdist(2, 5), predist(0, 3), cdist(4, 12);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    Round rd;
    int m = mdist(rng);
    for (int i = 0; i < m; ++i) rd.tasks.push_back(random_task(rng, i));
    rd.committed.resize(m);
    WorkerId next_id = 100;
    for (int i = 0; i < m; ++i) {
        int pre = predist(rng);
        for (int k = 0; k < pre; ++k) rd.committed[i].push_back(random_entry(rng, rd.tasks[i], next_id++));
    }
    int nc = cdist(rng);
    for (int c = 0; c < nc; ++c) {
        int ti = static_cast<int>(uni(rng) * m) % m;
        WorkerId wid = 1000 + c;
        ViewEntry e = random_entry(rng, rd.tasks[ti], wid);
        rd.conf[wid] = e.confidence;
        rd.candidates.push_back({rd.tasks[ti].id, wid, e.arrival, e.angle});
    }
    return rd;
}

}  // namespace

SuiteResult verify_bounds(int trials, uint64_t seed) {
    SuiteResult res;
    auto rng = make_rng(seed, 3);
    double worst = 0.0;  // how far the oracle delta escapes the bounds
    for (int t = 0; t < trials; ++t) {
        Round rd = random_round(rng);
        for (const auto& cand : rd.candidates) {
            std::size_t ti = 0;
            while (rd.tasks[ti].id != cand.task_id) ++ti;
            TaskView before = build_view(rd.tasks[ti], rd.committed[ti]);
            auto entries = rd.committed[ti];
            entries.push_back({cand.worker_id, rd.conf.at(cand.worker_id), cand.approach_angle,
                               cand.arrival});
            TaskView after = build_view(rd.tasks[ti], std::move(entries));
            DeltaBounds db = delta_bounds(before, after);
            double od = expected_std_bruteforce(after) - expected_std_bruteforce(before);
            worst = std::max({worst, db.lb - od, od - db.ub});
        }
    }
    res.max_err = worst;
    res.pass = worst <= 1e-12;
    res.detail = "worst bound escape = " + fmt(worst);
    return res;
}

SuiteResult verify_pruning(int trials, uint64_t seed) {
    SuiteResult res;
    auto rng = make_rng(seed, 4);
    int failures = 0;
    for (int t = 0; t < trials; ++t) {
        Round rd = random_round(rng);
        if (rd.candidates.empty()) continue;
        std::vector<double> rels(rd.tasks.size());
        for (std::size_t i = 0; i < rd.tasks.size(); ++i) {
            std::vector<double> ps;
            for (const auto& e : rd.committed[i]) ps.push_back(e.confidence);
            rels[i] = reliability(ps);
        }
        double m1 = *std::min_element(rels.begin(), rels.end());

        std::vector<PairGain> gains;
        for (const auto& cand : rd.candidates) {
            std::size_t ti = 0;
            while (rd.tasks[ti].id != cand.task_id) ++ti;
            PairGain g;
            g.pair = cand;
            auto rels2 = rels;
            rels2[ti] = 1.0 - (1.0 - rels[ti]) * (1.0 - rd.conf.at(cand.worker_id));
            g.delta_min_rel = std::max(0.0, *std::min_element(rels2.begin(), rels2.end()) - m1);
            TaskView before = build_view(rd.tasks[ti], rd.committed[ti]);
            auto entries = rd.committed[ti];
            entries.push_back({cand.worker_id, rd.conf.at(cand.worker_id), cand.approach_angle,
                               cand.arrival});
            TaskView after = build_view(rd.tasks[ti], std::move(entries));
            g.delta_std = delta_bounds(before, after);
            g.exact_delta_std = expected_std_bruteforce(after) - expected_std_bruteforce(before);
            gains.push_back(g);
        }
        std::vector<RankPoint> pts(gains.size());
        for (std::size_t i = 0; i < gains.size(); ++i)
            pts[i] = {gains[i].delta_min_rel, gains[i].exact_delta_std, gains[i].pair.worker_id,
                      gains[i].pair.task_id};
        const PairGain& winner = gains[dominance_rank(pts)];
        auto survivors = dominance_prune(gains);
        bool found = std::any_of(survivors.begin(), survivors.end(), [&](const PairGain& g) {
            return g.pair.worker_id == winner.pair.worker_id && g.pair.task_id == winner.pair.task_id;
        });
        if (!found) ++failures;
    }
    res.max_err = failures;
    res.pass = failures == 0;
    res.detail = std::to_string(failures) + " pruned winners";
    return res;
}

namespace {

// Small instance with an enumerable assignment population: every worker's
// reachable set is explicit, so the population is the mixed-radix product.
struct Enumerable {
    std::vector<Task> tasks;
    std::vector<Worker> workers;
    std::vector<CandidatePair> pairs;
    std::vector<std::vector<CandidatePair>> options;  // per worker, id order
    long long population = 1;
};

Enumerable make_enumerable(std::mt19937_64& rng, int m, int n, int deg_lo, int deg_hi) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    Enumerable e;
    for (int i = 0; i < m; ++i) e.tasks.push_back(random_task(rng, i));
    std::uniform_int_distribution<int> degd(deg_lo, std::min(deg_hi, m));
    for (int j = 0; j < n; ++j) {
        Worker w;
        w.id = j;
        w.loc = {uni(rng), uni(rng)};
        w.velocity = 1.0;
        w.angle_lo = 0.0;
        w.angle_hi = two_pi;
        w.confidence = 0.5 + 0.45 * uni(rng);
        e.workers.push_back(w);
        int deg = degd(rng);
        std::vector<int> ids(m);
        std::iota(ids.begin(), ids.end(), 0);
        std::shuffle(ids.begin(), ids.end(), rng);
        std::vector<CandidatePair> opts;
        for (int d = 0; d < deg; ++d) {
            const Task& t = e.tasks[ids[d]];
            CandidatePair p{t.id, w.id, t.start + uni(rng) * (t.end - t.start), uni(rng) * two_pi};
            opts.push_back(p);
            e.pairs.push_back(p);
        }
        std::sort(opts.begin(), opts.end(),
                  [](const CandidatePair& a, const CandidatePair& b) { return a.task_id < b.task_id; });
        e.options.push_back(opts);
        e.population *= deg;
    }
    return e;
}

}  // namespace

SuiteResult verify_sampling_rank(int trials, uint64_t seed) {
    SuiteResult res;
    auto rng = make_rng(seed, 5);
    Enumerable inst = make_enumerable(rng, 3, 6, 2, 4);
    auto conf = confidence_map(inst.workers);

    // Full population of assignment diversities via a mixed-radix counter.
    std::vector<double> population;
    population.reserve(static_cast<std::size_t>(inst.population));
    std::vector<std::size_t> digit(inst.workers.size(), 0);
    for (;;) {
        Assignment a;
        for (std::size_t w = 0; w < inst.options.size(); ++w) a.add(inst.options[w][digit[w]]);
        population.push_back(objective(a, inst.tasks, conf).total_std);
        std::size_t w = 0;
        while (w < digit.size() && ++digit[w] == inst.options[w].size()) digit[w++] = 0;
        if (w == digit.size()) break;
    }
    std::vector<double> sorted = population;
    std::sort(sorted.begin(), sorted.end());
    double n_pop = static_cast<double>(sorted.size());

    double epsilon = 0.1, delta = 0.9;
    SamplePlan plan = sample_size(worker_degrees(inst.pairs), epsilon, delta, 100000);

    std::size_t hits = 0;
    for (int t = 0; t < trials; ++t) {
        uint64_t trial_seed = mix_seed(seed, 1000 + t);
        double best = -1.0;
        for (long long h = 0; h < plan.k_hat; ++h) {
            auto srng = make_rng(trial_seed, static_cast<uint64_t>(h));
            Assignment a;
            for (const auto& opts : inst.options) {
                std::uniform_int_distribution<std::size_t> pick(0, opts.size() - 1);
                a.add(opts[pick(srng)]);
            }
            best = std::max(best, objective(a, inst.tasks, conf).total_std);
        }
        // Rank of the best sample in the ascending population (ties counted up).
        auto it = std::upper_bound(sorted.begin(), sorted.end(), best);
        double rank = static_cast<double>(it - sorted.begin());
        if (rank > (1.0 - epsilon) * n_pop) ++hits;
    }
    double lcb = wilson_lower(hits, static_cast<std::size_t>(trials), 2.3263478740408408);
    res.max_err = lcb;
    res.pass = lcb >= delta - 0.03;
    res.detail = "k_hat = " + std::to_string(plan.k_hat) + ", hit fraction = " +
                 fmt(static_cast<double>(hits) / trials) + ", 99% LCB = " + fmt(lcb) +
                 " (need >= " + fmt(delta - 0.03) + ")";
    return res;
}

namespace {

Rat rat_binom(long long n, long long k) {
    if (k < 0 || k > n) return Rat(0);
    Int num = 1, den = 1;
    for (long long i = 0; i < k; ++i) {
        num *= Int(n - i);
        den *= Int(i + 1);
    }
    return Rat(num, den);
}

// Exact evaluation of the rank-statistic tail over integer ranks, and the
// resulting smallest K, for small populations.
long long oracle_khat(long long n_pop, long long m_int, const Rat& one_minus_delta, double k_lo) {
    Rat p(1, n_pop);
    Rat q(n_pop - 1, n_pop);
    long long first = static_cast<long long>(std::ceil(k_lo)) + 1;
    first = std::max(first, 1ll);
    for (long long k = first; k <= m_int; ++k) {
        Rat f = rat_binom(m_int, k);
        for (long long i = 0; i < k; ++i) f *= p;
        for (long long i = 0; i < n_pop - k; ++i) f *= q;
        if (f <= one_minus_delta) return k;
    }
    return -1;
}

}  // namespace

SuiteResult verify_sample_size_oracle(uint64_t seed) {
    (void)seed;
    SuiteResult res;
    res.pass = true;
    std::ostringstream detail;

    struct Case {
        std::vector<long long> degs;
        double epsilon;
        Rat eps_rat;
        double delta;
        Rat delta_rat;
    };
    std::vector<Case> cases = {
        {{2, 2, 2}, 0.25, Rat(1, 4), 0.9, Rat(9, 10)},
        {{2, 2, 2}, 0.25, Rat(1, 4), 0.5, Rat(1, 2)},
        {{3, 3, 3}, 1.0 / 3.0, Rat(1, 3), 0.9, Rat(9, 10)},
        {{3, 3, 3}, 1.0 / 3.0, Rat(1, 3), 0.5, Rat(1, 2)},
    };
    for (const auto& c : cases) {
        long long n_pop = 1;
        for (long long d : c.degs) n_pop *= d;
        Rat m_rat = (Rat(1) - c.eps_rat) * n_pop;
        long long m_int = static_cast<long long>(boost::multiprecision::numerator(m_rat) /
                                                 boost::multiprecision::denominator(m_rat));
        double p = 1.0 / static_cast<double>(n_pop);
        double e = std::numbers::e_v<double>;
        double k_lo = ((1.0 - c.epsilon) * e - 1.0 + p) / (1.0 - p + e * p);

        SamplePlan plan = sample_size(c.degs, c.epsilon, c.delta, 100000);
        long long want = oracle_khat(n_pop, m_int, Rat(1) - c.delta_rat, k_lo);
        detail << "N=" << n_pop << " eps=" << fmt(c.epsilon) << " delta=" << fmt(c.delta) << ": "
               << plan.k_hat << (plan.k_hat == want ? " == " : " != ") << want << "; ";
        if (plan.k_hat != want) res.pass = false;
    }
    res.detail = detail.str();
    return res;
}

SuiteResult verify_dc_benchmark(int trials, uint64_t seed) {
    SuiteResult res;
    int dc_ge_samp = 0, both_near = 0, valid = 0;
    for (int t = 0; t < trials; ++t) {
        GeneratorConfig gcfg;
        gcfg.m = 50;
        gcfg.n = 100;
        gcfg.dist = SpatialDist::uniform;
        gcfg.seed = mix_seed(seed, 200 + t);
        auto [tasks, workers] = generate_instance(gcfg);
        auto pairs = brute_force_pairs(tasks, workers, 0.0, WaitPolicy::strict);
        auto conf = confidence_map(workers);
        std::set<std::pair<TaskId, WorkerId>> pair_set;
        for (const auto& p : pairs) pair_set.insert({p.task_id, p.worker_id});

        DcConfig dcfg;
        dcfg.seed = mix_seed(gcfg.seed, 1);
        Assignment dc = dc_solve(tasks, workers, pairs, dcfg);

        SamplePlan plan = sample_size(worker_degrees(pairs), 0.1, 0.9, 100000);
        Assignment samp =
            sampling_solve(tasks, workers, pairs, plan, mix_seed(gcfg.seed, 2));

        DcConfig gcfg2;
        gcfg2.seed = mix_seed(gcfg.seed, 3);
        Assignment gt = gtruth_solve(tasks, workers, pairs, gcfg2);

        bool ok = true;
        for (const auto& a : {&dc, &samp, &gt})
            for (const auto& p : a->pairs())
                if (!pair_set.count({p.task_id, p.worker_id})) ok = false;
        if (ok) ++valid;

        double dc_std = objective(dc, tasks, conf).total_std;
        double samp_std = objective(samp, tasks, conf).total_std;
        double gt_std = objective(gt, tasks, conf).total_std;
        if (dc_std >= samp_std - 1e-12) ++dc_ge_samp;
        if (dc_std >= 0.9 * gt_std && samp_std >= 0.9 * gt_std) ++both_near;
    }
    double f_ge = static_cast<double>(dc_ge_samp) / trials;
    double f_near = static_cast<double>(both_near) / trials;
    res.pass = valid == trials && f_ge >= 0.55 && f_near >= 0.80;
    res.max_err = f_ge;
    res.detail = "valid " + std::to_string(valid) + "/" + std::to_string(trials) +
                 ", dc >= sampling in " + fmt(100.0 * f_ge) + "% (need 55%), both within 10% of gtruth in " +
                 fmt(100.0 * f_near) + "% (need 80%)";
    return res;
}

SuiteResult verify_small_m_greedy(int trials, uint64_t seed) {
    SuiteResult res;
    std::vector<double> g_std, s_std, d_std;
    for (int t = 0; t < trials; ++t) {
        GeneratorConfig gcfg;
        gcfg.m = 10;
        gcfg.n = 100;
        gcfg.seed = mix_seed(seed, 300 + t);
        auto [tasks, workers] = generate_instance(gcfg);
        auto pairs = brute_force_pairs(tasks, workers, 0.0, WaitPolicy::wait);
        auto conf = confidence_map(workers);

        g_std.push_back(objective(greedy_solve(tasks, workers, pairs), tasks, conf).total_std);
        SamplePlan plan = sample_size(worker_degrees(pairs), 0.1, 0.9, 100000);
        s_std.push_back(objective(sampling_solve(tasks, workers, pairs, plan, mix_seed(gcfg.seed, 2)),
                                  tasks, conf)
                            .total_std);
        DcConfig dcfg;
        dcfg.seed = mix_seed(gcfg.seed, 1);
        d_std.push_back(objective(dc_solve(tasks, workers, pairs, dcfg), tasks, conf).total_std);
    }
    double mg = median(g_std), ms = median(s_std), md = median(d_std);
    res.pass = ms >= mg && md >= mg;
    res.detail = "median total_std: greedy " + fmt(mg) + ", sampling " + fmt(ms) + ", dc " + fmt(md);
    return res;
}

SuiteResult verify_index_equivalence(int trials, uint64_t seed) {
    SuiteResult res;
    int mismatches = 0;
    auto rng = make_rng(seed, 8);
    std::uniform_int_distribution<int> sized(20, 60), opd(0, 3), etad(0, 100);
    for (int t = 0; t < trials; ++t) {
        GeneratorConfig gcfg;
        gcfg.m = sized(rng);
        gcfg.n = sized(rng);
        gcfg.seed = mix_seed(seed, 400 + t);
        auto [tasks, workers] = generate_instance(gcfg);
        WaitPolicy policy = t % 2 ? WaitPolicy::wait : WaitPolicy::strict;
        double eta = 0.05 + 0.3 * etad(rng) / 100.0;
        GridIndex index(tasks, workers, eta, 0.0, policy);

        std::vector<char> task_in(tasks.size(), 1), worker_in(workers.size(), 1);
        auto check = [&]() {
            std::vector<Task> cur_t;
            std::vector<Worker> cur_w;
            for (std::size_t i = 0; i < tasks.size(); ++i)
                if (task_in[i]) cur_t.push_back(tasks[i]);
            for (std::size_t i = 0; i < workers.size(); ++i)
                if (worker_in[i]) cur_w.push_back(workers[i]);
            auto want = brute_force_pairs(cur_t, cur_w, 0.0, policy);
            auto got = index.retrieve_valid_pairs(0.0);
            if (want != got) ++mismatches;
        };
        check();
        for (int op = 0; op < 30; ++op) {
            int kind = opd(rng);
            if (kind == 0) {
                std::uniform_int_distribution<std::size_t> pick(0, tasks.size() - 1);
                std::size_t i = pick(rng);
                if (task_in[i]) {
                    index.remove_task(tasks[i].id);
                    task_in[i] = 0;
                } else {
                    index.insert_task(tasks[i]);
                    task_in[i] = 1;
                }
            } else if (kind == 1) {
                std::uniform_int_distribution<std::size_t> pick(0, workers.size() - 1);
                std::size_t i = pick(rng);
                if (worker_in[i]) {
                    index.remove_worker(workers[i].id);
                    worker_in[i] = 0;
                } else {
                    index.insert_worker(workers[i]);
                    worker_in[i] = 1;
                }
            } else if (kind == 2) {
                std::uniform_int_distribution<std::size_t> pick(0, tasks.size() - 1);
                std::size_t i = pick(rng);
                if (!task_in[i]) {
                    index.insert_task(tasks[i]);
                    task_in[i] = 1;
                }
            } else {
                std::uniform_int_distribution<std::size_t> pick(0, workers.size() - 1);
                std::size_t i = pick(rng);
                if (!worker_in[i]) {
                    index.insert_worker(workers[i]);
                    worker_in[i] = 1;
                }
            }
            check();
        }
    }
    res.max_err = mismatches;
    res.pass = mismatches == 0;
    res.detail = std::to_string(mismatches) + " retrieval mismatches";
    return res;
}

SuiteResult verify_cost_model(int trials, uint64_t seed) {
    SuiteResult res;
    res.pass = true;
    double closed = solve_cell_size(0.1, 2.0, 10001);
    double want = std::pow(10.0, -5.0 / 3.0);
    double closed_err = std::abs(closed - want);
    if (closed_err > 1e-9) res.pass = false;

    auto rng = make_rng(seed, 9);
    std::uniform_real_distribution<double> ld(0.02, 0.5), dd(1.0, 2.0);
    std::uniform_int_distribution<long long> nd(100, 1000000);
    double worst_resid = 0.0;
    int not_stationary = 0;
    for (int t = 0; t < trials; ++t) {
        double l = ld(rng), d2 = dd(rng);
        long long n = nd(rng);
        double eta = solve_cell_size(l, d2, n);
        if (eta <= 2e-6 || eta >= 0.999) continue;  // clamped root, nothing to test
        if (d2 != 2.0) {
            double pi = std::numbers::pi_v<double>;
            double rhs = 2.0 * std::pow(pi, 1.0 - d2 / 2.0) * l / (d2 * static_cast<double>(n - 1));
            worst_resid =
                std::max(worst_resid, std::abs(std::pow(l + eta, d2 - 2.0) * eta * eta * eta - rhs));
        }
        double c0 = estimate_update_cost(eta, l, d2, n);
        double cup = estimate_update_cost(eta * 1.01, l, d2, n);
        double cdn = estimate_update_cost(eta * 0.99, l, d2, n);
        if (!(cup >= c0 * (1.0 - 1e-9) && cdn >= c0 * (1.0 - 1e-9))) ++not_stationary;
    }
    if (worst_resid > 1e-9 || not_stationary > 0) res.pass = false;
    res.max_err = std::max(closed_err, worst_resid);
    res.detail = "closed-form err = " + fmt(closed_err) + ", worst residual = " + fmt(worst_resid) +
                 ", non-stationary = " + std::to_string(not_stationary);
    return res;
}

SuiteResult verify_np_reduction(int trials, uint64_t seed) {
    SuiteResult res;
    res.pass = true;
    auto rng = make_rng(seed, 10);
    std::uniform_int_distribution<int> szd(2, 12);
    std::uniform_int_distribution<long long> vald(1, 40);
    int bad = 0;
    double max_p_err = 0.0;
    for (int t = 0; t < trials; ++t) {
        int n = szd(rng);
        std::vector<long long> a(n);
        for (auto& v : a) v = vald(rng);
        auto inst = reduction_from_number_partition(a);
        long long a_max = *std::max_element(a.begin(), a.end());

        for (int i = 0; i < n; ++i) {
            double want = static_cast<double>(a[i]) / static_cast<double>(a_max);
            max_p_err = std::max(max_p_err,
                                 std::abs(neg_log1m(inst.workers[i].confidence) - want));
        }

        // Exhaustive RDB-SC optimum (log reliability) vs exhaustive partition.
        uint32_t full = (1u << n) - 1;
        double best_obj = -1.0;
        long long best_disc = -1;
        std::vector<uint32_t> best_rdbsc, best_np;
        for (uint32_t mask = 0; mask <= full; ++mask) {
            double s1 = 0.0, s2 = 0.0;
            long long i1 = 0, i2 = 0;
            for (int i = 0; i < n; ++i) {
                if ((mask >> i) & 1u) {
                    s1 += neg_log1m(inst.workers[i].confidence);
                    i1 += a[i];
                } else {
                    s2 += neg_log1m(inst.workers[i].confidence);
                    i2 += a[i];
                }
            }
            double obj = std::min(s1, s2);
            uint32_t canon = std::min(mask, full & ~mask);
            if (obj > best_obj + 1e-9) {
                best_obj = obj;
                best_rdbsc.assign(1, canon);
            } else if (obj > best_obj - 1e-9) {
                best_rdbsc.push_back(canon);
            }
            long long disc = std::llabs(i1 - i2);
            if (best_disc < 0 || disc < best_disc) {
                best_disc = disc;
                best_np.assign(1, canon);
            } else if (disc == best_disc) {
                best_np.push_back(canon);
            }
        }
        auto uniq = [](std::vector<uint32_t>& v) {
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
        };
        uniq(best_rdbsc);
        uniq(best_np);
        if (best_rdbsc != best_np) ++bad;
    }
    res.max_err = std::max(max_p_err, static_cast<double>(bad));
    if (bad > 0 || max_p_err > 1e-12) res.pass = false;
    res.detail = std::to_string(bad) + " split-set mismatches, confidence construction err = " +
                 fmt(max_p_err);
    return res;
}

SuiteResult verify_scaling(uint64_t seed) {
    SuiteResult res;
    res.pass = true;
    std::ostringstream detail;

    auto time_greedy = [&](long long n) {
        GeneratorConfig gcfg;
        gcfg.m = 250;
        gcfg.n = n;
        gcfg.seed = mix_seed(seed, 500 + static_cast<uint64_t>(n));
        auto [tasks, workers] = generate_instance(gcfg);
        auto pairs = brute_force_pairs(tasks, workers, 0.0, WaitPolicy::wait);
        double best = std::numeric_limits<double>::infinity();
        for (int rep = 0; rep < 2; ++rep) {
            auto t0 = std::chrono::steady_clock::now();
            Assignment a = greedy_solve(tasks, workers, pairs);
            best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                                      .count());
            (void)a;
        }
        return best;
    };
    double prev = time_greedy(250);
    detail << "greedy secs:" << fmt(prev);
    for (long long n : {500ll, 1000ll, 2000ll}) {
        double cur = time_greedy(n);
        double ratio = cur / prev;
        detail << " -> " << fmt(cur) << " (x" << fmt(ratio) << ")";
        if (ratio > 5.0) res.pass = false;
        res.max_err = std::max(res.max_err, ratio);
        prev = cur;
    }

    GeneratorConfig gcfg;
    gcfg.m = 10000;
    gcfg.n = 10000;
    gcfg.seed = mix_seed(seed, 600);
    auto [tasks, workers] = generate_instance(gcfg);
    auto t0 = std::chrono::steady_clock::now();
    auto brute = brute_force_pairs(tasks, workers, 0.0, WaitPolicy::strict);
    double brute_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    double v_max = 0.0;
    for (const auto& w : workers) v_max = std::max(v_max, w.velocity);
    double eta = solve_cell_size(std::max(1e-3, v_max), 2.0, gcfg.m + 1);
    GridIndex index(tasks, workers, eta, 0.0, WaitPolicy::strict);
    t0 = std::chrono::steady_clock::now();
    auto indexed = index.retrieve_valid_pairs(0.0);
    double index_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    bool equal = brute == indexed;
    detail << "; retrieval brute " << fmt(brute_s) << "s vs indexed " << fmt(index_s) << "s, sets "
           << (equal ? "equal" : "DIFFER");
    if (!(index_s < brute_s) || !equal) res.pass = false;
    res.detail = detail.str();
    return res;
}

}  // namespace rdbsc
