#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "rdbsc/generator.hpp"
#include "rdbsc/io.hpp"
#include "rdbsc/np_reduction.hpp"
#include "rdbsc/objective.hpp"
#include "rdbsc/reliability.hpp"
#include "rdbsc/rng.hpp"
#include "rdbsc/simulate.hpp"
#include "rdbsc/solvers.hpp"
#include "rdbsc/trajectory.hpp"

using namespace rdbsc;

TEST_CASE("generator determinism and ranges") {
    GeneratorConfig cfg;
    cfg.m = 50;
    cfg.n = 80;
    cfg.seed = 424242;
    SUBCASE("identical seed reproduces identical bytes") {
        auto a = generate_instance(cfg);
        auto b = generate_instance(cfg);
        std::ostringstream sa, sb;
        write_tasks_csv(sa, a.first);
        write_workers_csv(sa, a.second);
        write_tasks_csv(sb, b.first);
        write_workers_csv(sb, b.second);
        CHECK(sa.str() == sb.str());
    }
    SUBCASE("confidence clamping") {
        cfg.p_lo = 0.9;
        cfg.p_hi = 1.0;
        auto [tasks, workers] = generate_instance(cfg);
        for (const auto& w : workers) {
            CHECK(w.confidence >= 0.9);
            CHECK(w.confidence <= 1.0);
        }
        for (const auto& t : tasks) {
            CHECK(t.end - t.start >= cfg.rt_lo - 1e-12);
            CHECK(t.end - t.start <= cfg.rt_hi + 1e-12);
        }
    }
    SUBCASE("skewed distribution concentrates near the center") {
        cfg.m = 10000;
        cfg.n = 1;
        cfg.dist = SpatialDist::skewed;
        for (uint64_t s = 0; s < 3; ++s) {
            cfg.seed = s;
            auto [tasks, _] = generate_instance(cfg);
            std::size_t close = 0;
            for (const auto& t : tasks) {
                double dx = t.loc.x - 0.5, dy = t.loc.y - 0.5;
                if (std::sqrt(dx * dx + dy * dy) <= 0.4) ++close;
            }
            CHECK(static_cast<double>(close) / tasks.size() >= 0.80);
        }
    }
    SUBCASE("invalid configs are rejected") {
        GeneratorConfig bad = cfg;
        bad.m = 0;
        CHECK_THROWS_AS((void)generate_instance(bad), std::invalid_argument);
        bad = cfg;
        bad.p_hi = 1.5;
        CHECK_THROWS_AS((void)generate_instance(bad), std::invalid_argument);
    }
}

TEST_CASE("trajectory ingestion") {
    SUBCASE("straight-line trajectory gets the minimum cone width") {
        std::istringstream csv("wid,t,x,y\n1,0,0.1,0.1\n1,1,0.5,0.5\n");
        auto res = ingest_trajectories(csv);
        REQUIRE(res.workers.size() == 1);
        const Worker& w = res.workers[0];
        CHECK(w.loc.x == doctest::Approx(0.1));
        CHECK(w.velocity == doctest::Approx(std::hypot(0.4, 0.4)));
        CHECK(w.angle_hi - w.angle_lo == doctest::Approx(1e-3));
        CHECK(angle_in_arc(std::atan2(0.4, 0.4), w.angle_lo, w.angle_hi));
    }
    SUBCASE("an L-shaped trajectory spans both leg bearings") {
        std::istringstream csv("wid,t,x,y\n1,0,0.1,0.1\n1,1,0.5,0.1\n1,2,0.5,0.5\n");
        auto res = ingest_trajectories(csv);
        REQUIRE(res.workers.size() == 1);
        const Worker& w = res.workers[0];
        CHECK(angle_in_arc(bearing({0.1, 0.1}, {0.5, 0.1}), w.angle_lo, w.angle_hi));
        CHECK(angle_in_arc(bearing({0.1, 0.1}, {0.5, 0.5}), w.angle_lo, w.angle_hi));
        CHECK(w.velocity == doctest::Approx(0.4));
    }
    SUBCASE("degenerate trajectories are skipped with counts") {
        std::istringstream csv("wid,t,x,y\n1,0,0.1,0.1\n2,0,0.2,0.2\n2,0,0.3,0.3\n3,0,0.4,0.4\n3,1,0.5,0.5\n");
        auto res = ingest_trajectories(csv);
        CHECK(res.workers.size() == 1);
        CHECK(res.skipped_single_point == 1);
        CHECK(res.skipped_zero_time == 1);
    }
    SUBCASE("out-of-order rows are a format error") {
        std::istringstream csv("1,1,0.1,0.1\n1,0,0.2,0.2\n");
        CHECK_THROWS_AS((void)ingest_trajectories(csv), std::runtime_error);
        std::istringstream csv2("2,0,0.1,0.1\n1,0,0.2,0.2\n");
        CHECK_THROWS_AS((void)ingest_trajectories(csv2), std::runtime_error);
    }
}

TEST_CASE("simulation") {
    GeneratorConfig gcfg;
    gcfg.m = 20;
    gcfg.n = 30;
    gcfg.seed = 2024;
    auto [tasks, workers] = generate_instance(gcfg);

    SUBCASE("horizon shorter than the interval runs one round matching the static solve") {
        SimulationConfig cfg;
        cfg.t_interval = 10.0;
        cfg.horizon = 0.5;
        cfg.policy = WaitPolicy::wait;
        cfg.seed = 7;
        SimulationReport rep = simulate_incremental(tasks, workers, cfg);
        CHECK(rep.rounds == 1);
        auto pairs = brute_force_pairs(tasks, workers, 0.0, WaitPolicy::wait);
        Assignment direct = greedy_solve(tasks, workers, pairs);
        CHECK(rep.assigned == direct.size());
    }
    SUBCASE("certain workers always produce success records") {
        auto certain = workers;
        for (auto& w : certain) w.confidence = 1.0;
        SimulationConfig cfg;
        cfg.t_interval = 1.0;
        cfg.horizon = 30.0;
        cfg.policy = WaitPolicy::wait;
        SimulationReport rep = simulate_incremental(tasks, certain, cfg);
        CHECK(rep.failures == 0);
        CHECK(rep.successes + rep.pending == rep.assigned);
    }
    SUBCASE("event conservation") {
        SimulationConfig cfg;
        cfg.t_interval = 1.0;
        cfg.horizon = 12.0;
        cfg.policy = WaitPolicy::wait;
        cfg.seed = 3;
        SimulationReport rep = simulate_incremental(tasks, workers, cfg);
        CHECK(rep.successes + rep.failures + rep.pending == rep.assigned);
        CHECK(rep.records.size() == rep.successes + rep.failures);
    }
    SUBCASE("more frequent reassignment tends to raise total diversity") {
        int better = 0, total = 0;
        for (uint64_t s = 0; s < 20; ++s) {
            GeneratorConfig g2 = gcfg;
            g2.seed = mix_seed(1111, s);
            auto [t2, w2] = generate_instance(g2);
            SimulationConfig fast, slow;
            fast.t_interval = 1.0;
            slow.t_interval = 4.0;
            fast.horizon = slow.horizon = 12.0;
            fast.policy = slow.policy = WaitPolicy::wait;
            fast.seed = slow.seed = s;
            double f = simulate_incremental(t2, w2, fast).total_std;
            double sl = simulate_incremental(t2, w2, slow).total_std;
            ++total;
            if (f >= sl - 1e-12) ++better;
        }
        CHECK(better >= (total * 7) / 10);
    }
}

TEST_CASE("answer accuracy scoring") {
    Task t{0, {0.5, 0.5}, 0.0, 2.0, 0.5};
    SUBCASE("perfect answer scores zero") {
        AnswerRecord r{0, 1, 1.0, 1.0, true};
        CHECK(answer_accuracy(r, t, 1.0, 1.0) == 0.0);
    }
    SUBCASE("maximal angular error with spatial-only weight scores one") {
        Task t1 = t;
        t1.beta = 1.0;
        AnswerRecord r{0, 1, 0.0, 1.0, true};
        CHECK(answer_accuracy(r, t1, std::numbers::pi, 1.0) == doctest::Approx(1.0));
    }
    SUBCASE("midpoint composition") {
        AnswerRecord r{0, 1, 0.0, 0.0, true};
        CHECK(answer_accuracy(r, t, std::numbers::pi / 2, 1.0) == doctest::Approx(0.5));
    }
    SUBCASE("score stays within the unit interval") {
        auto rng = make_rng(9001);
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        for (int i = 0; i < 500; ++i) {
            Task tt{0, {0.5, 0.5}, 0.0, 0.1 + 5.0 * uni(rng), uni(rng)};
            AnswerRecord r{0, 1, uni(rng) * two_pi, tt.start + uni(rng) * (tt.end - tt.start), true};
            double score = answer_accuracy(r, tt, uni(rng) * two_pi,
                                           tt.start + uni(rng) * (tt.end - tt.start));
            CHECK(score >= 0.0);
            CHECK(score <= 1.0);
        }
    }
}

TEST_CASE("number partition reduction") {
    SUBCASE("balanced pair reaches log-reliability one per side") {
        auto inst = reduction_from_number_partition(std::vector<long long>{1, 1});
        REQUIRE(inst.workers.size() == 2);
        REQUIRE(inst.tasks.size() == 2);
        CHECK(inst.policy == WaitPolicy::wait);
        for (const auto& w : inst.workers) {
            CHECK(w.confidence > 0.0);
            CHECK(w.confidence < 1.0);
            std::vector<double> one{w.confidence};
            CHECK(log_reliability(one) == doctest::Approx(1.0).epsilon(1e-12));
        }
        // Every worker reaches both tasks under the wait policy.
        auto pairs = brute_force_pairs(inst.tasks, inst.workers, 0.0, inst.policy);
        CHECK(pairs.size() == 4);
    }
    SUBCASE("lopsided set splits as 3 | 1+1+1") {
        auto inst = reduction_from_number_partition(std::vector<long long>{3, 1, 1, 1});
        int n = 4;
        double best = -1.0;
        uint32_t best_mask = 0;
        for (uint32_t mask = 0; mask < (1u << n); ++mask) {
            double s1 = 0, s2 = 0;
            for (int i = 0; i < n; ++i) {
                std::vector<double> one{inst.workers[i].confidence};
                ((mask >> i) & 1u ? s1 : s2) += log_reliability(one);
            }
            if (std::min(s1, s2) > best) {
                best = std::min(s1, s2);
                best_mask = mask;
            }
        }
        CHECK(best == doctest::Approx(1.0).epsilon(1e-9));
        bool isolates_three = best_mask == 0b0001 || best_mask == 0b1110;
        CHECK(isolates_three);
    }
    SUBCASE("diversity collapses to zero by construction") {
        auto inst = reduction_from_number_partition(std::vector<long long>{4, 2, 7});
        auto pairs = brute_force_pairs(inst.tasks, inst.workers, 0.0, inst.policy);
        auto conf = confidence_map(inst.workers);
        Assignment a;
        std::set<WorkerId> used;
        for (const auto& p : pairs)
            if (!used.count(p.worker_id)) {
                a.add(p);
                used.insert(p.worker_id);
            }
        CHECK(objective(a, inst.tasks, conf).total_std <= 1e-9);
    }
    SUBCASE("invalid inputs are rejected") {
        CHECK_THROWS_AS((void)reduction_from_number_partition(std::vector<long long>{5}),
                        std::invalid_argument);
        CHECK_THROWS_AS((void)reduction_from_number_partition(std::vector<long long>{3, 0}),
                        std::invalid_argument);
    }
}

TEST_CASE("report export") {
    SUBCASE("empty report is a header-only CSV") {
        SimulationReport rep;
        CHECK(report_to_csv(rep) == "task_id,answers,successes,failures,error_score,rel,expected_std\n");
    }
    SUBCASE("JSON round trip is structurally identical") {
        SimulationReport rep;
        rep.min_rel = 0.25;
        rep.total_std = 3.5;
        rep.rounds = 4;
        rep.assigned = 7;
        rep.successes = 5;
        rep.failures = 1;
        rep.pending = 1;
        rep.solve_ms = 12.5;
        rep.retrieval_ms = 1.25;
        rep.per_task.push_back({3, 2, 2, 0, 0.125, 0.99, 1.5});
        rep.records.push_back({3, 8, 1.25, 2.5, true});
        SimulationReport back = report_from_json(report_to_json(rep));
        CHECK(report_to_json(back) == report_to_json(rep));
    }
    SUBCASE("instance CSVs round trip") {
        GeneratorConfig cfg;
        cfg.m = 10;
        cfg.n = 10;
        cfg.seed = 5;
        auto [tasks, workers] = generate_instance(cfg);
        std::ostringstream ts, ws;
        write_tasks_csv(ts, tasks);
        write_workers_csv(ws, workers);
        std::istringstream tr(ts.str()), wr(ws.str());
        auto tasks2 = read_tasks_csv(tr);
        auto workers2 = read_workers_csv(wr);
        REQUIRE(tasks2.size() == tasks.size());
        REQUIRE(workers2.size() == workers.size());
        std::ostringstream ts2, ws2;
        write_tasks_csv(ts2, tasks2);
        write_workers_csv(ws2, workers2);
        CHECK(ts2.str() == ts.str());
        CHECK(ws2.str() == ws.str());
    }
}
