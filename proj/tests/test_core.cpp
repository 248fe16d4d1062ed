#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "rdbsc/diversity.hpp"
#include "rdbsc/entropy.hpp"
#include "rdbsc/model.hpp"
#include "rdbsc/objective.hpp"
#include "rdbsc/oracle.hpp"
#include "rdbsc/reliability.hpp"
#include "rdbsc/rng.hpp"

using namespace rdbsc;

namespace {
const double ln2 = std::log(2.0);
}

TEST_CASE("reachability: in-window pair on a 3-4-5 triangle") {
    Worker w{1, {0.0, 0.0}, 1.0, 0.5, 1.5, 0.9, 0.0};
    Task t{7, {0.6, 0.8}, 0.9, 1.1, 0.5};
    auto p = reachability_check(w, t, 0.0, WaitPolicy::strict);
    REQUIRE(p.has_value());
    CHECK(p->task_id == 7);
    CHECK(p->worker_id == 1);
    CHECK(p->arrival == doctest::Approx(1.0));
    CHECK(p->approach_angle == doctest::Approx(norm_angle(std::atan2(-0.8, -0.6))));
}

TEST_CASE("reachability: direction outside the cone is rejected") {
    Worker w{1, {0.8, 0.8}, 1.0, 0.5, 1.5, 0.9, 0.0};
    Task t{2, {0.2, 0.2}, 0.0, 24.0, 0.5};
    CHECK_FALSE(reachability_check(w, t, 0.0, WaitPolicy::strict).has_value());
}

TEST_CASE("reachability: early arrival under both wait policies") {
    Worker w{1, {0.0, 0.0}, 1.0, 0.0, two_pi, 0.9, 0.0};
    Task t{2, {0.5, 0.0}, 1.0, 2.0, 0.5};
    CHECK_FALSE(reachability_check(w, t, 0.0, WaitPolicy::strict).has_value());
    auto p = reachability_check(w, t, 0.0, WaitPolicy::wait);
    REQUIRE(p.has_value());
    CHECK(p->arrival == doctest::Approx(1.0));
}

TEST_CASE("reachability: co-located worker passes the direction test") {
    Worker w{1, {0.3, 0.3}, 1.0, 2.0, 2.1, 0.9, 0.0};
    Task t{2, {0.3, 0.3}, 0.0, 1.0, 0.5};
    CHECK(reachability_check(w, t, 0.0, WaitPolicy::strict).has_value());
}

TEST_CASE("reachability: invariant under common translation") {
    auto rng = make_rng(11);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        Worker w{1, {0.2 * uni(rng), 0.2 * uni(rng)}, 0.5 + uni(rng), uni(rng) * two_pi, 0.0, 0.9,
                 0.0};
        w.angle_hi = w.angle_lo + 0.3 + uni(rng);
        Task t{2, {0.2 * uni(rng), 0.2 * uni(rng)}, uni(rng), 0.0, 0.5};
        t.end = t.start + 0.5 + uni(rng);
        double dx = 0.5 * uni(rng), dy = 0.5 * uni(rng);
        Worker w2 = w;
        w2.loc = {w.loc.x + dx, w.loc.y + dy};
        Task t2 = t;
        t2.loc = {t.loc.x + dx, t.loc.y + dy};
        auto a = reachability_check(w, t, 0.0, WaitPolicy::strict);
        auto b = reachability_check(w2, t2, 0.0, WaitPolicy::strict);
        CHECK(a.has_value() == b.has_value());
        if (a && b) {
            CHECK(a->arrival == doctest::Approx(b->arrival).epsilon(1e-12));
            CHECK(a->approach_angle == doctest::Approx(b->approach_angle).epsilon(1e-9));
        }
    }
}

TEST_CASE("reliability basics") {
    std::vector<double> v{0.9, 0.8};
    CHECK(reliability(v) == doctest::Approx(0.98));
    CHECK(reliability(std::vector<double>{}) == 0.0);
    std::vector<double> certain{1.0, 0.3};
    CHECK(reliability(certain) == doctest::Approx(1.0));
}

TEST_CASE("log reliability: values, saturation, and duality") {
    std::vector<double> half{0.5};
    CHECK(log_reliability(half) == doctest::Approx(ln2));
    CHECK(log_reliability(std::vector<double>{}) == 0.0);
    std::vector<double> v{0.9, 0.8};
    CHECK(log_reliability(v) == doctest::Approx(-std::log(0.02)));
    std::vector<double> sat{0.5, 1.0};
    CHECK(std::isinf(log_reliability(sat)));

    auto rng = make_rng(3);
    // Away from saturation the rounded-probability route stays within 1e-12;
    // near rel == 1 only the direct product form keeps full precision.
    std::uniform_real_distribution<double> mild(0.0, 0.5), wild(0.0, 0.999);
    for (int t = 0; t < 500; ++t) {
        std::vector<double> ps(1 + t % 8);
        for (auto& p : ps) p = mild(rng);
        CHECK(std::abs(log_reliability(ps) - (-std::log1p(-reliability(ps)))) <= 1e-12);
    }
    for (int t = 0; t < 500; ++t) {
        std::vector<double> ps(1 + t % 15);
        for (auto& p : ps) p = wild(rng);
        double fail = 1.0;
        for (double p : ps) fail *= 1.0 - p;
        CHECK(std::abs(log_reliability(ps) - (-std::log(fail))) <= 1e-12 * std::max(1.0, -std::log(fail)));
    }
}

TEST_CASE("possible world probabilities") {
    std::vector<double> ps{0.7, 0.4};
    CHECK(possible_world_prob(0b01, ps) == doctest::Approx(0.7 * 0.6));
    CHECK(possible_world_prob(0b00, ps) == doctest::Approx(0.3 * 0.6));
    auto rng = make_rng(4);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int t = 0; t < 50; ++t) {
        std::vector<double> p(1 + t % 12);
        for (auto& x : p) x = uni(rng);
        double sum = 0.0;
        for (uint32_t mask = 0; mask < (1u << p.size()); ++mask) sum += possible_world_prob(mask, p);
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
    // Full-width case at the oracle cap.
    std::vector<double> p20(20);
    for (auto& x : p20) x = uni(rng);
    double sum20 = 0.0;
    for (uint32_t mask = 0; mask < (1u << 20); ++mask) sum20 += possible_world_prob(mask, p20);
    CHECK(sum20 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("spatial entropy of sorted angles") {
    std::vector<double> two{0.0, std::numbers::pi};
    CHECK(sd_exact(two) == doctest::Approx(ln2));
    std::vector<double> one{1.234};
    CHECK(sd_exact(one) == 0.0);
    std::vector<double> four{0.0, std::numbers::pi / 2, std::numbers::pi, 3 * std::numbers::pi / 2};
    CHECK(sd_exact(four) == doctest::Approx(std::log(4.0)));

    auto rng = make_rng(5);
    std::uniform_real_distribution<double> uni(0.0, two_pi);
    for (int t = 0; t < 200; ++t) {
        std::size_t r = 1 + t % 9;
        std::vector<double> a(r);
        for (auto& x : a) x = uni(rng);
        std::sort(a.begin(), a.end());
        double h = sd_exact(a);
        CHECK(h >= -1e-12);
        CHECK(h <= std::log(static_cast<double>(std::max<std::size_t>(r, 1))) + 1e-12);
    }
}

TEST_CASE("temporal entropy of sorted arrivals") {
    std::vector<double> mid{1.0};
    CHECK(td_exact(mid, 0.0, 2.0) == doctest::Approx(ln2));
    CHECK(td_exact(std::vector<double>{}, 0.0, 2.0) == 0.0);
    std::vector<double> at_start{0.0};
    CHECK(td_exact(at_start, 0.0, 2.0) == 0.0);

    auto rng = make_rng(6);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int t = 0; t < 200; ++t) {
        std::size_t r = 1 + t % 9;
        std::vector<double> a(r);
        for (auto& x : a) x = uni(rng) * 2.0;
        std::sort(a.begin(), a.end());
        double h = td_exact(a, 0.0, 2.0);
        CHECK(h >= -1e-12);
        CHECK(h <= std::log(static_cast<double>(r + 1)) + 1e-12);
    }
}

TEST_CASE("combined diversity composition") {
    std::vector<double> angles{0.0, std::numbers::pi};
    std::vector<double> arrivals{1.0};
    CHECK(std_exact(1.0, angles, {}, 0.0, 2.0) == doctest::Approx(ln2));
    CHECK(std_exact(0.0, {}, arrivals, 0.0, 2.0) == doctest::Approx(ln2));
    double both = std_exact(0.5, angles, arrivals, 0.0, 2.0);
    CHECK(both == doctest::Approx(0.5 * sd_exact(angles) + 0.5 * td_exact(arrivals, 0.0, 2.0)));
}

TEST_CASE("possible-worlds oracle") {
    Task t{0, {0.5, 0.5}, 0.0, 2.0, 1.0};
    SUBCASE("certain workers reduce to the exact diversity") {
        std::vector<ViewEntry> es{{0, 1.0, 0.3, 0.5}, {1, 1.0, 2.0, 1.2}, {2, 1.0, 4.0, 1.9}};
        TaskView v = build_view(t, es);
        CHECK(expected_std_bruteforce(v) ==
              doctest::Approx(std_exact(1.0, v.angles, v.arrivals, 0.0, 2.0)));
    }
    SUBCASE("two opposite rays at half confidence") {
        std::vector<ViewEntry> es{{0, 0.5, 0.0, 0.5}, {1, 0.5, std::numbers::pi, 1.2}};
        CHECK(expected_std_bruteforce(build_view(t, es)) == doctest::Approx(0.25 * ln2));
    }
    SUBCASE("single worker at the window midpoint, temporal only") {
        Task t0 = t;
        t0.beta = 0.0;
        std::vector<ViewEntry> es{{0, 0.5, 1.0, 1.0}};
        CHECK(expected_std_bruteforce(build_view(t0, es)) == doctest::Approx(0.5 * ln2));
    }
    SUBCASE("enumeration cap is enforced") {
        std::vector<ViewEntry> es(21, ViewEntry{0, 0.5, 1.0, 1.0});
        for (int i = 0; i < 21; ++i) es[i].worker_id = i;
        CHECK_THROWS_AS((void)expected_std_bruteforce(build_view(t, es)), std::invalid_argument);
    }
}

TEST_CASE("objective on tiny assignments") {
    std::vector<Task> tasks{{0, {0.5, 0.5}, 0.0, 2.0, 0.0}};
    std::vector<Worker> workers{{1, {0.5, 0.5}, 1.0, 0.0, two_pi, 0.9, 0.0}};
    auto conf = confidence_map(workers);

    Assignment empty;
    ObjectiveVector zero = objective(empty, tasks, conf);
    CHECK(zero.min_rel == 0.0);
    CHECK(zero.total_std == 0.0);

    Assignment a;
    a.add({0, 1, 1.0, 0.7});
    ObjectiveVector obj = objective(a, tasks, conf);
    CHECK(obj.min_rel == doctest::Approx(0.9));
    CHECK(obj.total_std == doctest::Approx(0.9 * ln2));
}

TEST_CASE("objective minimum matches per-task reliabilities") {
    auto rng = make_rng(7);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<Task> tasks;
        for (int i = 0; i < 4; ++i) tasks.push_back({i, {uni(rng), uni(rng)}, 0.0, 2.0, 0.5});
        std::vector<Worker> workers;
        for (int j = 0; j < 6; ++j)
            workers.push_back({j, {uni(rng), uni(rng)}, 1.0, 0.0, two_pi, uni(rng), 0.0});
        auto conf = confidence_map(workers);
        Assignment a;
        std::vector<std::vector<double>> per_task(4);
        for (int j = 0; j < 6; ++j) {
            int ti = static_cast<int>(uni(rng) * 4) % 4;
            a.add({ti, j, uni(rng) * 2.0, uni(rng) * two_pi});
            per_task[ti].push_back(workers[j].confidence);
        }
        double want = 1.0;
        for (const auto& ps : per_task) want = std::min(want, reliability(ps));
        CHECK(objective(a, tasks, conf).min_rel == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("assignment rejects a doubly assigned worker") {
    Assignment a;
    a.add({0, 1, 1.0, 0.0});
    CHECK_THROWS_AS(a.add({2, 1, 1.5, 0.0}), std::invalid_argument);
}

TEST_CASE("model validation") {
    Task bad_window{0, {0.5, 0.5}, 2.0, 1.0, 0.5};
    CHECK_THROWS_AS(validate(bad_window), std::invalid_argument);
    Worker bad_speed{0, {0.5, 0.5}, 0.0, 0.0, 1.0, 0.5, 0.0};
    CHECK_THROWS_AS(validate(bad_speed), std::invalid_argument);
    Worker bad_cone{0, {0.5, 0.5}, 1.0, 1.0, 1.0, 0.5, 0.0};
    CHECK_THROWS_AS(validate(bad_cone), std::invalid_argument);
}
