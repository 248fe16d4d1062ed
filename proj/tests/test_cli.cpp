// Exercises the installed CLI binary end to end: exit-code contract,
// determinism, and the bundled golden assignment.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "rdbsc/io.hpp"
#include "rdbsc/objective.hpp"

namespace {

const std::string cli = RDBSC_CLI_PATH;

int run(const std::string& args) {
    std::string cmd = cli + " " + args + " > cli_stdout.txt 2> cli_stderr.txt";
    int status = std::system(cmd.c_str());
    if (status == -1) return -1;
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

bool exists(const std::string& path) { return std::ifstream(path).good(); }

}  // namespace

TEST_CASE("generate writes deterministic instance files") {
    REQUIRE(run("--seed 7 --out cli_a generate --m 30 --n 40 --dist uniform") == 0);
    REQUIRE(run("--seed 7 --out cli_b generate --m 30 --n 40 --dist uniform") == 0);
    CHECK(slurp("cli_a_tasks.csv") == slurp("cli_b_tasks.csv"));
    CHECK(slurp("cli_a_workers.csv") == slurp("cli_b_workers.csv"));
    CHECK(!slurp("cli_a_tasks.csv").empty());
}

TEST_CASE("usage errors exit with code 2") {
    CHECK(run("generate --m 0") == 2);
    CHECK(run("generate --no-such-flag") == 2);
    CHECK(run("verify --suite no-such-suite") == 2);
    CHECK(run("") == 2);
}

TEST_CASE("missing input files exit with code 1") {
    CHECK(run("solve missing_tasks.csv missing_workers.csv --algo greedy") == 1);
}

TEST_CASE("solve prints the objective and honors the seed") {
    REQUIRE(run("--seed 3 --out cli_c generate --m 15 --n 25") == 0);
    REQUIRE(run("--seed 5 --out cli_sol1.csv solve cli_c_tasks.csv cli_c_workers.csv --algo dc "
                "--policy wait") == 0);
    REQUIRE(run("--seed 5 --out cli_sol2.csv solve cli_c_tasks.csv cli_c_workers.csv --algo dc "
                "--policy wait") == 0);
    CHECK(slurp("cli_sol1.csv") == slurp("cli_sol2.csv"));
    std::string out = slurp("cli_stdout.txt");
    CHECK(out.find("min_rel=") != std::string::npos);
    CHECK(out.find("total_std=") != std::string::npos);
}

TEST_CASE("dc with a tiny base case still yields a valid assignment") {
    std::string fixtures = FIXTURE_DIR;
    REQUIRE(run("solve " + fixtures + "/tiny_tasks.csv " + fixtures +
                "/tiny_workers.csv --algo dc --gamma 2 --policy wait --seed 3 --out cli_dc2.csv") ==
            0);
    auto tasks = rdbsc::load_tasks(fixtures + "/tiny_tasks.csv");
    auto workers = rdbsc::load_workers(fixtures + "/tiny_workers.csv");
    std::ifstream f("cli_dc2.csv");
    rdbsc::Assignment a = rdbsc::read_assignment_csv(f);  // add() rejects reused workers
    CHECK(a.size() > 0);
    for (const auto& p : a.pairs()) {
        auto w = std::find_if(workers.begin(), workers.end(),
                              [&](const rdbsc::Worker& x) { return x.id == p.worker_id; });
        auto t = std::find_if(tasks.begin(), tasks.end(),
                              [&](const rdbsc::Task& x) { return x.id == p.task_id; });
        REQUIRE(w != workers.end());
        REQUIRE(t != tasks.end());
        CHECK(rdbsc::reachability_check(*w, *t, 0.0, rdbsc::WaitPolicy::wait).has_value());
    }
}

TEST_CASE("sampling echoes the planned sample count") {
    REQUIRE(run("--seed 3 --out cli_d generate --m 10 --n 20") == 0);
    REQUIRE(run("--seed 5 solve cli_d_tasks.csv cli_d_workers.csv --algo sampling --policy wait "
                "--epsilon 0.1 --delta 0.9") == 0);
    CHECK(slurp("cli_stdout.txt").find("k_hat=") != std::string::npos);
}

TEST_CASE("indexed and direct solves agree") {
    REQUIRE(run("--seed 11 --out cli_e generate --m 25 --n 30") == 0);
    REQUIRE(run("--seed 4 --out cli_direct.csv solve cli_e_tasks.csv cli_e_workers.csv "
                "--algo greedy --policy wait") == 0);
    REQUIRE(run("--seed 4 --out cli_indexed.csv solve cli_e_tasks.csv cli_e_workers.csv "
                "--algo greedy --policy wait --use-index") == 0);
    CHECK(slurp("cli_direct.csv") == slurp("cli_indexed.csv"));
}

TEST_CASE("verify suites run green at reduced trial counts") {
    CHECK(run("--seed 1 verify --suite lemma1 --trials 50") == 0);
    CHECK(run("--seed 1 verify --suite bounds --trials 25") == 0);
    CHECK(run("--seed 1 verify --suite pruning --trials 25") == 0);
    CHECK(run("--seed 1 verify --suite np-reduction --trials 5") == 0);
    CHECK(run("--seed 1 verify --suite index-equivalence --trials 5") == 0);
}

TEST_CASE("simulate writes a report in the requested format") {
    REQUIRE(run("--seed 3 --out cli_f generate --m 12 --n 18") == 0);
    REQUIRE(run("--seed 9 --format json --out cli_rep.json simulate cli_f_tasks.csv "
                "cli_f_workers.csv --t-interval 1 --horizon 3 --policy wait") == 0);
    std::string rep = slurp("cli_rep.json");
    CHECK(rep.find("\"min_rel\"") != std::string::npos);
    REQUIRE(run("--seed 9 --format csv --out cli_rep.csv simulate cli_f_tasks.csv "
                "cli_f_workers.csv --t-interval 1 --horizon 3 --policy wait") == 0);
    CHECK(slurp("cli_rep.csv").rfind("task_id,", 0) == 0);
}

TEST_CASE("reduce-np emits the two-task instance") {
    REQUIRE(run("--out cli_np reduce-np --a 1 1") == 0);
    CHECK(exists("cli_np_tasks.csv"));
    CHECK(exists("cli_np_workers.csv"));
    std::string tasks = slurp("cli_np_tasks.csv");
    CHECK(std::count(tasks.begin(), tasks.end(), '\n') == 3);  // header + 2 tasks
    std::string workers = slurp("cli_np_workers.csv");
    CHECK(std::count(workers.begin(), workers.end(), '\n') == 3);
}

TEST_CASE("greedy solve matches the committed golden assignment") {
    std::string fixtures = FIXTURE_DIR;
    REQUIRE(run("--seed 1 --out cli_golden.csv solve " + fixtures + "/tiny_tasks.csv " + fixtures +
                "/tiny_workers.csv --algo greedy --policy wait") == 0);
    CHECK(slurp("cli_golden.csv") == slurp(fixtures + "/tiny_greedy_assignment.csv"));

    // The golden file is only trusted because it revalidates: every pair must
    // pass reachability and the objective must recompute.
    auto tasks = rdbsc::load_tasks(fixtures + "/tiny_tasks.csv");
    auto workers = rdbsc::load_workers(fixtures + "/tiny_workers.csv");
    std::ifstream gf(fixtures + "/tiny_greedy_assignment.csv");
    rdbsc::Assignment golden = rdbsc::read_assignment_csv(gf);
    CHECK(golden.size() > 0);
    for (const auto& p : golden.pairs()) {
        const auto* w = &*std::find_if(workers.begin(), workers.end(),
                                       [&](const rdbsc::Worker& x) { return x.id == p.worker_id; });
        const auto* t = &*std::find_if(tasks.begin(), tasks.end(),
                                       [&](const rdbsc::Task& x) { return x.id == p.task_id; });
        auto again = rdbsc::reachability_check(*w, *t, 0.0, rdbsc::WaitPolicy::wait);
        REQUIRE(again.has_value());
        CHECK(again->arrival == p.arrival);
        CHECK(again->approach_angle == p.approach_angle);
    }
    auto conf = rdbsc::confidence_map(workers);
    rdbsc::ObjectiveVector obj = rdbsc::objective(golden, tasks, conf);
    CHECK(obj.total_std > 0.0);
}
