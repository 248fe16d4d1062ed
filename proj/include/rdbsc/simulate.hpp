#pragma once

#include <cstdint>
#include <vector>

#include "rdbsc/model.hpp"
#include "rdbsc/exec.hpp"

namespace rdbsc {

enum class SolverChoice { greedy, sampling, dc, gtruth };

struct SimulationConfig {
    double t_interval = 1.0;  // hours between reassignment rounds
    double horizon = 8.0;     // simulated hours
    SolverChoice solver = SolverChoice::greedy;
    WaitPolicy policy = WaitPolicy::strict;
    double epsilon = 0.1;
    double delta = 0.9;
    long long k_cap = 100000;
    long long gamma = 8;
    int dcw_cap = 20;
    uint64_t seed = 0;
    ExecMode exec = ExecMode::serial;
    double eta = 0.0;  // grid cell size; 0 picks the cost-model value
};

struct AnswerRecord {
    TaskId task_id = 0;
    WorkerId worker_id = 0;
    double angle = 0.0;  // actual approach angle
    double time = 0.0;   // actual completion time
    bool success = false;
};

// The platform's answer error score: beta * (angular error / pi) +
// (1-beta) * (time error / window length). Zero is a perfect answer; the
// score grows with error.
double answer_accuracy(const AnswerRecord& rec, const Task& task, double required_angle,
                       double required_time);

struct TaskReport {
    TaskId id = 0;
    std::size_t answers = 0;   // terminal events observed
    std::size_t successes = 0;
    std::size_t failures = 0;
    double error_score = 0.0;  // mean over successful answers
    double rel = 0.0;
    double expected_std = 0.0;
};

struct SimulationReport {
    double min_rel = 0.0;
    double total_std = 0.0;
    std::size_t rounds = 0;
    std::size_t assigned = 0;
    std::size_t successes = 0;
    std::size_t failures = 0;
    std::size_t pending = 0;  // assigned, arrival past the horizon
    double solve_ms = 0.0;
    double retrieval_ms = 0.0;
    std::vector<TaskReport> per_task;
    std::vector<AnswerRecord> records;
};

// Periodic reassignment: every t_interval gather available workers and open
// tasks, retrieve pairs through the grid index, solve with the configured
// algorithm on top of received answers and in-flight workers, and resolve
// arrivals as success/failure draws.
SimulationReport simulate_incremental(std::vector<Task> tasks, std::vector<Worker> workers,
                                      const SimulationConfig& cfg);

}  // namespace rdbsc
