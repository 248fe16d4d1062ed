#pragma once

#include <span>
#include <vector>

#include "rdbsc/model.hpp"

namespace rdbsc {

// Two collinear tasks with windows opening long after every worker could
// arrive (so all arrivals collapse onto the window start and diversity is
// identically zero), plus one worker per input integer with confidence
// 1 - exp(-a_i / a_max), making the additive reliability of a worker set
// proportional to its integer sum. Requires the wait policy.
struct NumberPartitionInstance {
    std::vector<long long> a;
    std::vector<Task> tasks;      // exactly 2
    std::vector<Worker> workers;  // one per element of a
    WaitPolicy policy = WaitPolicy::wait;
};

NumberPartitionInstance reduction_from_number_partition(std::span<const long long> a);

}  // namespace rdbsc
