#pragma once

#include "rdbsc/diversity.hpp"

namespace rdbsc {

inline constexpr int kOracleCap = 20;

// Ground-truth expected diversity by enumerating all 2^r possible worlds of
// the view's workers. Refuses views larger than `cap` workers.
double expected_std_bruteforce(const TaskView& view, int cap = kOracleCap);

}  // namespace rdbsc
