#include "rdbsc/np_reduction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rdbsc {

NumberPartitionInstance reduction_from_number_partition(std::span<const long long> a) {
    if (a.size() < 2) throw std::invalid_argument("np reduction: need at least two integers");
    for (long long v : a)
        if (v <= 0) throw std::invalid_argument("np reduction: integers must be positive");

    NumberPartitionInstance inst;
    inst.a.assign(a.begin(), a.end());
    long long a_max = *std::max_element(a.begin(), a.end());

    inst.tasks.push_back({0, {0.80, 0.5}, 30.0, 40.0, 0.5});
    inst.tasks.push_back({1, {0.90, 0.5}, 30.0, 40.0, 0.5});

    std::size_t n = a.size();
    for (std::size_t i = 0; i < n; ++i) {
        Worker w;
        w.id = static_cast<WorkerId>(i);
        // Spread the workers along the same line, all on one side of both
        // tasks so every approach ray coincides.
        w.loc = {0.05 + 0.5 * static_cast<double>(i) / static_cast<double>(n), 0.5};
        w.velocity = 1.0;
        w.angle_lo = 0.0;
        w.angle_hi = two_pi;
        w.confidence = -std::expm1(-static_cast<double>(a[i]) / static_cast<double>(a_max));
        w.available_at = 0.0;
        inst.workers.push_back(w);
    }
    return inst;
}

}  // namespace rdbsc
