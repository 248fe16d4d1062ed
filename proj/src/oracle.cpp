#include "rdbsc/oracle.hpp"

#include <algorithm>
#include <stdexcept>

#include "rdbsc/reliability.hpp"

namespace rdbsc {

double expected_std_bruteforce(const TaskView& view, int cap) {
    std::size_t r = view.size();
    if (static_cast<int>(r) > cap)
        throw std::invalid_argument("expected_std_bruteforce: view exceeds the enumeration cap");
    double acc = 0.0;
    std::vector<double> angles, arrivals;
    angles.reserve(r);
    arrivals.reserve(r);
    for (uint32_t mask = 0; mask < (1u << r); ++mask) {
        double prob = possible_world_prob(mask, view.p_by_angle);
        if (prob == 0.0) continue;
        angles.clear();
        arrivals.clear();
        for (std::size_t i = 0; i < r; ++i) {
            if ((mask >> i) & 1u) {
                angles.push_back(view.angles[i]);
                arrivals.push_back(view.arrival_by_angle[i]);
            }
        }
        std::sort(arrivals.begin(), arrivals.end());
        acc += prob * std_exact(view.beta, angles, arrivals, view.start, view.end);
    }
    return acc;
}

}  // namespace rdbsc
