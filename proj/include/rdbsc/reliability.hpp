#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>

namespace rdbsc {

// Probability that at least one of the given workers succeeds. Empty -> 0.
inline double reliability(std::span<const double> confidences) {
    double fail_all = 1.0;
    for (double p : confidences) fail_all *= (1.0 - p);
    return confidences.empty() ? 0.0 : 1.0 - fail_all;
}

// Additive form: sum of -ln(1-p). Equals -ln(1 - reliability). A worker with
// p == 1 saturates the sum to +infinity.
inline double log_reliability(std::span<const double> confidences) {
    double r = 0.0;
    for (double p : confidences) {
        if (p >= 1.0) return std::numeric_limits<double>::infinity();
        r -= std::log1p(-p);
    }
    return r;
}

inline double neg_log1m(double p) {
    if (p >= 1.0) return std::numeric_limits<double>::infinity();
    return -std::log1p(-p);
}

// Probability of one possible world: bit j of `mask` set means worker j
// succeeds; clear means it fails.
inline double possible_world_prob(uint32_t mask, std::span<const double> confidences) {
    double prob = 1.0;
    for (std::size_t j = 0; j < confidences.size(); ++j)
        prob *= (mask >> j) & 1u ? confidences[j] : 1.0 - confidences[j];
    return prob;
}

}  // namespace rdbsc
