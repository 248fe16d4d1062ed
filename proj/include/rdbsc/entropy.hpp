#pragma once

#include <cmath>
#include <span>

#include "rdbsc/geometry.hpp"

namespace rdbsc {

// One entropy summand -(x/total)*ln(x/total), with 0*ln(0) := 0.
inline double entropy_term(double x, double total) {
    if (x <= 0.0 || total <= 0.0) return 0.0;
    double f = x / total;
    if (f >= 1.0) return 0.0;
    return -f * std::log(f);
}

// Entropy of the cyclic gaps between sorted approach angles. Fewer than two
// rays carry no spatial information.
inline double sd_exact(std::span<const double> sorted_angles) {
    std::size_t r = sorted_angles.size();
    if (r < 2) return 0.0;
    double h = 0.0;
    for (std::size_t i = 0; i + 1 < r; ++i)
        h += entropy_term(sorted_angles[i + 1] - sorted_angles[i], two_pi);
    h += entropy_term(sorted_angles[0] + two_pi - sorted_angles[r - 1], two_pi);
    return h;
}

// Entropy of the r+1 sub-intervals that sorted arrivals cut out of [s, e].
inline double td_exact(std::span<const double> sorted_arrivals, double s, double e) {
    if (sorted_arrivals.empty()) return 0.0;
    double total = e - s;
    double h = entropy_term(sorted_arrivals.front() - s, total);
    for (std::size_t i = 0; i + 1 < sorted_arrivals.size(); ++i)
        h += entropy_term(sorted_arrivals[i + 1] - sorted_arrivals[i], total);
    h += entropy_term(e - sorted_arrivals.back(), total);
    return h;
}

inline double std_exact(double beta, std::span<const double> sorted_angles,
                        std::span<const double> sorted_arrivals, double s, double e) {
    return beta * sd_exact(sorted_angles) + (1.0 - beta) * td_exact(sorted_arrivals, s, e);
}

}  // namespace rdbsc
