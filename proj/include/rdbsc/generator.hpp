#pragma once

#include <cstdint>
#include <numbers>
#include <utility>
#include <vector>

#include "rdbsc/model.hpp"

namespace rdbsc {

enum class SpatialDist { uniform, skewed };

struct GeneratorConfig {
    long long m = 100;
    long long n = 200;
    SpatialDist dist = SpatialDist::uniform;
    double rt_lo = 1.0, rt_hi = 2.0;    // task expiration span, hours
    double p_lo = 0.9, p_hi = 1.0;      // worker confidence range
    double v_lo = 0.2, v_hi = 0.3;      // speed range
    double width_hi = std::numbers::pi_v<double> / 6.0;  // max cone width
    double beta_lo = 0.4, beta_hi = 0.6;
    bool gaussian_speed = false;
    uint64_t seed = 0;
};

void validate(const GeneratorConfig& cfg);

// Deterministic synthetic instance. Locations are uniform or 90% Gaussian
// cluster at (0.5, 0.5) with sigma 0.2 (resampled into the unit square) plus
// 10% uniform; window starts are uniform over [0, 24] hours.
std::pair<std::vector<Task>, std::vector<Worker>> generate_instance(const GeneratorConfig& cfg);

}  // namespace rdbsc
