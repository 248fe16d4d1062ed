#pragma once

#include <cstdint>
#include <istream>
#include <vector>

#include "rdbsc/model.hpp"

namespace rdbsc {

struct IngestOptions {
    double p_lo = 0.9, p_hi = 1.0;  // confidence assignment for ingested workers
    uint64_t seed = 0;
    double min_cone_width = 1e-3;   // straight-line trajectories get this width
};

struct IngestResult {
    std::vector<Worker> workers;
    std::size_t skipped_single_point = 0;
    std::size_t skipped_zero_time = 0;
    std::size_t skipped_zero_length = 0;
};

// Builds workers from trajectory rows (wid,t,x,y), sorted by (wid,t):
// location is the first point, speed is path length over elapsed time, and
// the direction cone is the minimal sector at the start containing every
// later point. Out-of-order rows are a format error.
IngestResult ingest_trajectories(std::istream& csv, const IngestOptions& opt = {});

}  // namespace rdbsc
