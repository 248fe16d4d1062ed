#include "rdbsc/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rdbsc/rng.hpp"

namespace rdbsc {

namespace {

struct Row {
    WorkerId wid;
    double t, x, y;
};

// Minimal wrap-aware arc containing all bearings: the complement of the
// largest circular gap between consecutive sorted bearings.
void enclosing_arc(std::vector<double> bearings, double min_width, double& lo, double& hi) {
    std::sort(bearings.begin(), bearings.end());
    std::size_t n = bearings.size();
    double max_gap = bearings[0] + two_pi - bearings[n - 1];
    std::size_t gap_at = n - 1;  // arc starts just after this index
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double g = bearings[i + 1] - bearings[i];
        if (g > max_gap) {
            max_gap = g;
            gap_at = i;
        }
    }
    lo = bearings[(gap_at + 1) % n];
    hi = lo + (two_pi - max_gap);
    if (hi - lo < min_width) {
        double mid = 0.5 * (lo + hi);
        lo = norm_angle(mid - min_width / 2.0);
        hi = lo + min_width;
    }
}

Worker make_worker(const std::vector<Row>& pts, const IngestOptions& opt, IngestResult& res,
                   bool& ok) {
    ok = false;
    Worker w;
    if (pts.size() < 2) {
        ++res.skipped_single_point;
        return w;
    }
    double elapsed = pts.back().t - pts.front().t;
    if (!(elapsed > 0.0)) {
        ++res.skipped_zero_time;
        return w;
    }
    double length = 0.0;
    std::vector<double> bearings;
    Point start{pts.front().x, pts.front().y};
    for (std::size_t i = 1; i < pts.size(); ++i) {
        Point prev{pts[i - 1].x, pts[i - 1].y};
        Point cur{pts[i].x, pts[i].y};
        length += dist(prev, cur);
        if (cur.x != start.x || cur.y != start.y) bearings.push_back(bearing(start, cur));
    }
    if (!(length > 0.0) || bearings.empty()) {
        ++res.skipped_zero_length;
        return w;
    }
    w.id = pts.front().wid;
    w.loc = start;
    w.velocity = length / elapsed;
    enclosing_arc(std::move(bearings), opt.min_cone_width, w.angle_lo, w.angle_hi);
    auto rng = make_rng(opt.seed, static_cast<uint64_t>(w.id));
    std::normal_distribution<double> conf((opt.p_lo + opt.p_hi) / 2.0, 0.02);
    w.confidence = std::clamp(conf(rng), opt.p_lo, opt.p_hi);
    w.available_at = 0.0;
    ok = true;
    return w;
}

}  // namespace

IngestResult ingest_trajectories(std::istream& csv, const IngestOptions& opt) {
    IngestResult res;
    std::vector<Row> current;
    bool have_prev = false;
    Row prev{};
    std::string line;
    std::size_t lineno = 0;

    auto flush = [&]() {
        if (current.empty()) return;
        bool ok = false;
        Worker w = make_worker(current, opt, res, ok);
        if (ok) res.workers.push_back(w);
        current.clear();
    };

    while (std::getline(csv, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (lineno == 1 && line.find_first_not_of("widtxy, \r") == std::string::npos) continue;
        Row row;
        char comma;
        std::istringstream ls(line);
        if (!(ls >> row.wid >> comma >> row.t >> comma >> row.x >> comma >> row.y))
            throw std::runtime_error("trajectory: malformed row at line " + std::to_string(lineno));
        if (have_prev && row.wid == prev.wid && row.t < prev.t)
            throw std::runtime_error("trajectory: rows out of order at line " + std::to_string(lineno));
        if (have_prev && row.wid < prev.wid)
            throw std::runtime_error("trajectory: rows out of order at line " + std::to_string(lineno));
        if (have_prev && row.wid != prev.wid) flush();
        current.push_back(row);
        prev = row;
        have_prev = true;
    }
    flush();
    return res;
}

}  // namespace rdbsc
