#include "rdbsc/grid_index.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace rdbsc {

double estimate_fractal_dimension(std::span<const Point> points, bool* degenerate) {
    if (degenerate) *degenerate = false;
    if (points.size() < 2)
        throw std::invalid_argument("estimate_fractal_dimension: need at least two points");

    bool all_same = true;
    for (const auto& p : points)
        if (p.x != points[0].x || p.y != points[0].y) {
            all_same = false;
            break;
        }
    if (all_same) {
        if (degenerate) *degenerate = true;
        return 2.0;
    }

    // Geometric ladder of box sizes 1/2^k; stop before boxes get emptier than
    // a couple of points each on average.
    int k_max = static_cast<int>(std::floor(std::log2(std::sqrt(static_cast<double>(points.size())))));
    k_max = std::clamp(k_max, 2, 7);
    std::vector<double> xs, ys;
    for (int k = 1; k <= k_max; ++k) {
        double size = std::ldexp(1.0, -k);
        long long grid = 1ll << k;
        std::unordered_map<long long, long long> counts;
        counts.reserve(points.size());
        for (const auto& p : points) {
            long long cx = std::min(static_cast<long long>(p.x / size), grid - 1);
            long long cy = std::min(static_cast<long long>(p.y / size), grid - 1);
            ++counts[cx * grid + cy];
        }
        double s2 = 0;
        for (const auto& [_, c] : counts) s2 += static_cast<double>(c) * static_cast<double>(c);
        xs.push_back(std::log(size));
        ys.push_back(std::log(s2));
    }
    double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return std::clamp(slope, 0.5, 2.0);
}

double estimate_update_cost(double eta, double l_max, double d2, long long n) {
    double pi = std::numbers::pi_v<double>;
    double reach = pi * (l_max + eta) * (l_max + eta);
    return reach / (eta * eta) + static_cast<double>(n - 1) * std::pow(reach, d2 / 2.0);
}

double solve_cell_size(double l_max, double d2, long long n) {
    if (!(l_max > 0.0)) throw std::invalid_argument("solve_cell_size: l_max must be positive");
    if (n < 2) throw std::invalid_argument("solve_cell_size: need n >= 2");
    if (d2 == 2.0) return std::cbrt(l_max / static_cast<double>(n - 1));

    double pi = std::numbers::pi_v<double>;
    double rhs = 2.0 * std::pow(pi, 1.0 - d2 / 2.0) * l_max / (d2 * static_cast<double>(n - 1));
    auto g = [&](double eta) { return std::pow(l_max + eta, d2 - 2.0) * eta * eta * eta - rhs; };
    double lo = 1e-6, hi = 1.0;
    if (g(lo) > 0.0) return lo;
    if (g(hi) < 0.0) return hi;
    for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
        double mid = 0.5 * (lo + hi);
        (g(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

GridIndex::GridIndex(std::span<const Task> tasks, std::span<const Worker> workers, double eta,
                     double now, WaitPolicy policy, bool confirm)
    : eta_(eta), now_(now), policy_(policy), confirm_(confirm) {
    if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("grid: eta out of (0,1)");
    cols_ = std::max(1, static_cast<int>(std::ceil(1.0 / eta - 1e-9)));
    cells_.resize(static_cast<std::size_t>(cols_) * cols_);
    for (int c = 0; c < cols_; ++c)
        for (int r = 0; r < cols_; ++r) {
            cells_[static_cast<std::size_t>(c) * cols_ + r].col = c;
            cells_[static_cast<std::size_t>(c) * cols_ + r].row = r;
        }
    for (const auto& t : tasks) {
        int ci = cell_of(t.loc);
        cells_[ci].tasks.push_back({t.id, t.loc, t.start, t.end});
        task_cell_.emplace(t.id, ci);
    }
    for (const auto& w : workers) {
        int ci = cell_of(w.loc);
        cells_[ci].workers.push_back(
            {w.id, w.loc, w.velocity, w.angle_lo, w.angle_hi, w.confidence, w.available_at});
        worker_cell_.emplace(w.id, ci);
    }
    for (std::size_t ci = 0; ci < cells_.size(); ++ci) refresh_aggregates(static_cast<int>(ci));
    for (std::size_t ci = 0; ci < cells_.size(); ++ci) rebuild_tcell(static_cast<int>(ci));

    // Cold-start cost parameters from current speeds and horizons.
    double v_max = 0, e_max = now;
    for (const auto& w : workers) v_max = std::max(v_max, w.velocity);
    for (const auto& t : tasks) e_max = std::max(e_max, t.end);
    l_max_ = std::max(1e-3, (e_max - now) * v_max);
    d2_ = 2.0;
    n_ = std::max<long long>(2, static_cast<long long>(tasks.size()));
}

int GridIndex::cell_of(const Point& p) const {
    int c = std::min(static_cast<int>(p.x / eta_), cols_ - 1);
    int r = std::min(static_cast<int>(p.y / eta_), cols_ - 1);
    return c * cols_ + r;
}

Rect GridIndex::cell_rect(int ci) const {
    const Cell& cell = cells_[ci];
    Rect rect;
    rect.xlo = cell.col * eta_;
    rect.ylo = cell.row * eta_;
    rect.xhi = std::min(1.0, rect.xlo + eta_);
    rect.yhi = std::min(1.0, rect.ylo + eta_);
    return rect;
}

void GridIndex::refresh_aggregates(int ci) {
    Cell& cell = cells_[ci];
    if (!cell.workers.empty()) {
        cell.v_min = cell.v_max = cell.workers[0].velocity;
        cell.a_min = cell.workers[0].angle_lo;
        cell.a_max = cell.workers[0].angle_hi;
        for (const auto& w : cell.workers) {
            cell.v_min = std::min(cell.v_min, w.velocity);
            cell.v_max = std::max(cell.v_max, w.velocity);
            cell.a_min = std::min(cell.a_min, w.angle_lo);
            cell.a_max = std::max(cell.a_max, w.angle_hi);
        }
    } else {
        cell.v_min = cell.v_max = cell.a_min = cell.a_max = 0;
    }
    if (!cell.tasks.empty()) {
        cell.s_min = cell.tasks[0].start;
        cell.e_max = cell.tasks[0].end;
        for (const auto& t : cell.tasks) {
            cell.s_min = std::min(cell.s_min, t.start);
            cell.e_max = std::max(cell.e_max, t.end);
        }
    } else {
        cell.s_min = cell.e_max = 0;
    }
}

bool GridIndex::dest_reachable(int ci, int cj) const {
    const Cell& src = cells_[ci];
    const Cell& dst = cells_[cj];
    if (src.workers.empty() || dst.tasks.empty()) return false;

    Rect ri = cell_rect(ci), rj = cell_rect(cj);
    // Earliest possible arrival against the destination's latest deadline.
    double t_min = rect_min_dist(ri, rj) / src.v_max;
    if (now_ + t_min > dst.e_max) return false;
    // The destination rectangle must intersect the cell's union direction cone.
    double lo, hi;
    if (rect_direction_hull(ri, rj, lo, hi) && !arcs_intersect(src.a_min, src.a_max, lo, hi))
        return false;
    if (!confirm_) return true;
    // Confirm with at least one exact hit. Uses the wait policy so a cell that
    // only becomes reachable at a later clock is never dropped.
    for (const auto& wr : src.workers) {
        Worker w{wr.id, wr.loc, wr.velocity, wr.angle_lo, wr.angle_hi, wr.confidence, 0.0};
        for (const auto& tr : dst.tasks) {
            Task t{tr.id, tr.loc, tr.start, tr.end, 0.5};
            if (reachability_check(w, t, now_, WaitPolicy::wait)) return true;
        }
    }
    return false;
}

void GridIndex::rebuild_tcell(int ci) {
    Cell& cell = cells_[ci];
    cell.tcell_list.clear();
    if (cell.workers.empty()) return;
    for (int cj = 0; cj < static_cast<int>(cells_.size()); ++cj)
        if (dest_reachable(ci, cj)) cell.tcell_list.push_back(cj);
}

void GridIndex::revalidate_dest_everywhere(int cj) {
    for (int ci = 0; ci < static_cast<int>(cells_.size()); ++ci) {
        auto& list = cells_[ci].tcell_list;
        bool listed = std::binary_search(list.begin(), list.end(), cj);
        bool ok = dest_reachable(ci, cj);
        if (ok && !listed) list.insert(std::lower_bound(list.begin(), list.end(), cj), cj);
        if (!ok && listed) list.erase(std::lower_bound(list.begin(), list.end(), cj));
    }
}

void GridIndex::insert_worker(const Worker& w) {
    if (worker_cell_.count(w.id)) throw std::invalid_argument("grid: duplicate worker id");
    int ci = cell_of(w.loc);
    cells_[ci].workers.push_back(
        {w.id, w.loc, w.velocity, w.angle_lo, w.angle_hi, w.confidence, w.available_at});
    worker_cell_.emplace(w.id, ci);
    refresh_aggregates(ci);
    rebuild_tcell(ci);
}

void GridIndex::remove_worker(WorkerId id) {
    auto it = worker_cell_.find(id);
    if (it == worker_cell_.end()) throw std::out_of_range("grid: unknown worker id");
    int ci = it->second;
    auto& ws = cells_[ci].workers;
    ws.erase(std::find_if(ws.begin(), ws.end(),
                          [id](const CellWorkerRec& r) { return r.id == id; }));
    worker_cell_.erase(it);
    refresh_aggregates(ci);
    rebuild_tcell(ci);
}

void GridIndex::insert_task(const Task& t) {
    if (task_cell_.count(t.id)) throw std::invalid_argument("grid: duplicate task id");
    int ci = cell_of(t.loc);
    cells_[ci].tasks.push_back({t.id, t.loc, t.start, t.end});
    task_cell_.emplace(t.id, ci);
    refresh_aggregates(ci);
    revalidate_dest_everywhere(ci);
}

void GridIndex::remove_task(TaskId id) {
    auto it = task_cell_.find(id);
    if (it == task_cell_.end()) throw std::out_of_range("grid: unknown task id");
    int ci = it->second;
    auto& ts = cells_[ci].tasks;
    ts.erase(std::find_if(ts.begin(), ts.end(), [id](const CellTaskRec& r) { return r.id == id; }));
    task_cell_.erase(it);
    refresh_aggregates(ci);
    revalidate_dest_everywhere(ci);
}

void GridIndex::advance_clock(double now) {
    if (now < now_) throw std::invalid_argument("grid: clock cannot move backwards");
    now_ = now;
}

std::vector<CandidatePair> GridIndex::retrieve_valid_pairs(double now, ExecMode exec) const {
    std::vector<std::vector<CandidatePair>> per_cell(cells_.size());
    for_each_index(cells_.size(), exec, [&](std::size_t ci) {
        const Cell& cell = cells_[ci];
        if (cell.workers.empty() || cell.tcell_list.empty()) return;
        for (const auto& wr : cell.workers) {
            Worker w{wr.id, wr.loc, wr.velocity, wr.angle_lo, wr.angle_hi, wr.confidence,
                     wr.available_at};
            for (int cj : cell.tcell_list) {
                for (const auto& tr : cells_[cj].tasks) {
                    Task t{tr.id, tr.loc, tr.start, tr.end, 0.5};
                    if (auto p = reachability_check(w, t, now, policy_))
                        per_cell[ci].push_back(*p);
                }
            }
        }
    });
    std::vector<CandidatePair> out;
    for (auto& v : per_cell) out.insert(out.end(), v.begin(), v.end());
    std::sort(out.begin(), out.end(), [](const CandidatePair& a, const CandidatePair& b) {
        if (a.worker_id != b.worker_id) return a.worker_id < b.worker_id;
        return a.task_id < b.task_id;
    });
    return out;
}

void GridIndex::set_cost_params(double l_max, double d2, long long n) {
    l_max_ = l_max;
    d2_ = d2;
    n_ = n;
}

double GridIndex::estimate_update_cost() const {
    return rdbsc::estimate_update_cost(eta_, l_max_, d2_, n_);
}

std::string GridIndex::canonical_state() const {
    std::ostringstream os;
    os.precision(17);
    os << "eta " << eta_ << " cols " << cols_ << " now " << now_ << "\n";
    for (std::size_t ci = 0; ci < cells_.size(); ++ci) {
        const Cell& c = cells_[ci];
        if (c.tasks.empty() && c.workers.empty() && c.tcell_list.empty()) continue;
        os << "cell " << ci << " agg " << c.v_min << ' ' << c.v_max << ' ' << c.a_min << ' '
           << c.a_max << ' ' << c.s_min << ' ' << c.e_max << "\n";
        for (const auto& t : c.tasks)
            os << " t " << t.id << ' ' << t.loc.x << ' ' << t.loc.y << ' ' << t.start << ' '
               << t.end << "\n";
        for (const auto& w : c.workers)
            os << " w " << w.id << ' ' << w.loc.x << ' ' << w.loc.y << ' ' << w.velocity << ' '
               << w.angle_lo << ' ' << w.angle_hi << ' ' << w.confidence << ' ' << w.available_at
               << "\n";
        os << " tcell";
        for (int cj : c.tcell_list) os << ' ' << cj;
        os << "\n";
    }
    return os.str();
}

}  // namespace rdbsc
