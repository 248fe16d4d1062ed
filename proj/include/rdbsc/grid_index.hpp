#pragma once

#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "rdbsc/exec.hpp"
#include "rdbsc/model.hpp"

namespace rdbsc {

// Box-counting estimate of the correlation fractal dimension of a 2D point
// set, clamped into [0.5, 2.0]. A fully degenerate set (all points coincide)
// reports 2.0 and sets *degenerate.
double estimate_fractal_dimension(std::span<const Point> points, bool* degenerate = nullptr);

// Expected index updating cost for cell side eta: cells touched in the worst
// case plus the power-law estimate of tasks in the reachable disk.
double estimate_update_cost(double eta, double l_max, double d2, long long n);

// Cell side minimizing the updating cost. Closed form for d2 == 2, bisection
// otherwise (residual <= 1e-9).
double solve_cell_size(double l_max, double d2, long long n);

struct CellTaskRec {
    TaskId id;
    Point loc;
    double start, end;
};

struct CellWorkerRec {
    WorkerId id;
    Point loc;
    double velocity;
    double angle_lo, angle_hi;
    double confidence;
    double available_at;
};

struct Cell {
    int col = 0, row = 0;
    std::vector<CellTaskRec> tasks;
    std::vector<CellWorkerRec> workers;
    // Exact aggregates over current contents; meaningful only when the
    // corresponding list is nonempty.
    double v_min = 0, v_max = 0;
    double a_min = 0, a_max = 0;
    double s_min = 0, e_max = 0;
    std::vector<int> tcell_list;  // sorted ids of cells reachable from here
};

// Uniform grid over [0,1]^2 with per-cell aggregates and reachability lists.
// Reads may share a snapshot; mutations need exclusive access.
class GridIndex {
public:
    GridIndex(std::span<const Task> tasks, std::span<const Worker> workers, double eta,
              double now, WaitPolicy policy = WaitPolicy::strict, bool confirm = true);

    void insert_worker(const Worker& w);
    void remove_worker(WorkerId id);
    void insert_task(const Task& t);
    void remove_task(TaskId id);

    // Exact valid pairs at time `now` (must not precede the index clock),
    // sorted by (worker id, task id). Equals the brute-force sweep.
    std::vector<CandidatePair> retrieve_valid_pairs(double now,
                                                    ExecMode exec = ExecMode::serial) const;

    void set_cost_params(double l_max, double d2, long long n);
    double estimate_update_cost() const;

    double eta() const { return eta_; }
    int cols() const { return cols_; }
    double clock() const { return now_; }
    void advance_clock(double now);
    const std::vector<Cell>& cells() const { return cells_; }
    std::size_t task_count() const { return task_cell_.size(); }
    std::size_t worker_count() const { return worker_cell_.size(); }

    // Deterministic dump of the full index state, for equality checks.
    std::string canonical_state() const;

private:
    int cell_of(const Point& p) const;
    Rect cell_rect(int ci) const;
    void refresh_aggregates(int ci);
    bool dest_reachable(int ci, int cj) const;
    void rebuild_tcell(int ci);
    void revalidate_dest_everywhere(int cj);

    double eta_;
    int cols_;
    double now_;
    WaitPolicy policy_;
    bool confirm_;
    std::vector<Cell> cells_;
    std::unordered_map<TaskId, int> task_cell_;
    std::unordered_map<WorkerId, int> worker_cell_;
    double l_max_ = 0, d2_ = 2.0;
    long long n_ = 0;
};

}  // namespace rdbsc
