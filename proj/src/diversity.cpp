#include "rdbsc/diversity.hpp"

#include <algorithm>
#include <cmath>

namespace rdbsc {

namespace {

// Enforces a strictly increasing sequence by bumping ties up one ulp at a
// time. Values are expected sorted on entry.
void separate_ties(std::vector<double>& v, double hard_cap) {
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (v[i] <= v[i - 1]) {
            double bumped = std::nextafter(v[i - 1], std::numeric_limits<double>::infinity());
            v[i] = std::min(bumped, hard_cap);
        }
    }
}

}  // namespace

std::vector<double> TaskView::gaps() const {
    std::size_t r = angles.size();
    std::vector<double> g(r);
    if (r == 0) return g;
    for (std::size_t i = 0; i + 1 < r; ++i) g[i] = angles[i + 1] - angles[i];
    g[r - 1] = angles[0] + two_pi - angles[r - 1];
    return g;
}

std::vector<double> TaskView::intervals() const {
    std::size_t r = arrivals.size();
    std::vector<double> iv(r + 1);
    if (r == 0) {
        iv[0] = end - start;
        return iv;
    }
    iv[0] = arrivals[0] - start;
    for (std::size_t i = 1; i < r; ++i) iv[i] = arrivals[i] - arrivals[i - 1];
    iv[r] = end - arrivals[r - 1];
    return iv;
}

TaskView build_view(const Task& task, std::vector<ViewEntry> entries) {
    TaskView view;
    view.start = task.start;
    view.end = task.end;
    view.beta = task.beta;

    for (auto& e : entries) e.angle = norm_angle(e.angle);
    std::sort(entries.begin(), entries.end(), [](const ViewEntry& a, const ViewEntry& b) {
        if (a.angle != b.angle) return a.angle < b.angle;
        return a.worker_id < b.worker_id;
    });
    std::size_t r = entries.size();
    view.angles.resize(r);
    for (std::size_t i = 0; i < r; ++i) view.angles[i] = entries[i].angle;
    separate_ties(view.angles, std::numeric_limits<double>::infinity());

    view.p_by_angle.resize(r);
    view.arrival_by_angle.resize(r);
    view.id_by_angle.resize(r);
    for (std::size_t i = 0; i < r; ++i) {
        view.p_by_angle[i] = entries[i].confidence;
        view.arrival_by_angle[i] = entries[i].arrival;
        view.id_by_angle[i] = entries[i].worker_id;
    }

    std::vector<std::size_t> by_arrival(r);
    for (std::size_t i = 0; i < r; ++i) by_arrival[i] = i;
    std::sort(by_arrival.begin(), by_arrival.end(), [&](std::size_t a, std::size_t b) {
        if (entries[a].arrival != entries[b].arrival) return entries[a].arrival < entries[b].arrival;
        return entries[a].worker_id < entries[b].worker_id;
    });
    view.arrivals.resize(r);
    view.p_by_arrival.resize(r);
    for (std::size_t i = 0; i < r; ++i) {
        view.arrivals[i] = entries[by_arrival[i]].arrival;
        view.p_by_arrival[i] = entries[by_arrival[i]].confidence;
    }
    separate_ties(view.arrivals, task.end);
    // Mirror the perturbed arrivals back into the angle-ordered copy so both
    // evaluation paths see identical values.
    for (std::size_t i = 0; i < r; ++i) view.arrival_by_angle[by_arrival[i]] = view.arrivals[i];

    return view;
}

TaskView build_view(const Task& task, std::span<const CandidatePair> pairs,
                    const ConfidenceFn& confidence_of) {
    std::vector<ViewEntry> entries;
    entries.reserve(pairs.size());
    for (const auto& p : pairs)
        entries.push_back({p.worker_id, confidence_of(p.worker_id), p.approach_angle, p.arrival});
    return build_view(task, std::move(entries));
}

DiversityMatrices msd_matrix(const TaskView& view) {
    std::size_t r = view.size();
    DiversityMatrices m;
    m.r = r;
    m.m_sd.assign(r * r, 0.0);
    m.m_td.clear();
    if (r == 0) return m;
    auto g = view.gaps();
    for (std::size_t j = 0; j < r; ++j) {
        double arc = 0.0;
        double fail_between = 1.0;
        for (std::size_t step = 1; step < r; ++step) {
            std::size_t k = (j + step) % r;
            arc += g[(j + step - 1) % r];
            m.m_sd[j * r + k] =
                entropy_term(arc, two_pi) * view.p_by_angle[j] * view.p_by_angle[k] * fail_between;
            fail_between *= 1.0 - view.p_by_angle[k];
        }
        // j == k merges the full circle: zero entropy.
    }
    return m;
}

DiversityMatrices mtd_matrix(const TaskView& view) {
    std::size_t r = view.size();
    DiversityMatrices m;
    m.r = r;
    m.m_td.assign((r + 1) * (r + 1), 0.0);
    double total = view.end - view.start;
    // Boundary events at the window edges succeed with probability one.
    auto event_p = [&](std::size_t x) { return x == 0 || x == r + 1 ? 1.0 : view.p_by_arrival[x - 1]; };
    auto event_pos = [&](std::size_t x) {
        return x == 0 ? view.start : (x == r + 1 ? view.end : view.arrivals[x - 1]);
    };
    for (std::size_t j = 1; j <= r + 1; ++j) {
        double fail_inside = 1.0;
        for (std::size_t k = j; k <= r + 1; ++k) {
            double len = event_pos(k) - event_pos(j - 1);
            m.m_td[(j - 1) * (r + 1) + (k - 1)] =
                entropy_term(len, total) * event_p(j - 1) * event_p(k) * fail_inside;
            fail_inside *= 1.0 - event_p(k);
        }
    }
    return m;
}

double expected_std_poly(const TaskView& view) {
    std::size_t r = view.size();
    double sum_sd = 0.0;
    if (r >= 2) {
        auto g = view.gaps();
        for (std::size_t j = 0; j < r; ++j) {
            double arc = 0.0;
            double fail_between = 1.0;
            for (std::size_t step = 1; step < r; ++step) {
                std::size_t k = (j + step) % r;
                arc += g[(j + step - 1) % r];
                sum_sd += entropy_term(arc, two_pi) * view.p_by_angle[j] * view.p_by_angle[k] *
                          fail_between;
                fail_between *= 1.0 - view.p_by_angle[k];
            }
        }
    }
    double sum_td = 0.0;
    double total = view.end - view.start;
    for (std::size_t j = 1; j <= r + 1; ++j) {
        double left_p = j == 1 ? 1.0 : view.p_by_arrival[j - 2];
        double left_pos = j == 1 ? view.start : view.arrivals[j - 2];
        double fail_inside = 1.0;
        for (std::size_t k = j; k <= r + 1; ++k) {
            double right_p = k == r + 1 ? 1.0 : view.p_by_arrival[k - 1];
            double right_pos = k == r + 1 ? view.end : view.arrivals[k - 1];
            sum_td += entropy_term(right_pos - left_pos, total) * left_p * right_p * fail_inside;
            fail_inside *= 1.0 - right_p;
        }
    }
    return view.beta * sum_sd + (1.0 - view.beta) * sum_td;
}

DiversityBounds std_bounds(const TaskView& view) {
    std::size_t r = view.size();
    DiversityBounds b;
    if (r == 0) return b;

    double sd_full = sd_exact(view.angles);
    double td_full = td_exact(view.arrivals, view.start, view.end);
    b.ub = view.beta * sd_full + (1.0 - view.beta) * td_full;

    // P(no success), P(exactly one success) in O(r), with p == 1 handled by
    // counting certain workers instead of dividing by 1-p.
    std::size_t certain = 0;
    double fail_rest = 1.0;  // product of (1-p) over workers with p < 1
    double odds_sum = 0.0;   // sum of p/(1-p) over the same workers
    for (double p : view.p_by_angle) {
        if (p >= 1.0) {
            ++certain;
        } else {
            fail_rest *= 1.0 - p;
            odds_sum += p / (1.0 - p);
        }
    }
    double fail_all, exactly_one;
    if (certain >= 2) {
        fail_all = 0.0;
        exactly_one = 0.0;
    } else if (certain == 1) {
        fail_all = 0.0;
        exactly_one = fail_rest;
    } else {
        fail_all = fail_rest;
        exactly_one = fail_rest * odds_sum;
    }
    double p_ge1 = 1.0 - fail_all;
    double p_ge2 = std::max(0.0, 1.0 - fail_all - exactly_one);

    double min_sd = 0.0;
    if (r >= 2) {
        auto g = view.gaps();
        double gmin = *std::min_element(g.begin(), g.end());
        min_sd = entropy_term(gmin, two_pi) + entropy_term(two_pi - gmin, two_pi);
    }
    double min_td = std::numeric_limits<double>::infinity();
    double total = view.end - view.start;
    for (double tau : view.arrivals) {
        double h = entropy_term(tau - view.start, total) + entropy_term(view.end - tau, total);
        min_td = std::min(min_td, h);
    }
    if (!std::isfinite(min_td)) min_td = 0.0;

    b.lb = view.beta * p_ge2 * min_sd + (1.0 - view.beta) * p_ge1 * min_td;
    // Guard against rounding pushing lb past ub on degenerate views.
    b.lb = std::min(b.lb, b.ub);
    return b;
}

TaskDeltaCache::TaskDeltaCache(const TaskView& view) : view_(&view) {
    std::size_t r = view.size();
    gaps_ = view.gaps();

    cross_sd_.assign(r, 0.0);
    if (r >= 2) {
        std::vector<double> diff(r + 1, 0.0);
        for (std::size_t j = 0; j < r; ++j) {
            double arc = 0.0;
            double fail = 1.0;
            for (std::size_t step = 1; step < r; ++step) {
                std::size_t k = (j + step) % r;
                arc += gaps_[(j + step - 1) % r];
                double val =
                    entropy_term(arc, two_pi) * view.p_by_angle[j] * view.p_by_angle[k] * fail;
                e_sd_ += val;
                // The arc spans gap slots j .. j+step-1 (cyclic).
                std::size_t a = j, b = (j + step - 1) % r;
                if (a <= b) {
                    diff[a] += val;
                    diff[b + 1] -= val;
                } else {
                    diff[a] += val;
                    diff[r] -= val;
                    diff[0] += val;
                    diff[b + 1] -= val;
                }
                fail *= 1.0 - view.p_by_angle[k];
            }
        }
        double acc = 0.0;
        for (std::size_t sl = 0; sl < r; ++sl) {
            acc += diff[sl];
            cross_sd_[sl] = acc;
        }
    }

    cross_td_.assign(r + 3, 0.0);
    {
        std::vector<double> diff(r + 3, 0.0);
        double total = view.end - view.start;
        auto event_p = [&](std::size_t x) {
            return x == 0 || x == r + 1 ? 1.0 : view.p_by_arrival[x - 1];
        };
        auto event_pos = [&](std::size_t x) {
            return x == 0 ? view.start : (x == r + 1 ? view.end : view.arrivals[x - 1]);
        };
        for (std::size_t j = 1; j <= r + 1; ++j) {
            double fail = 1.0;
            for (std::size_t k = j; k <= r + 1; ++k) {
                double val =
                    entropy_term(event_pos(k) - event_pos(j - 1), total) * event_p(j - 1) *
                    event_p(k) * fail;
                e_td_ += val;
                diff[j] += val;
                diff[k + 1] -= val;
                fail *= 1.0 - event_p(k);
            }
        }
        double acc = 0.0;
        for (std::size_t s = 1; s <= r + 1; ++s) {
            acc += diff[s];
            cross_td_[s] = acc;
        }
    }
}

double TaskDeltaCache::expected_std_with(double confidence, double angle, double arrival) const {
    const TaskView& v = *view_;
    std::size_t r = v.size();
    double theta = norm_angle(angle);

    double sd = 0.0;
    if (r >= 1) {
        auto it = std::upper_bound(v.angles.begin(), v.angles.end(), theta);
        std::size_t q = static_cast<std::size_t>(it - v.angles.begin());
        std::size_t slot = (q + r - 1) % r;
        double cross = r >= 2 ? cross_sd_[slot] : 0.0;

        double new_sum = 0.0;
        double arc = (q == r ? v.angles[0] + two_pi : v.angles[q]) - theta;
        double fail = 1.0;
        for (std::size_t step = 0; step < r; ++step) {
            std::size_t k = (q + step) % r;
            new_sum += entropy_term(arc, two_pi) * confidence * v.p_by_angle[k] * fail;
            fail *= 1.0 - v.p_by_angle[k];
            arc += gaps_[k];
        }
        arc = theta - (q == 0 ? v.angles[r - 1] - two_pi : v.angles[q - 1]);
        fail = 1.0;
        for (std::size_t step = 0; step < r; ++step) {
            std::size_t j = (q + r - 1 - step) % r;
            new_sum += entropy_term(arc, two_pi) * v.p_by_angle[j] * confidence * fail;
            fail *= 1.0 - v.p_by_angle[j];
            arc += gaps_[(j + r - 1) % r];
        }
        sd = e_sd_ - confidence * cross + new_sum;
    }

    double td;
    {
        double total = v.end - v.start;
        auto event_p = [&](std::size_t x) {
            return x == 0 || x == r + 1 ? 1.0 : v.p_by_arrival[x - 1];
        };
        auto event_pos = [&](std::size_t x) {
            return x == 0 ? v.start : (x == r + 1 ? v.end : v.arrivals[x - 1]);
        };
        auto it = std::upper_bound(v.arrivals.begin(), v.arrivals.end(), arrival);
        std::size_t s = static_cast<std::size_t>(it - v.arrivals.begin()) + 1;

        double new_t = 0.0;
        double fail = 1.0;
        for (std::size_t x = s; x-- > 0;) {
            new_t += entropy_term(arrival - event_pos(x), total) * event_p(x) * confidence * fail;
            fail *= 1.0 - event_p(x);
        }
        fail = 1.0;
        for (std::size_t y = s; y <= r + 1; ++y) {
            new_t += entropy_term(event_pos(y) - arrival, total) * confidence * event_p(y) * fail;
            fail *= 1.0 - event_p(y);
        }
        td = e_td_ - confidence * cross_td_[s] + new_t;
    }
    return v.beta * sd + (1.0 - v.beta) * td;
}

namespace {

void success_probs(std::size_t certain, double fail_rest, double odds_sum, double& p_ge1,
                   double& p_ge2) {
    double fail_all, exactly_one;
    if (certain >= 2) {
        fail_all = 0.0;
        exactly_one = 0.0;
    } else if (certain == 1) {
        fail_all = 0.0;
        exactly_one = fail_rest;
    } else {
        fail_all = fail_rest;
        exactly_one = fail_rest * odds_sum;
    }
    p_ge1 = 1.0 - fail_all;
    p_ge2 = std::max(0.0, 1.0 - fail_all - exactly_one);
}

double two_gap_entropy(double g) { return entropy_term(g, two_pi) + entropy_term(two_pi - g, two_pi); }

}  // namespace

TaskBoundsCache::TaskBoundsCache(const TaskView& view) : view_(&view) {
    std::size_t r = view.size();
    sd_full_ = sd_exact(view.angles);
    td_full_ = td_exact(view.arrivals, view.start, view.end);
    for (double p : view.p_by_angle) {
        if (p >= 1.0) {
            ++certain_;
        } else {
            fail_rest_ *= 1.0 - p;
            odds_sum_ += p / (1.0 - p);
        }
    }
    gap_min1_ = gap_min2_ = two_pi;
    if (r >= 2) {
        for (double g : view.gaps()) {
            if (g < gap_min1_) {
                gap_min2_ = gap_min1_;
                gap_min1_ = g;
            } else if (g < gap_min2_) {
                gap_min2_ = g;
            }
        }
    }
    min_td_single_ = std::numeric_limits<double>::infinity();
    for (double tau : view.arrivals)
        min_td_single_ = std::min(min_td_single_, entropy_term(tau - view.start, view.end - view.start) +
                                                      entropy_term(view.end - tau, view.end - view.start));

    bounds_.ub = view.beta * sd_full_ + (1.0 - view.beta) * td_full_;
    double p_ge1, p_ge2;
    success_probs(certain_, fail_rest_, odds_sum_, p_ge1, p_ge2);
    double min_sd = r >= 2 ? two_gap_entropy(gap_min1_) : 0.0;
    double min_td = r >= 1 ? min_td_single_ : 0.0;
    bounds_.lb = std::min(view.beta * p_ge2 * min_sd + (1.0 - view.beta) * p_ge1 * min_td, bounds_.ub);
}

DiversityBounds TaskBoundsCache::bounds_with(double confidence, double angle, double arrival) const {
    const TaskView& v = *view_;
    std::size_t r = v.size();
    double theta = norm_angle(angle);

    double sd_after, new_min_gap;
    if (r == 0) {
        sd_after = 0.0;
        new_min_gap = 0.0;  // unused: a single ray has no gap pair
    } else if (r == 1) {
        double a = norm_angle(theta - v.angles[0]);
        sd_after = two_gap_entropy(a);
        new_min_gap = std::min(a, two_pi - a);
    } else {
        auto it = std::upper_bound(v.angles.begin(), v.angles.end(), theta);
        std::size_t pos = static_cast<std::size_t>(it - v.angles.begin());
        double prev = pos == 0 ? v.angles[r - 1] - two_pi : v.angles[pos - 1];
        double next = pos == r ? v.angles[0] + two_pi : v.angles[pos];
        double g = next - prev, left = theta - prev, right = next - theta;
        sd_after = sd_full_ - entropy_term(g, two_pi) + entropy_term(left, two_pi) +
                   entropy_term(right, two_pi);
        double others = g == gap_min1_ ? gap_min2_ : gap_min1_;
        new_min_gap = std::min({others, left, right});
    }

    double span = v.end - v.start;
    double td_after;
    if (r == 0) {
        td_after = entropy_term(arrival - v.start, span) + entropy_term(v.end - arrival, span);
    } else {
        auto it = std::upper_bound(v.arrivals.begin(), v.arrivals.end(), arrival);
        std::size_t pos = static_cast<std::size_t>(it - v.arrivals.begin());
        double prev = pos == 0 ? v.start : v.arrivals[pos - 1];
        double next = pos == r ? v.end : v.arrivals[pos];
        td_after = td_full_ - entropy_term(next - prev, span) + entropy_term(arrival - prev, span) +
                   entropy_term(next - arrival, span);
    }

    DiversityBounds b;
    b.ub = v.beta * sd_after + (1.0 - v.beta) * td_after;

    std::size_t certain = certain_ + (confidence >= 1.0 ? 1 : 0);
    double fail_rest = confidence >= 1.0 ? fail_rest_ : fail_rest_ * (1.0 - confidence);
    double odds = confidence >= 1.0 ? odds_sum_ : odds_sum_ + confidence / (1.0 - confidence);
    double p_ge1, p_ge2;
    success_probs(certain, fail_rest, odds, p_ge1, p_ge2);
    double min_sd = r + 1 >= 2 && r >= 1 ? two_gap_entropy(new_min_gap) : 0.0;
    double min_td = std::min(min_td_single_, entropy_term(arrival - v.start, span) +
                                                 entropy_term(v.end - arrival, span));
    b.lb = std::min(v.beta * p_ge2 * min_sd + (1.0 - v.beta) * p_ge1 * min_td, b.ub);
    return b;
}

}  // namespace rdbsc
