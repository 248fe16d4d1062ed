#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "rdbsc/rng.hpp"
#include "rdbsc/solvers.hpp"

namespace rdbsc {

std::vector<long long> worker_degrees(std::span<const CandidatePair> pairs) {
    std::map<WorkerId, long long> deg;
    for (const auto& p : pairs) ++deg[p.worker_id];
    std::vector<long long> out;
    out.reserve(deg.size());
    for (const auto& [_, d] : deg) out.push_back(d);
    return out;
}

double log_sample_tail(double log_n, double epsilon, long long k) {
    double log_p = -log_n;
    double p = std::exp(log_p);
    double ln_m = std::log1p(-epsilon) + log_n;  // log of M = (1-eps)*N

    // ln C1 = N*ln(1-p). With p = 1/N the product N*p is exactly 1, so for
    // tiny p the series -(1 + p/2 + p^2/3 + ...) evaluates it without forming N.
    double ln_c1;
    if (log_n < 18.0) {
        ln_c1 = std::exp(log_n) * std::log1p(-p);
    } else {
        ln_c1 = -(1.0 + p / 2.0 + p * p / 3.0);
    }
    double ln_c2 = log_p - std::log1p(-p);

    double ln_binom;
    if (ln_m <= 34.0) {
        double m = std::exp(ln_m);
        if (static_cast<double>(k) > m) return -std::numeric_limits<double>::infinity();
        ln_binom = std::lgamma(m + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
                   std::lgamma(m - static_cast<double>(k) + 1.0);
    } else {
        // M dwarfs any reachable K; ln C(M,K) = K*ln M - ln K! up to O(K^2/M).
        ln_binom = static_cast<double>(k) * ln_m - std::lgamma(static_cast<double>(k) + 1.0);
    }
    return ln_c1 + static_cast<double>(k) * ln_c2 + ln_binom;
}

SamplePlan sample_size(std::span<const long long> degrees, double epsilon, double delta,
                       long long k_cap) {
    if (epsilon <= 0.0 || epsilon >= 1.0) throw std::invalid_argument("sample_size: epsilon out of (0,1)");
    if (delta <= 0.0 || delta >= 1.0) throw std::invalid_argument("sample_size: delta out of (0,1)");
    if (k_cap < 1) throw std::invalid_argument("sample_size: k_cap must be positive");
    for (long long d : degrees)
        if (d < 1) throw std::invalid_argument("sample_size: degrees must be >= 1");

    SamplePlan plan;
    plan.epsilon = epsilon;
    plan.delta = delta;
    plan.k_cap = k_cap;
    plan.log_n = 0.0;
    for (long long d : degrees) plan.log_n += std::log(static_cast<double>(d));
    plan.log_p = -plan.log_n;

    if (plan.log_n == 0.0) {  // population of one assignment
        plan.k_hat = 1;
        return plan;
    }

    double p = std::exp(plan.log_p);
    double e = std::numbers::e_v<double>;
    // p*M is exactly (1-epsilon), independent of the population size.
    double k_lo = ((1.0 - epsilon) * e - 1.0 + p) / (1.0 - p + e * p);
    long long first = static_cast<long long>(std::ceil(k_lo)) + 1;
    first = std::max(first, 1ll);

    double ln_m = std::log1p(-epsilon) + plan.log_n;
    long long upper = k_cap;
    if (ln_m <= 34.0) upper = std::min(upper, static_cast<long long>(std::floor(std::exp(ln_m))));

    double target = std::log1p(-delta);
    if (first > upper || log_sample_tail(plan.log_n, epsilon, upper) > target) {
        plan.k_hat = k_cap;
        plan.cap_hit = true;
        return plan;
    }
    long long lo = first, hi = upper;
    while (lo < hi) {
        long long mid = lo + (hi - lo) / 2;
        if (log_sample_tail(plan.log_n, epsilon, mid) <= target)
            hi = mid;
        else
            lo = mid + 1;
    }
    plan.k_hat = lo;
    return plan;
}

Assignment sampling_solve(std::span<const Task> tasks, std::span<const Worker> workers,
                          std::span<const CandidatePair> pairs, const SamplePlan& plan,
                          uint64_t seed, const ProblemContext& ctx, ExecMode exec) {
    auto conf = confidence_map(workers);
    // Reachable pair list per worker, in worker-id order.
    std::map<WorkerId, std::vector<const CandidatePair*>> options;
    for (const auto& p : pairs) options[p.worker_id].push_back(&p);

    long long k = std::max(plan.k_hat, 1ll);
    std::vector<Assignment> samples(static_cast<std::size_t>(k));
    std::vector<ObjectiveVector> objs(static_cast<std::size_t>(k));
    std::vector<const std::vector<const CandidatePair*>*> per_worker;
    per_worker.reserve(options.size());
    for (const auto& [_, opts] : options) per_worker.push_back(&opts);

    for_each_index(static_cast<std::size_t>(k), exec, [&](std::size_t h) {
        auto rng = make_rng(seed, h);
        Assignment s;
        for (const auto* opts : per_worker) {
            std::uniform_int_distribution<std::size_t> pick(0, opts->size() - 1);
            s.add(*(*opts)[pick(rng)]);
        }
        objs[h] = objective(s, tasks, conf, ctx, ExecMode::serial);
        samples[h] = std::move(s);
    });

    if (samples.empty()) return {};
    std::vector<RankPoint> points(samples.size());
    for (std::size_t h = 0; h < samples.size(); ++h)
        points[h] = {objs[h].min_rel, objs[h].total_std, static_cast<int64_t>(h), 0};
    return samples[dominance_rank(points)];
}

}  // namespace rdbsc
