#include "rdbsc/generator.hpp"

#include <algorithm>
#include <stdexcept>

#include "rdbsc/rng.hpp"

namespace rdbsc {

void validate(const GeneratorConfig& cfg) {
    auto fail = [](const char* msg) { throw std::invalid_argument(msg); };
    if (cfg.m < 1) fail("generator: m must be >= 1");
    if (cfg.n < 1) fail("generator: n must be >= 1");
    if (!(cfg.rt_lo > 0.0) || cfg.rt_hi < cfg.rt_lo) fail("generator: bad rt range");
    if (cfg.p_lo < 0.0 || cfg.p_hi > 1.0 || cfg.p_hi < cfg.p_lo) fail("generator: bad p range");
    if (!(cfg.v_lo > 0.0) || cfg.v_hi < cfg.v_lo) fail("generator: bad v range");
    if (!(cfg.width_hi > 0.0) || cfg.width_hi > two_pi) fail("generator: bad angle width");
    if (cfg.beta_lo < 0.0 || cfg.beta_hi > 1.0 || cfg.beta_hi < cfg.beta_lo)
        fail("generator: bad beta range");
}

namespace {

Point draw_location(std::mt19937_64& rng, SpatialDist dist) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    if (dist == SpatialDist::skewed && uni(rng) < 0.9) {
        std::normal_distribution<double> gauss(0.5, 0.2);
        for (;;) {
            double x = gauss(rng), y = gauss(rng);
            if (x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= 1.0) return {x, y};
        }
    }
    return {uni(rng), uni(rng)};
}

}  // namespace

std::pair<std::vector<Task>, std::vector<Worker>> generate_instance(const GeneratorConfig& cfg) {
    validate(cfg);
    auto rng = make_rng(cfg.seed, 0x6E5Dull);
    std::uniform_real_distribution<double> uni(0.0, 1.0);

    std::vector<Task> tasks;
    tasks.reserve(cfg.m);
    for (long long i = 0; i < cfg.m; ++i) {
        Task t;
        t.id = i;
        t.loc = draw_location(rng, cfg.dist);
        double st = uni(rng) * 24.0;
        double rt = cfg.rt_lo + uni(rng) * (cfg.rt_hi - cfg.rt_lo);
        t.start = st;
        t.end = st + rt;
        t.beta = cfg.beta_lo + uni(rng) * (cfg.beta_hi - cfg.beta_lo);
        tasks.push_back(t);
    }

    std::normal_distribution<double> conf_gauss((cfg.p_lo + cfg.p_hi) / 2.0, 0.02);
    std::normal_distribution<double> speed_gauss((cfg.v_lo + cfg.v_hi) / 2.0,
                                                 (cfg.v_hi - cfg.v_lo) / 4.0);
    std::vector<Worker> workers;
    workers.reserve(cfg.n);
    for (long long j = 0; j < cfg.n; ++j) {
        Worker w;
        w.id = j;
        w.loc = draw_location(rng, cfg.dist);
        w.velocity = cfg.gaussian_speed
                         ? std::clamp(speed_gauss(rng), cfg.v_lo, cfg.v_hi)
                         : cfg.v_lo + uni(rng) * (cfg.v_hi - cfg.v_lo);
        if (!(w.velocity > 0.0)) w.velocity = cfg.v_lo;
        w.angle_lo = uni(rng) * two_pi;
        w.angle_hi = w.angle_lo + cfg.width_hi * (1.0 - uni(rng));  // width in (0, width_hi]
        w.confidence = std::clamp(conf_gauss(rng), cfg.p_lo, cfg.p_hi);
        w.available_at = 0.0;
        workers.push_back(w);
    }
    return {std::move(tasks), std::move(workers)};
}

}  // namespace rdbsc
