#include "voronet/monte_carlo.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "voronet/errors.hpp"
#include "voronet/parallel.hpp"

namespace voronet::montecarlo {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct WindowGeometry {
    double window = 0.0;
    double sim_radius = 0.0;
};

WindowGeometry resolve_window(const NetworkModel& model, const MCConfig& cfg) {
    const double window = cfg.window_radius > 0.0 ? cfg.window_radius
                                                  : default_window_radius(model);
    const double guard = cfg.guard_radius > 0.0 ? cfg.guard_radius : window;
    if (guard < window) {
        throw DomainError("guard_radius must be at least window_radius");
    }
    return {window, window + guard};
}

std::array<double, 2> uniform_in_disk(double radius, Rng& rng) {
    const double r = radius * std::sqrt(rng.uniform());
    const double t = 2.0 * kPi * rng.uniform();
    return {r * std::cos(t), r * std::sin(t)};
}

// Association metric w / d^alpha, with the common exponents special-cased
// since this sits in the innermost simulation loop.
double metric(double w, double d2, double alpha) {
    if (alpha == 2.0) return w / d2;
    if (alpha == 4.0) return w / (d2 * d2);
    return w / std::pow(d2, 0.5 * alpha);
}

// Shared driver: runs one value per realization through `one`, reduces with
// pairwise sums for worker-count independence, and applies the edge-effect
// check (an associated point within 5% of the window boundary flags the
// realization; more than 1% flagged realizations aborts).
MCEstimate run_realizations(const NetworkModel& model, const MCConfig& cfg,
                            const std::function<double(Rng&, bool&)>& one) {
    if (cfg.realizations < 1) throw DomainError("realizations must be >= 1");
    const std::uint64_t n = cfg.realizations;
    std::vector<double> values(n);
    std::vector<double> squares(n);
    std::vector<unsigned char> edge(n, 0);
    parallel_for(0, n, 0, [&](std::uint64_t i) {
        Rng rng = Rng::for_stream(cfg.seed, i);
        bool near_edge = false;
        const double v = one(rng, near_edge);
        values[i] = v;
        squares[i] = v * v;
        edge[i] = near_edge ? 1 : 0;
    });
    std::uint64_t edge_count = 0;
    for (unsigned char e : edge) edge_count += e;
    if (edge_count * 100 > n) {
        std::ostringstream msg;
        msg << "window too small: " << edge_count << " of " << n
            << " realizations had cell points within 5% of the window boundary";
        throw WindowTooSmallError(msg.str());
    }
    const double sum = pairwise_sum(values);
    const double sum2 = pairwise_sum(squares);
    const double mean = sum / static_cast<double>(n);
    MCEstimate est;
    est.value = mean;
    if (n > 1) {
        const double var =
            std::max(0.0, (sum2 - static_cast<double>(n) * mean * mean) /
                              static_cast<double>(n - 1));
        est.std_error = std::sqrt(var / static_cast<double>(n));
    }
    est.realizations = n;
    est.seed = cfg.seed;
    return est;
}

}  // namespace

double default_window_radius(const NetworkModel& model) {
    return 6.0 / std::sqrt(model.total_density() * kPi);
}

std::vector<std::array<double, 2>> sample_ppp(double density, double radius, Rng& rng) {
    if (!(density > 0.0) || !(radius > 0.0)) {
        throw DomainError("sample_ppp needs density > 0 and radius > 0");
    }
    const std::uint64_t n = rng.poisson(density * kPi * radius * radius);
    std::vector<std::array<double, 2>> pts(n);
    for (auto& p : pts) p = uniform_in_disk(radius, rng);
    return pts;
}

Realization sample_realization(const NetworkModel& model, int k, double sim_radius, Rng& rng) {
    Realization out;
    out.bs.push_back({0.0, 0.0, k});
    for (std::size_t q = 0; q < model.num_tiers(); ++q) {
        const auto pts = sample_ppp(model.tiers[q].density, sim_radius, rng);
        for (const auto& p : pts) out.bs.push_back({p[0], p[1], static_cast<int>(q + 1)});
    }
    return out;
}

std::size_t associate(const std::array<double, 2>& x, const Realization& realization,
                      const NetworkModel& model, Rng& rng) {
    if (realization.bs.empty()) throw DomainError("cannot associate against an empty realization");
    const double alpha = model.pathloss.alpha;
    std::size_t best = 0;
    double best_metric = -1.0;
    for (std::size_t i = 0; i < realization.bs.size(); ++i) {
        const Station& s = realization.bs[i];
        const auto& law = model.tiers[static_cast<std::size_t>(s.tier - 1)].weights;
        const double w = law.sample(rng);
        const double dx = s.x - x[0], dy = s.y - x[1];
        const double d2 = dx * dx + dy * dy;
        if (d2 == 0.0) return i;  // coincident point: that station wins outright
        const double m = metric(w, d2, alpha);
        if (m > best_metric) {
            best_metric = m;
            best = i;
        }
    }
    return best;
}

MCEstimate estimate_moment(const NetworkModel& model, int k, int p, const MCConfig& cfg) {
    require_valid(model);
    if (k < 1 || static_cast<std::size_t>(k) > model.num_tiers()) {
        throw DomainError("tier index out of range");
    }
    if (p < 1) throw DomainError("moment order must be >= 1");
    if (model.dimension != 2) throw DomainError("simulation supports dimension 2 only");
    if (cfg.points_per_realization < static_cast<std::uint32_t>(p + 1)) {
        throw DomainError("points_per_realization must be at least p + 1");
    }
    const WindowGeometry geo = resolve_window(model, cfg);
    const double window_area_p = std::pow(kPi * geo.window * geo.window, p);
    const std::uint32_t N = cfg.points_per_realization;
    auto one = [&](Rng& rng, bool& near_edge) {
        const Realization real = sample_realization(model, k, geo.sim_radius, rng);
        const double edge_r2 = 0.95 * 0.95 * geo.window * geo.window;
        std::uint64_t hits = 0;
        for (std::uint32_t i = 0; i < N; ++i) {
            const auto pt = uniform_in_disk(geo.window, rng);
            if (associate(pt, real, model, rng) == 0) {
                ++hits;
                if (pt[0] * pt[0] + pt[1] * pt[1] > edge_r2) near_edge = true;
            }
        }
        // Ordered distinct p-tuples of hits over ordered distinct p-tuples of
        // points: the unbiased U-statistic for V^p.
        double ratio = 1.0;
        for (int j = 0; j < p; ++j) {
            if (hits < static_cast<std::uint64_t>(j + 1)) {
                ratio = 0.0;
                break;
            }
            ratio *= static_cast<double>(hits - static_cast<std::uint64_t>(j)) /
                     static_cast<double>(N - static_cast<std::uint32_t>(j));
        }
        return window_area_p * ratio;
    };
    return run_realizations(model, cfg, one);
}

MCEstimate estimate_void_prob(const NetworkModel& model, int k, double user_density,
                              const MCConfig& cfg) {
    require_valid(model);
    if (k < 1 || static_cast<std::size_t>(k) > model.num_tiers()) {
        throw DomainError("tier index out of range");
    }
    if (!(user_density >= 0.0)) throw DomainError("user_density must be >= 0");
    if (model.dimension != 2) throw DomainError("simulation supports dimension 2 only");
    const WindowGeometry geo = resolve_window(model, cfg);
    auto one = [&](Rng& rng, bool& near_edge) {
        const Realization real = sample_realization(model, k, geo.sim_radius, rng);
        const double edge_r2 = 0.95 * 0.95 * geo.window * geo.window;
        const std::uint64_t count = rng.poisson(user_density * kPi * geo.window * geo.window);
        bool any = false;
        for (std::uint64_t i = 0; i < count; ++i) {
            const auto pt = uniform_in_disk(geo.window, rng);
            if (associate(pt, real, model, rng) == 0) {
                any = true;
                if (pt[0] * pt[0] + pt[1] * pt[1] > edge_r2) near_edge = true;
            }
        }
        return any ? 0.0 : 1.0;
    };
    return run_realizations(model, cfg, one);
}

}  // namespace voronet::montecarlo
