#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "voronet/errors.hpp"
#include "voronet/model.hpp"
#include "voronet/monte_carlo.hpp"

using namespace voronet;
using namespace voronet::montecarlo;

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSecondMomentMirpa = 1.1220394886503352;
constexpr double kSecondMomentMarpa = 1.2801760;

NetworkModel det_model(double alpha = 4.0, double density = 1.0, double power = 1.0) {
    NetworkModel m;
    m.tiers.push_back({density, WeightDistribution::deterministic(power)});
    m.pathloss.alpha = alpha;
    return m;
}

NetworkModel mirpa_model() {
    NetworkModel m;
    m.tiers.push_back({1.0, WeightDistribution::exponential(1.0, 1.0)});
    m.pathloss.alpha = 2.0;
    return m;
}

MCConfig small_cfg(std::uint64_t seed = 42) {
    MCConfig cfg;
    cfg.seed = seed;
    cfg.realizations = 2000;
    cfg.points_per_realization = 128;
    return cfg;
}

}  // namespace

TEST_CASE("ppp sample count is Poisson with the right mean") {
    Rng rng(1001);
    const double density = 1.0, radius = 10.0;
    const double mean = density * kPi * radius * radius;
    constexpr int draws = 10000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < draws; ++i) {
        const double n = static_cast<double>(sample_ppp(density, radius, rng).size());
        sum += n;
        sum2 += n * n;
    }
    const double avg = sum / draws;
    const double var = (sum2 - draws * avg * avg) / (draws - 1);
    const double sigma_avg = std::sqrt(mean / draws);
    CHECK(std::abs(avg - mean) < 3.0 * sigma_avg);
    CHECK(var / avg > 0.95);  // Fano factor of a Poisson count
    CHECK(var / avg < 1.05);
}

TEST_CASE("ppp counts in disjoint regions are uncorrelated") {
    Rng rng(1002);
    constexpr int draws = 10000;
    double sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (int i = 0; i < draws; ++i) {
        const auto pts = sample_ppp(1.0, 6.0, rng);
        double upper = 0.0, lower = 0.0;
        for (const auto& p : pts) (p[1] >= 0.0 ? upper : lower) += 1.0;
        sx += upper;
        sy += lower;
        sxx += upper * upper;
        syy += lower * lower;
        sxy += upper * lower;
    }
    const double n = draws;
    const double cov = sxy / n - (sx / n) * (sy / n);
    const double vx = sxx / n - (sx / n) * (sx / n);
    const double vy = syy / n - (sy / n) * (sy / n);
    const double rho = cov / std::sqrt(vx * vy);
    CHECK(std::abs(rho) < 0.03);
}

TEST_CASE("ppp points are spread uniformly") {
    // Mean squared radius of a uniform point on a disk is R^2/2.
    Rng rng(1003);
    double sum_r2 = 0.0;
    std::uint64_t count = 0;
    for (int i = 0; i < 200; ++i) {
        for (const auto& p : sample_ppp(2.0, 5.0, rng)) {
            sum_r2 += p[0] * p[0] + p[1] * p[1];
            ++count;
        }
    }
    CHECK(sum_r2 / static_cast<double>(count) == doctest::Approx(12.5).epsilon(0.02));
}

TEST_CASE("realizations carry the typical station first") {
    Rng rng(1004);
    const auto m = det_model();
    const auto real = sample_realization(m, 1, 5.0, rng);
    REQUIRE_FALSE(real.bs.empty());
    CHECK(real.bs[0].x == 0.0);
    CHECK(real.bs[0].y == 0.0);
    CHECK(real.bs[0].tier == 1);
}

TEST_CASE("realization tier counts follow the densities") {
    NetworkModel m;
    m.tiers.push_back({0.5, WeightDistribution::deterministic(1.0)});
    m.tiers.push_back({2.0, WeightDistribution::deterministic(1.0)});
    m.pathloss.alpha = 4.0;
    Rng rng(1005);
    const double radius = 4.0;
    const double area = kPi * radius * radius;
    constexpr int draws = 400;
    double c1 = 0.0, c2 = 0.0;
    for (int i = 0; i < draws; ++i) {
        const auto real = sample_realization(m, 2, radius, rng);
        CHECK(real.bs[0].tier == 2);
        for (std::size_t j = 1; j < real.bs.size(); ++j) {
            (real.bs[j].tier == 1 ? c1 : c2) += 1.0;
        }
    }
    const double m1 = 0.5 * area, m2 = 2.0 * area;
    CHECK(std::abs(c1 / draws - m1) < 4.0 * std::sqrt(m1 / draws));
    CHECK(std::abs(c2 / draws - m2) < 4.0 * std::sqrt(m2 / draws));
}

TEST_CASE("association with a single station is that station") {
    Realization real;
    real.bs.push_back({0.0, 0.0, 1});
    Rng rng(1006);
    const auto m = det_model();
    CHECK(associate({1.0, 2.0}, real, m, rng) == 0);
}

TEST_CASE("equal deterministic powers mean nearest-station association") {
    Rng rng(1007);
    const auto m = det_model();
    Realization real;
    for (int i = 0; i < 20; ++i) {
        real.bs.push_back({rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0), 1});
    }
    for (int trial = 0; trial < 200; ++trial) {
        const std::array<double, 2> x{rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)};
        std::size_t nearest = 0;
        double best = 1e300;
        for (std::size_t i = 0; i < real.bs.size(); ++i) {
            const double dx = real.bs[i].x - x[0], dy = real.bs[i].y - x[1];
            const double d2 = dx * dx + dy * dy;
            if (d2 < best) {
                best = d2;
                nearest = i;
            }
        }
        CHECK(associate(x, real, m, rng) == nearest);
    }
}

TEST_CASE("association is invariant under a common weight scale") {
    // Same stream, powers times 37: every instantaneous weight scales by 37,
    // the argmax cannot move.
    NetworkModel base;
    base.tiers.push_back({1.0, WeightDistribution::exponential(1.0, 1.0)});
    base.pathloss.alpha = 4.0;
    NetworkModel scaled;
    scaled.tiers.push_back({1.0, WeightDistribution::exponential(1.0, 37.0)});
    scaled.pathloss.alpha = 4.0;

    Rng setup(1008);
    Realization real;
    real.bs.push_back({0.0, 0.0, 1});
    for (int i = 0; i < 15; ++i) {
        real.bs.push_back({setup.uniform(-3.0, 3.0), setup.uniform(-3.0, 3.0), 1});
    }
    for (int trial = 0; trial < 200; ++trial) {
        const std::array<double, 2> x{setup.uniform(-3.0, 3.0), setup.uniform(-3.0, 3.0)};
        Rng ra(5000 + static_cast<std::uint64_t>(trial));
        Rng rb(5000 + static_cast<std::uint64_t>(trial));
        CHECK(associate(x, real, base, ra) == associate(x, real, scaled, rb));
    }
}

TEST_CASE("moment estimates are deterministic in the seed") {
    const auto m = det_model();
    auto cfg = small_cfg(7);
    cfg.realizations = 200;
    const auto a = estimate_moment(m, 1, 1, cfg);
    const auto b = estimate_moment(m, 1, 1, cfg);
    CHECK(a.value == b.value);
    CHECK(a.std_error == b.std_error);
    CHECK(a.seed == 7);
    CHECK(a.realizations == 200);
}

TEST_CASE("the estimator is the documented U-statistic, reproduced replica-exactly") {
    // Rebuild the estimate from public pieces: stream i, one realization,
    // N window points in draw order, hit counting, falling-factorial ratio.
    const auto m = det_model();
    MCConfig cfg;
    cfg.seed = 99;
    cfg.realizations = 50;
    cfg.points_per_realization = 64;
    const double window = default_window_radius(m);
    const double sim_radius = 2.0 * window;
    const double area = kPi * window * window;
    const std::uint32_t N = cfg.points_per_realization;

    double sum_p1 = 0.0, sum_p2 = 0.0;
    for (std::uint64_t i = 0; i < cfg.realizations; ++i) {
        Rng rng = Rng::for_stream(cfg.seed, i);
        const Realization real = sample_realization(m, 1, sim_radius, rng);
        std::uint64_t hits = 0;
        for (std::uint32_t n = 0; n < N; ++n) {
            const double r = window * std::sqrt(rng.uniform());
            const double t = 2.0 * kPi * rng.uniform();
            const std::array<double, 2> pt{r * std::cos(t), r * std::sin(t)};
            if (associate(pt, real, m, rng) == 0) ++hits;
        }
        const double h = static_cast<double>(hits);
        sum_p1 += area * (h / N);
        sum_p2 += hits >= 2 ? area * area * (h / N) * ((h - 1.0) / (N - 1.0)) : 0.0;
    }
    const auto est1 = estimate_moment(m, 1, 1, cfg);
    const auto est2 = estimate_moment(m, 1, 2, cfg);
    CHECK(est1.value == doctest::Approx(sum_p1 / 50.0).epsilon(1e-12));
    CHECK(est2.value == doctest::Approx(sum_p2 / 50.0).epsilon(1e-12));
}

TEST_CASE("first moment of the nearest-station cell") {
    const auto est = estimate_moment(det_model(), 1, 1, small_cfg());
    CHECK(std::abs(est.value - 1.0) < 3.0 * est.std_error);
}

TEST_CASE("second moment of the nearest-station cell") {
    const auto est = estimate_moment(det_model(), 1, 2, small_cfg());
    CHECK(std::abs(est.value - kSecondMomentMarpa) < 3.0 * est.std_error);
}

TEST_CASE("second moment under instantaneous-power association at alpha = 2") {
    const auto est = estimate_moment(mirpa_model(), 1, 2, small_cfg());
    CHECK(std::abs(est.value - kSecondMomentMirpa) < 3.0 * est.std_error);
}

TEST_CASE("tier means partition the plane, by simulation") {
    NetworkModel m;
    m.tiers.push_back({1.0, WeightDistribution::deterministic(16.0)});
    m.tiers.push_back({5.0, WeightDistribution::deterministic(1.0)});
    m.pathloss.alpha = 4.0;
    const auto e1 = estimate_moment(m, 1, 1, small_cfg(11));
    const auto e2 = estimate_moment(m, 2, 1, small_cfg(11));
    CHECK(std::abs(e1.value - 4.0 / 9.0) < 3.0 * e1.std_error);
    CHECK(std::abs(e2.value - 1.0 / 9.0) < 3.0 * e2.std_error);
    const double part = 1.0 * e1.value + 5.0 * e2.value;
    const double sigma = std::sqrt(std::pow(1.0 * e1.std_error, 2) +
                                   std::pow(5.0 * e2.std_error, 2));
    CHECK(std::abs(part - 1.0) < 3.0 * sigma);
}

TEST_CASE("void probability limits and monotonicity") {
    const auto m = det_model();
    auto cfg = small_cfg(3);
    const auto tiny = estimate_void_prob(m, 1, 1e-9, cfg);
    CHECK(tiny.value > 0.9999);

    const auto a = estimate_void_prob(m, 1, 0.05, cfg);
    const auto b = estimate_void_prob(m, 1, 0.2, cfg);
    const auto c = estimate_void_prob(m, 1, 0.5, cfg);
    CHECK(a.value >= b.value - 2.0 * (a.std_error + b.std_error));
    CHECK(b.value >= c.value - 2.0 * (b.std_error + c.std_error));
}

TEST_CASE("void probability near the Gamma-model prediction at unit load") {
    // The Gamma approximation gives (9/7)^{-7/2} = 0.41495; the simulation
    // sits within about 1.8% of it (the approximation's own error).
    const auto m = det_model();
    MCConfig cfg;
    cfg.seed = 5;
    cfg.realizations = 10000;
    cfg.points_per_realization = 128;
    const auto v = estimate_void_prob(m, 1, 1.0, cfg);
    CHECK(std::abs(v.value - 0.41495) < 0.02);
}

TEST_CASE("a too-small window is reported, not silently truncated") {
    const auto m = det_model();
    MCConfig cfg;
    cfg.seed = 2;
    cfg.realizations = 200;
    cfg.points_per_realization = 32;
    cfg.window_radius = 0.4;
    CHECK_THROWS_AS(estimate_moment(m, 1, 1, cfg), WindowTooSmallError);
}

TEST_CASE("estimator precondition checks") {
    const auto m = det_model();
    auto cfg = small_cfg();
    CHECK_THROWS_AS(estimate_moment(m, 0, 1, cfg), DomainError);
    CHECK_THROWS_AS(estimate_moment(m, 2, 1, cfg), DomainError);
    CHECK_THROWS_AS(estimate_moment(m, 1, 0, cfg), DomainError);
    auto few = cfg;
    few.points_per_realization = 2;
    CHECK_THROWS_AS(estimate_moment(m, 1, 2, few), DomainError);
    CHECK_THROWS_AS(estimate_void_prob(m, 1, -0.1, cfg), DomainError);
}
