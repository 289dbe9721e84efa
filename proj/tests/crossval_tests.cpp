#include <cmath>

#include "doctest.h"
#include "voronet/analytic.hpp"
#include "voronet/model.hpp"
#include "voronet/monte_carlo.hpp"
#include "voronet/quadrature.hpp"

// Master cross-validation: wherever two independent computation paths cover
// the same configuration, they must agree within combined reported errors.

using namespace voronet;

namespace {

NetworkModel one_tier(WeightDistribution w, double alpha, double density = 1.0) {
    NetworkModel m;
    m.tiers.push_back({density, std::move(w)});
    m.pathloss.alpha = alpha;
    return m;
}

MCConfig mc_cfg(std::uint64_t seed) {
    MCConfig cfg;
    cfg.seed = seed;
    cfg.realizations = 2000;
    cfg.points_per_realization = 128;
    return cfg;
}

bool agree(double a, double ea, double b, double eb) {
    return std::abs(a - b) <= 3.0 * (ea + eb) + 1e-12;
}

}  // namespace

TEST_CASE("first moment: every path meets the closed form") {
    QuadConfig cfg;
    cfg.rel_tol = 1e-4;

    const auto det = one_tier(WeightDistribution::deterministic(1.0), 4.0);
    CHECK(quadrature::moment_marpa(det, 1, 1, cfg).value == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(quadrature::moment_general(det, 1, 1, cfg).value == doctest::Approx(1.0).epsilon(1e-3));

    const auto exp2 = one_tier(WeightDistribution::exponential(1.0, 1.0), 2.0);
    CHECK(quadrature::moment_mirpa_alpha2(exp2, 1, 1, cfg).value ==
          doctest::Approx(1.0).epsilon(1e-3));

    const auto exp4 = one_tier(WeightDistribution::exponential(1.0, 1.0), 4.0);
    CHECK(quadrature::moment_general(exp4, 1, 1, cfg).value ==
          doctest::Approx(1.0).epsilon(1e-3));

    const auto mc = montecarlo::estimate_moment(det, 1, 1, mc_cfg(21));
    CHECK(std::abs(mc.value - 1.0) <= 3.0 * mc.std_error);
}

TEST_CASE("second moment, instantaneous rule: series vs quadrature vs simulation") {
    const auto m = one_tier(WeightDistribution::exponential(1.0, 1.0), 2.0);
    const auto series = analytic::second_moment_mirpa_series(1.0, 1e-12);
    QuadConfig cfg;
    cfg.rel_tol = 1e-5;
    const auto quad = quadrature::moment_mirpa_alpha2(m, 1, 2, cfg);
    const auto mc = montecarlo::estimate_moment(m, 1, 2, mc_cfg(22));
    CHECK(agree(series.value, series.error, quad.value, quad.error + 1e-4));
    CHECK(std::abs(mc.value - series.value) <= 3.0 * mc.std_error);
}

TEST_CASE("second moment, nearest-station rule: quadrature vs general vs simulation") {
    const auto m = one_tier(WeightDistribution::deterministic(1.0), 4.0);
    QuadConfig cfg;
    cfg.rel_tol = 1e-5;
    const auto marpa = quadrature::moment_marpa(m, 1, 2, cfg);
    const auto general = quadrature::moment_general(m, 1, 2, cfg);
    const auto mc = montecarlo::estimate_moment(m, 1, 2, mc_cfg(23));
    CHECK(agree(marpa.value, marpa.error + 1e-5, general.value, general.error + 1e-5));
    CHECK(std::abs(mc.value - marpa.value) <= 3.0 * (mc.std_error + marpa.error));
}

TEST_CASE("jensen inequality holds on every tested configuration") {
    QuadConfig cfg;
    cfg.rel_tol = 1e-4;
    {
        const auto m = one_tier(WeightDistribution::deterministic(1.0), 4.0);
        const double p1 = quadrature::moment_marpa(m, 1, 1, cfg).value;
        const double p2 = quadrature::moment_marpa(m, 1, 2, cfg).value;
        CHECK(p2 >= p1 * p1 - 1e-6);
    }
    {
        const auto m = one_tier(WeightDistribution::exponential(1.0, 1.0), 2.0);
        const double p1 = quadrature::moment_mirpa_alpha2(m, 1, 1, cfg).value;
        const double p2 = quadrature::moment_mirpa_alpha2(m, 1, 2, cfg).value;
        CHECK(p2 >= p1 * p1 - 1e-6);
    }
    {
        NetworkModel m;
        m.tiers.push_back({1.0, WeightDistribution::deterministic(16.0)});
        m.tiers.push_back({5.0, WeightDistribution::deterministic(1.0)});
        m.pathloss.alpha = 4.0;
        const double p1 = quadrature::moment_marpa(m, 1, 1, cfg).value;
        const double p2 = quadrature::moment_marpa(m, 1, 2, cfg).value;
        CHECK(p2 >= p1 * p1 - 1e-6);
    }
}

TEST_CASE("density scaling on the un-normalized nearest-station path") {
    // E[V^p] scales as lambda^{-p}; the raw path computes it from scratch at
    // each density rather than by construction.
    QuadConfig cfg;
    cfg.rel_tol = 1e-5;
    const auto base =
        quadrature::detail::moment_marpa_raw(one_tier(WeightDistribution::deterministic(1.0), 4.0),
                                             1, 2, cfg);
    for (double c : {0.5, 2.0, 4.0}) {
        const auto scaled = quadrature::detail::moment_marpa_raw(
            one_tier(WeightDistribution::deterministic(1.0), 4.0, c), 1, 2, cfg);
        CHECK(scaled.value == doctest::Approx(base.value / (c * c)).epsilon(5e-4));
    }
}

TEST_CASE("density scaling on the un-normalized alpha=2 kernel") {
    QuadConfig cfg;
    cfg.rel_tol = 1e-4;
    const auto mk = [](double density) {
        return one_tier(WeightDistribution::exponential(1.0, 1.0), 2.0, density);
    };
    const auto base1 = quadrature::detail::moment_mirpa_alpha2_raw(mk(1.0), 1, 1, cfg);
    const auto base2 = quadrature::detail::moment_mirpa_alpha2_raw(mk(1.0), 1, 2, cfg);
    for (double c : {0.5, 2.0, 4.0}) {
        const auto s1 = quadrature::detail::moment_mirpa_alpha2_raw(mk(c), 1, 1, cfg);
        const auto s2 = quadrature::detail::moment_mirpa_alpha2_raw(mk(c), 1, 2, cfg);
        CHECK(s1.value == doctest::Approx(base1.value / c).epsilon(1e-3));
        CHECK(s2.value == doctest::Approx(base2.value / (c * c)).epsilon(1e-3));
    }
}

TEST_CASE("density scaling on the un-normalized general path") {
    QuadConfig cfg;
    cfg.rel_tol = 1e-4;
    const auto mk = [](double density) {
        return one_tier(WeightDistribution::exponential(1.0, 1.0), 4.0, density);
    };
    const auto base = quadrature::detail::moment_general_raw(mk(1.0), 1, 1, cfg);
    for (double c : {0.5, 2.0, 4.0}) {
        const auto scaled = quadrature::detail::moment_general_raw(mk(c), 1, 1, cfg);
        CHECK(scaled.value == doctest::Approx(base.value / c).epsilon(1e-3));
    }
}

TEST_CASE("a common power rescaling moves no moment") {
    QuadConfig cfg;
    cfg.rel_tol = 1e-4;
    NetworkModel a;
    a.tiers.push_back({1.0, WeightDistribution::deterministic(16.0)});
    a.tiers.push_back({5.0, WeightDistribution::deterministic(1.0)});
    a.pathloss.alpha = 4.0;
    NetworkModel b;
    b.tiers.push_back({1.0, WeightDistribution::deterministic(160.0)});
    b.tiers.push_back({5.0, WeightDistribution::deterministic(10.0)});
    b.pathloss.alpha = 4.0;
    for (int p = 1; p <= 2; ++p) {
        const auto va = quadrature::moment_marpa(a, 1, p, cfg);
        const auto vb = quadrature::moment_marpa(b, 1, p, cfg);
        CHECK(vb.value == doctest::Approx(va.value).epsilon(1e-3));
    }

    NetworkModel c;
    c.tiers.push_back({1.0, WeightDistribution::exponential(1.0, 1.0)});
    c.tiers.push_back({2.0, WeightDistribution::exponential(2.0, 3.0)});
    c.pathloss.alpha = 2.0;
    NetworkModel d;
    d.tiers.push_back({1.0, WeightDistribution::exponential(1.0, 2.0)});
    d.tiers.push_back({2.0, WeightDistribution::exponential(2.0, 6.0)});
    d.pathloss.alpha = 2.0;
    const auto vc = quadrature::moment_mirpa_alpha2(c, 1, 2, cfg);
    const auto vd = quadrature::moment_mirpa_alpha2(d, 1, 2, cfg);
    CHECK(vd.value == doctest::Approx(vc.value).epsilon(1e-3));
}

TEST_CASE("tier means from quadrature partition the plane") {
    QuadConfig cfg;
    cfg.rel_tol = 1e-4;
    {
        NetworkModel m;
        m.tiers.push_back({1.0, WeightDistribution::deterministic(16.0)});
        m.tiers.push_back({5.0, WeightDistribution::deterministic(1.0)});
        m.pathloss.alpha = 4.0;
        const double sum = 1.0 * quadrature::moment_marpa(m, 1, 1, cfg).value +
                           5.0 * quadrature::moment_marpa(m, 2, 1, cfg).value;
        CHECK(sum == doctest::Approx(1.0).epsilon(2e-3));
    }
    {
        NetworkModel m;
        m.tiers.push_back({1.0, WeightDistribution::exponential(1.0, 1.0)});
        m.tiers.push_back({2.0, WeightDistribution::exponential(2.0, 3.0)});
        m.pathloss.alpha = 2.0;
        const double sum = 1.0 * quadrature::moment_mirpa_alpha2(m, 1, 1, cfg).value +
                           2.0 * quadrature::moment_mirpa_alpha2(m, 2, 1, cfg).value;
        CHECK(sum == doctest::Approx(1.0).epsilon(2e-3));
    }
}

TEST_CASE("mixed-law model: closed mean vs general path vs simulation") {
    NetworkModel m;
    m.tiers.push_back({1.0, WeightDistribution::deterministic(2.0)});
    m.tiers.push_back({1.0, WeightDistribution::exponential(1.0, 1.0)});
    m.pathloss.alpha = 4.0;
    const double closed = analytic::mean_cell_area(m, 1).value;
    QuadConfig cfg;
    cfg.rel_tol = 1e-3;
    CHECK(quadrature::moment_general(m, 1, 1, cfg).value ==
          doctest::Approx(closed).epsilon(2e-3));
    const auto mc = montecarlo::estimate_moment(m, 1, 1, mc_cfg(24));
    CHECK(std::abs(mc.value - closed) <= 3.0 * mc.std_error);
}
