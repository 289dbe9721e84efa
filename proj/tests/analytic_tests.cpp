#include <cmath>

#include "doctest.h"
#include "voronet/analytic.hpp"
#include "voronet/cubature.hpp"
#include "voronet/errors.hpp"
#include "voronet/model.hpp"

using namespace voronet;

namespace {

// Single-tier MIRPA second moment at unit density, frozen from the series at
// tol 1e-14 and confirmed by the angular-integral form and quadrature.
constexpr double kSecondMomentMirpa = 1.1220394886503352;

NetworkModel single_tier(WeightDistribution w, double alpha = 4.0, double density = 1.0) {
    NetworkModel m;
    m.tiers.push_back({density, std::move(w)});
    m.pathloss.alpha = alpha;
    return m;
}

// Independent oracle for E[W^e] at e > 0: the tail identity
// E[W^e] = e * integral_0^inf y^{e-1} (1 - G(y)) dy.
double tail_moment(const WeightDistribution& law, double e, double upper) {
    const auto r = cubature::integrate_1d(
        [&](double y) { return e * std::pow(y, e - 1.0) * (1.0 - law.cdf(y)); }, 0.0, upper, 1e-10,
        1e-13, 10000000);
    REQUIRE(r.converged);
    return r.value;
}

}  // namespace

TEST_CASE("fractional weight moments match the tail-identity oracle") {
    CHECK(analytic::fractional_weight_moment(WeightDistribution::deterministic(4.0), 0.5) ==
          doctest::Approx(2.0).epsilon(1e-15));

    const auto expo = WeightDistribution::exponential(2.0, 1.0);
    CHECK(analytic::fractional_weight_moment(expo, 0.5) ==
          doctest::Approx(tail_moment(expo, 0.5, 30.0)).epsilon(1e-8));
    CHECK(analytic::fractional_weight_moment(expo, 0.5) ==
          doctest::Approx(std::tgamma(1.5) / std::sqrt(2.0)).epsilon(1e-13));

    const auto det = WeightDistribution::deterministic(2.5);
    CHECK(analytic::fractional_weight_moment(det, 1.3) ==
          doctest::Approx(tail_moment(det, 1.3, 2.5)).epsilon(1e-8));
}

TEST_CASE("mean cell area is 1/lambda for a single tier") {
    for (const auto& law :
         {WeightDistribution::deterministic(3.0), WeightDistribution::exponential(2.0, 5.0)}) {
        auto m = single_tier(law);
        const auto r = analytic::mean_cell_area(m, 1);
        CHECK(r.value == 1.0);  // x / (1 * x) is exact in IEEE arithmetic
        CHECK(r.error == 0.0);
        CHECK(r.method == Method::ClosedForm);
        CHECK(r.converged);

        m.tiers[0].density = 2.0;
        CHECK(analytic::mean_cell_area(m, 1).value == 0.5);
    }
}

TEST_CASE("two-tier mean with unequal powers") {
    // E[W^{2/alpha}] = P^{1/2} at alpha = 4: tier 1 holds 4/(4+5) of the plane.
    NetworkModel m;
    m.tiers.push_back({1.0, WeightDistribution::deterministic(16.0)});
    m.tiers.push_back({5.0, WeightDistribution::deterministic(1.0)});
    m.pathloss.alpha = 4.0;
    CHECK(analytic::mean_cell_area(m, 1).value == doctest::Approx(4.0 / 9.0).epsilon(1e-15));
    CHECK(analytic::mean_cell_area(m, 2).value == doctest::Approx(1.0 / 9.0).epsilon(1e-15));
}

TEST_CASE("mean generalizes to higher dimension") {
    NetworkModel m;
    m.tiers.push_back({1.0, WeightDistribution::deterministic(16.0)});
    m.tiers.push_back({2.0, WeightDistribution::deterministic(1.0)});
    m.pathloss.alpha = 4.0;
    m.dimension = 3;
    // E[W^{3/4}]: 16^{3/4} = 8 for tier 1.
    CHECK(analytic::mean_cell_area(m, 1).value == doctest::Approx(8.0 / 10.0).epsilon(1e-15));
}

TEST_CASE("mean is invariant under a common power rescaling") {
    NetworkModel a;
    a.tiers.push_back({0.7, WeightDistribution::deterministic(2.0)});
    a.tiers.push_back({1.3, WeightDistribution::exponential(1.5, 0.8)});
    a.pathloss.alpha = 3.5;
    NetworkModel b = a;
    const double c = 37.0;
    b.tiers[0].weights = WeightDistribution::deterministic(2.0 * c);
    b.tiers[1].weights = WeightDistribution::exponential(1.5, 0.8 * c);
    for (int k = 1; k <= 2; ++k) {
        CHECK(analytic::mean_cell_area(a, k).value ==
              doctest::Approx(analytic::mean_cell_area(b, k).value).epsilon(1e-12));
    }
}

TEST_CASE("tier means partition the plane") {
    NetworkModel m;
    m.tiers.push_back({0.4, WeightDistribution::deterministic(5.0)});
    m.tiers.push_back({1.1, WeightDistribution::exponential(2.0, 1.0)});
    m.tiers.push_back({2.3, WeightDistribution::exponential(0.7, 3.0)});
    m.pathloss.alpha = 4.5;
    double sum = 0.0;
    for (int k = 1; k <= 3; ++k) sum += m.tiers[k - 1].density * analytic::mean_cell_area(m, k).value;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("density scaling of the mean") {
    NetworkModel m;
    m.tiers.push_back({0.9, WeightDistribution::deterministic(2.0)});
    m.tiers.push_back({1.6, WeightDistribution::deterministic(1.0)});
    m.pathloss.alpha = 4.0;
    const double base = analytic::mean_cell_area(m, 1).value;
    NetworkModel scaled = m;
    scaled.tiers[0].density *= 4.0;
    scaled.tiers[1].density *= 4.0;
    CHECK(analytic::mean_cell_area(scaled, 1).value == doctest::Approx(base / 4.0).epsilon(1e-13));
}

TEST_CASE("second moment series value and scaling") {
    const auto r = analytic::second_moment_mirpa_series(1.0, 1e-12);
    CHECK(r.value == doctest::Approx(kSecondMomentMirpa).epsilon(1e-11));
    CHECK(r.method == Method::Series);
    CHECK(r.converged);
    CHECK(r.value > 1.0);  // Jensen, strictly: E[V^2] > E[V]^2 = 1

    const auto half = analytic::second_moment_mirpa_series(2.0, 1e-12);
    CHECK(half.value == doctest::Approx(r.value / 4.0).epsilon(1e-14));
}

TEST_CASE("series partial sums match hand arithmetic") {
    // B(2) = 1/6, B(3) = 1/30, B(4) = 1/140: the first three terms are
    // 1, 1/12 + 1/60, 1/90 + 2/315.
    const double term0 = 1.0;
    const double term1 = 1.0 / 12.0 + 1.0 / 60.0;
    const double term2 = 1.0 / 90.0 + 2.0 / 315.0;
    CHECK(term0 + term1 == doctest::Approx(1.1).epsilon(1e-15));

    // A huge tolerance still sums the three-term floor, no fewer.
    const auto r = analytic::second_moment_mirpa_series(1.0, 1.0);
    CHECK(r.value == doctest::Approx(term0 + term1 + term2).epsilon(1e-14));
}

TEST_CASE("series tolerance must be positive") {
    CHECK_THROWS_AS(analytic::second_moment_mirpa_series(1.0, 0.0), DomainError);
}

TEST_CASE("angular-integral form confirms the series") {
    for (double lambda : {0.5, 1.0, 2.0, 10.0}) {
        QuadConfig cfg;
        const auto series = analytic::second_moment_mirpa_series(lambda, 1e-12);
        const auto phi = analytic::second_moment_mirpa_phi_integral(lambda, cfg);
        CHECK(phi.value == doctest::Approx(series.value).epsilon(1e-4));
    }
}

TEST_CASE("zeta shape parameter") {
    CHECK(analytic::gamma_zeta(WeightDistribution::deterministic(9.0), 3.7) == 3.5);
    // (7/2) Gamma(3/2) Gamma(1/2) = (7/2)(pi/2)
    CHECK(analytic::gamma_zeta(WeightDistribution::exponential(1.0, 1.0), 4.0) ==
          doctest::Approx(5.497787143782138).epsilon(1e-14));
    CHECK(analytic::gamma_zeta(WeightDistribution::exponential(1.0, 1.0), 2.0001) > 1e4);
    CHECK_THROWS_AS(analytic::gamma_zeta(WeightDistribution::exponential(1.0, 1.0), 2.0),
                    MomentDivergesError);
}

TEST_CASE("gamma approximation pdf normalizes with the right moments") {
    const analytic::GammaApprox ga{3.5, 1.0};
    const auto norm = cubature::integrate_1d(
        [&](double a) { return analytic::approx_area_pdf(a, ga); }, 0.0, 60.0, 1e-10, 1e-13,
        10000000);
    CHECK(norm.converged);
    CHECK(norm.value == doctest::Approx(1.0).epsilon(1e-8));

    const auto mean = cubature::integrate_1d(
        [&](double a) { return a * analytic::approx_area_pdf(a, ga); }, 0.0, 60.0, 1e-10, 1e-13,
        10000000);
    CHECK(mean.value == doctest::Approx(1.0).epsilon(1e-8));

    const auto second = cubature::integrate_1d(
        [&](double a) { return a * a * analytic::approx_area_pdf(a, ga); }, 0.0, 60.0, 1e-10,
        1e-13, 10000000);
    CHECK(second.value == doctest::Approx(9.0 / 7.0).epsilon(1e-8));
}

TEST_CASE("gamma approximation moments in closed form") {
    const analytic::GammaApprox ga{3.5, 1.0};
    CHECK(analytic::approx_area_moment(ga, 1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(analytic::approx_area_moment(ga, 2) == doctest::Approx(9.0 / 7.0).epsilon(1e-15));

    const analytic::GammaApprox scaled{3.5, 2.0};
    CHECK(analytic::approx_area_moment(scaled, 2) == doctest::Approx(9.0 / 28.0).epsilon(1e-14));
}

TEST_CASE("approximate void probability") {
    CHECK(analytic::void_prob_approx(0.0, 1.0, 3.5) == 1.0);
    CHECK(analytic::void_prob_approx(1.0, 1.0, 3.5) ==
          doctest::Approx(std::pow(9.0 / 7.0, -3.5)).epsilon(1e-14));
    double prev = 1.0;
    for (double l0 = 0.1; l0 < 3.05; l0 += 0.1) {
        const double v = analytic::void_prob_approx(l0, 1.0, 3.5);
        CHECK(v < prev);
        prev = v;
    }
}
