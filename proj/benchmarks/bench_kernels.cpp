#include <benchmark/benchmark.h>

#include <array>
#include <vector>

#include "voronet/analytic.hpp"
#include "voronet/cubature.hpp"
#include "voronet/geometry.hpp"
#include "voronet/model.hpp"
#include "voronet/monte_carlo.hpp"
#include "voronet/quadrature.hpp"

// Microbenchmarks for the kernels the moment integrands hammer: disk-union
// geometry, the closed-form interference factor, the quadrature rules, and
// point-process sampling. Run them before touching any of those hot paths.

namespace {

using namespace voronet;

void bm_lens_area(benchmark::State& state) {
    const geometry::Disk a{0.0, 0.0, 1.0};
    const geometry::Disk b{0.7, 0.4, 0.9};
    for (auto _ : state) {
        benchmark::DoNotOptimize(geometry::lens_area(a, b));
    }
}
BENCHMARK(bm_lens_area);

void bm_union_area_three_disks(benchmark::State& state) {
    const std::array<geometry::Disk, 3> disks{{{0.0, 0.0, 1.0}, {0.9, 0.2, 0.8}, {0.3, 0.8, 1.1}}};
    for (auto _ : state) {
        benchmark::DoNotOptimize(geometry::union_area(disks));
    }
}
BENCHMARK(bm_union_area_three_disks);

void bm_h_term_pair(benchmark::State& state) {
    quadrature::HTermInput input;
    input.weights = {1.3, 0.7};
    input.points = {{{0.8, 0.1}}, {{-0.4, 0.9}}};
    input.mu_q = 1.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(quadrature::h_term(input));
    }
}
BENCHMARK(bm_h_term_pair);

void bm_second_moment_series(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(analytic::second_moment_mirpa_series(1.0, 1e-12));
    }
}
BENCHMARK(bm_second_moment_series);

void bm_gauss_laguerre_32(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(cubature::gauss_laguerre(32));
    }
}
BENCHMARK(bm_gauss_laguerre_32);

void bm_sample_ppp(benchmark::State& state) {
    Rng rng(7);
    for (auto _ : state) {
        auto pts = montecarlo::sample_ppp(1.0, 6.0, rng);
        benchmark::DoNotOptimize(pts.data());
    }
}
BENCHMARK(bm_sample_ppp);

void bm_moment_marpa_mean(benchmark::State& state) {
    NetworkModel m;
    m.tiers.push_back({1.0, WeightDistribution::deterministic(1.0)});
    m.pathloss.alpha = 4.0;
    QuadConfig cfg;
    cfg.rel_tol = 1e-4;
    for (auto _ : state) {
        benchmark::DoNotOptimize(quadrature::moment_marpa(m, 1, 1, cfg));
    }
}
BENCHMARK(bm_moment_marpa_mean);

}  // namespace
