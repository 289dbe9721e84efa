#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "voronet/model.hpp"
#include "voronet/rng.hpp"

namespace voronet::montecarlo {

struct Station {
    double x = 0.0;
    double y = 0.0;
    int tier = 1;  // 1-based
};

/// One Palm-conditioned network draw; bs[0] is the typical station at the
/// origin, the rest are independent per-tier PPPs on the simulation disk.
struct Realization {
    std::vector<Station> bs;
};

struct MCEstimate {
    double value = 0.0;
    double std_error = 0.0;  // across-realization standard error
    std::uint64_t realizations = 0;
    std::uint64_t seed = 0;
};

/// Homogeneous PPP restricted to the disk of the given radius: Poisson count,
/// i.i.d. uniform locations.
std::vector<std::array<double, 2>> sample_ppp(double density, double radius, Rng& rng);

/// Palm-conditioned realization with the typical tier-k station at the origin.
Realization sample_realization(const NetworkModel& model, int k, double sim_radius, Rng& rng);

/// Winner of the association race at x: argmax_i w_i |r_i - x|^{-alpha} with a
/// fresh weight draw per station. Returns an index into realization.bs.
std::size_t associate(const std::array<double, 2>& x, const Realization& realization,
                      const NetworkModel& model, Rng& rng);

/// U-statistic estimate of E[V_k^p] from uniform test points in the window
/// disk: with m of N points landing in the typical cell, one realization
/// contributes (pi W^2)^p * m(m-1)...(m-p+1) / (N(N-1)...(N-p+1)), which is
/// unbiased because distinct uniform points are independent. Identical seed
/// and config give bit-identical results regardless of worker count.
MCEstimate estimate_moment(const NetworkModel& model, int k, int p, const MCConfig& cfg);

/// Probability that a user PPP of density user_density places no point in the
/// typical tier-k cell.
MCEstimate estimate_void_prob(const NetworkModel& model, int k, double user_density,
                              const MCConfig& cfg);

/// Window used when MCConfig.window_radius is unset: 6 / sqrt(lambda_tot pi),
/// several typical cell diameters.
double default_window_radius(const NetworkModel& model);

}  // namespace voronet::montecarlo
