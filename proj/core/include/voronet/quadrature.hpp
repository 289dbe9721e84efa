#pragma once

#include <array>
#include <vector>

#include "voronet/model.hpp"

namespace voronet::quadrature {

/// Arguments of the closed-form interference factor H_J^q for one tier q and
/// one subset J of the conditioning points: the typical station's weights
/// w_{0j} and locations x_j for j in J, and the tier's effective exponential
/// rate mu_q (rate/power, so the weight law is Exp(mu_q)).
struct HTermInput {
    std::vector<double> weights;                // w_{0j} > 0
    std::vector<std::array<double, 2>> points;  // x_j, all nonzero
    double mu_q = 1.0;
};

/// H_J^q = pi/(mu_q sum_j beta_j) * exp(-mu_q sum_j w_j
///         + mu_q |sum_j beta_j x_j|^2 / sum_j beta_j),
/// with beta_j = w_j / |x_j|^2. The exponent is always <= 0 (Cauchy-Schwarz),
/// so the value never overflows.
double h_term(const HTermInput& input);

/// p-th moment of the tier-k cell area for alpha = 2 with exponential weights
/// on every tier, by the inclusion-exclusion form built from h_term: outer
/// Gauss-Laguerre expectation over the typical station's weights, inner
/// adaptive cubature over the point positions (x_1 angle fixed by symmetry).
/// p in {1, 2, 3}.
MomentResult moment_mirpa_alpha2(const NetworkModel& model, int k, int p, const QuadConfig& cfg);

/// p-th moment for deterministic weights (any alpha > 2): adaptive cubature
/// of exp(-sum_q lambda_q |union_j C(x_j, (P_q/P_k)^{1/alpha} |x_j|)|) over
/// the point positions. p in {1, 2, 3}.
MomentResult moment_marpa(const NetworkModel& model, int k, int p, const QuadConfig& cfg);

/// p-th moment for arbitrary weight laws (alpha > 2), directly from the
/// general moment integral: the interference exponent of each tier is itself
/// integrated numerically from that tier's CDF (exactly, via the union of
/// disks, for step CDFs). p in {1, 2}. A model with alpha = 2 and exponential
/// weights everywhere is routed to moment_mirpa_alpha2.
MomentResult moment_general(const NetworkModel& model, int k, int p, const QuadConfig& cfg);

namespace detail {

/// Un-normalized variants: identical contracts, but without the rescaling of
/// the model to unit total density that the public entry points apply. Used
/// to test the density-scaling law on a path where it is not built in.
MomentResult moment_mirpa_alpha2_raw(const NetworkModel& model, int k, int p,
                                     const QuadConfig& cfg);
MomentResult moment_marpa_raw(const NetworkModel& model, int k, int p, const QuadConfig& cfg);
MomentResult moment_general_raw(const NetworkModel& model, int k, int p, const QuadConfig& cfg);

}  // namespace detail

}  // namespace voronet::quadrature
