#pragma once

#include "voronet/model.hpp"

namespace voronet::analytic {

/// E[W^e] for the given weight law. Throws MomentDivergesError when infinite.
double fractional_weight_moment(const WeightDistribution& dist, double e);

/// Exact mean cell area of tier k (1-based):
/// E_k[W^{d/alpha}] / sum_q lambda_q E_q[W^{d/alpha}]. Valid in any dimension.
MomentResult mean_cell_area(const NetworkModel& model, int k);

/// Second moment of the single-tier cell area under exponential weights at
/// alpha = 2, by the explicit series
///   lambda^{-2} sum_{k>=0} [B(k+1)/(k+1) + 2 k^2 B(k+2)/(k+1)^2],
/// B(m) = Gamma(m)^2 / Gamma(2m), summed until the relative term drops
/// below tol. Evaluates to 1.122.../lambda^2.
MomentResult second_moment_mirpa_series(double density, double tol);

/// Same quantity through the pre-simplification form: a k-indexed sum of 1-D
/// angular integrals over [0, pi/2]. Slower; kept as an independent check of
/// the series.
MomentResult second_moment_mirpa_phi_integral(double density, const QuadConfig& cfg);

/// Gamma approximation of the cell-area density: shape zeta, rate zeta*density.
struct GammaApprox {
    double zeta = 3.5;
    double density = 1.0;
};

/// Shape parameter zeta = (7/2) E[W^{2/alpha}] E[W^{-2/alpha}]. Exactly 7/2
/// for deterministic weights; (7/2) Gamma(1+2/alpha) Gamma(1-2/alpha) for
/// exponential ones, which diverges as alpha -> 2.
double gamma_zeta(const WeightDistribution& dist, double alpha);

/// Density of the Gamma approximation at area A.
double approx_area_pdf(double A, const GammaApprox& approx);

/// p-th moment of the Gamma approximation, prod_{i<p} (zeta+i) / (zeta*lambda).
double approx_area_moment(const GammaApprox& approx, int p);

/// Approximate void probability (1 + lambda_0/(zeta*lambda))^{-zeta}.
double void_prob_approx(double user_density, double bs_density, double zeta);

}  // namespace voronet::analytic
