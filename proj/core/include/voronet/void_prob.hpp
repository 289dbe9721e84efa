#pragma once

#include <functional>
#include <optional>
#include <span>

#include "voronet/model.hpp"

namespace voronet::voidprob {

struct SeriesResult {
    double value = 1.0;   // clamped to [0, 1]
    double bound = 0.0;   // magnitude of the next-term truncation proxy
    int terms_used = 0;   // number of series terms summed, including p = 0
    bool clamped = false; // true when the raw sum left [0, 1]
};

/// Alternating moment expansion of the void probability,
/// sum_{p=0}^{P} (-lambda_0)^p E[V^p] / p!, with moments[p] = E[V^p] and
/// moments[0] = 1. `bound` reports lambda_0^{P+1} m_P / (P+1)!, a heuristic
/// proxy for the first omitted term (the true E[V^{P+1}] is unknown here).
/// When `tol` is given, a bound above it throws InsufficientMomentsError.
SeriesResult void_prob_series(std::span<const double> moments, double user_density,
                              std::optional<double> tol = std::nullopt);

/// Numeric Laplace transform integral_0^inf e^{-lambda_0 A} pdf(A) dA of an
/// area density. The pdf must integrate to 1 (checked to 1e-6).
double laplace_from_pdf(const std::function<double(double)>& pdf, double user_density,
                        const QuadConfig& cfg);

}  // namespace voronet::voidprob
