#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace voronet::cubature {

struct Result {
    double value = 0.0;
    double error = 0.0;  // absolute error estimate
    std::uint64_t evaluations = 0;
    bool converged = false;
};

/// Adaptive 1-D integration of f over [a, b] with a Gauss-Kronrod 15(7) pair
/// and bisection of the worst interval. Stops when the summed error estimate
/// is below max(abs_tol, rel_tol * |value|); `converged` reports whether that
/// happened within max_evals integrand evaluations.
Result integrate_1d(const std::function<double(double)>& f, double a, double b, double rel_tol,
                    double abs_tol, std::uint64_t max_evals);

/// Adaptive integration of f over the box [lo, hi] in d = lo.size() >= 2
/// dimensions with the Genz-Malik degree 7 rule, its embedded degree 5 error
/// estimate, and bisection of the worst box along the axis of largest fourth
/// divided difference.
Result integrate(const std::function<double(std::span<const double>)>& f,
                 std::span<const double> lo, std::span<const double> hi, double rel_tol,
                 double abs_tol, std::uint64_t max_evals);

struct NodesWeights {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Laguerre rule: sum w_i f(x_i) ~ integral_0^inf e^{-x} f(x) dx.
NodesWeights gauss_laguerre(int n);

/// n-point Gauss-Legendre rule on [-1, 1].
NodesWeights gauss_legendre(int n);

}  // namespace voronet::cubature
