#include "voronet/analytic.hpp"

#include <cmath>
#include <sstream>

#include "voronet/cubature.hpp"
#include "voronet/errors.hpp"

namespace voronet::analytic {

namespace {

constexpr double kPi = 3.14159265358979323846;

// B(m) = Gamma(m)^2 / Gamma(2m) in log space; the naive ratio underflows
// around m = 30 while series terms still matter at tol = 1e-12.
double beta_mm(double m) { return std::exp(2.0 * std::lgamma(m) - std::lgamma(2.0 * m)); }

double series_term(int k) {
    const double kk = k;
    return beta_mm(kk + 1.0) / (kk + 1.0) +
           2.0 * kk * kk * beta_mm(kk + 2.0) / ((kk + 1.0) * (kk + 1.0));
}

// Angular integrand of the pre-simplification second-moment form, for sum
// index k. The inner geometric series sum_q (q+1)^2 x^q = (1+x)/(1-x)^3 with
// x = k^2 s^2 c^2 / ((1+k c^2)(1+k s^2)) < 1.
double phi_integrand(int k, double phi) {
    const double s = std::sin(phi);
    const double c = std::cos(phi);
    const double s2 = s * s, c2 = c * c;
    const double u = 1.0 + k * c2;
    const double v = 1.0 + k * s2;
    const double x = (static_cast<double>(k) * k) * s2 * c2 / (u * v);
    const double geom = (1.0 + x) / ((1.0 - x) * (1.0 - x) * (1.0 - x));
    return (k + 1.0) * std::pow(s * c, 2.0 * k + 1.0) / (u * u * v * v) * geom;
}

}  // namespace

double fractional_weight_moment(const WeightDistribution& dist, double e) {
    return dist.fractional_moment(e);
}

MomentResult mean_cell_area(const NetworkModel& model, int k) {
    require_valid(model);
    if (k < 1 || static_cast<std::size_t>(k) > model.num_tiers()) {
        std::ostringstream msg;
        msg << "tier index " << k << " outside 1.." << model.num_tiers();
        throw DomainError(msg.str());
    }
    const double e = static_cast<double>(model.dimension) / model.pathloss.alpha;
    double denom = 0.0;
    double numer = 0.0;
    for (std::size_t q = 0; q < model.num_tiers(); ++q) {
        const double m = model.tiers[q].weights.fractional_moment(e);
        denom += model.tiers[q].density * m;
        if (q + 1 == static_cast<std::size_t>(k)) numer = m;
    }
    MomentResult out;
    out.value = numer / denom;
    out.error = 0.0;
    out.order = 1;
    out.tier = k;
    out.method = Method::ClosedForm;
    out.evaluations = 0;
    out.converged = true;
    return out;
}

MomentResult second_moment_mirpa_series(double density, double tol) {
    if (!(density > 0.0)) throw DomainError("density must be > 0");
    if (!(tol > 0.0)) throw DomainError("tol must be > 0");
    double sum = 0.0;
    double term = 0.0;
    int k = 0;
    constexpr int kMaxTerms = 100000;
    for (;; ++k) {
        if (k >= kMaxTerms) {
            throw NoConvergenceError("second-moment series did not reach tolerance in 1e5 terms");
        }
        term = series_term(k);
        sum += term;
        // Floor of three terms; the terms decay like 4^{-k} so the first
        // accepted stop is also safe.
        if (k >= 2 && term < tol * sum) break;
    }
    MomentResult out;
    out.value = sum / (density * density);
    out.error = term / (density * density);
    out.order = 2;
    out.tier = 1;
    out.method = Method::Series;
    out.evaluations = static_cast<std::uint64_t>(k + 1);
    out.converged = true;
    return out;
}

MomentResult second_moment_mirpa_phi_integral(double density, const QuadConfig& cfg) {
    if (!(density > 0.0)) throw DomainError("density must be > 0");
    double sum = 0.0;
    double quad_err = 0.0;
    double term = 0.0, prev_term = 0.0;
    std::uint64_t evals = 0;
    int k = 0;
    constexpr int kMaxTerms = 10000;
    for (;; ++k) {
        if (k >= kMaxTerms || evals >= cfg.max_evals) {
            throw NoConvergenceError("second-moment angular sum did not meet its tail bound");
        }
        const auto r = cubature::integrate_1d([k](double phi) { return phi_integrand(k, phi); },
                                              0.0, 0.5 * kPi, 0.1 * cfg.rel_tol, cfg.abs_tol,
                                              cfg.max_evals - evals);
        prev_term = term;
        term = 2.0 * r.value;
        sum += term;
        quad_err += r.error;
        evals += r.evaluations;
        if (!r.converged) {
            throw NoConvergenceError("angular integral exhausted its evaluation budget");
        }
        if (k >= 2 && term < cfg.rel_tol * sum) break;
    }
    // Geometric tail estimate from the last observed ratio.
    double ratio = prev_term > 0.0 ? term / prev_term : 0.0;
    ratio = std::min(ratio, 0.9);
    const double tail = term * ratio / (1.0 - ratio);
    MomentResult out;
    out.value = sum / (density * density);
    out.error = (quad_err + tail) / (density * density);
    out.order = 2;
    out.tier = 1;
    out.method = Method::Quadrature;
    out.evaluations = evals;
    out.converged = true;
    return out;
}

double gamma_zeta(const WeightDistribution& dist, double alpha) {
    if (!(alpha > 0.0)) throw DomainError("alpha must be > 0");
    if (dist.is_deterministic()) return 3.5;
    const double e = 2.0 / alpha;
    return 3.5 * dist.fractional_moment(e) * dist.fractional_moment(-e);
}

double approx_area_pdf(double A, const GammaApprox& approx) {
    if (!(approx.zeta > 0.0) || !(approx.density > 0.0)) {
        throw DomainError("gamma approximation needs zeta > 0 and density > 0");
    }
    if (A <= 0.0) return 0.0;
    const double z = approx.zeta;
    const double rate = z * approx.density;
    return std::exp(z * std::log(rate) + (z - 1.0) * std::log(A) - rate * A - std::lgamma(z));
}

double approx_area_moment(const GammaApprox& approx, int p) {
    if (p < 0) throw DomainError("moment order must be >= 0");
    double out = 1.0;
    for (int i = 0; i < p; ++i) {
        out *= (approx.zeta + i) / (approx.zeta * approx.density);
    }
    return out;
}

double void_prob_approx(double user_density, double bs_density, double zeta) {
    if (!(user_density >= 0.0) || !(bs_density > 0.0) || !(zeta > 0.0)) {
        throw DomainError("need user_density >= 0, bs_density > 0, zeta > 0");
    }
    return std::exp(-zeta * std::log1p(user_density / (zeta * bs_density)));
}

}  // namespace voronet::analytic
