#include "voronet/void_prob.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "voronet/cubature.hpp"
#include "voronet/errors.hpp"

namespace voronet::voidprob {

SeriesResult void_prob_series(std::span<const double> moments, double user_density,
                              std::optional<double> tol) {
    if (moments.empty()) throw DomainError("need at least the zeroth moment");
    if (std::abs(moments[0] - 1.0) > 1e-12) {
        throw DomainError("moments[0] must be 1 (it is E[V^0])");
    }
    if (!(user_density >= 0.0)) throw DomainError("user_density must be >= 0");

    // Compensated summation: adjacent terms can cancel to well below the
    // magnitude of the largest one.
    double sum = 0.0, comp = 0.0;
    double coeff = 1.0;  // (-lambda_0)^p / p!
    for (std::size_t p = 0; p < moments.size(); ++p) {
        if (p > 0) coeff *= -user_density / static_cast<double>(p);
        const double term = coeff * moments[p];
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    // Proxy for the first omitted term, reusing the highest known moment.
    const std::size_t last = moments.size() - 1;
    SeriesResult out;
    out.bound =
        std::abs(coeff * user_density * moments[last]) / static_cast<double>(last + 1);
    out.terms_used = static_cast<int>(moments.size());
    out.clamped = sum < 0.0 || sum > 1.0;
    out.value = std::clamp(sum, 0.0, 1.0);
    if (tol && out.bound > *tol) {
        std::ostringstream msg;
        msg << "truncation bound " << out.bound << " exceeds requested tolerance " << *tol
            << "; supply more moments";
        throw InsufficientMomentsError(msg.str());
    }
    return out;
}

double laplace_from_pdf(const std::function<double(double)>& pdf, double user_density,
                        const QuadConfig& cfg) {
    if (!(user_density >= 0.0)) throw DomainError("user_density must be >= 0");
    // Map [0, inf) to [0, 1) via A = t/(1-t).
    auto transformed = [&pdf](double t, double extra_exp_rate) {
        if (t >= 1.0) return 0.0;
        const double om = 1.0 - t;
        const double a = t / om;
        const double v = pdf(a) / (om * om);
        return extra_exp_rate == 0.0 ? v : v * std::exp(-extra_exp_rate * a);
    };
    const auto norm = cubature::integrate_1d([&](double t) { return transformed(t, 0.0); }, 0.0,
                                             1.0, 1e-9, 1e-12, cfg.max_evals);
    if (!norm.converged) throw NoConvergenceError("pdf normalization check did not converge");
    if (std::abs(norm.value - 1.0) > 1e-6) {
        std::ostringstream msg;
        msg << "pdf integrates to " << norm.value << ", not 1";
        throw DomainError(msg.str());
    }
    const auto res = cubature::integrate_1d([&](double t) { return transformed(t, user_density); },
                                            0.0, 1.0, cfg.rel_tol, cfg.abs_tol, cfg.max_evals);
    if (!res.converged) throw NoConvergenceError("Laplace transform integral did not converge");
    return res.value;
}

}  // namespace voronet::voidprob
