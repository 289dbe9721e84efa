#include "voronet/model.hpp"

#include <cmath>
#include <sstream>

#include "voronet/errors.hpp"

namespace voronet {

WeightDistribution WeightDistribution::deterministic(double power) {
    return WeightDistribution(Deterministic{power});
}

WeightDistribution WeightDistribution::exponential(double rate, double power) {
    return WeightDistribution(Exponential{rate, power});
}

WeightDistribution WeightDistribution::user_defined(UserDefined spec) {
    return WeightDistribution(std::move(spec));
}

double WeightDistribution::cdf(double w) const {
    if (const auto* d = std::get_if<Deterministic>(&law_)) {
        return w >= d->power ? 1.0 : 0.0;
    }
    if (const auto* e = std::get_if<Exponential>(&law_)) {
        if (w <= 0.0) return 0.0;
        return -std::expm1(-e->rate * w / e->power);
    }
    return std::get<UserDefined>(law_).cdf(w);
}

double WeightDistribution::fractional_moment(double e) const {
    if (const auto* d = std::get_if<Deterministic>(&law_)) {
        return std::pow(d->power, e);
    }
    if (const auto* x = std::get_if<Exponential>(&law_)) {
        // W = P*h, h ~ Exp(mu): E[W^e] = (P/mu)^e * Gamma(1+e), finite iff e > -1.
        if (e <= -1.0) {
            std::ostringstream msg;
            msg << "E[W^e] diverges for exponential weights at e = " << e << " (requires e > -1)";
            throw MomentDivergesError(msg.str());
        }
        return std::pow(x->power / x->rate, e) * std::tgamma(1.0 + e);
    }
    const double m = std::get<UserDefined>(law_).fractional_moment(e);
    if (!std::isfinite(m)) {
        std::ostringstream msg;
        msg << "user-defined fractional moment at e = " << e << " is not finite";
        throw MomentDivergesError(msg.str());
    }
    return m;
}

double WeightDistribution::sample(Rng& rng) const {
    if (const auto* d = std::get_if<Deterministic>(&law_)) {
        return d->power;
    }
    if (const auto* e = std::get_if<Exponential>(&law_)) {
        return e->power * rng.exponential(e->rate);
    }
    return std::get<UserDefined>(law_).sampler(rng);
}

double WeightDistribution::scale() const {
    if (const auto* d = std::get_if<Deterministic>(&law_)) return d->power;
    if (const auto* e = std::get_if<Exponential>(&law_)) return e->power / e->rate;
    return 1.0;
}

double NetworkModel::total_density() const {
    double sum = 0.0;
    for (const auto& tier : tiers) sum += tier.density;
    return sum;
}

namespace {

bool weight_params_valid(const WeightDistribution& w) {
    if (w.is_deterministic()) {
        const auto& d = w.as_deterministic();
        return std::isfinite(d.power) && d.power > 0.0;
    }
    if (w.is_exponential()) {
        const auto& e = w.as_exponential();
        return std::isfinite(e.rate) && e.rate > 0.0 && std::isfinite(e.power) && e.power > 0.0;
    }
    const auto& u = w.as_user_defined();
    return static_cast<bool>(u.cdf) && static_cast<bool>(u.fractional_moment) &&
           static_cast<bool>(u.sampler);
}

}  // namespace

std::vector<Violation> validate(const NetworkModel& model) {
    std::vector<Violation> out;
    if (model.tiers.empty()) {
        out.push_back({"no_tiers", "at least one tier is required"});
    }
    const double alpha = model.pathloss.alpha;
    bool all_exponential = !model.tiers.empty();
    for (const auto& tier : model.tiers) {
        all_exponential = all_exponential && tier.weights.is_exponential();
    }
    const bool alpha2_kernel = alpha == 2.0 && all_exponential;
    if (!(std::isfinite(alpha) && (alpha > 2.0 || alpha2_kernel))) {
        std::ostringstream msg;
        msg << "alpha = " << alpha
            << " outside the valid range (alpha > 2, or alpha == 2 with exponential weights on "
               "every tier)";
        out.push_back({"alpha_out_of_range", msg.str()});
    }
    if (model.dimension < 2) {
        std::ostringstream msg;
        msg << "dimension = " << model.dimension << " must be >= 2";
        out.push_back({"dimension_out_of_range", msg.str()});
    }
    for (std::size_t i = 0; i < model.tiers.size(); ++i) {
        const auto& tier = model.tiers[i];
        if (!(std::isfinite(tier.density) && tier.density > 0.0)) {
            std::ostringstream msg;
            msg << "tier " << (i + 1) << " density = " << tier.density
                << " must be finite and > 0";
            out.push_back({"density_not_positive", msg.str()});
        }
        if (!weight_params_valid(tier.weights)) {
            std::ostringstream msg;
            msg << "tier " << (i + 1) << " weight parameters invalid";
            out.push_back({"weights_invalid", msg.str()});
        }
    }
    return out;
}

void require_valid(const NetworkModel& model) {
    const auto violations = validate(model);
    if (violations.empty()) return;
    std::ostringstream msg;
    msg << "invalid model:";
    for (const auto& v : violations) msg << " [" << v.code << "] " << v.message << ";";
    throw DomainError(msg.str());
}

std::string to_string(Method method) {
    switch (method) {
        case Method::ClosedForm: return "closed_form";
        case Method::Series: return "series";
        case Method::Quadrature: return "quadrature";
        case Method::MonteCarlo: return "monte_carlo";
    }
    return "unknown";
}

}  // namespace voronet
