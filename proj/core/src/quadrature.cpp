#include "voronet/quadrature.hpp"


#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <sstream>

#include "voronet/cubature.hpp"
#include "voronet/errors.hpp"
#include "voronet/geometry.hpp"

namespace voronet::quadrature {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Pt {
    double x = 0.0, y = 0.0;
};

double norm2(const Pt& p) { return p.x * p.x + p.y * p.y; }

// Cubature variables are [r_1..r_p, psi_2..psi_p] with the angle of x_1 fixed
// at zero. Returns the polar jacobian r_1*...*r_p.
double vars_to_points(std::span<const double> v, int p, Pt* pts) {
    double jac = v[0];
    pts[0] = {v[0], 0.0};
    for (int j = 1; j < p; ++j) {
        const double psi = v[p + j - 1];
        pts[j] = {v[j] * std::cos(psi), v[j] * std::sin(psi)};
        jac *= v[j];
    }
    return jac;
}

struct Budget {
    std::uint64_t used = 0;
    std::uint64_t cap = 0;
    std::uint64_t remaining() const { return used >= cap ? 0 : cap - used; }
    void check(const char* what) const {
        if (remaining() == 0) {
            throw NoConvergenceError(std::string(what) +
                                     ": evaluation budget exhausted before reaching tolerance");
        }
    }
};

// Spatial moment integral for a fixed weight vector: 2 pi from the fixed x_1
// angle; for p >= 2 the first relative angle is restricted to [0, pi] by
// reflection symmetry and the result doubled.
cubature::Result spatial_integral(int p, std::span<const double> radii,
                                  const std::function<double(const Pt*, int)>& exponent,
                                  double rel_tol, double abs_tol, Budget& budget) {
    budget.check("spatial integral");
    cubature::Result res;
    if (p == 1) {
        auto f = [&exponent](double r) {
            const Pt pt{r, 0.0};
            return r * std::exp(-exponent(&pt, 1));
        };
        res = cubature::integrate_1d(f, 0.0, radii[0], rel_tol, abs_tol, budget.remaining());
        res.value *= 2.0 * kPi;
        res.error *= 2.0 * kPi;
    } else {
        const int dims = 2 * p - 1;
        std::vector<double> lo(static_cast<std::size_t>(dims), 0.0);
        std::vector<double> hi(static_cast<std::size_t>(dims), 0.0);
        for (int j = 0; j < p; ++j) hi[static_cast<std::size_t>(j)] = radii[j];
        hi[static_cast<std::size_t>(p)] = kPi;
        if (p == 3) hi[4] = 2.0 * kPi;
        auto f = [&exponent, p](std::span<const double> v) {
            Pt pts[3];
            const double jac = vars_to_points(v, p, pts);
            return jac * std::exp(-exponent(pts, p));
        };
        res = cubature::integrate(f, lo, hi, rel_tol, abs_tol, budget.remaining());
        res.value *= 4.0 * kPi;
        res.error *= 4.0 * kPi;
    }
    budget.used += res.evaluations;
    if (!res.converged) {
        throw NoConvergenceError(
            "spatial integral: evaluation budget exhausted before reaching tolerance");
    }
    return res;
}

// Discrete rule approximating the expectation over one weight draw.
struct WeightRule {
    std::vector<double> nodes;
    std::vector<double> probs;
    bool exact = false;  // point mass: no order doubling needed
};

double user_quantile(const WeightDistribution::UserDefined& law, double u) {
    double hi = 1.0;
    int guard = 0;
    while (law.cdf(hi) < u) {
        hi *= 2.0;
        if (++guard > 300) throw DomainError("user-defined weight CDF never reaches 1");
    }
    double lo = 0.0;
    for (int i = 0; i < 120; ++i) {
        const double mid = 0.5 * (lo + hi);
        (law.cdf(mid) < u ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

WeightRule weight_rule(const WeightDistribution& dist, int order) {
    WeightRule rule;
    if (dist.is_deterministic()) {
        rule.nodes = {dist.as_deterministic().power};
        rule.probs = {1.0};
        rule.exact = true;
        return rule;
    }
    if (dist.is_exponential()) {
        const auto& e = dist.as_exponential();
        const double mu_eff = e.rate / e.power;  // W ~ Exp(mu_eff)
        auto gl = cubature::gauss_laguerre(order);
        rule.nodes.resize(gl.nodes.size());
        for (std::size_t i = 0; i < gl.nodes.size(); ++i) rule.nodes[i] = gl.nodes[i] / mu_eff;
        rule.probs = std::move(gl.weights);
        return rule;
    }
    // Generic law: Gauss-Legendre in the quantile domain.
    const auto& u = dist.as_user_defined();
    auto leg = cubature::gauss_legendre(order);
    rule.nodes.resize(leg.nodes.size());
    rule.probs.resize(leg.nodes.size());
    for (std::size_t i = 0; i < leg.nodes.size(); ++i) {
        rule.nodes[i] = user_quantile(u, 0.5 * (leg.nodes[i] + 1.0));
        rule.probs[i] = 0.5 * leg.weights[i];
    }
    return rule;
}

// Variant for integrands built from fractional powers w^(1/alpha), w^(2/alpha):
// Laguerre nodes in w stall on the branch point at zero (the error only decays
// algebraically with the order), so exponential laws are integrated in
// u = w^(1/alpha) instead, where those powers are polynomial and Legendre
// nodes on the truncated range converge geometrically. The range drops the
// same exp(-big_l) tail mass the spatial truncation does.
WeightRule weight_rule_rooted(const WeightDistribution& dist, int order, double alpha,
                              double big_l) {
    if (!dist.is_exponential()) return weight_rule(dist, order);
    const auto& e = dist.as_exponential();
    const double mu_eff = e.rate / e.power;
    const double umax = std::pow(big_l / mu_eff, 1.0 / alpha);
    auto leg = cubature::gauss_legendre(order);
    WeightRule rule;
    rule.nodes.resize(leg.nodes.size());
    rule.probs.resize(leg.nodes.size());
    for (std::size_t i = 0; i < leg.nodes.size(); ++i) {
        const double u = 0.5 * umax * (leg.nodes[i] + 1.0);
        rule.nodes[i] = std::pow(u, alpha);
        rule.probs[i] = 0.5 * umax * leg.weights[i] * alpha * mu_eff *
                        std::pow(u, alpha - 1.0) * std::exp(-mu_eff * rule.nodes[i]);
    }
    return rule;
}

using InnerFn = std::function<cubature::Result(std::span<const double>)>;
using BoundFn = std::function<double(std::span<const double>)>;

// Expectation of the spatial integral over the typical station's p weight
// draws, exploiting symmetry of the integrand in the weight arguments. Tail
// nodes whose probability mass times the spatial volume bound cannot move the
// running sum by skip_tol are folded into the error instead of integrated;
// deep exponential tails otherwise dominate the cost for nothing.
std::pair<double, double> rule_expectation(const WeightRule& rule, int p, const InnerFn& inner,
                                           const BoundFn& bound, double skip_tol) {
    double value = 0.0, err = 0.0;
    const std::size_t n = rule.nodes.size();
    auto accumulate = [&](std::span<const double> w, double pw) {
        const double cap = pw * bound(w);
        if (cap <= skip_tol * std::abs(value)) {
            err += cap;
            return;
        }
        const auto r = inner(w);
        value += pw * r.value;
        err += pw * r.error;
    };
    if (p == 1) {
        for (std::size_t i = 0; i < n; ++i) {
            const double w[1] = {rule.nodes[i]};
            accumulate(w, rule.probs[i]);
        }
    } else if (p == 2) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i; j < n; ++j) {
                const double mult = i == j ? 1.0 : 2.0;
                const double w[2] = {rule.nodes[i], rule.nodes[j]};
                accumulate(w, mult * rule.probs[i] * rule.probs[j]);
            }
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i; j < n; ++j) {
                for (std::size_t l = j; l < n; ++l) {
                    double mult = 6.0;
                    if (i == j && j == l) mult = 1.0;
                    else if (i == j || j == l) mult = 3.0;
                    const double w[3] = {rule.nodes[i], rule.nodes[j], rule.nodes[l]};
                    accumulate(w, mult * rule.probs[i] * rule.probs[j] * rule.probs[l]);
                }
            }
        }
    }
    return {value, err};
}

using RuleBuilder = std::function<WeightRule(int order)>;

// Runs the weight expectation on a growing sequence of rule orders until two
// consecutive orders agree to half the requested relative tolerance. The
// sequence starts past the preasymptotic range; low orders waste a full pass
// confirming a value the next order rejects.
MomentResult outer_weight_expectation(const RuleBuilder& build, int k, int p,
                                      const QuadConfig& cfg, Budget& budget, const InnerFn& inner,
                                      const BoundFn& bound) {
    MomentResult out;
    out.order = p;
    out.tier = k;
    out.method = Method::Quadrature;
    const double skip_tol = 0.01 * cfg.rel_tol;
    const WeightRule first = build(p == 3 ? 4 : 16);
    auto [value, serr] = rule_expectation(first, p, inner, bound, skip_tol);
    if (first.exact) {
        out.value = value;
        out.error = serr;
        out.evaluations = budget.used;
        out.converged = true;
        return out;
    }
    const int orders[4] = {p == 3 ? 8 : 24, p == 3 ? 16 : 32, p == 3 ? 32 : 48,
                           p == 3 ? 64 : 96};
    for (int order : orders) {
        budget.check("weight expectation");
        const WeightRule rule = build(order);
        auto [value2, serr2] = rule_expectation(rule, p, inner, bound, skip_tol);
        const double diff = std::abs(value2 - value);
        value = value2;
        serr = serr2;
        if (diff <= 0.5 * cfg.rel_tol * std::abs(value2) + cfg.abs_tol) {
            out.value = value2;
            out.error = serr2 + diff;
            out.evaluations = budget.used;
            out.converged = true;
            return out;
        }
    }
    throw NoConvergenceError("weight expectation did not stabilize under order doubling");
}

double truncation_exponent(const QuadConfig& cfg) {
    // Exponent threshold making the discarded spatial tail negligible next to
    // the requested tolerances.
    return std::log(1.0 / cfg.trunc_eps) + 5.0;
}

void check_tier_index(const NetworkModel& model, int k) {
    if (k < 1 || static_cast<std::size_t>(k) > model.num_tiers()) {
        std::ostringstream msg;
        msg << "tier index " << k << " outside 1.." << model.num_tiers();
        throw DomainError(msg.str());
    }
}

void check_order(int p, int max_p, const char* path) {
    if (p < 1 || p > max_p) {
        std::ostringstream msg;
        msg << path << " supports orders 1.." << max_p << ", got p = " << p;
        throw DomainError(msg.str());
    }
}

// Inclusion-exclusion interference exponent of the alpha = 2 kernel:
// sum_q lambda_q sum_{J nonempty} (-1)^{|J|+1} H_J^q.
double alpha2_exponent(std::span<const double> lambda, std::span<const double> mu_eff,
                       std::span<const double> w, const Pt* pts, int p) {
    double beta[3];
    double wsum_in[8], bsum_in[8];
    Pt bx_in[8];
    for (int j = 0; j < p; ++j) beta[j] = w[j] / norm2(pts[j]);
    const int nmask = 1 << p;
    for (int mask = 1; mask < nmask; ++mask) {
        double sw = 0.0, sb = 0.0;
        Pt sx{0.0, 0.0};
        for (int j = 0; j < p; ++j) {
            if (mask & (1 << j)) {
                sw += w[j];
                sb += beta[j];
                sx.x += beta[j] * pts[j].x;
                sx.y += beta[j] * pts[j].y;
            }
        }
        wsum_in[mask] = sw;
        bsum_in[mask] = sb;
        bx_in[mask] = sx;
    }
    double total = 0.0;
    for (std::size_t q = 0; q < lambda.size(); ++q) {
        const double mu = mu_eff[q];
        double e = 0.0;
        for (int mask = 1; mask < nmask; ++mask) {
            const double sb = bsum_in[mask];
            const double h = kPi / (mu * sb) *
                             std::exp(mu * (norm2(bx_in[mask]) / sb - wsum_in[mask]));
            e += (std::popcount(static_cast<unsigned>(mask)) & 1) ? h : -h;
        }
        total += lambda[q] * e;
    }
    return total;
}

NetworkModel with_unit_total_density(const NetworkModel& model, double& lambda_tot) {
    lambda_tot = model.total_density();
    NetworkModel scaled = model;
    for (auto& tier : scaled.tiers) tier.density /= lambda_tot;
    return scaled;
}

MomentResult rescaled(MomentResult res, double lambda_tot, int p) {
    const double f = std::pow(lambda_tot, -p);
    res.value *= f;
    res.error *= f;
    return res;
}

}  // namespace

double h_term(const HTermInput& input) {
    const std::size_t n = input.weights.size();
    if (n == 0 || input.points.size() != n) {
        throw DomainError("h_term needs matching, nonempty weights and points");
    }
    if (!(input.mu_q > 0.0)) throw DomainError("h_term needs mu_q > 0");
    double sw = 0.0, sb = 0.0, sx = 0.0, sy = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double r2 = input.points[j][0] * input.points[j][0] +
                          input.points[j][1] * input.points[j][1];
        if (r2 == 0.0) throw DomainError("h_term is undefined for a point at the origin");
        if (!(input.weights[j] > 0.0)) throw DomainError("h_term needs positive weights");
        const double beta = input.weights[j] / r2;
        sw += input.weights[j];
        sb += beta;
        sx += beta * input.points[j][0];
        sy += beta * input.points[j][1];
    }
    return kPi / (input.mu_q * sb) * std::exp(input.mu_q * ((sx * sx + sy * sy) / sb - sw));
}

namespace detail {

MomentResult moment_mirpa_alpha2_raw(const NetworkModel& model, int k, int p,
                                     const QuadConfig& cfg) {
    require_valid(model);
    check_tier_index(model, k);
    check_order(p, 3, "the alpha = 2 kernel");
    if (model.pathloss.alpha != 2.0) {
        throw DomainError("the alpha = 2 kernel requires pathloss.alpha == 2");
    }
    if (model.dimension != 2) throw DomainError("moments beyond the mean require dimension 2");
    for (const auto& tier : model.tiers) {
        if (!tier.weights.is_exponential()) {
            throw DomainError("the alpha = 2 kernel requires exponential weights on every tier");
        }
    }
    const std::size_t K = model.num_tiers();
    std::vector<double> lambda(K), mu_eff(K);
    double a_sum = 0.0;  // sum_q lambda_q E_q[W] = sum_q lambda_q / mu_eff_q
    for (std::size_t q = 0; q < K; ++q) {
        const auto& e = model.tiers[q].weights.as_exponential();
        lambda[q] = model.tiers[q].density;
        mu_eff[q] = e.rate / e.power;
        a_sum += lambda[q] / mu_eff[q];
    }
    const double big_l = truncation_exponent(cfg);
    Budget budget{0, cfg.max_evals};
    // The order-doubling ladder stops on differences of 0.5 rel_tol, so the
    // spatial integrals feeding it must sit below that noise floor.
    const double spatial_rel = std::max(0.2 * cfg.rel_tol, 1e-8);
    InnerFn inner = [&](std::span<const double> w) {
        double radii[3];
        for (int j = 0; j < p; ++j) radii[j] = std::sqrt(w[j] * big_l / (kPi * a_sum));
        auto exponent = [&lambda, &mu_eff, &w, p](const Pt* pts, int) {
            return alpha2_exponent(lambda, mu_eff, w, pts, p);
        };
        return spatial_integral(p, {radii, static_cast<std::size_t>(p)}, exponent, spatial_rel,
                                cfg.abs_tol, budget);
    };
    // |spatial| <= prod_j pi R_j^2: the integral of 1 over the box measure.
    BoundFn bound = [&](std::span<const double> w) {
        double b = 1.0;
        for (int j = 0; j < p; ++j) b *= w[j] * big_l / a_sum;
        return b;
    };
    const auto& law_k = model.tiers[static_cast<std::size_t>(k - 1)].weights;
    MomentResult out = outer_weight_expectation(
        [&law_k](int order) { return weight_rule(law_k, order); }, k, p, cfg, budget, inner,
        bound);
    out.error += p * cfg.trunc_eps * std::abs(out.value);
    return out;
}

MomentResult moment_marpa_raw(const NetworkModel& model, int k, int p, const QuadConfig& cfg) {
    require_valid(model);
    check_tier_index(model, k);
    check_order(p, 3, "the deterministic-weight path");
    if (model.dimension != 2) throw DomainError("moments beyond the mean require dimension 2");
    for (const auto& tier : model.tiers) {
        if (!tier.weights.is_deterministic()) {
            throw DomainError("this path requires deterministic weights on every tier");
        }
    }
    const double alpha = model.pathloss.alpha;
    const double pk = model.tiers[static_cast<std::size_t>(k - 1)].weights.as_deterministic().power;
    const std::size_t K = model.num_tiers();
    std::vector<double> lambda(K), ratio(K);  // ratio_q = (P_q/P_k)^{1/alpha}
    double s = 0.0;
    for (std::size_t q = 0; q < K; ++q) {
        lambda[q] = model.tiers[q].density;
        ratio[q] = std::pow(model.tiers[q].weights.as_deterministic().power / pk, 1.0 / alpha);
        s += lambda[q] * ratio[q] * ratio[q];
    }
    const double big_l = truncation_exponent(cfg);
    const double radius = std::sqrt(big_l / (kPi * s));
    double radii[3] = {radius, radius, radius};
    Budget budget{0, cfg.max_evals};
    auto exponent = [&lambda, &ratio, K](const Pt* pts, int np) {
        geometry::Disk disks[3];
        double total = 0.0;
        for (std::size_t q = 0; q < K; ++q) {
            for (int j = 0; j < np; ++j) {
                disks[j] = {pts[j].x, pts[j].y, ratio[q] * std::sqrt(norm2(pts[j]))};
            }
            total += lambda[q] *
                     geometry::union_area({disks, static_cast<std::size_t>(np)});
        }
        return total;
    };
    const auto res = spatial_integral(p, {radii, static_cast<std::size_t>(p)}, exponent,
                                      cfg.rel_tol, cfg.abs_tol, budget);
    MomentResult out;
    out.value = res.value;
    out.error = res.error + p * cfg.trunc_eps * std::abs(res.value);
    out.order = p;
    out.tier = k;
    out.method = Method::Quadrature;
    out.evaluations = budget.used;
    out.converged = true;
    return out;
}

MomentResult moment_general_raw(const NetworkModel& model, int k, int p, const QuadConfig& cfg) {
    require_valid(model);
    check_tier_index(model, k);
    check_order(p, 2, "the general path");
    if (model.dimension != 2) throw DomainError("moments beyond the mean require dimension 2");
    const double alpha = model.pathloss.alpha;
    if (alpha == 2.0) return moment_mirpa_alpha2_raw(model, k, p, cfg);

    const std::size_t K = model.num_tiers();
    Budget budget{0, cfg.max_evals};

    // Per-tier tail quantile y_q with 1 - G_q(y_q) <= trunc_eps, found by
    // doubling; a law whose tail never drops below trunc_eps cannot yield a
    // finite moment integral.
    std::vector<double> yq(K);
    for (std::size_t q = 0; q < K; ++q) {
        const auto& wd = model.tiers[q].weights;
        if (wd.is_deterministic()) {
            yq[q] = wd.as_deterministic().power;
            continue;
        }
        double y = std::max(wd.scale(), 1e-300);
        int guard = 0;
        while (1.0 - wd.cdf(y) > cfg.trunc_eps) {
            y *= 2.0;
            if (++guard > 2000) {
                throw MomentDivergesError(
                    "weight CDF tail does not decay; the inner interference integral diverges");
            }
        }
        yq[q] = y;
    }

    // T_q = E_q[W^{2/alpha}] computed numerically as integral_0^inf
    // (1 - G_q(s^{alpha/2})) ds; the exact first-order exponent is
    // pi r^2 w^{-2/alpha} T_q.
    std::vector<double> tq(K);
    double s_gen = 0.0;
    for (std::size_t q = 0; q < K; ++q) {
        const auto& wd = model.tiers[q].weights;
        const double upper = std::pow(yq[q], 2.0 / alpha);
        budget.check("tail moment integral");
        const auto r = cubature::integrate_1d(
            [&wd, alpha](double sv) { return 1.0 - wd.cdf(std::pow(sv, 0.5 * alpha)); }, 0.0,
            upper, 0.01 * cfg.rel_tol, cfg.abs_tol, budget.remaining());
        budget.used += r.evaluations;
        if (!r.converged) {
            throw NoConvergenceError("tail moment integral exhausted the evaluation budget");
        }
        tq[q] = r.value;
        s_gen += model.tiers[q].density * tq[q];
    }

    const double big_l = truncation_exponent(cfg);
    const double inner_rel = std::clamp(0.1 * cfg.rel_tol, 1e-6, 1e-3);
    // See the alpha = 2 kernel: spatial noise must stay below the ladder's
    // stopping threshold. The cross overlap only perturbs the exponent, so a
    // loose relative target with an absolute floor tied to the closed-form
    // terms keeps its cost flat.
    const double spatial_rel = std::max(0.2 * cfg.rel_tol, 1e-8);
    const double cross_rel = std::max(inner_rel, 1e-4);

    // Interference exponent sum_q lambda_q I_q(w, x). For p = 1 the radial
    // reduction is exact; for p = 2, step laws reduce to a union of disks and
    // other laws are integrated over the plane around the pair's midpoint.
    auto exponent_for = [&](std::span<const double> w) {
        return [&, w](const Pt* pts, int np) {
            double total = 0.0;
            if (np == 1) {
                const double r2 = norm2(pts[0]);
                const double scale = std::pow(w[0], -2.0 / alpha) * r2;
                for (std::size_t q = 0; q < K; ++q) {
                    total += model.tiers[q].density * kPi * scale * tq[q];
                }
                return total;
            }
            const double r1 = std::sqrt(norm2(pts[0]));
            const double r2 = std::sqrt(norm2(pts[1]));
            for (std::size_t q = 0; q < K; ++q) {
                const auto& wd = model.tiers[q].weights;
                double iq;
                if (wd.is_deterministic()) {
                    const double pq = wd.as_deterministic().power;
                    const geometry::Disk disks[2] = {
                        {pts[0].x, pts[0].y, std::pow(pq / w[0], 1.0 / alpha) * r1},
                        {pts[1].x, pts[1].y, std::pow(pq / w[1], 1.0 / alpha) * r2}};
                    iq = geometry::union_area({disks, 2});
                } else {
                    // 1 - G1 G2 = (1-G1) + (1-G2) - (1-G1)(1-G2). The single
                    // terms reduce radially to the first-order exponents
                    // pi r^2 w^{-2/alpha} T_q; only the overlap needs
                    // cubature. It is integrated around whichever point has
                    // the narrower footprint, whose quantile radius bounds
                    // the support up to the trunc_eps tail already dropped
                    // elsewhere. Centring on a point keeps the integrand
                    // filling its domain; a box around both would shrink the
                    // bumps to needles as the pair separates.
                    const double c1 = kPi * r1 * r1 * std::pow(w[0], -2.0 / alpha) * tq[q];
                    const double c2 = kPi * r2 * r2 * std::pow(w[1], -2.0 / alpha) * tq[q];
                    const double u1 = r1 * std::pow(yq[q] / w[0], 1.0 / alpha);
                    const double u2 = r2 * std::pow(yq[q] / w[1], 1.0 / alpha);
                    const Pt& centre = u1 <= u2 ? pts[0] : pts[1];
                    const bool is_exp = wd.is_exponential();
                    const double mu_eff =
                        is_exp ? wd.as_exponential().rate / wd.as_exponential().power : 0.0;
                    budget.check("interference integral");
                    auto g = [&](std::span<const double> uv) {
                        const double u = uv[0];
                        const Pt r{centre.x + u * std::cos(uv[1]),
                                   centre.y + u * std::sin(uv[1])};
                        const double d1 = std::hypot(r.x - pts[0].x, r.y - pts[0].y);
                        const double d2 = std::hypot(r.x - pts[1].x, r.y - pts[1].y);
                        const double y1 = w[0] * std::pow(d1 / r1, alpha);
                        const double y2 = w[1] * std::pow(d2 / r2, alpha);
                        if (is_exp) return u * std::exp(-mu_eff * (y1 + y2));
                        return u * (1.0 - wd.cdf(y1)) * (1.0 - wd.cdf(y2));
                    };
                    const double lo[2] = {0.0, 0.0};
                    const double hi[2] = {std::min(u1, u2), 2.0 * kPi};
                    const auto r = cubature::integrate(g, lo, hi, cross_rel,
                                                       0.02 * cfg.rel_tol * (c1 + c2),
                                                       budget.remaining());
                    budget.used += r.evaluations;
                    if (!r.converged) {
                        throw NoConvergenceError(
                            "interference integral exhausted the evaluation budget");
                    }
                    iq = c1 + c2 - r.value;
                }
                total += model.tiers[q].density * iq;
            }
            return total;
        };
    };

    InnerFn inner = [&](std::span<const double> w) {
        double radii[2];
        for (int j = 0; j < p; ++j) {
            radii[j] = std::sqrt(std::pow(w[j], 2.0 / alpha) * big_l / (kPi * s_gen));
        }
        std::function<double(const Pt*, int)> exponent = exponent_for(w);
        return spatial_integral(p, {radii, static_cast<std::size_t>(p)}, exponent, spatial_rel,
                                cfg.abs_tol, budget);
    };
    BoundFn bound = [&](std::span<const double> w) {
        double b = 1.0;
        for (int j = 0; j < p; ++j) b *= std::pow(w[j], 2.0 / alpha) * big_l / s_gen;
        return b;
    };
    const auto& law_k = model.tiers[static_cast<std::size_t>(k - 1)].weights;
    MomentResult out = outer_weight_expectation(
        [&](int order) { return weight_rule_rooted(law_k, order, alpha, big_l); }, k, p, cfg,
        budget, inner, bound);
    out.error += p * cfg.trunc_eps * std::abs(out.value);
    return out;
}

}  // namespace detail

MomentResult moment_mirpa_alpha2(const NetworkModel& model, int k, int p, const QuadConfig& cfg) {
    double lambda_tot = 0.0;
    const NetworkModel scaled = with_unit_total_density(model, lambda_tot);
    return rescaled(detail::moment_mirpa_alpha2_raw(scaled, k, p, cfg), lambda_tot, p);
}

MomentResult moment_marpa(const NetworkModel& model, int k, int p, const QuadConfig& cfg) {
    double lambda_tot = 0.0;
    const NetworkModel scaled = with_unit_total_density(model, lambda_tot);
    return rescaled(detail::moment_marpa_raw(scaled, k, p, cfg), lambda_tot, p);
}

MomentResult moment_general(const NetworkModel& model, int k, int p, const QuadConfig& cfg) {
    double lambda_tot = 0.0;
    const NetworkModel scaled = with_unit_total_density(model, lambda_tot);
    return rescaled(detail::moment_general_raw(scaled, k, p, cfg), lambda_tot, p);
}

}  // namespace voronet::quadrature
