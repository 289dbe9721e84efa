#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "voronet/rng.hpp"

namespace voronet {

/// Weight law of the association rule for one tier.
///
/// A user at x joins the base station maximizing w * |r - x|^{-alpha}, with an
/// independent weight w per (station, user) pair. Deterministic(P) gives the
/// average-power rule (nearest station when powers are equal); Exponential
/// (rate mu, power P) gives the instantaneous-power rule w = P*h with
/// h ~ Exp(mu). UserDefined supplies the law directly.
class WeightDistribution {
public:
    struct Deterministic {
        double power;  // P > 0
    };
    struct Exponential {
        double rate;   // mu > 0, h ~ Exp(mu) has mean 1/mu
        double power;  // P > 0
    };
    struct UserDefined {
        std::function<double(double)> cdf;
        std::function<double(double)> fractional_moment;  // e -> E[W^e]
        std::function<double(Rng&)> sampler;
    };

    static WeightDistribution deterministic(double power);
    static WeightDistribution exponential(double rate, double power);
    static WeightDistribution user_defined(UserDefined spec);

    bool is_deterministic() const { return std::holds_alternative<Deterministic>(law_); }
    bool is_exponential() const { return std::holds_alternative<Exponential>(law_); }
    bool is_user_defined() const { return std::holds_alternative<UserDefined>(law_); }

    const Deterministic& as_deterministic() const { return std::get<Deterministic>(law_); }
    const Exponential& as_exponential() const { return std::get<Exponential>(law_); }
    const UserDefined& as_user_defined() const { return std::get<UserDefined>(law_); }

    /// P(W <= w). Nondecreasing, 0 for w <= 0, -> 1 as w -> inf.
    double cdf(double w) const;

    /// E[W^e]. Throws MomentDivergesError when the moment is not finite
    /// (Exponential requires e > -1).
    double fractional_moment(double e) const;

    /// One draw of W.
    double sample(Rng& rng) const;

    /// Characteristic scale of the law (P for deterministic, P/mu for
    /// exponential, 1 otherwise). Used to size grids and truncation radii.
    double scale() const;

private:
    explicit WeightDistribution(std::variant<Deterministic, Exponential, UserDefined> law)
        : law_(std::move(law)) {}

    std::variant<Deterministic, Exponential, UserDefined> law_;
};

struct PathLoss {
    double alpha;  // path-loss exponent; > 2, or exactly 2 on the dedicated kernel
};

struct TierSpec {
    double density;  // stations per unit area, > 0
    WeightDistribution weights;
};

struct NetworkModel {
    std::vector<TierSpec> tiers;  // tier indices are 1-based in the API
    PathLoss pathloss{4.0};
    int dimension = 2;

    std::size_t num_tiers() const { return tiers.size(); }
    double total_density() const;
};

/// One broken invariant; `code` is a stable machine-readable tag.
struct Violation {
    std::string code;
    std::string message;
};

/// Checks every model invariant and returns the violations (empty = valid).
///
/// alpha must exceed 2, except that alpha == 2 exactly is accepted when every
/// tier has exponential weights (that case routes to its own kernel).
std::vector<Violation> validate(const NetworkModel& model);

/// Throws DomainError listing all violations if the model is invalid.
void require_valid(const NetworkModel& model);

enum class Method {
    ClosedForm,
    Series,
    Quadrature,
    MonteCarlo,
};

std::string to_string(Method method);

/// A computed moment of the typical cell area, with diagnostics.
struct MomentResult {
    double value = 0.0;       // E[V_k^p], units area^p
    double error = 0.0;       // absolute error estimate
    int order = 1;            // p
    int tier = 1;             // k, 1-based
    Method method = Method::Quadrature;
    std::uint64_t evaluations = 0;
    bool converged = true;
};

struct QuadConfig {
    double rel_tol = 1e-6;
    double abs_tol = 1e-10;
    double trunc_eps = 1e-9;  // controls spatial truncation radii
    std::uint64_t max_evals = 100'000'000;
};

struct MCConfig {
    std::uint64_t seed = 1;
    std::uint64_t realizations = 10'000;
    std::uint32_t points_per_realization = 256;
    double window_radius = 0.0;  // <= 0 means: pick from the model density
    double guard_radius = 0.0;   // <= 0 means: equal to window_radius
};

}  // namespace voronet
