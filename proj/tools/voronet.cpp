// voronet: moments of typical cell areas in multi-tier Poisson networks,
// and the derived base-station void probability.
//
// All commands read one JSON config describing the network model and emit a
// CSV (or mirrored JSON) table with columns
//   tier,order,method,value,error,evals,converged,seed
// Identical config + seed produces byte-identical output. Exit codes:
// 0 success, 2 invalid config or request, 3 a requested path failed to
// converge, 4 I/O failure.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "voronet/analytic.hpp"
#include "voronet/errors.hpp"
#include "voronet/model.hpp"
#include "voronet/monte_carlo.hpp"
#include "voronet/quadrature.hpp"
#include "voronet/void_prob.hpp"

namespace {

using nlohmann::json;
using ojson = nlohmann::ordered_json;
using namespace voronet;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IOError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Row {
    int tier = 1;
    int order = 0;
    std::string method;
    double value = 0.0;
    double error = 0.0;
    std::uint64_t evals = 0;
    bool converged = true;
    std::uint64_t seed = 0;
};

struct RunConfig {
    NetworkModel model;
    QuadConfig quad;
    MCConfig mc;
    std::string command;
    std::string method;  // empty = per-command default
    std::string format = "csv";
    std::string out;
    int order = -1;  // -1 = unset
    int tier = 1;
    double user_density = -1.0;
    std::optional<double> void_tol;
    int void_max_order = 3;
};

// 17 significant digits round-trip any IEEE-754 double exactly.
std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string render_csv(const std::vector<Row>& rows) {
    std::string text = "tier,order,method,value,error,evals,converged,seed\n";
    for (const auto& r : rows) {
        char head[96];
        std::snprintf(head, sizeof(head), "%d,%d,", r.tier, r.order);
        text += head;
        text += r.method;
        text += ',';
        text += fmt17(r.value);
        text += ',';
        text += fmt17(r.error);
        char tail[96];
        std::snprintf(tail, sizeof(tail), ",%" PRIu64 ",%d,%" PRIu64 "\n", r.evals,
                      r.converged ? 1 : 0, r.seed);
        text += tail;
    }
    return text;
}

std::string render_json(const std::vector<Row>& rows) {
    ojson out = ojson::array();
    for (const auto& r : rows) {
        ojson row;
        row["tier"] = r.tier;
        row["order"] = r.order;
        row["method"] = r.method;
        row["value"] = r.value;
        row["error"] = r.error;
        row["evals"] = r.evals;
        row["converged"] = r.converged;
        row["seed"] = r.seed;
        out.push_back(std::move(row));
    }
    return out.dump(2) + "\n";
}

WeightDistribution parse_weights(const json& j) {
    if (!j.is_object() || !j.contains("type")) {
        throw ConfigError("each tier needs weights:{type,...}");
    }
    const std::string type = j.at("type").get<std::string>();
    const double power = j.value("power", 1.0);
    if (type == "deterministic") {
        return WeightDistribution::deterministic(power);
    }
    if (type == "exponential") {
        if (!j.contains("rate")) {
            throw ConfigError("exponential weights need a rate");
        }
        return WeightDistribution::exponential(j.at("rate").get<double>(), power);
    }
    throw ConfigError("unknown weights type '" + type + "'");
}

RunConfig parse_config(const json& j) {
    RunConfig cfg;
    cfg.model.pathloss.alpha = j.value("alpha", 4.0);
    cfg.model.dimension = j.value("dimension", 2);
    if (j.contains("tiers")) {
        for (const auto& t : j.at("tiers")) {
            cfg.model.tiers.push_back(
                {t.value("density", 0.0), parse_weights(t.value("weights", json::object()))});
        }
    }
    if (j.contains("quad")) {
        const auto& q = j.at("quad");
        cfg.quad.rel_tol = q.value("rel_tol", cfg.quad.rel_tol);
        cfg.quad.abs_tol = q.value("abs_tol", cfg.quad.abs_tol);
        cfg.quad.trunc_eps = q.value("trunc_eps", cfg.quad.trunc_eps);
        cfg.quad.max_evals = q.value("max_evals", cfg.quad.max_evals);
    }
    if (j.contains("mc")) {
        const auto& m = j.at("mc");
        cfg.mc.seed = m.value("seed", cfg.mc.seed);
        cfg.mc.realizations = m.value("realizations", cfg.mc.realizations);
        cfg.mc.points_per_realization = m.value("points", cfg.mc.points_per_realization);
        cfg.mc.window_radius = m.value("window_radius", cfg.mc.window_radius);
        cfg.mc.guard_radius = m.value("guard_radius", cfg.mc.guard_radius);
    }
    if (j.contains("voidprob")) {
        const auto& v = j.at("voidprob");
        cfg.user_density = v.value("user_density", cfg.user_density);
        cfg.void_max_order = v.value("max_order", cfg.void_max_order);
        if (v.contains("tol")) cfg.void_tol = v.at("tol").get<double>();
    }
    cfg.command = j.value("command", cfg.command);
    cfg.method = j.value("method", cfg.method);
    cfg.format = j.value("format", cfg.format);
    if (j.contains("order")) cfg.order = j.at("order").get<int>();
    if (j.contains("tier")) cfg.tier = j.at("tier").get<int>();
    return cfg;
}

bool all_deterministic(const NetworkModel& m) {
    for (const auto& t : m.tiers) {
        if (!t.weights.is_deterministic()) return false;
    }
    return true;
}

bool all_exponential(const NetworkModel& m) {
    for (const auto& t : m.tiers) {
        if (!t.weights.is_exponential()) return false;
    }
    return true;
}

// Highest moment order the quadrature paths support for this model.
int quad_order_cap(const NetworkModel& m) {
    if (all_deterministic(m)) return 3;
    if (m.pathloss.alpha == 2.0 && all_exponential(m)) return 3;
    return 2;
}

bool series_applies(const NetworkModel& m, int tier, int order) {
    return order == 2 && tier == 1 && m.num_tiers() == 1 && m.pathloss.alpha == 2.0 &&
           m.tiers[0].weights.is_exponential();
}

MomentResult quad_moment(const NetworkModel& m, int tier, int order, const QuadConfig& qc) {
    if (all_deterministic(m)) return quadrature::moment_marpa(m, tier, order, qc);
    if (m.pathloss.alpha == 2.0 && all_exponential(m)) {
        return quadrature::moment_mirpa_alpha2(m, tier, order, qc);
    }
    return quadrature::moment_general(m, tier, order, qc);
}

Row row_from(const MomentResult& r) {
    return {r.tier, r.order, to_string(r.method), r.value,
            r.error, r.evaluations, r.converged, 0};
}

Row closed_row(const RunConfig& cfg, int order) {
    if (order != 1) {
        throw DomainError("closed form covers order 1 only; requested order " +
                          std::to_string(order));
    }
    return row_from(analytic::mean_cell_area(cfg.model, cfg.tier));
}

Row series_row(const RunConfig& cfg, int order) {
    if (!series_applies(cfg.model, cfg.tier, order)) {
        throw DomainError(
            "the series covers the second moment of a single exponential tier at alpha = 2");
    }
    return row_from(analytic::second_moment_mirpa_series(cfg.model.tiers[0].density, 1e-14));
}

Row quad_row(const RunConfig& cfg, int order) {
    return row_from(quad_moment(cfg.model, cfg.tier, order, cfg.quad));
}

Row mc_row(const RunConfig& cfg, int order) {
    const auto e = montecarlo::estimate_moment(cfg.model, cfg.tier, order, cfg.mc);
    return {cfg.tier,         order,          "monte_carlo", e.value,
            e.std_error,      e.realizations, true,          e.seed};
}

std::vector<Row> run_moment(const RunConfig& cfg, int order, const std::string& method) {
    std::vector<Row> rows;
    if (method == "closed") {
        rows.push_back(closed_row(cfg, order));
    } else if (method == "series") {
        rows.push_back(series_row(cfg, order));
    } else if (method == "quadrature") {
        rows.push_back(quad_row(cfg, order));
    } else if (method == "mc") {
        rows.push_back(mc_row(cfg, order));
    } else if (method == "all") {
        if (order == 1) rows.push_back(closed_row(cfg, order));
        if (series_applies(cfg.model, cfg.tier, order)) rows.push_back(series_row(cfg, order));
        if (cfg.model.dimension == 2 && order <= quad_order_cap(cfg.model)) {
            rows.push_back(quad_row(cfg, order));
        }
        if (cfg.model.dimension == 2) rows.push_back(mc_row(cfg, order));
    } else {
        throw ConfigError("unknown method '" + method + "'");
    }
    return rows;
}

std::vector<Row> run_voidprob(const RunConfig& cfg, const std::string& method) {
    if (cfg.user_density < 0.0) {
        throw ConfigError("voidprob needs voidprob.user_density >= 0 in the config");
    }
    std::vector<Row> rows;
    const bool want_series = method == "series" || method == "all";
    const bool want_approx = method == "closed" || method == "all";
    const bool want_mc = method == "mc" || method == "all";
    if (!want_series && !want_approx && !want_mc) {
        throw ConfigError("voidprob supports methods series, closed, mc, all");
    }

    if (want_series) {
        const int cap = std::min(cfg.order > 0 ? cfg.order : cfg.void_max_order,
                                 quad_order_cap(cfg.model));
        std::vector<double> moments{1.0};
        std::uint64_t evals = 0;
        for (int p = 1; p <= cap; ++p) {
            const auto r = p == 1 ? analytic::mean_cell_area(cfg.model, cfg.tier)
                                  : quad_moment(cfg.model, cfg.tier, p, cfg.quad);
            moments.push_back(r.value);
            evals += r.evaluations;
        }
        const auto s = voidprob::void_prob_series(moments, cfg.user_density, cfg.void_tol);
        rows.push_back({cfg.tier, cap, "series", s.value, s.bound, evals, !s.clamped, 0});
    }
    if (want_approx && cfg.model.num_tiers() == 1) {
        // Gamma approximation; its shape parameter diverges at alpha = 2 with
        // exponential weights, so that combination has no approx row.
        try {
            const double zeta = analytic::gamma_zeta(cfg.model.tiers[0].weights,
                                                     cfg.model.pathloss.alpha);
            const double v = analytic::void_prob_approx(cfg.user_density,
                                                        cfg.model.tiers[0].density, zeta);
            rows.push_back({cfg.tier, 0, "approx", v, 0.0, 0, true, 0});
        } catch (const DomainError&) {
            if (method == "closed") throw;
        }
    }
    if (want_mc) {
        const auto e =
            montecarlo::estimate_void_prob(cfg.model, cfg.tier, cfg.user_density, cfg.mc);
        rows.push_back(
            {cfg.tier, 0, "monte_carlo", e.value, e.std_error, e.realizations, true, e.seed});
    }
    return rows;
}

std::vector<Row> run_approx_compare(const RunConfig& cfg, int order) {
    if (cfg.model.num_tiers() != 1) {
        throw DomainError("approx-compare handles single-tier models");
    }
    const double density = cfg.model.tiers[0].density;
    const bool alpha2_exp =
        cfg.model.pathloss.alpha == 2.0 && cfg.model.tiers[0].weights.is_exponential();

    Row exact;
    if (series_applies(cfg.model, cfg.tier, order)) {
        exact = series_row(cfg, order);
    } else if (order == 1) {
        exact = closed_row(cfg, order);
    } else {
        exact = quad_row(cfg, order);
    }
    exact.method = "exact";

    // At alpha = 2 the Gamma shape parameter diverges, and its moments tend to
    // density^-p; elsewhere the finite-shape Gamma moment applies.
    double approx_value;
    if (alpha2_exp) {
        approx_value = std::pow(density, -order);
    } else {
        const double zeta =
            analytic::gamma_zeta(cfg.model.tiers[0].weights, cfg.model.pathloss.alpha);
        approx_value = analytic::approx_area_moment({zeta, density}, order);
    }

    std::vector<Row> rows;
    rows.push_back(exact);
    rows.push_back({cfg.tier, order, "approx", approx_value, 0.0, 0, true, 0});
    rows.push_back({cfg.tier, order, "rel_error_vs_exact",
                    std::abs(exact.value - approx_value) / std::abs(exact.value), 0.0, 0, true,
                    0});
    rows.push_back({cfg.tier, order, "rel_error_vs_approx",
                    std::abs(exact.value - approx_value) / std::abs(approx_value), 0.0, 0, true,
                    0});
    return rows;
}

void write_output(const RunConfig& cfg, const std::vector<Row>& rows) {
    const std::string text = cfg.format == "json" ? render_json(rows) : render_csv(rows);
    if (cfg.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) throw IOError("cannot open output path '" + cfg.out + "'");
    f << text;
    f.flush();
    if (!f.good()) throw IOError("failed writing output path '" + cfg.out + "'");
}

int run(const RunConfig& cfg) {
    if (cfg.command == "validate") {
        const auto violations = validate(cfg.model);
        for (const auto& v : violations) {
            std::cerr << v.code << ": " << v.message << "\n";
        }
        return violations.empty() ? 0 : 2;
    }

    const auto violations = validate(cfg.model);
    if (!violations.empty()) {
        for (const auto& v : violations) {
            std::cerr << v.code << ": " << v.message << "\n";
        }
        return 2;
    }
    if (cfg.tier < 1 || static_cast<std::size_t>(cfg.tier) > cfg.model.num_tiers()) {
        throw ConfigError("tier " + std::to_string(cfg.tier) + " out of range");
    }

    std::vector<Row> rows;
    if (cfg.command == "mean") {
        if (cfg.order > 1) throw ConfigError("mean is the order-1 moment; drop --order");
        rows = run_moment(cfg, 1, cfg.method.empty() ? "closed" : cfg.method);
    } else if (cfg.command == "moment") {
        const int order = cfg.order > 0 ? cfg.order : 1;
        rows = run_moment(cfg, order, cfg.method.empty() ? "all" : cfg.method);
    } else if (cfg.command == "voidprob") {
        rows = run_voidprob(cfg, cfg.method.empty() ? "all" : cfg.method);
    } else if (cfg.command == "approx-compare") {
        rows = run_approx_compare(cfg, cfg.order > 0 ? cfg.order : 2);
    } else if (cfg.command.empty()) {
        throw ConfigError("no command given; use --command or a \"command\" config key");
    } else {
        throw ConfigError("unknown command '" + cfg.command + "'");
    }

    write_output(cfg, rows);
    for (const auto& r : rows) {
        if (!r.converged) return 3;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"moments of typical cell areas in multi-tier Poisson networks"};
    std::string config_path;
    std::optional<std::string> command, method, format, out;
    std::optional<int> order, tier;
    std::optional<std::uint64_t> seed;
    app.add_option("--config", config_path, "JSON config describing the model")->required();
    app.add_option("--command", command, "mean | moment | voidprob | approx-compare | validate");
    app.add_option("--order", order, "moment order p");
    app.add_option("--tier", tier, "tier index k, 1-based");
    app.add_option("--method", method, "closed | series | quadrature | mc | all");
    app.add_option("--seed", seed, "Monte Carlo seed override");
    app.add_option("--out", out, "output path (default: stdout)");
    app.add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        std::ifstream f(config_path, std::ios::binary);
        if (!f) throw IOError("cannot read config '" + config_path + "'");
        json j;
        try {
            j = json::parse(f);
        } catch (const json::exception& e) {
            throw ConfigError(std::string("config parse error: ") + e.what());
        }
        RunConfig cfg = parse_config(j);
        if (command) cfg.command = *command;
        if (method) cfg.method = *method;
        if (format) cfg.format = *format;
        if (out) cfg.out = *out;
        if (order) cfg.order = *order;
        if (tier) cfg.tier = *tier;
        if (seed) cfg.mc.seed = *seed;
        return run(cfg);
    } catch (const IOError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NoConvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const InsufficientMomentsError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const WindowTooSmallError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: config: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
