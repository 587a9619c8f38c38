#include "ambimerton/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "ambimerton/hjb_pointwise.hpp"
#include "ambimerton/worst_case.hpp"

namespace ambimerton::cli {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

void stamp(ordered_json& doc, const OutputOptions& options) {
    if (!options.reproducible) {
        doc["generated_at"] = iso_timestamp();
    }
}

double require_number(const json& node, const char* key) {
    if (!node.contains(key) || !node[key].is_number()) {
        throw ConfigError(std::string("config: missing or non-numeric field '") + key + "'");
    }
    return node[key].get<double>();
}

std::pair<double, double> require_interval(const json& node, const char* key) {
    if (!node.contains(key) || !node[key].is_array() || node[key].size() != 2 ||
        !node[key][0].is_number() || !node[key][1].is_number()) {
        throw ConfigError(std::string("config: field '") + key +
                          "' must be a two-element numeric array [lo, hi]");
    }
    return {node[key][0].get<double>(), node[key][1].get<double>()};
}

void write_output(std::string text, const OutputOptions& options, std::ostream& log) {
    if (text.empty() || text.back() != '\n') text.push_back('\n');
    if (options.out_path.empty()) {
        log << text;
        return;
    }
    std::ofstream out(options.out_path, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot open output path '" + options.out_path + "' for writing");
    }
    out << text;
}

std::string json_text(const ordered_json& doc) { return doc.dump(2); }

// Shared numeric formatting for CSV/SVG cells.
std::string num(double v) {
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
}

ordered_json spec_json(const AmbiguitySpec& spec) {
    ordered_json out;
    out["assets"] = ordered_json::array();
    for (const auto& a : spec.assets) {
        out["assets"].push_back({{"mu", {a.mu_lo, a.mu_hi}}, {"sigma", {a.sigma_lo, a.sigma_hi}}});
    }
    out["rate"] = {spec.rate_lo, spec.rate_hi};
    return out;
}

const char* svg_color(const std::string& regime) {
    if (regime == "NonParticipation") return "#9e9e9e";
    if (regime == "LongAndSave" || regime == "LongLowDrift") return "#2e7d32";
    if (regime == "AllInAsset") return "#f9a825";
    if (regime == "LongAndBorrow") return "#c62828";
    if (regime == "ShortAndSave" || regime == "Short") return "#1565c0";
    return "#6a1b9a";
}

}  // namespace

Grid1D RunConfig::resolved_grid() const {
    if (grid) return *grid;
    return Grid1D::for_wealth(x0, 400, 2000, crra.horizon_t);
}

RunConfig parse_config(const json& doc) {
    if (!doc.contains("spec") || !doc["spec"].is_object()) {
        throw ConfigError("config: missing 'spec' object");
    }
    const json& spec_node = doc["spec"];
    if (!spec_node.contains("assets") || !spec_node["assets"].is_array()) {
        throw ConfigError("config: 'spec.assets' must be an array");
    }
    std::vector<AssetAmbiguity> assets;
    for (const auto& node : spec_node["assets"]) {
        const auto [mu_lo, mu_hi] = require_interval(node, "mu");
        const auto [sigma_lo, sigma_hi] = require_interval(node, "sigma");
        assets.emplace_back(mu_lo, mu_hi, sigma_lo, sigma_hi);
    }
    const auto [rate_lo, rate_hi] = require_interval(spec_node, "rate");
    AmbiguitySpec spec(std::move(assets), rate_lo, rate_hi);

    if (!doc.contains("crra") || !doc["crra"].is_object()) {
        throw ConfigError("config: missing 'crra' object");
    }
    const json& crra_node = doc["crra"];
    CrraParams crra(require_number(crra_node, "alpha"), require_number(crra_node, "bequest_k"),
                    require_number(crra_node, "horizon_t"));

    RunConfig config(std::move(spec), crra);
    config.x0 = doc.contains("x0") ? require_number(doc, "x0") : 1.0;
    if (!(config.x0 > 0.0)) throw ConfigError("config: x0 must be > 0");

    if (doc.contains("grid")) {
        const json& g = doc["grid"];
        const int nx = static_cast<int>(require_number(g, "nx"));
        const int nt = static_cast<int>(require_number(g, "nt"));
        const double x_min = g.contains("x_min") ? require_number(g, "x_min") : 0.01 * config.x0;
        const double x_max = g.contains("x_max") ? require_number(g, "x_max") : 100.0 * config.x0;
        GridSpacing spacing = GridSpacing::Log;
        if (g.contains("spacing")) {
            const std::string s = g["spacing"].get<std::string>();
            if (s == "uniform") {
                spacing = GridSpacing::Uniform;
            } else if (s != "log") {
                throw ConfigError("config: grid.spacing must be 'log' or 'uniform'");
            }
        }
        config.grid = Grid1D(x_min, x_max, nx, nt, crra.horizon_t, spacing);
    }

    if (doc.contains("mc")) {
        const json& m = doc["mc"];
        McSection mc;
        mc.config.n_paths = static_cast<int>(require_number(m, "n_paths"));
        mc.config.n_steps = static_cast<int>(require_number(m, "n_steps"));
        if (m.contains("seed")) mc.config.seed = m["seed"].get<std::uint64_t>();
        if (m.contains("prior_grid")) {
            const json& pg = m["prior_grid"];
            mc.prior_grid.n_mu = static_cast<int>(require_number(pg, "n_mu"));
            mc.prior_grid.n_sigma = static_cast<int>(require_number(pg, "n_sigma"));
            mc.prior_grid.n_r = static_cast<int>(require_number(pg, "n_r"));
        }
        if (m.contains("policy_grid")) {
            const json& pg = m["policy_grid"];
            mc.policy_grid.lo = require_number(pg, "lo");
            mc.policy_grid.hi = require_number(pg, "hi");
            mc.policy_grid.count = static_cast<int>(require_number(pg, "count"));
        }
        config.mc = mc;
    }

    if (doc.contains("sweep")) {
        const json& s = doc["sweep"];
        SweepSpec sweep;
        if (!s.contains("axis") || !s["axis"].is_string()) {
            throw ConfigError("config: sweep.axis must be 'mu_lo' or 'r_lo'");
        }
        sweep.axis = s["axis"].get<std::string>();
        sweep.lo = require_number(s, "lo");
        sweep.hi = require_number(s, "hi");
        sweep.count = static_cast<int>(require_number(s, "count"));
        config.sweep = sweep;
    }

    if (doc.contains("verify") && doc["verify"].contains("tolerance")) {
        config.verify_tolerance = require_number(doc["verify"], "tolerance");
    }
    return config;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json doc;
    try {
        in >> doc;
        return parse_config(doc);
    } catch (const json::exception& e) {
        throw ConfigError("config error in '" + path + "': " + e.what());
    }
}

int resolve_threads(const OutputOptions& options) {
    if (options.threads > 0) return options.threads;
    if (const char* env = std::getenv("AMBIMERTON_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return 1;
}

// -- policy -------------------------------------------------------------------

nlohmann::ordered_json policy_report(const RunConfig& config) {
    const CrraSolution sol = solve_crra(config.spec, config.crra);
    ordered_json doc;
    doc["model"] = config.spec.fixed_rate() ? "fixed_rate" : "rate_ambiguity";
    doc["spec"] = spec_json(config.spec);
    doc["crra"] = {{"alpha", config.crra.alpha},
                   {"bequest_k", config.crra.bequest_k},
                   {"horizon_t", config.crra.horizon_t}};
    doc["x0"] = config.x0;
    doc["beta"] = sol.beta;
    doc["consumption_fraction_t0"] = sol.consumption_fraction(0.0);
    doc["phi0"] = value_function(MarketPoint(0.0, config.x0), sol);

    if (config.spec.fixed_rate()) {
        doc["assets"] = ordered_json::array();
        for (std::size_t i = 0; i < config.spec.n_assets(); ++i) {
            doc["assets"].push_back({{"index", i},
                                     {"regime", to_string(sol.drift_regimes[i])},
                                     {"pi", sol.pi_star[i]}});
        }
    } else {
        doc["regime"] = to_string(sol.rate_regime->label);
        doc["pi"] = sol.rate_regime->pi_star;
    }
    doc["worst_case"] = {{"mu_star", sol.worst_case.mu_star},
                         {"sigma_star", sol.worst_case.sigma_star},
                         {"r_star", sol.worst_case.r_star}};
    return doc;
}

int cmd_policy(const RunConfig& config, const OutputOptions& options, std::ostream& log) {
    ordered_json doc = policy_report(config);
    stamp(doc, options);
    write_output(json_text(doc), options, log);
    return kExitOk;
}

// -- regions --------------------------------------------------------------------

RegionDiagram region_sweep(const RunConfig& config) {
    if (!config.sweep) {
        throw ConfigError("regions: config has no 'sweep' section");
    }
    const SweepSpec& sweep = *config.sweep;
    if (sweep.count < 1 || !(sweep.lo <= sweep.hi)) {
        throw std::invalid_argument("EmptySweep: sweep range [" + std::to_string(sweep.lo) +
                                    ", " + std::to_string(sweep.hi) + "] with count " +
                                    std::to_string(sweep.count));
    }
    if (sweep.axis != "mu_lo" && sweep.axis != "r_lo") {
        throw ConfigError("regions: sweep.axis must be 'mu_lo' or 'r_lo'");
    }
    if (config.spec.n_assets() != 1) {
        throw ConfigError("regions: sweeps are defined for a single risky asset");
    }
    const AssetAmbiguity base = config.spec.assets[0];
    const double alpha = config.crra.alpha;
    const double var_hi = base.sigma_hi * base.sigma_hi;

    RegionDiagram diagram;
    diagram.axis = sweep.axis;
    for (int i = 0; i < sweep.count; ++i) {
        const double p =
            sweep.count == 1 ? sweep.lo
                             : sweep.lo + i * (sweep.hi - sweep.lo) / (sweep.count - 1);
        double mu_lo = base.mu_lo;
        double rate_lo = config.spec.rate_lo;
        double rate_hi = config.spec.rate_hi;
        if (sweep.axis == "mu_lo") {
            mu_lo = p;
        } else {
            rate_lo = p;
            // A degenerate rate interval sweeps the single known rate.
            if (config.spec.fixed_rate()) rate_hi = p;
        }
        if (mu_lo > base.mu_hi || rate_lo > rate_hi) {
            throw ValidationError({{ViolationCode::IntervalInverted,
                                    "sweep point " + std::to_string(p) +
                                        " inverts an interval; shrink the sweep range"}});
        }
        const AssetAmbiguity asset(mu_lo, base.mu_hi, base.sigma_lo, base.sigma_hi);
        RegionRow row{p, "", 0.0};
        if (rate_lo == rate_hi) {
            row.regime = to_string(classify_drift_regime(asset, rate_lo));
            row.pi_star = optimal_portfolio_fixed_rate(asset, rate_lo, config.crra);
        } else {
            const RateRegime regime = classify_rate_regime(asset, rate_lo, rate_hi, alpha);
            row.regime = to_string(regime.label);
            row.pi_star = regime.pi_star;
        }
        diagram.rows.push_back(row);
    }

    // Regime boundaries from the pi thresholds, restricted to the range.
    auto add_boundary = [&](double value, const std::string& label) {
        if (value >= sweep.lo && value <= sweep.hi) {
            diagram.boundaries.push_back({value, label});
        }
    };
    if (config.spec.fixed_rate()) {
        if (sweep.axis == "mu_lo") {
            add_boundary(config.spec.rate_lo, "mu_lo = r");
        } else {
            add_boundary(base.mu_lo, "r = mu_lo");
            add_boundary(base.mu_hi, "r = mu_hi");
        }
    } else if (sweep.axis == "mu_lo") {
        add_boundary(config.spec.rate_lo, "pi2 = 0");
        add_boundary(config.spec.rate_lo + alpha * var_hi, "pi2 = 1");
        add_boundary(config.spec.rate_hi + alpha * var_hi, "pi3 = 1");
    } else {
        add_boundary(base.mu_hi, "pi1 = 0");
        add_boundary(base.mu_lo, "pi2 = 0");
        add_boundary(base.mu_lo - alpha * var_hi, "pi2 = 1");
    }
    std::sort(diagram.boundaries.begin(), diagram.boundaries.end(),
              [](const RegionBoundary& a, const RegionBoundary& b) { return a.value < b.value; });
    return diagram;
}

std::string sweep_csv(const RegionDiagram& diagram) {
    std::ostringstream os;
    os << "param,regime,pi_star\n";
    for (const auto& row : diagram.rows) {
        os << num(row.param) << "," << row.regime << "," << num(row.pi_star) << "\n";
    }
    return os.str();
}

std::string sweep_svg(const RegionDiagram& diagram) {
    const int width = 860;
    const int height = 160;
    const int x0 = 40, x1 = width - 40;
    const int bar_y = 60, bar_h = 28;
    const double lo = diagram.rows.front().param;
    const double hi = diagram.rows.back().param;
    const double span = hi > lo ? hi - lo : 1.0;
    auto to_px = [&](double v) { return x0 + (v - lo) / span * (x1 - x0); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
       << height << "\">\n";
    os << "  <text x=\"" << x0 << "\" y=\"24\" font-size=\"14\">regime map over " << diagram.axis
       << "</text>\n";

    // Contiguous runs of equal regime become colored segments.
    std::size_t start = 0;
    while (start < diagram.rows.size()) {
        std::size_t end = start;
        while (end + 1 < diagram.rows.size() &&
               diagram.rows[end + 1].regime == diagram.rows[start].regime) {
            ++end;
        }
        const double seg_lo = diagram.rows[start].param;
        const double seg_hi = diagram.rows[end].param;
        const std::string& regime = diagram.rows[start].regime;
        os << "  <rect x=\"" << to_px(seg_lo) << "\" y=\"" << bar_y << "\" width=\""
           << std::max(1.0, to_px(seg_hi) - to_px(seg_lo)) << "\" height=\"" << bar_h
           << "\" fill=\"" << svg_color(regime) << "\"><title>" << regime << "</title></rect>\n";
        os << "  <text x=\"" << (to_px(seg_lo) + to_px(seg_hi)) / 2.0 << "\" y=\""
           << bar_y + bar_h + 16 << "\" font-size=\"10\" text-anchor=\"middle\">" << regime
           << "</text>\n";
        start = end + 1;
    }
    for (const auto& boundary : diagram.boundaries) {
        const double px = to_px(boundary.value);
        os << "  <line x1=\"" << px << "\" y1=\"" << bar_y - 10 << "\" x2=\"" << px << "\" y2=\""
           << bar_y + bar_h + 4 << "\" stroke=\"#000\" stroke-dasharray=\"3,2\"/>\n";
        os << "  <text x=\"" << px << "\" y=\"" << bar_y - 16
           << "\" font-size=\"10\" text-anchor=\"middle\">" << boundary.label << " ("
           << num(boundary.value) << ")</text>\n";
    }
    os << "  <line x1=\"" << x0 << "\" y1=\"" << bar_y + bar_h + 30 << "\" x2=\"" << x1
       << "\" y2=\"" << bar_y + bar_h + 30 << "\" stroke=\"#333\"/>\n";
    os << "  <text x=\"" << x0 << "\" y=\"" << bar_y + bar_h + 46 << "\" font-size=\"10\">"
       << num(lo) << "</text>\n";
    os << "  <text x=\"" << x1 << "\" y=\"" << bar_y + bar_h + 46
       << "\" font-size=\"10\" text-anchor=\"end\">" << num(hi) << "</text>\n";
    os << "</svg>\n";
    return os.str();
}

int cmd_regions(const RunConfig& config, const OutputOptions& options, std::ostream& log) {
    const RegionDiagram diagram = region_sweep(config);
    if (options.format == "svg") {
        write_output(sweep_svg(diagram), options, log);
    } else if (options.format == "csv") {
        write_output(sweep_csv(diagram), options, log);
    } else {
        ordered_json doc;
        doc["axis"] = diagram.axis;
        doc["rows"] = ordered_json::array();
        for (const auto& row : diagram.rows) {
            doc["rows"].push_back(
                {{"param", row.param}, {"regime", row.regime}, {"pi_star", row.pi_star}});
        }
        doc["boundaries"] = ordered_json::array();
        for (const auto& boundary : diagram.boundaries) {
            doc["boundaries"].push_back({{"value", boundary.value}, {"label", boundary.label}});
        }
        stamp(doc, options);
        write_output(json_text(doc), options, log);
    }
    return kExitOk;
}

// -- verify -----------------------------------------------------------------

VerifyOutcome run_verify(const RunConfig& config) {
    const Grid1D grid = config.resolved_grid();
    const CrraSolution sol = solve_crra(config.spec, config.crra);
    ValueSurface surface = config.spec.fixed_rate()
                               ? solve_hjb_fixed_rate(config.spec, config.crra, grid)
                               : solve_hjb_rate_ambiguity(config.spec, config.crra, grid);

    const int nx = grid.nx;
    const int lo = nx / 5;
    const int hi = nx - nx / 5;  // middle 60% of the wealth nodes

    // Pointwise relative error against the closed form, on the delivered
    // t = 0 slice and as a max over the whole surface.
    double err_t0 = 0.0;
    double err_surface = 0.0;
    for (int k = 0; k <= grid.nt; ++k) {
        const double t = grid.dt() * k;
        double slice_err = 0.0;
        for (int i = lo; i < hi; ++i) {
            const double exact = value_function(MarketPoint(t, surface.x[i]), sol);
            const double err = std::abs(surface.value_at(k, i) - exact) / std::abs(exact);
            slice_err = std::max(slice_err, err);
        }
        err_surface = std::max(err_surface, slice_err);
        if (k == 0) err_t0 = slice_err;
    }

    // Interior policy deviation from the constant closed-form weights.
    double policy_dev = 0.0;
    for (int k = 0; k < grid.nt; ++k) {
        for (int i = lo; i < hi; ++i) {
            for (int j = 0; j < surface.n_assets; ++j) {
                policy_dev = std::max(policy_dev,
                                      std::abs(surface.pi_at(k, i, j) - sol.pi_star[j]));
            }
        }
    }

    // Residual of the f-ODE along the horizon, centered differences.
    const double step = 1e-4;
    double ode_residual = 0.0;
    for (int i = 1; i < 200; ++i) {
        const double t = config.crra.horizon_t * i / 200.0;
        if (t - step < 0.0 || t + step > config.crra.horizon_t) continue;
        const double f0 = sol.f(t);
        const double fp = (sol.f(t + step) - sol.f(t - step)) / (2.0 * step);
        const double residual =
            config.crra.alpha * std::pow(f0, 1.0 - 1.0 / config.crra.alpha) + sol.beta * f0 + fp;
        ode_residual = std::max(ode_residual, std::abs(residual) / std::max(1.0, f0));
    }

    const ShapeReport shape = check_shape(surface);
    const bool pass = err_t0 <= config.verify_tolerance && shape.ok();

    ordered_json report;
    report["model"] = config.spec.fixed_rate() ? "fixed_rate" : "rate_ambiguity";
    report["grid"] = {{"x_min", grid.x_min}, {"x_max", grid.x_max},   {"nx", grid.nx},
                      {"nt", grid.nt},       {"t_max", grid.t_max},
                      {"spacing", grid.spacing == GridSpacing::Log ? "log" : "uniform"}};
    report["beta"] = sol.beta;
    report["closed_form_phi0"] = value_function(MarketPoint(0.0, config.x0), sol);
    report["max_rel_err_t0_interior"] = err_t0;
    report["max_rel_err_surface_interior"] = err_surface;
    report["policy_max_abs_dev_interior"] = policy_dev;
    report["ode_residual_max"] = ode_residual;
    report["shape_monotone"] = shape.monotone;
    report["shape_concave"] = shape.concave;
    report["tolerance"] = config.verify_tolerance;
    report["pass"] = pass;
    if (!pass) {
        report["hint"] = "refine the grid (increase nx and nt jointly, respecting the CFL bound)";
    }
    return VerifyOutcome{std::move(report), pass, std::move(surface)};
}

std::string surface_csv(const ValueSurface& surface) {
    std::ostringstream os;
    if (surface.n_assets == 1) {
        os << "t,x,phi,pi,c\n";
    } else {
        os << "t,x,phi";
        for (int j = 1; j <= surface.n_assets; ++j) os << ",pi_" << j;
        os << ",c\n";
    }
    const double dt = surface.grid.dt();
    for (int k = 0; k <= surface.grid.nt; ++k) {
        const int policy_row = std::min(k, surface.grid.nt - 1);
        for (int i = 0; i < surface.grid.nx; ++i) {
            os << num(k * dt) << "," << num(surface.x[i]) << "," << num(surface.value_at(k, i));
            for (int j = 0; j < surface.n_assets; ++j) {
                os << "," << num(surface.pi_at(policy_row, i, j));
            }
            os << "," << num(surface.c_at(policy_row, i)) << "\n";
        }
    }
    return os.str();
}

int cmd_verify(const RunConfig& config, const OutputOptions& options, std::ostream& log) {
    VerifyOutcome outcome = run_verify(config);
    log << "max_rel_err <= " << config.verify_tolerance << ": "
        << (outcome.pass ? "PASS" : "FAIL") << " (t0 interior err = "
        << outcome.report["max_rel_err_t0_interior"].get<double>() << ")\n";
    if (options.format == "csv") {
        write_output(surface_csv(outcome.surface), options, log);
    } else {
        ordered_json doc = std::move(outcome.report);
        stamp(doc, options);
        write_output(json_text(doc), options, log);
    }
    return outcome.pass ? kExitOk : kExitTolerance;
}

// -- minimax -----------------------------------------------------------------

MinimaxOutcome run_minimax(const RunConfig& config, const OutputOptions& options) {
    if (!config.mc) throw ConfigError("minimax: config has no 'mc' section");
    McSection mc = *config.mc;
    if (options.seed) mc.config.seed = *options.seed;
    mc.config.threads = resolve_threads(options);

    MinimaxReport table =
        minimax_table(config.spec, config.crra, config.x0, mc.prior_grid, mc.policy_grid,
                      mc.config);
    const bool pass = table.gap <= 3.0 * table.max_se;

    const ConstantPrior& argmin = table.priors[table.argmin_prior_at_robust];
    ordered_json doc;
    doc["spec"] = spec_json(config.spec);
    doc["x0"] = config.x0;
    doc["n_paths"] = mc.config.n_paths;
    doc["n_steps"] = mc.config.n_steps;
    doc["seed"] = mc.config.seed;
    doc["n_priors"] = table.priors.size();
    doc["n_policies"] = table.policies.size();
    doc["maxmin"] = table.maxmin;
    doc["minmax"] = table.minmax;
    doc["gap"] = table.gap;
    doc["max_se"] = table.max_se;
    doc["gap_limit_3se"] = 3.0 * table.max_se;
    doc["robust_pi"] = table.policies[table.robust_policy_index];
    doc["argmin_prior_at_robust"] = {{"mu", argmin.mu[0]}, {"sigma", argmin.sigma[0]},
                                     {"r", argmin.r}};
    doc["pass"] = pass;
    return MinimaxOutcome{std::move(doc), pass, std::move(table)};
}

std::string minimax_csv(const MinimaxReport& table) {
    std::ostringstream os;
    os << "mu,sigma,r,pi,utility_mean,utility_se\n";
    for (std::size_t p = 0; p < table.priors.size(); ++p) {
        for (std::size_t q = 0; q < table.policies.size(); ++q) {
            os << num(table.priors[p].mu[0]) << "," << num(table.priors[p].sigma[0]) << ","
               << num(table.priors[p].r) << "," << num(table.policies[q]) << ","
               << num(table.mean_at(p, q)) << "," << num(table.se_at(p, q)) << "\n";
        }
    }
    return os.str();
}

int cmd_minimax(const RunConfig& config, const OutputOptions& options, std::ostream& log) {
    MinimaxOutcome outcome = run_minimax(config, options);
    log << "saddle gap " << outcome.report["gap"].get<double>() << " vs 3*SE "
        << outcome.report["gap_limit_3se"].get<double>() << ": "
        << (outcome.pass ? "PASS" : "FAIL") << "\n";
    if (options.format == "csv") {
        write_output(minimax_csv(outcome.table), options, log);
    } else {
        ordered_json doc = std::move(outcome.report);
        stamp(doc, options);
        write_output(json_text(doc), options, log);
    }
    return outcome.pass ? kExitOk : kExitTolerance;
}

}  // namespace ambimerton::cli
