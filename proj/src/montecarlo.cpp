#include "ambimerton/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

#include "ambimerton/closed_form.hpp"
#include "ambimerton/rng.hpp"

namespace ambimerton {

namespace {

// Static range partition over [0, n); deterministic output placement.
template <typename Body>
void parallel_for(int n, int threads, Body&& body) {
    threads = std::max(1, std::min(threads, n));
    if (threads == 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const int chunk = (n + threads - 1) / threads;
    for (int w = 0; w < threads; ++w) {
        const int lo = w * chunk;
        const int hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (int i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

// Endpoint-inclusive grid, geometric when the interval allows it.
std::vector<double> parameter_grid(double lo, double hi, int count) {
    std::vector<double> out;
    if (count <= 1 || lo == hi) {
        out.push_back(lo);
        return out;
    }
    out.resize(count);
    if (lo > 0.0) {
        const double ratio = std::pow(hi / lo, 1.0 / (count - 1));
        double v = lo;
        for (int i = 0; i < count; ++i, v *= ratio) out[i] = v;
    } else {
        const double step = (hi - lo) / (count - 1);
        for (int i = 0; i < count; ++i) out[i] = lo + i * step;
    }
    out.front() = lo;
    out.back() = hi;
    return out;
}

}  // namespace

ConsumptionRule ConsumptionRule::closed_form(double beta) {
    return {Kind::ClosedFormFraction, beta, 0.0};
}

ConsumptionRule ConsumptionRule::fixed(double fraction) {
    if (!(fraction >= 0.0)) {
        throw std::invalid_argument("ConsumptionRule::fixed: fraction must be >= 0");
    }
    return {Kind::FixedFraction, 0.0, fraction};
}

double ConsumptionRule::fraction_at(double t, const CrraParams& crra) const {
    if (kind == Kind::FixedFraction) return fraction;
    return std::pow(f_factor(t, beta, crra), -1.0 / crra.alpha);
}

ScenarioBatch simulate_utility(const ConstantPrior& prior, const ConstantPolicy& policy,
                               const CrraParams& crra, double x0, int n_paths, int n_steps,
                               std::uint64_t seed, long long max_step_budget) {
    if (!(x0 > 0.0)) throw std::invalid_argument("simulate_utility: x0 must be > 0");
    if (n_paths < 2 || n_steps < 1) {
        throw std::invalid_argument("simulate_utility: need n_paths >= 2 and n_steps >= 1");
    }
    const std::size_t d = policy.pi.size();
    if (prior.mu.size() != d || prior.sigma.size() != d || d == 0) {
        throw std::invalid_argument("simulate_utility: prior/policy asset counts differ");
    }
    if (static_cast<long long>(n_paths) * n_steps > max_step_budget) {
        throw BudgetExceeded("simulate_utility: " + std::to_string(n_paths) + " x " +
                             std::to_string(n_steps) + " exceeds the step budget " +
                             std::to_string(max_step_budget));
    }

    const double dt = crra.horizon_t / n_steps;
    const double sqrt_dt = std::sqrt(dt);

    // Aggregate drift and volatility of the wealth return: independent
    // Brownian components per asset collapse into one normal draw.
    double drift = prior.r;
    double variance = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        drift += policy.pi[j] * (prior.mu[j] - prior.r);
        const double s = policy.pi[j] * prior.sigma[j];
        variance += s * s;
        if (std::abs(policy.pi[j]) * prior.sigma[j] * sqrt_dt >= 0.5) {
            throw std::invalid_argument(
                "simulate_utility: |pi| sigma sqrt(dt) >= 0.5; increase n_steps");
        }
    }
    const double vol = std::sqrt(variance);

    std::vector<double> fractions(n_steps);
    for (int k = 0; k < n_steps; ++k) {
        fractions[k] = policy.consumption.fraction_at(k * dt, crra);
    }

    std::vector<double> utilities(n_paths);
    std::vector<unsigned char> absorbed_flags(n_paths, 0);
    bool non_finite = false;

    for (int j = 0; j < n_paths; ++j) {
        NormalStream stream = path_stream(seed, static_cast<std::uint64_t>(j));
        double wealth = x0;
        double utility = 0.0;
        bool absorbed = false;
        for (int k = 0; k < n_steps; ++k) {
            const double consumption = fractions[k] * wealth;
            utility += crra_utility(consumption, crra.alpha) * dt;
            const double z = stream.next();
            wealth += wealth * (drift * dt + vol * sqrt_dt * z) - consumption * dt;
            if (!std::isfinite(wealth)) {
                non_finite = true;
                break;
            }
            if (wealth <= 0.0) {
                // Absorbed at zero: no further consumption, no bequest.
                absorbed = true;
                break;
            }
        }
        if (non_finite) break;
        if (!absorbed) utility += crra_bequest(wealth, crra);
        utilities[j] = utility;
        absorbed_flags[j] = absorbed ? 1 : 0;
    }
    if (non_finite) {
        throw NonFiniteState("simulate_utility: wealth became non-finite; reduce dt");
    }

    int absorbed_count = 0;
    for (auto flag : absorbed_flags) absorbed_count += flag;
    if (absorbed_count * 1000 >= n_paths) {
        throw AbsorptionRateExceeded("simulate_utility: " + std::to_string(absorbed_count) +
                                     " of " + std::to_string(n_paths) +
                                     " paths hit zero wealth; refine dt");
    }

    double sum = 0.0;
    for (double u : utilities) sum += u;
    const double mean = sum / n_paths;
    double ss = 0.0;
    for (double u : utilities) ss += (u - mean) * (u - mean);
    const double se = std::sqrt(ss / (static_cast<double>(n_paths) - 1.0) / n_paths);

    return ScenarioBatch{n_paths, n_steps, mean, se, seed, absorbed_count};
}

MinimaxReport minimax_table(const AmbiguitySpec& spec, const CrraParams& crra, double x0,
                            const PriorGridSpec& prior_grid, const PolicyGridSpec& policy_grid,
                            const McConfig& config) {
    validate_spec(spec);
    if (spec.n_assets() != 1) {
        throw std::invalid_argument("minimax_table: one risky asset expected");
    }
    if (prior_grid.n_mu < 1 || prior_grid.n_sigma < 1 || prior_grid.n_r < 1 ||
        policy_grid.count < 1) {
        throw std::invalid_argument("minimax_table: grids must be non-empty");
    }
    if (policy_grid.count > 1 && !(policy_grid.lo < policy_grid.hi)) {
        throw std::invalid_argument("minimax_table: policy grid interval inverted");
    }

    const auto& asset = spec.assets[0];
    const auto mus = parameter_grid(asset.mu_lo, asset.mu_hi, prior_grid.n_mu);
    const auto sigmas = parameter_grid(asset.sigma_lo, asset.sigma_hi, prior_grid.n_sigma);
    const auto rates = parameter_grid(spec.rate_lo, spec.rate_hi, prior_grid.n_r);

    MinimaxReport report;
    for (double rr : rates) {
        for (double sg : sigmas) {
            for (double mu : mus) {
                report.priors.push_back(ConstantPrior{{mu}, {sg}, rr});
            }
        }
    }
    report.policies.resize(policy_grid.count);
    for (int i = 0; i < policy_grid.count; ++i) {
        report.policies[i] =
            policy_grid.count == 1
                ? policy_grid.lo
                : policy_grid.lo +
                      i * (policy_grid.hi - policy_grid.lo) / (policy_grid.count - 1);
    }

    // Every policy consumes at the robust closed-form fraction; only the
    // constant weight varies across the table.
    const ConsumptionRule rule = ConsumptionRule::closed_form(solve_crra(spec, crra).beta);

    const int n_priors = static_cast<int>(report.priors.size());
    const int n_policies = static_cast<int>(report.policies.size());
    const int n_cells = n_priors * n_policies;
    report.mean.resize(n_cells);
    report.se.resize(n_cells);

    parallel_for(n_cells, config.threads, [&](int cell) {
        const int p = cell / n_policies;
        const int q = cell % n_policies;
        const ConstantPolicy policy{{report.policies[q]}, rule};
        const ScenarioBatch batch =
            simulate_utility(report.priors[p], policy, crra, x0, config.n_paths,
                             config.n_steps, config.seed, config.max_step_budget);
        report.mean[cell] = batch.utility_mean;
        report.se[cell] = batch.utility_se;
    });

    report.max_se = *std::max_element(report.se.begin(), report.se.end());

    // max_pi min_P
    report.maxmin = -std::numeric_limits<double>::infinity();
    for (int q = 0; q < n_policies; ++q) {
        double worst = std::numeric_limits<double>::infinity();
        for (int p = 0; p < n_priors; ++p) worst = std::min(worst, report.mean_at(p, q));
        if (worst > report.maxmin) {
            report.maxmin = worst;
            report.robust_policy_index = q;
        }
    }
    // min_P max_pi
    report.minmax = std::numeric_limits<double>::infinity();
    for (int p = 0; p < n_priors; ++p) {
        double best = -std::numeric_limits<double>::infinity();
        for (int q = 0; q < n_policies; ++q) best = std::max(best, report.mean_at(p, q));
        if (best < report.minmax) {
            report.minmax = best;
            report.minmax_prior_index = p;
        }
    }
    report.gap = report.minmax - report.maxmin;

    double worst_at_robust = std::numeric_limits<double>::infinity();
    for (int p = 0; p < n_priors; ++p) {
        const double v = report.mean_at(p, report.robust_policy_index);
        if (v < worst_at_robust) {
            worst_at_robust = v;
            report.argmin_prior_at_robust = p;
        }
    }
    return report;
}

}  // namespace ambimerton
