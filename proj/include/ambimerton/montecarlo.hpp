// Monte Carlo layer: wealth-path simulation under one constant-parameter
// prior, and the brute-force minimax table over a prior grid crossed
// with a constant-weight policy grid. Everything is deterministic given
// the seed, for any thread count.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ambimerton/model.hpp"

namespace ambimerton {

/// One classical hypothesis: constant per-asset drift/volatility and a
/// constant rate. Membership in the spec rectangle is enforced where the
/// grid is built, not here (tests legitimately probe sigma = 0).
struct ConstantPrior {
    std::vector<double> mu;
    std::vector<double> sigma;
    double r;
};

/// Wealth-proportional consumption: either the CRRA closed-form fraction
/// f(t)^(-1/alpha) for a given growth rate, or a fixed fraction.
struct ConsumptionRule {
    enum class Kind { ClosedFormFraction, FixedFraction };
    Kind kind;
    double beta = 0.0;      // ClosedFormFraction
    double fraction = 0.0;  // FixedFraction

    static ConsumptionRule closed_form(double beta);
    static ConsumptionRule fixed(double fraction);
    double fraction_at(double t, const CrraParams& crra) const;
};

struct ConstantPolicy {
    std::vector<double> pi;
    ConsumptionRule consumption;
};

struct ScenarioBatch {
    int n_paths = 0;
    int n_steps = 0;
    double utility_mean = 0.0;
    double utility_se = 0.0;
    std::uint64_t seed = 0;
    int absorbed_paths = 0;
};

class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NonFiniteState : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when bankrupt paths exceed 0.1%: with proportional consumption
/// that only happens when dt is far too coarse for the chosen weights.
class AbsorptionRateExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Euler-Maruyama on wealth, left-endpoint rule for running utility,
/// absorption at zero wealth. Path j uses the stream keyed (seed, j).
/// Requires |pi_i| sigma_i sqrt(dt) < 0.5 so positivity violations stay
/// rare, and n_paths * n_steps within max_step_budget.
ScenarioBatch simulate_utility(const ConstantPrior& prior, const ConstantPolicy& policy,
                               const CrraParams& crra, double x0, int n_paths, int n_steps,
                               std::uint64_t seed,
                               long long max_step_budget = 2'000'000'000LL);

struct PriorGridSpec {
    int n_mu = 5;
    int n_sigma = 5;
    int n_r = 1;
};

struct PolicyGridSpec {
    double lo = -1.0;
    double hi = 3.0;
    int count = 41;
};

struct McConfig {
    int n_paths = 20000;
    int n_steps = 100;
    std::uint64_t seed = 1;
    long long max_step_budget = 2'000'000'000LL;
    int threads = 1;
};

struct MinimaxReport {
    std::vector<ConstantPrior> priors;
    std::vector<double> policies;
    std::vector<double> mean;  // priors x policies, row-major
    std::vector<double> se;
    double maxmin = 0.0;
    double minmax = 0.0;
    double gap = 0.0;
    double max_se = 0.0;
    int robust_policy_index = -1;    // argmax_pi min_P
    int minmax_prior_index = -1;     // argmin_P max_pi
    int argmin_prior_at_robust = -1;

    double mean_at(int prior, int policy) const {
        return mean[static_cast<std::size_t>(prior) * policies.size() + policy];
    }
    double se_at(int prior, int policy) const {
        return se[static_cast<std::size_t>(prior) * policies.size() + policy];
    }
};

/// Simulates every (prior, policy) cell with common random numbers (the
/// same seeded streams), then reads off max_pi min_P and min_P max_pi.
/// Drift/vol/rate grids span the spec rectangle with endpoints always
/// included, geometrically spaced when the interval is positive. All
/// policies consume at the robust CRRA fraction; single risky asset.
MinimaxReport minimax_table(const AmbiguitySpec& spec, const CrraParams& crra, double x0,
                            const PriorGridSpec& prior_grid, const PolicyGridSpec& policy_grid,
                            const McConfig& config);

}  // namespace ambimerton
