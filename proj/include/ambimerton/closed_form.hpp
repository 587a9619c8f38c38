// Explicit CRRA solution: growth rate beta, the time factor f(t), the
// value function phi(t,x) = f(t) x^(1-alpha)/(1-alpha), and the
// wealth-proportional consumption rule c = f(t)^(-1/alpha) x.
#pragma once

#include <optional>
#include <vector>

#include "ambimerton/model.hpp"
#include "ambimerton/worst_case.hpp"

namespace ambimerton {

/// Bundle of everything the explicit solution knows: regime labels,
/// constant weights, growth rate and the preference parameters needed to
/// evaluate f(t). drift_regimes is populated in the fixed-rate model,
/// rate_regime under rate ambiguity.
struct CrraSolution {
    AmbiguitySpec spec;
    CrraParams crra;
    double beta = 0.0;
    std::vector<double> pi_star;
    WorstCaseParams worst_case;
    std::vector<DriftRegime> drift_regimes;
    std::optional<RateRegime> rate_regime;

    double f(double t) const;
    double consumption_fraction(double t) const;  // f(t)^(-1/alpha)
};

/// beta = (1-alpha) [ r + sum_i (mu_hat_i - r)^2 / (2 alpha sigma_hi_i^2) ]
/// with mu_hat the worst-case drift; non-participating assets drop out.
/// Requires a degenerate rate interval.
double beta_fixed_rate(const AmbiguitySpec& spec, const CrraParams& crra);

/// Regime-dependent growth rate under rate ambiguity. AllInAsset uses
/// beta = (mu_lo - alpha sigma_hi^2 / 2)(1 - alpha), obtained by
/// substituting pi = 1 and the worst-case (mu_lo, sigma_hi) into the
/// Hamiltonian; the PDE suite cross-checks this value.
double beta_rate_ambiguity(const RateRegime& regime, const AssetAmbiguity& asset,
                           double rate_lo, double rate_hi, const CrraParams& crra);

/// f(t) = [ K^(1/alpha) e^(beta (T-t)/alpha)
///          + (alpha/beta)(e^(beta (T-t)/alpha) - 1) ]^alpha.
/// Near beta = 0 the second term collapses by cancellation, so for
/// |beta (T-t)/alpha| < 1e-6 a three-term series replaces it; both
/// branches agree to ~1e-15 at the switch. Throws std::domain_error if
/// the bracket is not positive (cannot happen for betas produced above).
double f_factor(double t, double beta, const CrraParams& crra);

/// Assembles the full closed-form solution for a validated spec.
/// Dispatches on the rate interval; rate ambiguity requires one asset.
CrraSolution solve_crra(const AmbiguitySpec& spec, const CrraParams& crra);

/// c_hat = f(t)^(-1/alpha) * wealth.
double optimal_consumption(const MarketPoint& point, const CrraSolution& solution);

/// phi(t, x) = f(t) x^(1-alpha)/(1-alpha).
double value_function(const MarketPoint& point, const CrraSolution& solution);

}  // namespace ambimerton
