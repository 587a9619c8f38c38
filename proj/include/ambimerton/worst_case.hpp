// Worst-case parameter selection and policy regime classification.
//
// In the fixed-rate model each asset falls into one of three regimes
// depending on where the riskless rate sits relative to the drift
// interval; nature's worst volatility is always the upper bound. Under
// interest-rate ambiguity a single risky asset admits five regimes,
// ordered by the candidate weights pi1 >= pi2 >= pi3.
#pragma once

#include <vector>

#include "ambimerton/model.hpp"

namespace ambimerton {

enum class DriftRegime { LongLowDrift, Short, NonParticipation };

enum class RateRegimeLabel {
    ShortAndSave,
    NonParticipation,
    LongAndSave,
    AllInAsset,
    LongAndBorrow,
};

struct RateRegime {
    RateRegimeLabel label;
    double pi_star;
};

/// Nature's least favorable constant parameters for the investor:
/// highest volatility per asset, drift clamped toward the rate, and the
/// rate endpoint matching the sign of the bond position.
struct WorstCaseParams {
    std::vector<double> mu_star;
    std::vector<double> sigma_star;
    double r_star;
};

struct RateCasePortfolios {
    double pi1;  // (mu_hi - rate_lo) / (alpha sigma_hi^2)
    double pi2;  // (mu_lo - rate_lo) / (alpha sigma_hi^2)
    double pi3;  // (mu_lo - rate_hi) / (alpha sigma_hi^2)
};

/// mu_lo if mu_lo > r, r if the rate lies inside the drift interval,
/// mu_hi if mu_hi < r. Total on validated inputs.
double worst_case_drift(const AssetAmbiguity& asset, double r);

/// Boundary cases (r equal to an interval endpoint) classify as
/// NonParticipation: both adjacent case formulas vanish there.
DriftRegime classify_drift_regime(const AssetAmbiguity& asset, double r);

/// Constant optimal weight in the fixed-rate model:
/// (mu_lo - r)/(alpha sigma_hi^2) long, (mu_hi - r)/(alpha sigma_hi^2)
/// short, zero in between.
double optimal_portfolio_fixed_rate(const AssetAmbiguity& asset, double r,
                                    const CrraParams& crra);

RateCasePortfolios rate_case_portfolios(const AssetAmbiguity& asset, double rate_lo,
                                        double rate_hi, double alpha);

/// Five-way decision tree on (pi1, pi2, pi3):
///   pi1 < 0            -> ShortAndSave, pi* = pi1
///   pi2 <= 0           -> NonParticipation, pi* = 0
///   0 < pi2 < 1        -> LongAndSave, pi* = pi2
///   pi2 >= 1, pi3 < 1  -> AllInAsset, pi* = 1
///   otherwise          -> LongAndBorrow, pi* = pi3
RateRegime classify_rate_regime(const AssetAmbiguity& asset, double rate_lo, double rate_hi,
                                double alpha);

/// Assembles the worst-case constant prior for a whole spec. Under rate
/// ambiguity (single asset) r* is rate_hi for levered positions
/// (pi* > 1) and rate_lo otherwise; at pi* = 1 the bond position is
/// empty and the choice is immaterial.
WorstCaseParams worst_case_params(const AmbiguitySpec& spec, const CrraParams& crra);

const char* to_string(DriftRegime regime);
const char* to_string(RateRegimeLabel label);

}  // namespace ambimerton
