#include "ambimerton/closed_form.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ambimerton {

namespace {

// Switch to the series form of (alpha/beta)(e^u - 1), u = beta tau / alpha,
// once the exponent is small enough that the direct quotient loses digits.
constexpr double kSeriesThreshold = 1e-6;

}  // namespace

double CrraSolution::f(double t) const { return f_factor(t, beta, crra); }

double CrraSolution::consumption_fraction(double t) const {
    return std::pow(f(t), -1.0 / crra.alpha);
}

double beta_fixed_rate(const AmbiguitySpec& spec, const CrraParams& crra) {
    validate_spec(spec);
    if (!spec.fixed_rate()) {
        throw std::invalid_argument("beta_fixed_rate: rate interval must be degenerate");
    }
    const double r = spec.rate_lo;
    double sum = r;
    for (const auto& asset : spec.assets) {
        const double excess = worst_case_drift(asset, r) - r;
        sum += excess * excess / (2.0 * crra.alpha * asset.sigma_hi * asset.sigma_hi);
    }
    return sum * (1.0 - crra.alpha);
}

double beta_rate_ambiguity(const RateRegime& regime, const AssetAmbiguity& asset,
                           double rate_lo, double rate_hi, const CrraParams& crra) {
    const double var_hi = asset.sigma_hi * asset.sigma_hi;
    const double one_minus_alpha = 1.0 - crra.alpha;
    auto classical = [&](double mu, double r) {
        const double excess = mu - r;
        return (r + excess * excess / (2.0 * crra.alpha * var_hi)) * one_minus_alpha;
    };
    switch (regime.label) {
        case RateRegimeLabel::LongAndSave: return classical(asset.mu_lo, rate_lo);
        case RateRegimeLabel::LongAndBorrow: return classical(asset.mu_lo, rate_hi);
        case RateRegimeLabel::ShortAndSave: return classical(asset.mu_hi, rate_lo);
        case RateRegimeLabel::NonParticipation: return rate_lo * one_minus_alpha;
        case RateRegimeLabel::AllInAsset:
            return (asset.mu_lo - crra.alpha * var_hi / 2.0) * one_minus_alpha;
    }
    throw std::logic_error("beta_rate_ambiguity: unreachable regime");
}

double f_factor(double t, double beta, const CrraParams& crra) {
    if (!(t >= 0.0) || !(t <= crra.horizon_t)) {
        throw std::invalid_argument("f_factor: t must lie in [0, horizon_t], got " +
                                    std::to_string(t));
    }
    const double tau = crra.horizon_t - t;
    const double u = beta * tau / crra.alpha;
    const double k_root = std::pow(crra.bequest_k, 1.0 / crra.alpha);
    double bracket;
    if (std::abs(u) < kSeriesThreshold) {
        bracket = k_root * std::exp(u) + tau * (1.0 + u / 2.0 + u * u / 6.0);
    } else {
        bracket = k_root * std::exp(u) + (crra.alpha / beta) * std::expm1(u);
    }
    if (!(bracket > 0.0)) {
        throw std::domain_error("f_factor: nonpositive bracket, beta = " + std::to_string(beta));
    }
    return std::pow(bracket, crra.alpha);
}

CrraSolution solve_crra(const AmbiguitySpec& spec, const CrraParams& crra) {
    validate_spec(spec);
    CrraSolution sol{spec, crra, 0.0, {}, worst_case_params(spec, crra), {}, std::nullopt};

    if (spec.fixed_rate()) {
        const double r = spec.rate_lo;
        sol.beta = beta_fixed_rate(spec, crra);
        sol.pi_star.reserve(spec.n_assets());
        sol.drift_regimes.reserve(spec.n_assets());
        for (const auto& asset : spec.assets) {
            sol.drift_regimes.push_back(classify_drift_regime(asset, r));
            sol.pi_star.push_back(optimal_portfolio_fixed_rate(asset, r, crra));
        }
    } else {
        if (spec.n_assets() != 1) {
            throw std::invalid_argument(
                "solve_crra: rate ambiguity is modeled for one risky asset");
        }
        const auto& asset = spec.assets[0];
        const RateRegime regime =
            classify_rate_regime(asset, spec.rate_lo, spec.rate_hi, crra.alpha);
        sol.rate_regime = regime;
        sol.pi_star = {regime.pi_star};
        sol.beta = beta_rate_ambiguity(regime, asset, spec.rate_lo, spec.rate_hi, crra);
    }
    return sol;
}

double optimal_consumption(const MarketPoint& point, const CrraSolution& solution) {
    return solution.consumption_fraction(point.time) * point.wealth;
}

double value_function(const MarketPoint& point, const CrraSolution& solution) {
    const double alpha = solution.crra.alpha;
    return solution.f(point.time) * std::pow(point.wealth, 1.0 - alpha) / (1.0 - alpha);
}

}  // namespace ambimerton
