#include "ambimerton/worst_case.hpp"

#include <stdexcept>

namespace ambimerton {

double worst_case_drift(const AssetAmbiguity& asset, double r) {
    if (asset.mu_lo > r) return asset.mu_lo;
    if (asset.mu_hi < r) return asset.mu_hi;
    return r;
}

DriftRegime classify_drift_regime(const AssetAmbiguity& asset, double r) {
    if (asset.mu_lo > r) return DriftRegime::LongLowDrift;
    if (asset.mu_hi < r) return DriftRegime::Short;
    return DriftRegime::NonParticipation;
}

double optimal_portfolio_fixed_rate(const AssetAmbiguity& asset, double r,
                                    const CrraParams& crra) {
    const double denom = crra.alpha * asset.sigma_hi * asset.sigma_hi;
    switch (classify_drift_regime(asset, r)) {
        case DriftRegime::LongLowDrift: return (asset.mu_lo - r) / denom;
        case DriftRegime::Short: return (asset.mu_hi - r) / denom;
        case DriftRegime::NonParticipation: return 0.0;
    }
    return 0.0;
}

RateCasePortfolios rate_case_portfolios(const AssetAmbiguity& asset, double rate_lo,
                                        double rate_hi, double alpha) {
    if (rate_lo > rate_hi) {
        throw std::invalid_argument("rate_case_portfolios: rate_lo > rate_hi");
    }
    const double denom = alpha * asset.sigma_hi * asset.sigma_hi;
    return RateCasePortfolios{
        (asset.mu_hi - rate_lo) / denom,
        (asset.mu_lo - rate_lo) / denom,
        (asset.mu_lo - rate_hi) / denom,
    };
}

RateRegime classify_rate_regime(const AssetAmbiguity& asset, double rate_lo, double rate_hi,
                                double alpha) {
    const auto [pi1, pi2, pi3] = rate_case_portfolios(asset, rate_lo, rate_hi, alpha);
    if (pi1 < 0.0) return {RateRegimeLabel::ShortAndSave, pi1};
    if (pi2 <= 0.0) return {RateRegimeLabel::NonParticipation, 0.0};
    if (pi2 < 1.0) return {RateRegimeLabel::LongAndSave, pi2};
    if (pi3 < 1.0) return {RateRegimeLabel::AllInAsset, 1.0};
    return {RateRegimeLabel::LongAndBorrow, pi3};
}

WorstCaseParams worst_case_params(const AmbiguitySpec& spec, const CrraParams& crra) {
    validate_spec(spec);
    WorstCaseParams out;
    out.mu_star.reserve(spec.n_assets());
    out.sigma_star.reserve(spec.n_assets());

    if (spec.fixed_rate()) {
        out.r_star = spec.rate_lo;
    } else {
        if (spec.n_assets() != 1) {
            throw std::invalid_argument(
                "worst_case_params: rate ambiguity is modeled for one risky asset");
        }
        const RateRegime regime =
            classify_rate_regime(spec.assets[0], spec.rate_lo, spec.rate_hi, crra.alpha);
        out.r_star = regime.pi_star > 1.0 ? spec.rate_hi : spec.rate_lo;
    }
    for (const auto& asset : spec.assets) {
        out.mu_star.push_back(worst_case_drift(asset, out.r_star));
        out.sigma_star.push_back(asset.sigma_hi);
    }
    return out;
}

const char* to_string(DriftRegime regime) {
    switch (regime) {
        case DriftRegime::LongLowDrift: return "LongLowDrift";
        case DriftRegime::Short: return "Short";
        case DriftRegime::NonParticipation: return "NonParticipation";
    }
    return "Unknown";
}

const char* to_string(RateRegimeLabel label) {
    switch (label) {
        case RateRegimeLabel::ShortAndSave: return "ShortAndSave";
        case RateRegimeLabel::NonParticipation: return "NonParticipation";
        case RateRegimeLabel::LongAndSave: return "LongAndSave";
        case RateRegimeLabel::AllInAsset: return "AllInAsset";
        case RateRegimeLabel::LongAndBorrow: return "LongAndBorrow";
    }
    return "Unknown";
}

}  // namespace ambimerton
