#include "ambimerton/model.hpp"

#include <sstream>

namespace ambimerton {

namespace {

// alpha must stay clear of 1; the closed forms divide by (1 - alpha).
constexpr double kAlphaOneGuard = 1e-12;

std::string join_details(const std::vector<Violation>& violations) {
    std::ostringstream os;
    os << "invalid specification:";
    for (const auto& v : violations) {
        os << " [" << to_string(v.code) << "] " << v.detail << ";";
    }
    return os.str();
}

void append_asset_violations(const AssetAmbiguity& a, std::size_t index,
                             std::vector<Violation>& out) {
    const std::string tag = "asset " + std::to_string(index);
    if (!(a.mu_lo <= a.mu_hi)) {
        out.push_back({ViolationCode::IntervalInverted,
                       tag + ": mu_lo > mu_hi (" + std::to_string(a.mu_lo) + " > " +
                           std::to_string(a.mu_hi) + ")"});
    }
    if (!(a.sigma_lo <= a.sigma_hi)) {
        out.push_back({ViolationCode::IntervalInverted,
                       tag + ": sigma_lo > sigma_hi (" + std::to_string(a.sigma_lo) + " > " +
                           std::to_string(a.sigma_hi) + ")"});
    }
    if (!(a.sigma_lo > 0.0)) {
        out.push_back({ViolationCode::NonPositiveVolatility,
                       tag + ": sigma_lo must be > 0, got " + std::to_string(a.sigma_lo)});
    }
}

void throw_if_any(std::vector<Violation> violations) {
    if (!violations.empty()) {
        throw ValidationError(std::move(violations));
    }
}

}  // namespace

ValidationError::ValidationError(std::vector<Violation> violations)
    : std::runtime_error(join_details(violations)), violations_(std::move(violations)) {}

AssetAmbiguity::AssetAmbiguity(double mu_lo_, double mu_hi_, double sigma_lo_, double sigma_hi_)
    : mu_lo(mu_lo_), mu_hi(mu_hi_), sigma_lo(sigma_lo_), sigma_hi(sigma_hi_) {
    std::vector<Violation> violations;
    append_asset_violations(*this, 0, violations);
    throw_if_any(std::move(violations));
}

AmbiguitySpec::AmbiguitySpec(std::vector<AssetAmbiguity> assets_, double rate_lo_, double rate_hi_)
    : assets(std::move(assets_)), rate_lo(rate_lo_), rate_hi(rate_hi_) {
    throw_if_any(spec_violations(*this));
}

CrraParams::CrraParams(double alpha_, double bequest_k_, double horizon_t_)
    : alpha(alpha_), bequest_k(bequest_k_), horizon_t(horizon_t_) {
    std::vector<Violation> violations;
    if (!(alpha > 0.0) || std::abs(alpha - 1.0) <= kAlphaOneGuard) {
        violations.push_back({ViolationCode::BadRiskAversion,
                              "alpha must be > 0 and != 1, got " + std::to_string(alpha)});
    }
    if (!(bequest_k > 0.0)) {
        violations.push_back({ViolationCode::NonPositiveBequest,
                              "bequest_k must be > 0, got " + std::to_string(bequest_k)});
    }
    if (!(horizon_t > 0.0)) {
        violations.push_back({ViolationCode::NonPositiveHorizon,
                              "horizon_t must be > 0, got " + std::to_string(horizon_t)});
    }
    throw_if_any(std::move(violations));
}

MarketPoint::MarketPoint(double time_, double wealth_) : time(time_), wealth(wealth_) {
    std::vector<Violation> violations;
    if (!(wealth > 0.0)) {
        violations.push_back({ViolationCode::NonPositiveWealth,
                              "wealth must be > 0, got " + std::to_string(wealth)});
    }
    if (!(time >= 0.0)) {
        violations.push_back({ViolationCode::TimeOutOfRange,
                              "time must be >= 0, got " + std::to_string(time)});
    }
    throw_if_any(std::move(violations));
}

std::vector<Violation> spec_violations(const AmbiguitySpec& spec) {
    std::vector<Violation> out;
    if (spec.assets.empty()) {
        out.push_back({ViolationCode::EmptyAssets, "spec has no assets"});
    }
    for (std::size_t i = 0; i < spec.assets.size(); ++i) {
        append_asset_violations(spec.assets[i], i, out);
    }
    if (!(spec.rate_lo <= spec.rate_hi)) {
        out.push_back({ViolationCode::IntervalInverted,
                       "rate_lo > rate_hi (" + std::to_string(spec.rate_lo) + " > " +
                           std::to_string(spec.rate_hi) + ")"});
    }
    return out;
}

const AmbiguitySpec& validate_spec(const AmbiguitySpec& spec) {
    throw_if_any(spec_violations(spec));
    return spec;
}

const char* to_string(ViolationCode code) {
    switch (code) {
        case ViolationCode::EmptyAssets: return "EmptyAssets";
        case ViolationCode::IntervalInverted: return "IntervalInverted";
        case ViolationCode::NonPositiveVolatility: return "NonPositiveVolatility";
        case ViolationCode::BadRiskAversion: return "BadRiskAversion";
        case ViolationCode::NonPositiveBequest: return "NonPositiveBequest";
        case ViolationCode::NonPositiveHorizon: return "NonPositiveHorizon";
        case ViolationCode::NonPositiveWealth: return "NonPositiveWealth";
        case ViolationCode::TimeOutOfRange: return "TimeOutOfRange";
    }
    return "Unknown";
}

}  // namespace ambimerton
