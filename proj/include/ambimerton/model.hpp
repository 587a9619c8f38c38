// Domain types shared by every module: parameter rectangles for drift,
// volatility and interest-rate ambiguity, CRRA preferences, and the
// validation machinery that keeps invalid instances out of the solvers.
#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ambimerton {

enum class ViolationCode {
    EmptyAssets,
    IntervalInverted,
    NonPositiveVolatility,
    BadRiskAversion,
    NonPositiveBequest,
    NonPositiveHorizon,
    NonPositiveWealth,
    TimeOutOfRange,
};

struct Violation {
    ViolationCode code;
    std::string detail;
};

/// Carries every violated invariant, not just the first one found.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<Violation> violations);
    const std::vector<Violation>& violations() const noexcept { return violations_; }

private:
    std::vector<Violation> violations_;
};

/// Per-asset drift interval [mu_lo, mu_hi] (per year) and volatility
/// interval [sigma_lo, sigma_hi] (per sqrt-year). Requires sigma_lo > 0:
/// degenerate noise would put a zero in the denominator of every
/// portfolio formula downstream.
struct AssetAmbiguity {
    double mu_lo;
    double mu_hi;
    double sigma_lo;
    double sigma_hi;

    AssetAmbiguity(double mu_lo, double mu_hi, double sigma_lo, double sigma_hi);
};

/// The investor's full parameter rectangle: one AssetAmbiguity per risky
/// asset plus an interest-rate interval. rate_lo == rate_hi is the
/// fixed-rate model.
struct AmbiguitySpec {
    std::vector<AssetAmbiguity> assets;
    double rate_lo;
    double rate_hi;

    AmbiguitySpec(std::vector<AssetAmbiguity> assets, double rate_lo, double rate_hi);

    bool fixed_rate() const noexcept { return rate_lo == rate_hi; }
    std::size_t n_assets() const noexcept { return assets.size(); }
};

/// CRRA preferences: u(c) = c^(1-alpha)/(1-alpha), bequest
/// Phi(x) = K x^(1-alpha)/(1-alpha), horizon T in years.
/// alpha == 1 (log utility) is rejected rather than special-cased.
struct CrraParams {
    double alpha;
    double bequest_k;
    double horizon_t;

    CrraParams(double alpha, double bequest_k, double horizon_t);
};

/// Argument bundle for value/consumption evaluations: a (time, wealth)
/// point with time in years and wealth > 0.
struct MarketPoint {
    double time;
    double wealth;

    MarketPoint(double time, double wealth);
};

/// Non-throwing full check; one entry per violated invariant.
std::vector<Violation> spec_violations(const AmbiguitySpec& spec);

/// Returns the spec unchanged when all invariants hold, otherwise throws
/// ValidationError listing every violation. Idempotent.
const AmbiguitySpec& validate_spec(const AmbiguitySpec& spec);

inline double crra_utility(double c, double alpha) {
    return std::pow(c, 1.0 - alpha) / (1.0 - alpha);
}

inline double crra_bequest(double x, const CrraParams& crra) {
    return crra.bequest_k * std::pow(x, 1.0 - crra.alpha) / (1.0 - crra.alpha);
}

const char* to_string(ViolationCode code);

}  // namespace ambimerton
