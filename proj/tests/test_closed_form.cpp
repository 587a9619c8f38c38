#include <doctest.h>

#include <cmath>
#include <random>

#include "ambimerton/closed_form.hpp"
#include "ambimerton/hjb_pointwise.hpp"
#include "oracles.hpp"

using namespace ambimerton;

namespace {

const CrraParams kCrra(2.0, 1.0, 10.0);

AmbiguitySpec baseline() {
    return AmbiguitySpec({AssetAmbiguity(0.05, 0.09, 0.1, 0.2)}, 0.01, 0.01);
}

}  // namespace

TEST_CASE("fixed-rate growth rate") {
    CHECK(beta_fixed_rate(baseline(), kCrra) == doctest::Approx(-0.02).epsilon(1e-12));

    // Non-participating asset contributes nothing beyond r(1-alpha).
    const AmbiguitySpec band({AssetAmbiguity(0.02, 0.08, 0.1, 0.2)}, 0.03, 0.03);
    CHECK(beta_fixed_rate(band, kCrra) == doctest::Approx(-0.03).epsilon(1e-12));

    const AmbiguitySpec at_rate({AssetAmbiguity(0.04, 0.04, 0.1, 0.2)}, 0.04, 0.04);
    CHECK(beta_fixed_rate(at_rate, CrraParams(3.0, 1.0, 10.0)) ==
          doctest::Approx(0.04 * (1.0 - 3.0)).epsilon(1e-12));

    // Two assets: a long and a short contribution add up.
    const AmbiguitySpec two(
        {AssetAmbiguity(0.05, 0.09, 0.1, 0.2), AssetAmbiguity(0.001, 0.005, 0.1, 0.1)}, 0.01,
        0.01);
    CHECK(beta_fixed_rate(two, kCrra) ==
          doctest::Approx((0.01 + 0.01 + 0.005 * 0.005 / 0.04) * (-1.0)).epsilon(1e-12));
}

TEST_CASE("f factor boundary, frozen value, and beta -> 0 limit") {
    const double beta = -0.02;
    CHECK(f_factor(kCrra.horizon_t, beta, kCrra) == doctest::Approx(1.0).epsilon(1e-14));
    // Frozen via 30-digit evaluation of the bracket formula.
    CHECK(f_factor(0.0, beta, kCrra) == doctest::Approx(108.599233805300648).epsilon(1e-12));
    CHECK(f_factor(0.0, 0.0, kCrra) == doctest::Approx(121.0).epsilon(1e-14));
}

TEST_CASE("f factor agrees with a RK4 integration of its ODE") {
    for (double beta : {-0.02, -0.06, -0.025625, 0.05, 0.0}) {
        for (double t : {0.0, 2.5, 7.0, 9.9}) {
            const double analytic = f_factor(t, beta, kCrra);
            const double integrated = oracles::rk4_f_factor(t, beta, kCrra);
            CHECK(std::abs(analytic - integrated) <= 1e-8 * std::max(1.0, analytic));
        }
    }
    const CrraParams fractional(0.5, 2.0, 4.0);
    for (double beta : {-0.1, 0.08}) {
        const double analytic = f_factor(0.0, beta, fractional);
        const double integrated = oracles::rk4_f_factor(0.0, beta, fractional);
        CHECK(std::abs(analytic - integrated) <= 1e-8 * std::max(1.0, analytic));
    }
}

TEST_CASE("f ODE residual under centered differences") {
    for (double beta : {-0.02, -0.06, 0.03}) {
        const double h = 1e-4;
        for (int i = 1; i < 100; ++i) {
            const double t = kCrra.horizon_t * i / 100.0;
            if (t - h < 0.0 || t + h > kCrra.horizon_t) continue;
            const double f0 = f_factor(t, beta, kCrra);
            const double fp = (f_factor(t + h, beta, kCrra) - f_factor(t - h, beta, kCrra)) /
                              (2.0 * h);
            const double residual = kCrra.alpha * std::sqrt(f0) + beta * f0 + fp;
            CHECK(std::abs(residual) <= 1e-8 * std::max(1.0, f0));
        }
    }
}

TEST_CASE("series and direct branches agree at the switching threshold") {
    // u = beta tau / alpha at the 1e-6 switch: pick beta so |u| straddles it.
    const double tau = kCrra.horizon_t;
    const double beta_at = 1e-6 * kCrra.alpha / tau;
    for (double scale : {0.999999, 1.000001}) {
        const double lo = f_factor(0.0, beta_at * scale, kCrra);
        const double hi = f_factor(0.0, beta_at, kCrra);
        CHECK(std::abs(lo - hi) <= 1e-9 * hi);
    }
    // Direct comparison of the two bracket forms exactly at the threshold.
    const double u = 1e-6;
    const double series = tau * (1.0 + u / 2.0 + u * u / 6.0);
    const double direct = (kCrra.alpha / (u * kCrra.alpha / tau)) * std::expm1(u);
    CHECK(std::abs(series - direct) <= 1e-9 * direct);
}

TEST_CASE("f factor rejects out-of-range times and survives extreme betas") {
    CHECK_THROWS_AS(f_factor(-0.1, -0.02, kCrra), std::invalid_argument);
    CHECK_THROWS_AS(f_factor(10.1, -0.02, kCrra), std::invalid_argument);
    // The bracket tau (e^w - 1)/w stays positive for any real beta.
    CHECK(f_factor(5.0, -5.0, CrraParams(0.5, 1e-6, 10.0)) > 0.0);
    CHECK(f_factor(0.0, 3.0, kCrra) > 0.0);
}

TEST_CASE("optimal consumption examples") {
    CrraSolution sol = solve_crra(baseline(), kCrra);
    CHECK(sol.beta == doctest::Approx(-0.02).epsilon(1e-12));
    CHECK(optimal_consumption(MarketPoint(kCrra.horizon_t, 5.0), sol) ==
          doctest::Approx(5.0).epsilon(1e-12));
    CHECK(optimal_consumption(MarketPoint(0.0, 100.0), sol) ==
          doctest::Approx(9.59592001645536).epsilon(1e-12));
    // Proportional in wealth.
    const double c1 = optimal_consumption(MarketPoint(3.0, 1.0), sol);
    const double c2 = optimal_consumption(MarketPoint(3.0, 2.0), sol);
    CHECK(c2 == doctest::Approx(2.0 * c1).epsilon(1e-13));
}

TEST_CASE("value function examples and scaling") {
    CrraSolution sol = solve_crra(baseline(), kCrra);
    CHECK(value_function(MarketPoint(kCrra.horizon_t, 1.0), sol) ==
          doctest::Approx(-1.0).epsilon(1e-13));
    CHECK(value_function(MarketPoint(0.0, 1.0), sol) ==
          doctest::Approx(-108.599233805300648).epsilon(1e-12));
    const double at_one = value_function(MarketPoint(4.0, 1.0), sol);
    const double at_two = value_function(MarketPoint(4.0, 2.0), sol);
    CHECK(at_two == doctest::Approx(0.5 * at_one).epsilon(1e-13));
}

TEST_CASE("value surface is increasing and concave in wealth") {
    CrraSolution sol = solve_crra(baseline(), kCrra);
    for (double t : {0.0, 5.0, 9.5}) {
        double prev = value_function(MarketPoint(t, 0.25), sol);
        double prev_gap = 0.0;
        for (int i = 1; i <= 40; ++i) {
            const double x = 0.25 + 0.25 * i;
            const double value = value_function(MarketPoint(t, x), sol);
            const double gap = value - prev;
            CHECK(gap > 0.0);
            if (i > 1) CHECK(gap < prev_gap);
            prev = value;
            prev_gap = gap;
        }
    }
}

TEST_CASE("consumption fraction is wealth-free and matches f") {
    CrraSolution sol = solve_crra(baseline(), kCrra);
    for (double t : {0.0, 2.0, 8.0}) {
        const double q = sol.consumption_fraction(t);
        CHECK(q == doctest::Approx(std::pow(sol.f(t), -0.5)).epsilon(1e-14));
        CHECK(optimal_consumption(MarketPoint(t, 7.0), sol) ==
              doctest::Approx(7.0 * q).epsilon(1e-13));
    }
}

TEST_CASE("rate-ambiguity growth rates per regime") {
    const AssetAmbiguity asset(0.06, 0.10, 0.1, 0.2);
    CHECK(beta_rate_ambiguity({RateRegimeLabel::LongAndSave, 0.625}, asset, 0.01, 0.05, kCrra) ==
          doctest::Approx(-0.025625).epsilon(1e-12));
    CHECK(beta_rate_ambiguity({RateRegimeLabel::NonParticipation, 0.0}, asset, 0.03, 0.05,
                              kCrra) == doctest::Approx(-0.03).epsilon(1e-12));
    const AssetAmbiguity strong(0.10, 0.12, 0.1, 0.2);
    CHECK(beta_rate_ambiguity({RateRegimeLabel::AllInAsset, 1.0}, strong, 0.01, 0.05, kCrra) ==
          doctest::Approx(-0.06).epsilon(1e-12));
    const AssetAmbiguity weak(0.01, 0.02, 0.1, 0.2);
    CHECK(beta_rate_ambiguity({RateRegimeLabel::ShortAndSave, -0.375}, weak, 0.05, 0.08,
                              kCrra) ==
          doctest::Approx((0.05 + 0.03 * 0.03 / 0.16) * (-1.0)).epsilon(1e-12));
    const AssetAmbiguity lever(0.15, 0.20, 0.1, 0.2);
    CHECK(beta_rate_ambiguity({RateRegimeLabel::LongAndBorrow, 1.625}, lever, 0.01, 0.02,
                              kCrra) ==
          doctest::Approx((0.02 + 0.13 * 0.13 / 0.16) * (-1.0)).epsilon(1e-12));
}

TEST_CASE("solve_crra dispatches to the rate-ambiguity model") {
    const AmbiguitySpec spec({AssetAmbiguity(0.10, 0.12, 0.1, 0.2)}, 0.01, 0.05);
    CrraSolution sol = solve_crra(spec, kCrra);
    REQUIRE(sol.rate_regime.has_value());
    CHECK(sol.rate_regime->label == RateRegimeLabel::AllInAsset);
    CHECK(sol.pi_star[0] == 1.0);
    CHECK(sol.beta == doctest::Approx(-0.06).epsilon(1e-12));
    CHECK(sol.worst_case.r_star == 0.01);

    const AmbiguitySpec multi(
        {AssetAmbiguity(0.05, 0.09, 0.1, 0.2), AssetAmbiguity(0.01, 0.02, 0.1, 0.1)}, 0.01,
        0.05);
    CHECK_THROWS_AS(solve_crra(multi, kCrra), std::invalid_argument);
}

TEST_CASE("closed form satisfies the pointwise HJB identity") {
    // With analytic derivatives of phi = f(t) x^(1-a)/(1-a), the
    // consumption term, the rate term, and the maximized risky term must
    // cancel phi_t exactly at every point.
    auto residual_fixed = [](const AmbiguitySpec& spec, const CrraParams& crra, double t,
                             double x) {
        const CrraSolution sol = solve_crra(spec, crra);
        const double a = crra.alpha;
        const double f = sol.f(t);
        const double fp = -(a * std::pow(f, 1.0 - 1.0 / a) + sol.beta * f);
        const double phi_t = fp * std::pow(x, 1.0 - a) / (1.0 - a);
        const double phi_x = f * std::pow(x, -a);
        const double phi_xx = -a * f * std::pow(x, -a - 1.0);
        double ham = spec.rate_lo * x * phi_x;
        for (const auto& asset : spec.assets) {
            const QuadCoeffs coeffs{0.5 * asset.sigma_hi * asset.sigma_hi * x * x * phi_xx,
                                    phi_x * x};
            ham += maximize_fixed_rate(coeffs, asset.mu_lo, asset.mu_hi, spec.rate_lo).value;
        }
        const double cons = a / (1.0 - a) * std::pow(phi_x, 1.0 - 1.0 / a);
        return cons + phi_t + ham;
    };
    const AmbiguitySpec two(
        {AssetAmbiguity(0.05, 0.09, 0.1, 0.2), AssetAmbiguity(0.001, 0.005, 0.1, 0.1)}, 0.01,
        0.01);
    for (const AmbiguitySpec& spec : {baseline(), two}) {
        for (double t : {0.0, 4.0, 9.5}) {
            for (double x : {0.05, 1.0, 30.0}) {
                const double scale =
                    std::max(1.0, std::abs(value_function(MarketPoint(t, x),
                                                          solve_crra(spec, kCrra))));
                CHECK(std::abs(residual_fixed(spec, kCrra, t, x)) <= 1e-10 * scale);
            }
        }
    }

    // Same identity for the rate-ambiguity model; the maximizer value
    // already carries the savings term.
    auto residual_rate = [](const AmbiguitySpec& spec, const CrraParams& crra, double t,
                            double x) {
        const CrraSolution sol = solve_crra(spec, crra);
        const double a = crra.alpha;
        const double f = sol.f(t);
        const double fp = -(a * std::pow(f, 1.0 - 1.0 / a) + sol.beta * f);
        const double phi_t = fp * std::pow(x, 1.0 - a) / (1.0 - a);
        const double phi_x = f * std::pow(x, -a);
        const double phi_xx = -a * f * std::pow(x, -a - 1.0);
        const auto& asset = spec.assets[0];
        const QuadCoeffs coeffs{0.5 * asset.sigma_hi * asset.sigma_hi * x * x * phi_xx,
                                phi_x * x};
        const double ham = maximize_rate_ambiguity(coeffs, asset.mu_lo, asset.mu_hi,
                                                   spec.rate_lo, spec.rate_hi)
                               .value;
        const double cons = a / (1.0 - a) * std::pow(phi_x, 1.0 - 1.0 / a);
        return cons + phi_t + ham;
    };
    const AmbiguitySpec long_save({AssetAmbiguity(0.06, 0.10, 0.1, 0.2)}, 0.01, 0.05);
    const AmbiguitySpec all_in({AssetAmbiguity(0.10, 0.12, 0.1, 0.2)}, 0.01, 0.05);
    const AmbiguitySpec short_save({AssetAmbiguity(0.01, 0.02, 0.1, 0.2)}, 0.05, 0.08);
    const AmbiguitySpec long_borrow({AssetAmbiguity(0.15, 0.20, 0.1, 0.2)}, 0.01, 0.02);
    for (const AmbiguitySpec& spec : {long_save, all_in, short_save, long_borrow}) {
        for (double t : {0.0, 6.0}) {
            for (double x : {0.2, 1.0, 12.0}) {
                const double scale =
                    std::max(1.0, std::abs(value_function(MarketPoint(t, x),
                                                          solve_crra(spec, kCrra))));
                CHECK(std::abs(residual_rate(spec, kCrra, t, x)) <= 1e-10 * scale);
            }
        }
    }
}

TEST_CASE("closed-form utility equals the lognormal-moment quadrature") {
    CrraSolution sol = solve_crra(baseline(), kCrra);
    const double via_quadrature = oracles::expected_utility(
        0.05, 0.2, 0.01, 0.5, [&](double t) { return sol.consumption_fraction(t); }, kCrra,
        1.0);
    CHECK(via_quadrature ==
          doctest::Approx(value_function(MarketPoint(0.0, 1.0), sol)).epsilon(1e-7));
}
