#include <doctest.h>

#include <cmath>

#include "ambimerton/closed_form.hpp"
#include "ambimerton/pde.hpp"

using namespace ambimerton;

namespace {

const CrraParams kCrra(2.0, 1.0, 10.0);

AmbiguitySpec baseline() {
    return AmbiguitySpec({AssetAmbiguity(0.05, 0.09, 0.1, 0.2)}, 0.01, 0.01);
}

// Max relative error against the closed form over the middle 60% of the
// wealth nodes at time zero.
double t0_interior_error(const ValueSurface& surface, const CrraSolution& sol) {
    const int nx = surface.grid.nx;
    double err = 0.0;
    for (int i = nx / 5; i < nx - nx / 5; ++i) {
        const double exact = value_function(MarketPoint(0.0, surface.x[i]), sol);
        err = std::max(err, std::abs(surface.value_at(0, i) - exact) / std::abs(exact));
    }
    return err;
}

}  // namespace

TEST_CASE("grid construction and guards") {
    const Grid1D grid(0.01, 100.0, 5, 10, 1.0);
    const auto x = grid.nodes();
    CHECK(x.front() == 0.01);
    CHECK(x.back() == 100.0);
    CHECK(x[1] / x[0] == doctest::Approx(x[2] / x[1]).epsilon(1e-12));

    const Grid1D uniform(1.0, 2.0, 5, 10, 1.0, GridSpacing::Uniform);
    const auto xu = uniform.nodes();
    CHECK(xu[1] - xu[0] == doctest::Approx(xu[2] - xu[1]).epsilon(1e-12));

    CHECK_THROWS_AS(Grid1D(0.0, 1.0, 5, 10, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Grid1D(2.0, 1.0, 5, 10, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Grid1D(1.0, 2.0, 2, 10, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Grid1D(1.0, 2.0, 5, 0, 1.0), std::invalid_argument);
}

TEST_CASE("G-heat: linear payoffs are untouched") {
    const Grid1D grid(0.1, 20.0, 201, 400, 1.0, GridSpacing::Uniform);
    const auto surface = solve_g_heat([](double x) { return 3.0 * x - 1.0; }, 0.1, 0.3, grid);
    for (int i = 0; i < grid.nx; ++i) {
        CHECK(surface.at(grid.nt, i) ==
              doctest::Approx(3.0 * surface.x[i] - 1.0).epsilon(1e-12));
    }
}

TEST_CASE("G-heat: convex payoff diffuses at the upper volatility") {
    const double sigma_hi = 0.3;
    const Grid1D grid(0.1, 20.0, 400, 500, 1.0, GridSpacing::Uniform);
    const auto surface = solve_g_heat([](double x) { return x * x; }, 0.1, sigma_hi, grid);
    const int lo = grid.nx / 5, hi = grid.nx - grid.nx / 5;
    for (int i = lo; i < hi; ++i) {
        const double exact = surface.x[i] * surface.x[i] + sigma_hi * sigma_hi;
        CHECK(std::abs(surface.at(grid.nt, i) - exact) / exact < 1e-3);
    }
}

TEST_CASE("G-heat: concave payoff diffuses at the lower volatility") {
    const double sigma_lo = 0.1;
    const Grid1D grid(0.1, 20.0, 400, 500, 1.0, GridSpacing::Uniform);
    const auto surface = solve_g_heat([](double x) { return -x * x; }, sigma_lo, 0.3, grid);
    const int lo = grid.nx / 5, hi = grid.nx - grid.nx / 5;
    for (int i = lo; i < hi; ++i) {
        const double exact = -surface.x[i] * surface.x[i] - sigma_lo * sigma_lo;
        CHECK(std::abs(surface.at(grid.nt, i) - exact) / std::abs(exact) < 1e-3);
    }
}

TEST_CASE("G-heat: CFL violation is rejected") {
    const Grid1D grid(0.1, 20.0, 400, 5, 1.0, GridSpacing::Uniform);
    CHECK_THROWS_AS(solve_g_heat([](double x) { return x * x; }, 0.1, 0.3, grid),
                    StabilityViolation);
}

TEST_CASE("fixed-rate HJB reproduces the closed form on a desk grid") {
    const Grid1D grid = Grid1D::for_wealth(1.0, 200, 600, kCrra.horizon_t);
    const auto surface = solve_hjb_fixed_rate(baseline(), kCrra, grid);
    const CrraSolution sol = solve_crra(baseline(), kCrra);

    // Terminal slice is the bequest exactly.
    for (int i = 0; i < grid.nx; ++i) {
        CHECK(surface.value_at(grid.nt, i) ==
              doctest::Approx(crra_bequest(surface.x[i], kCrra)).epsilon(1e-14));
    }
    CHECK(t0_interior_error(surface, sol) < 5e-3);
    CHECK(check_shape(surface).ok());

    // Interior policies sit on the constant closed-form weight.
    const int nx = grid.nx;
    for (int k = 0; k < grid.nt; k += 37) {
        for (int i = nx / 5; i < nx - nx / 5; i += 11) {
            CHECK(std::abs(surface.pi_at(k, i) - 0.5) < 0.05);
        }
    }
}

TEST_CASE("degenerate ambiguity matches the classical Merton solution") {
    const AmbiguitySpec classical({AssetAmbiguity(0.07, 0.07, 0.2, 0.2)}, 0.01, 0.01);
    const Grid1D grid = Grid1D::for_wealth(1.0, 200, 600, kCrra.horizon_t);
    const auto surface = solve_hjb_fixed_rate(classical, kCrra, grid);
    const CrraSolution sol = solve_crra(classical, kCrra);
    CHECK(sol.pi_star[0] == doctest::Approx(0.75));
    CHECK(t0_interior_error(surface, sol) < 5e-3);
}

TEST_CASE("non-participation band yields an exactly flat policy surface") {
    const AmbiguitySpec band({AssetAmbiguity(0.02, 0.08, 0.1, 0.2)}, 0.03, 0.03);
    const Grid1D grid = Grid1D::for_wealth(1.0, 150, 600, kCrra.horizon_t);
    const auto surface = solve_hjb_fixed_rate(band, kCrra, grid);
    for (int k = 0; k < grid.nt; ++k) {
        for (int i = 1; i + 1 < grid.nx; ++i) {
            CHECK(surface.pi_at(k, i) == 0.0);
        }
    }
    const CrraSolution sol = solve_crra(band, kCrra);
    CHECK(t0_interior_error(surface, sol) < 5e-3);
}

TEST_CASE("rate-ambiguity solver collapses to the fixed-rate solver at r_lo == r_hi") {
    const Grid1D grid = Grid1D::for_wealth(1.0, 150, 600, kCrra.horizon_t);
    const auto fixed = solve_hjb_fixed_rate(baseline(), kCrra, grid);
    const auto collapsed = solve_hjb_rate_ambiguity(baseline(), kCrra, grid);
    for (int k = 0; k <= grid.nt; k += 13) {
        for (int i = 0; i < grid.nx; i += 7) {
            CHECK(collapsed.value_at(k, i) ==
                  doctest::Approx(fixed.value_at(k, i)).epsilon(1e-12));
        }
    }
}

TEST_CASE("all-in regime pins the policy at one and matches its growth rate") {
    const AmbiguitySpec spec({AssetAmbiguity(0.10, 0.12, 0.1, 0.2)}, 0.01, 0.05);
    const Grid1D grid = Grid1D::for_wealth(1.0, 200, 800, kCrra.horizon_t);
    const auto surface = solve_hjb_rate_ambiguity(spec, kCrra, grid);
    const CrraSolution sol = solve_crra(spec, kCrra);
    CHECK(sol.beta == doctest::Approx(-0.06));

    for (int k = 0; k < grid.nt; k += 17) {
        for (int i = grid.nx / 5; i < grid.nx - grid.nx / 5; i += 5) {
            CHECK(surface.pi_at(k, i) == 1.0);
        }
    }
    CHECK(t0_interior_error(surface, sol) < 5e-3);
    CHECK(check_shape(surface).ok());
}

TEST_CASE("short-and-save regime keeps the constant short weight") {
    const AmbiguitySpec spec({AssetAmbiguity(0.01, 0.02, 0.1, 0.2)}, 0.05, 0.08);
    const Grid1D grid = Grid1D::for_wealth(1.0, 150, 600, kCrra.horizon_t);
    const auto surface = solve_hjb_rate_ambiguity(spec, kCrra, grid);
    const CrraSolution sol = solve_crra(spec, kCrra);
    CHECK(sol.rate_regime->label == RateRegimeLabel::ShortAndSave);
    for (int k = 0; k < grid.nt; k += 23) {
        for (int i = grid.nx / 5; i < grid.nx - grid.nx / 5; i += 7) {
            CHECK(surface.pi_at(k, i) == doctest::Approx(-0.375).epsilon(0.05));
        }
    }
    CHECK(t0_interior_error(surface, sol) < 5e-3);
}

TEST_CASE("HJB solver rejects unstable grids and wrong horizons") {
    CHECK_THROWS_AS(
        solve_hjb_fixed_rate(baseline(), kCrra, Grid1D::for_wealth(1.0, 3000, 200, 10.0)),
        StabilityViolation);
    CHECK_THROWS_AS(
        solve_hjb_fixed_rate(baseline(), kCrra, Grid1D::for_wealth(1.0, 100, 300, 5.0)),
        std::invalid_argument);
    const AmbiguitySpec ambiguous_rate({AssetAmbiguity(0.05, 0.09, 0.1, 0.2)}, 0.01, 0.05);
    CHECK_THROWS_AS(solve_hjb_fixed_rate(ambiguous_rate, kCrra,
                                         Grid1D::for_wealth(1.0, 100, 300, 10.0)),
                    std::invalid_argument);
}

TEST_CASE("degenerate volatility interval reduces the G-heat update to classical heat") {
    const double sigma = 0.25;
    const Grid1D grid(0.1, 20.0, 300, 400, 1.0, GridSpacing::Uniform);
    const auto convex = solve_g_heat([](double x) { return x * x; }, sigma, sigma, grid);
    const auto concave = solve_g_heat([](double x) { return -x * x; }, sigma, sigma, grid);
    const int lo = grid.nx / 5, hi = grid.nx - grid.nx / 5;
    for (int i = lo; i < hi; ++i) {
        const double exact = convex.x[i] * convex.x[i] + sigma * sigma;
        CHECK(std::abs(convex.at(grid.nt, i) - exact) / exact < 1e-6);
        CHECK(std::abs(concave.at(grid.nt, i) + exact) / exact < 1e-6);
    }
}

TEST_CASE("shape checker flags doctored surfaces") {
    const Grid1D grid = Grid1D::for_wealth(1.0, 100, 300, kCrra.horizon_t);
    auto surface = solve_hjb_fixed_rate(baseline(), kCrra, grid);
    CHECK(check_shape(surface).ok());

    auto broken_monotone = surface;
    broken_monotone.values[5] = broken_monotone.values[4];  // flat step
    const auto monotone_report = check_shape(broken_monotone);
    CHECK_FALSE(monotone_report.monotone);
    CHECK(monotone_report.bad_slice == 0);

    auto broken_concave = surface;
    // Push one interior node far enough below its neighbors to flip the
    // discrete second difference positive while staying increasing.
    const std::size_t node = 50;
    broken_concave.values[node] =
        0.5 * (broken_concave.values[node - 1] + broken_concave.values[node + 1]) -
        0.4 * (broken_concave.values[node + 1] - broken_concave.values[node - 1]);
    const auto concave_report = check_shape(broken_concave);
    CHECK_FALSE(concave_report.ok());
}

TEST_CASE("ambiguity value never exceeds a classical value from the rectangle") {
    const Grid1D grid = Grid1D::for_wealth(1.0, 120, 400, kCrra.horizon_t);
    const auto robust = solve_hjb_fixed_rate(baseline(), kCrra, grid);
    for (double mu : {0.05, 0.09}) {
        for (double sigma : {0.1, 0.2}) {
            const AmbiguitySpec classical({AssetAmbiguity(mu, mu, sigma, sigma)}, 0.01, 0.01);
            const auto reference = solve_hjb_fixed_rate(classical, kCrra, grid);
            for (int k = 0; k <= grid.nt; k += 9) {
                for (int i = 0; i < grid.nx; i += 5) {
                    CHECK(robust.value_at(k, i) <=
                          reference.value_at(k, i) +
                              1e-6 * std::max(1.0, std::abs(reference.value_at(k, i))));
                }
            }
        }
    }
}

TEST_CASE("solver handles diverse preference and market parameters") {
    // Fractional risk aversion flips the sign of phi; high risk aversion,
    // negative rates, bequest weights away from one, and short regimes
    // all pass through the same stepping.
    struct Case {
        AssetAmbiguity asset;
        double r;
        CrraParams crra;
        int nx, nt;  // steep power profiles and stiff consumption need finer grids
    };
    const std::vector<Case> cases = {
        {AssetAmbiguity(0.04, 0.06, 0.15, 0.25), 0.02, CrraParams(0.5, 1.0, 5.0), 150, 800},
        {AssetAmbiguity(0.05, 0.09, 0.2, 0.3), 0.01, CrraParams(6.0, 2.0, 5.0), 300, 3200},
        {AssetAmbiguity(-0.05, -0.02, 0.1, 0.2), 0.01, CrraParams(1.5, 0.5, 5.0), 150, 800},
        {AssetAmbiguity(0.03, 0.08, 0.15, 0.2), -0.01, CrraParams(3.0, 1.0, 5.0), 150, 800},
    };
    for (const auto& c : cases) {
        const AmbiguitySpec spec({c.asset}, c.r, c.r);
        const CrraSolution sol = solve_crra(spec, c.crra);
        const Grid1D grid = Grid1D::for_wealth(1.0, c.nx, c.nt, c.crra.horizon_t);
        const auto surface = solve_hjb_fixed_rate(spec, c.crra, grid);
        CHECK(check_shape(surface).ok());
        double err = 0.0;
        for (int i = grid.nx / 5; i < grid.nx - grid.nx / 5; ++i) {
            const double exact = value_function(MarketPoint(0.0, surface.x[i]), sol);
            err = std::max(err, std::abs(surface.value_at(0, i) - exact) / std::abs(exact));
        }
        CAPTURE(c.crra.alpha);
        CHECK(err < 2e-2);
    }
}

TEST_CASE("two-asset spec runs through the solver with per-asset policies") {
    const AmbiguitySpec two(
        {AssetAmbiguity(0.05, 0.09, 0.1, 0.2), AssetAmbiguity(0.01, 0.02, 0.1, 0.1)}, 0.03,
        0.03);
    const Grid1D grid = Grid1D::for_wealth(1.0, 120, 500, kCrra.horizon_t);
    const auto surface = solve_hjb_fixed_rate(two, kCrra, grid);
    const CrraSolution sol = solve_crra(two, kCrra);
    CHECK(surface.n_assets == 2);
    const int k = grid.nt / 2, i = grid.nx / 2;
    CHECK(surface.pi_at(k, i, 0) == doctest::Approx(sol.pi_star[0]).epsilon(0.05));
    CHECK(surface.pi_at(k, i, 1) == doctest::Approx(sol.pi_star[1]).epsilon(0.05));
    CHECK(t0_interior_error(surface, sol) < 5e-3);
}
