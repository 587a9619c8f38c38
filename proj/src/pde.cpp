#include "ambimerton/pde.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ambimerton/closed_form.hpp"
#include "ambimerton/hjb_pointwise.hpp"
#include "ambimerton/worst_case.hpp"

namespace ambimerton {

namespace {

std::string format_double(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

// Largest consumption fraction over the horizon; used by the CFL bound.
double max_consumption_fraction(const CrraSolution& sol) {
    double q_max = 0.0;
    const int samples = 64;
    for (int i = 0; i <= samples; ++i) {
        const double t = sol.crra.horizon_t * i / samples;
        q_max = std::max(q_max, sol.consumption_fraction(t));
    }
    return q_max;
}

// Positive-coefficient bounds for the explicit step, diffusive and
// advective, evaluated node by node. diffusion_unit and speed_unit are
// the coefficients per unit x^2 and x respectively.
void check_cfl(const Grid1D& grid, const std::vector<double>& x, double diffusion_unit,
               double speed_unit) {
    const double dt = grid.dt();
    for (int i = 1; i + 1 < grid.nx; ++i) {
        const double d_loc = std::min(x[i] - x[i - 1], x[i + 1] - x[i]);
        const double diffusion = diffusion_unit * x[i] * x[i];
        const double speed = speed_unit * x[i];
        if (dt * 2.0 * diffusion > d_loc * d_loc || dt * speed > d_loc) {
            const double dt_diff = diffusion > 0.0 ? d_loc * d_loc / (2.0 * diffusion)
                                                   : grid.t_max;
            const double dt_adv = speed > 0.0 ? d_loc / speed : grid.t_max;
            const double dt_max = std::min(dt_diff, dt_adv);
            const int nt_needed = static_cast<int>(std::ceil(grid.t_max / dt_max));
            throw StabilityViolation(
                "explicit step unstable at x = " + format_double(x[i]) + ": dt = " +
                format_double(dt) + " exceeds " + format_double(dt_max) +
                "; refine to nt >= " + std::to_string(nt_needed));
        }
    }
}

void check_horizon(const Grid1D& grid, const CrraParams& crra) {
    if (std::abs(grid.t_max - crra.horizon_t) >
        1e-12 * std::max(1.0, std::abs(crra.horizon_t))) {
        throw std::invalid_argument("grid.t_max must equal the CRRA horizon");
    }
}

// First and second wealth derivatives of a slice at interior node i.
// On log grids this is the uniform stencil in y = ln x mapped through
// the chain rule (phi_x = psi_y / x, phi_xx = (psi_yy - psi_y) / x^2),
// which keeps the concavity combination O(|phi|)-sized at every node;
// on uniform grids it is the plain central stencil.
struct SliceDerivatives {
    const Grid1D& grid;
    const std::vector<double>& x;
    double h;  // log step (Log) or dx (Uniform)

    SliceDerivatives(const Grid1D& g, const std::vector<double>& nodes)
        : grid(g), x(nodes) {
        h = (g.spacing == GridSpacing::Log)
                ? (std::log(g.x_max) - std::log(g.x_min)) / (g.nx - 1)
                : (g.x_max - g.x_min) / (g.nx - 1);
    }

    void at(const double* v, int i, double& phi_x, double& phi_xx) const {
        if (grid.spacing == GridSpacing::Log) {
            const double psi_y = (v[i + 1] - v[i - 1]) / (2.0 * h);
            const double psi_yy = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / (h * h);
            phi_x = psi_y / x[i];
            phi_xx = (psi_yy - psi_y) / (x[i] * x[i]);
        } else {
            phi_x = (v[i + 1] - v[i - 1]) / (2.0 * h);
            phi_xx = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / (h * h);
        }
    }
};

// Shared backward induction. hamiltonian(a_unit, phi_x, phi_xx, x, pi_out)
// returns the risky (plus, under rate ambiguity, savings) contribution
// and fills the per-asset argmax weights.
template <typename Hamiltonian>
ValueSurface backward_induction(const CrraParams& crra,
                                const Grid1D& grid, Hamiltonian&& hamiltonian,
                                int n_assets) {
    const auto x = grid.nodes();
    const int nx = grid.nx;
    const int nt = grid.nt;
    const double dt = grid.dt();
    const double alpha = crra.alpha;

    ValueSurface surface{grid, n_assets, x, {}, {}, {}};
    surface.values.resize(static_cast<std::size_t>(nt + 1) * nx);
    surface.policy_pi.resize(static_cast<std::size_t>(nt) * nx * n_assets);
    surface.policy_c.resize(static_cast<std::size_t>(nt) * nx);

    double* terminal = surface.values.data() + static_cast<std::size_t>(nt) * nx;
    for (int i = 0; i < nx; ++i) {
        terminal[i] = crra_bequest(x[i], crra);
    }

    // Power-law boundary factors: phi ~ x^(1-alpha) near both truncation
    // edges, exactly as in the closed form.
    const double factor_left = std::pow(x[0] / x[1], 1.0 - alpha);
    const double factor_right = std::pow(x[nx - 1] / x[nx - 2], 1.0 - alpha);

    SliceDerivatives deriv(grid, x);
    std::vector<double> pi_work(n_assets);

    for (int k = nt - 1; k >= 0; --k) {
        const double* v = surface.values.data() + static_cast<std::size_t>(k + 1) * nx;
        double* out = surface.values.data() + static_cast<std::size_t>(k) * nx;
        double* pi_row = surface.policy_pi.data() + static_cast<std::size_t>(k) * nx * n_assets;
        double* c_row = surface.policy_c.data() + static_cast<std::size_t>(k) * nx;

        for (int i = 1; i + 1 < nx; ++i) {
            double phi_x = 0.0, phi_xx = 0.0;
            deriv.at(v, i, phi_x, phi_xx);
            if (!(phi_x > 0.0) || !(phi_xx < 0.0)) {
                throw ConcavityLoss("slice at t = " + format_double((k + 1) * dt) +
                                    " lost shape at x = " + format_double(x[i]) +
                                    " (phi_x = " + format_double(phi_x) +
                                    ", phi_xx = " + format_double(phi_xx) +
                                    "); refine the grid");
            }
            const double c_star = std::pow(phi_x, -1.0 / alpha);
            const double consumption_term =
                alpha / (1.0 - alpha) * std::pow(phi_x, 1.0 - 1.0 / alpha);
            const double risky = hamiltonian(phi_x, phi_xx, x[i], pi_work);

            out[i] = v[i] + dt * (consumption_term + risky);
            c_row[i] = c_star;
            for (int j = 0; j < n_assets; ++j) {
                pi_row[static_cast<std::size_t>(i) * n_assets + j] = pi_work[j];
            }
        }
        out[0] = out[1] * factor_left;
        out[nx - 1] = out[nx - 2] * factor_right;
        // Boundary policies mirror the adjacent interior node.
        c_row[0] = c_row[1];
        c_row[nx - 1] = c_row[nx - 2];
        for (int j = 0; j < n_assets; ++j) {
            pi_row[j] = pi_row[static_cast<std::size_t>(1) * n_assets + j];
            pi_row[static_cast<std::size_t>(nx - 1) * n_assets + j] =
                pi_row[static_cast<std::size_t>(nx - 2) * n_assets + j];
        }
    }
    return surface;
}

}  // namespace

Grid1D::Grid1D(double x_min_, double x_max_, int nx_, int nt_, double t_max_,
               GridSpacing spacing_)
    : x_min(x_min_), x_max(x_max_), nx(nx_), nt(nt_), t_max(t_max_), spacing(spacing_) {
    if (!(x_min > 0.0) || !(x_min < x_max)) {
        throw std::invalid_argument("Grid1D: need 0 < x_min < x_max");
    }
    if (nx < 3) throw std::invalid_argument("Grid1D: need nx >= 3");
    if (nt < 1) throw std::invalid_argument("Grid1D: need nt >= 1");
    if (!(t_max > 0.0)) throw std::invalid_argument("Grid1D: need t_max > 0");
}

std::vector<double> Grid1D::nodes() const {
    std::vector<double> x(nx);
    if (spacing == GridSpacing::Log) {
        const double y0 = std::log(x_min);
        const double h = (std::log(x_max) - y0) / (nx - 1);
        for (int i = 0; i < nx; ++i) x[i] = std::exp(y0 + i * h);
    } else {
        const double dx = (x_max - x_min) / (nx - 1);
        for (int i = 0; i < nx; ++i) x[i] = x_min + i * dx;
    }
    x.front() = x_min;
    x.back() = x_max;
    return x;
}

Grid1D Grid1D::for_wealth(double x0, int nx, int nt, double t_max) {
    if (!(x0 > 0.0)) throw std::invalid_argument("Grid1D::for_wealth: need x0 > 0");
    return Grid1D(0.01 * x0, 100.0 * x0, nx, nt, t_max, GridSpacing::Log);
}

HeatSurface solve_g_heat(const std::function<double(double)>& payoff, double sigma_lo,
                         double sigma_hi, const Grid1D& grid) {
    if (!(sigma_lo >= 0.0) || !(sigma_lo <= sigma_hi)) {
        throw std::invalid_argument("solve_g_heat: need 0 <= sigma_lo <= sigma_hi");
    }
    const auto x = grid.nodes();
    const int nx = grid.nx;
    const int nt = grid.nt;
    const double dt = grid.dt();
    const double var_hi = sigma_hi * sigma_hi;
    const double var_lo = sigma_lo * sigma_lo;

    for (int i = 1; i + 1 < nx; ++i) {
        const double hm = x[i] - x[i - 1];
        const double hp = x[i + 1] - x[i];
        if (dt * var_hi > hm * hp) {
            const int nt_needed = static_cast<int>(std::ceil(grid.t_max * var_hi / (hm * hp)));
            throw StabilityViolation("G-heat step unstable: dt = " + format_double(dt) +
                                     " exceeds " + format_double(hm * hp / var_hi) +
                                     "; refine to nt >= " + std::to_string(nt_needed));
        }
    }

    HeatSurface surface{grid, x, {}};
    surface.values.resize(static_cast<std::size_t>(nt + 1) * nx);
    for (int i = 0; i < nx; ++i) surface.values[i] = payoff(x[i]);

    for (int k = 0; k < nt; ++k) {
        const double* u = surface.values.data() + static_cast<std::size_t>(k) * nx;
        double* out = surface.values.data() + static_cast<std::size_t>(k + 1) * nx;
        for (int i = 1; i + 1 < nx; ++i) {
            const double hm = x[i] - x[i - 1];
            const double hp = x[i + 1] - x[i];
            const double d2 = 2.0 * (u[i - 1] / (hm * (hm + hp)) - u[i] / (hm * hp) +
                                     u[i + 1] / (hp * (hm + hp)));
            const double flux = d2 >= 0.0 ? 0.5 * var_hi * d2 : 0.5 * var_lo * d2;
            out[i] = u[i] + dt * flux;
        }
        out[0] = 2.0 * out[1] - out[2];
        out[nx - 1] = 2.0 * out[nx - 2] - out[nx - 3];
    }
    return surface;
}

ValueSurface solve_hjb_fixed_rate(const AmbiguitySpec& spec, const CrraParams& crra,
                                  const Grid1D& grid) {
    validate_spec(spec);
    if (!spec.fixed_rate()) {
        throw std::invalid_argument("solve_hjb_fixed_rate: rate interval must be degenerate");
    }
    check_horizon(grid, crra);
    const double r = spec.rate_lo;
    const auto x = grid.nodes();
    const int n_assets = static_cast<int>(spec.n_assets());

    // CFL bounds use the known constant optimal weights.
    const CrraSolution sol = solve_crra(spec, crra);
    double diffusion_unit = 0.0;
    double drift_unit = std::abs(r);
    for (int j = 0; j < n_assets; ++j) {
        const double s = spec.assets[j].sigma_hi * sol.pi_star[j];
        diffusion_unit += 0.5 * s * s;
        drift_unit += std::abs(sol.pi_star[j] * (sol.worst_case.mu_star[j] - r));
    }
    const double speed_unit = drift_unit + diffusion_unit + max_consumption_fraction(sol);
    check_cfl(grid, x, diffusion_unit, speed_unit);

    auto hamiltonian = [&](double phi_x, double phi_xx, double xi,
                           std::vector<double>& pi_out) {
        const double b = phi_x * xi;
        double total = r * b;
        for (int j = 0; j < n_assets; ++j) {
            const auto& asset = spec.assets[j];
            const QuadCoeffs coeffs{0.5 * asset.sigma_hi * asset.sigma_hi * xi * xi * phi_xx,
                                    b};
            const PointwiseMax m = maximize_fixed_rate(coeffs, asset.mu_lo, asset.mu_hi, r);
            total += m.value;
            pi_out[j] = m.pi_hat;
        }
        return total;
    };
    return backward_induction(crra, grid, hamiltonian, n_assets);
}

ValueSurface solve_hjb_rate_ambiguity(const AmbiguitySpec& spec, const CrraParams& crra,
                                      const Grid1D& grid) {
    validate_spec(spec);
    if (spec.n_assets() != 1) {
        throw std::invalid_argument(
            "solve_hjb_rate_ambiguity: rate ambiguity is modeled for one risky asset");
    }
    check_horizon(grid, crra);
    const auto& asset = spec.assets[0];
    const auto x = grid.nodes();

    const CrraSolution sol = solve_crra(spec, crra);
    const double pi = sol.pi_star[0];
    const double diffusion_unit = 0.5 * asset.sigma_hi * asset.sigma_hi * pi * pi;
    const double rate_mag = std::max(std::abs(spec.rate_lo), std::abs(spec.rate_hi));
    const double excess_mag = std::max(std::abs(asset.mu_lo - spec.rate_hi),
                                       std::abs(asset.mu_hi - spec.rate_lo));
    const double speed_unit = rate_mag + std::abs(pi) * excess_mag + diffusion_unit +
                              max_consumption_fraction(sol);
    check_cfl(grid, x, diffusion_unit, speed_unit);

    auto hamiltonian = [&](double phi_x, double phi_xx, double xi,
                           std::vector<double>& pi_out) {
        const QuadCoeffs coeffs{0.5 * asset.sigma_hi * asset.sigma_hi * xi * xi * phi_xx,
                                phi_x * xi};
        const PointwiseMax m = maximize_rate_ambiguity(coeffs, asset.mu_lo, asset.mu_hi,
                                                       spec.rate_lo, spec.rate_hi);
        pi_out[0] = m.pi_hat;
        return m.value;  // already includes the worst-rate savings term
    };
    return backward_induction(crra, grid, hamiltonian, 1);
}

ShapeReport check_shape(const ValueSurface& surface) {
    ShapeReport report;
    const int nx = surface.grid.nx;
    const auto& x = surface.x;
    for (int k = 0; k <= surface.grid.nt; ++k) {
        for (int i = 0; i + 1 < nx; ++i) {
            if (!(surface.value_at(k, i + 1) > surface.value_at(k, i))) {
                report.monotone = false;
                report.bad_slice = k;
                report.bad_node = i;
                return report;
            }
        }
        for (int i = 1; i + 1 < nx; ++i) {
            const double hm = x[i] - x[i - 1];
            const double hp = x[i + 1] - x[i];
            const double d2 =
                2.0 * (surface.value_at(k, i - 1) / (hm * (hm + hp)) -
                       surface.value_at(k, i) / (hm * hp) +
                       surface.value_at(k, i + 1) / (hp * (hm + hp)));
            if (!(d2 < 0.0)) {
                report.concave = false;
                report.bad_slice = k;
                report.bad_node = i;
                return report;
            }
        }
    }
    return report;
}

}  // namespace ambimerton
