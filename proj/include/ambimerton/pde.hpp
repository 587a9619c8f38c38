// Finite-difference verification layer: the G-heat equation stepped
// forward in time, and the nonlinear robust HJB equations stepped
// backward from the bequest boundary. Explicit Euler throughout, with
// CFL checks at assembly and hard aborts (never silent clamping) when a
// slice loses monotonicity or concavity.
#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ambimerton/model.hpp"

namespace ambimerton {

enum class GridSpacing { Uniform, Log };

/// Space-time lattice: nx wealth nodes on [x_min, x_max] (log-spaced by
/// default; power-law value functions resolve best in log wealth) and nt
/// explicit Euler steps over [0, t_max].
struct Grid1D {
    double x_min;
    double x_max;
    int nx;
    int nt;
    double t_max;
    GridSpacing spacing;

    Grid1D(double x_min, double x_max, int nx, int nt, double t_max,
           GridSpacing spacing = GridSpacing::Log);

    std::vector<double> nodes() const;
    double dt() const { return t_max / nt; }

    /// Standard truncation for wealth problems: [0.01 x0, 100 x0].
    static Grid1D for_wealth(double x0, int nx, int nt, double t_max);
};

class StabilityViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a time slice develops phi_x <= 0 or phi_xx >= 0 at an
/// interior node; signals a grid too coarse for the problem.
class ConcavityLoss : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// u(t,x) surface from the G-heat solver; row k holds time k*dt.
struct HeatSurface {
    Grid1D grid;
    std::vector<double> x;
    std::vector<double> values;  // (nt+1) * nx

    double at(int k, int i) const { return values[static_cast<std::size_t>(k) * x.size() + i]; }
};

/// phi / pi_hat / c_hat surfaces from the HJB solvers. Row k of values
/// is time k*dt (row nt is the bequest slice). Policy rows k = 0..nt-1
/// hold the controls applied over [t_k, t_{k+1}); pi is stored per asset.
struct ValueSurface {
    Grid1D grid;
    int n_assets = 1;
    std::vector<double> x;
    std::vector<double> values;     // (nt+1) * nx
    std::vector<double> policy_pi;  // nt * nx * n_assets
    std::vector<double> policy_c;   // nt * nx

    double value_at(int k, int i) const {
        return values[static_cast<std::size_t>(k) * x.size() + i];
    }
    double pi_at(int k, int i, int asset = 0) const {
        return policy_pi[(static_cast<std::size_t>(k) * x.size() + i) * n_assets + asset];
    }
    double c_at(int k, int i) const {
        return policy_c[static_cast<std::size_t>(k) * x.size() + i];
    }
};

struct ShapeReport {
    bool monotone = true;
    bool concave = true;
    int bad_slice = -1;
    int bad_node = -1;
    bool ok() const { return monotone && concave; }
};

/// Forward stepping of  du/dt = (1/2)[sigma_hi^2 (u_xx)+ - sigma_lo^2 (u_xx)-]
/// from u(0, x) = payoff(x). Boundary nodes carry a zero-second-difference
/// (linear extrapolation) condition, which preserves linear payoffs
/// exactly. Requires 0 <= sigma_lo <= sigma_hi.
HeatSurface solve_g_heat(const std::function<double(double)>& payoff, double sigma_lo,
                         double sigma_hi, const Grid1D& grid);

/// Backward induction for the fixed-rate robust HJB: at each node the
/// risky contribution comes from the fixed-rate pointwise maximizer and
/// consumption enters through its CRRA closed form c* = phi_x^(-1/alpha).
/// Boundary nodes follow the CRRA power-law asymptote
/// phi(x_bnd) = phi(x_adj) (x_bnd/x_adj)^(1-alpha), which the exact
/// solution satisfies identically.
ValueSurface solve_hjb_fixed_rate(const AmbiguitySpec& spec, const CrraParams& crra,
                                  const Grid1D& grid);

/// Same stepping for the rate-ambiguity HJB (single asset). The
/// pointwise maximizer value already contains the worst-rate savings
/// term, so no separate rate term is added.
ValueSurface solve_hjb_rate_ambiguity(const AmbiguitySpec& spec, const CrraParams& crra,
                                      const Grid1D& grid);

/// Strict increase along every time slice and negative discrete second
/// difference at every interior node.
ShapeReport check_shape(const ValueSurface& surface);

}  // namespace ambimerton
