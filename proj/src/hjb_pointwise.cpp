#include "ambimerton/hjb_pointwise.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace ambimerton {

namespace {

void check_coeffs(const QuadCoeffs& c) {
    if (!(c.a < 0.0) || !(c.b > 0.0)) {
        throw InvalidCoeffs("pointwise maximizer needs a < 0 and b > 0, got a = " +
                            std::to_string(c.a) + ", b = " + std::to_string(c.b));
    }
}

void check_interval(double lo, double hi, const char* name) {
    if (!(lo <= hi)) {
        throw InvalidCoeffs(std::string(name) + " interval inverted");
    }
}

// Maximum of a*pi^2 + slope*pi + intercept over [lo, hi] with a < 0:
// the unconstrained vertex clamped into the branch.
PointwiseMax branch_max(double a, double slope, double intercept, double lo, double hi) {
    const double vertex = -slope / (2.0 * a);
    const double pi = std::clamp(vertex, lo, hi);
    return {pi, (a * pi + slope) * pi + intercept};
}

}  // namespace

PointwiseMax maximize_fixed_rate(const QuadCoeffs& coeffs, double mu_lo, double mu_hi,
                                 double r) {
    check_coeffs(coeffs);
    check_interval(mu_lo, mu_hi, "mu");
    const double a = coeffs.a;
    const double b = coeffs.b;
    if (r <= mu_lo) {
        const double excess = mu_lo - r;
        return {-b * excess / (2.0 * a), -b * b * excess * excess / (4.0 * a)};
    }
    if (r >= mu_hi) {
        const double excess = mu_hi - r;
        return {-b * excess / (2.0 * a), -b * b * excess * excess / (4.0 * a)};
    }
    return {0.0, 0.0};
}

PointwiseMax maximize_rate_ambiguity(const QuadCoeffs& coeffs, double mu_lo, double mu_hi,
                                     double rate_lo, double rate_hi) {
    check_coeffs(coeffs);
    check_interval(mu_lo, mu_hi, "mu");
    check_interval(rate_lo, rate_hi, "rate");
    const double a = coeffs.a;
    const double b = coeffs.b;
    constexpr double inf = std::numeric_limits<double>::infinity();

    const PointwiseMax saver = branch_max(a, b * (mu_lo - rate_lo), b * rate_lo, 0.0, 1.0);
    const PointwiseMax borrower = branch_max(a, b * (mu_lo - rate_hi), b * rate_hi, 1.0, inf);
    const PointwiseMax shorter = branch_max(a, b * (mu_hi - rate_lo), b * rate_lo, -inf, 0.0);

    PointwiseMax best = saver;
    if (borrower.value > best.value) best = borrower;
    if (shorter.value > best.value) best = shorter;
    return best;
}

}  // namespace ambimerton
