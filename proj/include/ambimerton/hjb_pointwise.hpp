// Pointwise Hamiltonian maximizers. Both objectives are concave
// piecewise quadratics in the portfolio weight with kinks where the
// worst-case parameter selection switches: at pi = 0 in the fixed-rate
// model, and additionally at pi = 1 under rate ambiguity (the bond
// position changes sign there, so nature flips the worst rate).
#pragma once

#include <stdexcept>

#include "ambimerton/model.hpp"

namespace ambimerton {

/// a = (1/2) sigma_hi^2 x^2 phi_xx < 0, b = phi_x x > 0. These encode
/// concavity and monotonicity of the value function at the node.
struct QuadCoeffs {
    double a;
    double b;
};

struct PointwiseMax {
    double pi_hat;
    double value;
};

class InvalidCoeffs : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// sup over pi of  a pi^2 + b pi (mu_lo - r) [pi > 0]
///                          + b pi (mu_hi - r) [pi <= 0].
/// Value excludes the common b*r savings term, so NonParticipation
/// scores exactly zero.
PointwiseMax maximize_fixed_rate(const QuadCoeffs& coeffs, double mu_lo, double mu_hi,
                                 double r);

/// sup over pi of the three-branch objective
///   f1(pi) = a pi^2 + b pi (mu_lo - rate_hi) + b rate_hi   on pi >= 1
///   f2(pi) = a pi^2 + b pi (mu_lo - rate_lo) + b rate_lo   on 0 <= pi <= 1
///   f3(pi) = a pi^2 + b pi (mu_hi - rate_lo) + b rate_lo   on pi <= 0.
/// The branches paste continuously at 0 and 1. Unlike the fixed-rate
/// objective the value here keeps the savings intercepts b*rate, so PDE
/// assembly must not add a separate rate term.
PointwiseMax maximize_rate_ambiguity(const QuadCoeffs& coeffs, double mu_lo, double mu_hi,
                                     double rate_lo, double rate_hi);

}  // namespace ambimerton
