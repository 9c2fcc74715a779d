#pragma once

// Scalar special functions for the standard normal distribution: density,
// CDF, quantile, Q-function (complementary CDF) and the exponential
// sandwich bounds on Q used by the certification machinery.

namespace ordsel::specfun {

// Standard normal density (2*pi)^(-1/2) * exp(-x^2/2).
double phi(double x);

// Standard normal CDF. Accepts +-infinity. Absolute error < 1e-15
// everywhere (Cody-style rational erfc kernel).
double Phi(double x);

// Quantile function, inverse of Phi on (0,1). Throws std::domain_error
// for p <= 0 or p >= 1.
double Phi_inv(double p);

// Q(x) = 1 - Phi(x), evaluated on the complementary branch so that the
// relative error stays small in the right tail.
double q_func(double x);

// log Q(x), valid over the whole real line (asymptotic expansion past
// the erfc underflow point). Needed for Q(z)^n = exp(n log Q(z)).
double log_q(double x);

struct QBounds {
    double lower;  // c1 * exp(-c2 x^2)
    double upper;  // (1/2) exp(-x^2/2)
};

// Exponential sandwich on Q(x) for x >= 0, parameterised by
// omega in (0, pi/2): c1 = 1/2 - omega/pi, c2 = cot(omega)/(pi - 2 omega).
// Throws std::domain_error outside the stated domains.
QBounds q_bounds(double x, double omega);

}  // namespace ordsel::specfun
