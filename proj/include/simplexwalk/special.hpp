#pragma once

namespace swalk::special {

double log_gamma(double x);
double log_beta(double a, double b);

/// Regularized incomplete beta I_x(a, b), continued-fraction evaluation with
/// a 1e-14 relative target.
double incomplete_beta(double a, double b, double x);

/// 1 - I_x(a, b) evaluated without cancellation, i.e. I_{1-x}(b, a).
double incomplete_beta_complement(double a, double b, double x);

/// Regularized lower incomplete gamma P(a, x).
double incomplete_gamma_p(double a, double x);
/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double incomplete_gamma_q(double a, double x);

/// x such that P(X <= x) = p for X ~ chi-square(dof).
double chi_square_quantile(double dof, double p);

}  // namespace swalk::special
