#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace swalk::quad {

using Integrand = std::function<double(double)>;

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
};

struct Tolerance {
  double abs = 1e-10;
  double rel = 1e-12;
};

/// Globally adaptive Gauss-Kronrod (7/15) on [a, b]. Splits the interval with
/// the largest error estimate until the total estimate meets the tolerance.
/// Throws QuadratureError when max_intervals is exhausted.
QuadResult gauss_kronrod(const Integrand& f, double a, double b, Tolerance tol = {},
                         std::size_t max_intervals = 4000);

/// Double-exponential (tanh-sinh) rule on [a, b]. Tolerates integrable
/// power singularities at either endpoint; f is never evaluated at a or b.
/// Throws QuadratureError when the level-to-level change stays above the
/// tolerance after max_level halvings.
QuadResult tanh_sinh(const Integrand& f, double a, double b, Tolerance tol = {},
                     int max_level = 12);

/// Nodes and weights on [-1, 1] for the weight (1-x)^alpha (1+x)^beta.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Golub-Welsch construction from the Jacobi three-term recurrence.
GaussRule gauss_jacobi(std::size_t n, double alpha, double beta);

/// Integral over [0, 1] of w^exponent * h(w) with an n-point Gauss-Jacobi rule
/// (exponent > -1). Exact for polynomial h of degree < 2n.
double power_weight_integral(const Integrand& h, double exponent, std::size_t n);

}  // namespace swalk::quad
