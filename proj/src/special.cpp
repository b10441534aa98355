#include "simplexwalk/special.hpp"

#include <cmath>
#include <limits>

#include "simplexwalk/errors.hpp"

namespace swalk::special {

namespace {

constexpr double kTiny = 1e-300;
constexpr double kEps = 1e-15;
constexpr int kMaxIter = 10000;

// Modified Lentz evaluation of the incomplete-beta continued fraction.
double beta_continued_fraction(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  throw Error("incomplete beta continued fraction did not converge");
}

// x^a (1-x)^b / (a B(a,b)), the prefactor shared by both tails.
double beta_front(double a, double b, double x) {
  return std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta(a, b)) / a;
}

void check_beta_args(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw InvalidParameter("incomplete beta: shapes must be positive");
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("incomplete beta: x outside [0,1]");
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0)) throw DomainError("log_gamma: argument must be positive");
  return std::lgamma(x);
}

double log_beta(double a, double b) { return log_gamma(a) + log_gamma(b) - log_gamma(a + b); }

double incomplete_beta(double a, double b, double x) {
  check_beta_args(a, b, x);
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  if (x < (a + 1.0) / (a + b + 2.0)) return beta_front(a, b, x) * beta_continued_fraction(a, b, x);
  return 1.0 - beta_front(b, a, 1.0 - x) * beta_continued_fraction(b, a, 1.0 - x);
}

double incomplete_beta_complement(double a, double b, double x) {
  check_beta_args(a, b, x);
  if (x == 0.0) return 1.0;
  if (x == 1.0) return 0.0;
  const double y = 1.0 - x;
  if (y < (b + 1.0) / (a + b + 2.0)) return beta_front(b, a, y) * beta_continued_fraction(b, a, y);
  return 1.0 - beta_front(a, b, x) * beta_continued_fraction(a, b, x);
}

double incomplete_gamma_p(double a, double x) {
  if (!(a > 0.0)) throw InvalidParameter("incomplete gamma: shape must be positive");
  if (x < 0.0) throw DomainError("incomplete gamma: x must be nonnegative");
  if (x == 0.0) return 0.0;
  if (x >= a + 1.0) return 1.0 - incomplete_gamma_q(a, x);
  // Series representation.
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < kMaxIter; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * kEps) {
      return sum * std::exp(-x + a * std::log(x) - log_gamma(a));
    }
  }
  throw Error("incomplete gamma series did not converge");
}

double incomplete_gamma_q(double a, double x) {
  if (!(a > 0.0)) throw InvalidParameter("incomplete gamma: shape must be positive");
  if (x < 0.0) throw DomainError("incomplete gamma: x must be nonnegative");
  if (x < a + 1.0) return 1.0 - incomplete_gamma_p(a, x);
  // Continued fraction (modified Lentz).
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) {
      return std::exp(-x + a * std::log(x) - log_gamma(a)) * h;
    }
  }
  throw Error("incomplete gamma continued fraction did not converge");
}

double chi_square_quantile(double dof, double p) {
  if (!(dof > 0.0)) throw InvalidParameter("chi_square_quantile: dof must be positive");
  if (!(p > 0.0 && p < 1.0)) throw DomainError("chi_square_quantile: p must lie in (0,1)");
  const double a = 0.5 * dof;
  double lo = 0.0;
  double hi = dof + 10.0 * std::sqrt(2.0 * dof) + 100.0;
  while (incomplete_gamma_p(a, 0.5 * hi) < p) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-12 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (incomplete_gamma_p(a, 0.5 * mid) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace swalk::special
