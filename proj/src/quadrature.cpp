#include "simplexwalk/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>

#include "simplexwalk/errors.hpp"
#include "simplexwalk/special.hpp"

namespace swalk::quad {

namespace {

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights at kXgk[1], kXgk[3], kXgk[5], kXgk[7].
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel kronrod_panel(const Integrand& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double k15 = kWgk[7] * fc;
  double g7 = kWg[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = h * kXgk[i];
    const double pair = f(c - dx) + f(c + dx);
    k15 += kWgk[i] * pair;
    if (i % 2 == 1) g7 += kWg[i / 2] * pair;
  }
  k15 *= h;
  g7 *= h;
  return {a, b, k15, std::fabs(k15 - g7)};
}

bool within(const QuadResult& r, Tolerance tol) {
  return r.error <= std::max(tol.abs, tol.rel * std::fabs(r.value));
}

}  // namespace

QuadResult gauss_kronrod(const Integrand& f, double a, double b, Tolerance tol,
                         std::size_t max_intervals) {
  QuadResult out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  std::priority_queue<Panel> heap;
  heap.push(kronrod_panel(f, a, b));
  out.evaluations = 15;
  auto totals = [&heap]() {
    // The heap is small; recomputing the sums avoids drift from repeated
    // subtraction of nearly equal quantities.
    auto copy = heap;
    double v = 0.0, e = 0.0;
    while (!copy.empty()) {
      v += copy.top().value;
      e += copy.top().error;
      copy.pop();
    }
    return std::pair{v, e};
  };
  double value = heap.top().value;
  double error = heap.top().error;
  while (true) {
    out.value = value;
    out.error = error;
    if (within(out, tol)) {
      out.converged = true;
      return out;
    }
    if (heap.size() >= max_intervals) break;
    const Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) break;  // interval exhausted
    const Panel left = kronrod_panel(f, worst.a, mid);
    const Panel right = kronrod_panel(f, mid, worst.b);
    out.evaluations += 30;
    heap.push(left);
    heap.push(right);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    if (heap.size() % 64 == 0) std::tie(value, error) = totals();
  }
  std::tie(out.value, out.error) = totals();
  if (within(out, tol)) {
    out.converged = true;
    return out;
  }
  throw QuadratureError("gauss_kronrod: tolerance not met (error estimate " +
                        std::to_string(out.error) + ")");
}

QuadResult tanh_sinh(const Integrand& f, double a, double b, Tolerance tol, int max_level) {
  QuadResult out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  const double half = 0.5 * (b - a);
  const double center = 0.5 * (a + b);
  constexpr double kHalfPi = 0.5 * std::numbers::pi;
  constexpr double kTmax = 6.5;

  // Contribution of the abscissa pair at +t and -t (t > 0).
  auto pair_sum = [&](double t) {
    const double v = kHalfPi * std::sinh(t);
    const double e = std::exp(-2.0 * v);
    const double comp = 2.0 * e / (1.0 + e);  // 1 - tanh(v)
    const double ch = std::cosh(v);
    const double w = half * kHalfPi * std::cosh(t) / (ch * ch);
    const double off = half * comp;
    double s = 0.0;
    const double xl = a + off;
    const double xr = b - off;
    if (xl > a && xl < b) {
      const double term = w * f(xl);
      ++out.evaluations;
      if (std::isfinite(term)) s += term;
    }
    if (xr > a && xr < b) {
      const double term = w * f(xr);
      ++out.evaluations;
      if (std::isfinite(term)) s += term;
    }
    return s;
  };

  double h = 1.0;
  double sum = half * kHalfPi * f(center);
  out.evaluations = 1;
  for (double t = h; t <= kTmax; t += h) sum += pair_sum(t);
  double estimate = h * sum;
  for (int level = 1; level <= max_level; ++level) {
    h *= 0.5;
    for (double t = h; t <= kTmax; t += 2.0 * h) sum += pair_sum(t);
    const double next = h * sum;
    out.value = next;
    out.error = std::fabs(next - estimate);
    estimate = next;
    if (level >= 3 && within(out, tol)) {
      out.converged = true;
      return out;
    }
  }
  throw QuadratureError("tanh_sinh: tolerance not met (error estimate " +
                        std::to_string(out.error) + ")");
}

GaussRule gauss_jacobi(std::size_t n, double alpha, double beta) {
  if (n == 0) throw InvalidParameter("gauss_jacobi: need at least one node");
  if (!(alpha > -1.0) || !(beta > -1.0)) throw InvalidParameter("gauss_jacobi: exponents must exceed -1");
  const double ab = alpha + beta;
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) {
    const double kk = static_cast<double>(k);
    double diag;
    if (k == 0) {
      diag = (beta - alpha) / (ab + 2.0);
    } else {
      diag = (beta * beta - alpha * alpha) / ((2.0 * kk + ab) * (2.0 * kk + ab + 2.0));
    }
    jac(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = diag;
    if (k + 1 < n) {
      const double m = kk + 1.0;
      double off2;
      if (m == 1.0) {
        off2 = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
      } else {
        const double s = 2.0 * m + ab;
        off2 = 4.0 * m * (m + alpha) * (m + beta) * (m + ab) / (s * s * (s + 1.0) * (s - 1.0));
      }
      const double off = std::sqrt(off2);
      jac(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k + 1)) = off;
      jac(static_cast<Eigen::Index>(k + 1), static_cast<Eigen::Index>(k)) = off;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jac);
  if (solver.info() != Eigen::Success) throw Error("gauss_jacobi: eigen decomposition failed");
  const double log_mu0 = (ab + 1.0) * std::log(2.0) + special::log_gamma(alpha + 1.0) +
                         special::log_gamma(beta + 1.0) - special::log_gamma(ab + 2.0);
  const double mu0 = std::exp(log_mu0);
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    rule.nodes[k] = solver.eigenvalues()(kk);
    const double v0 = solver.eigenvectors()(0, kk);
    rule.weights[k] = mu0 * v0 * v0;
  }
  return rule;
}

double power_weight_integral(const Integrand& h, double exponent, std::size_t n) {
  const GaussRule rule = gauss_jacobi(n, 0.0, exponent);
  // w = (1 + x) / 2 maps [-1, 1] onto [0, 1]; w^e dw = 2^{-e-1} (1+x)^e dx.
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) sum += rule.weights[k] * h(0.5 * (1.0 + rule.nodes[k]));
  return sum * std::pow(2.0, -exponent - 1.0);
}

}  // namespace swalk::quad
