#include "simplexwalk/distributions.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "simplexwalk/errors.hpp"
#include "simplexwalk/special.hpp"

namespace swalk {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

constexpr double kInf = std::numeric_limits<double>::infinity();

// log(x^{e}) with the conventions 0^0 = 1 and 0^{e>0} = 0.
double log_power(double x, double e) {
  if (e == 0.0) return 0.0;
  if (x <= 0.0) return e > 0.0 ? -kInf : kInf;
  return e * std::log(x);
}

}  // namespace

JumpLaw JumpLaw::beta(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw InvalidParameter("Beta jump law needs positive shapes");
  return JumpLaw(BetaLaw{a, b});
}

JumpLaw JumpLaw::point_mass(double v) {
  if (!(v >= 0.0 && v <= 1.0)) throw InvalidParameter("point mass must lie in [0,1]");
  return JumpLaw(PointMassLaw{v});
}

BetaLaw JumpLaw::as_beta() const {
  return std::visit(overloaded{[](const BetaLaw& b) { return b; },
                               [](const UniformLaw&) { return BetaLaw{1.0, 1.0}; },
                               [](const PointMassLaw&) -> BetaLaw {
                                 throw InvalidParameter("point mass has no Beta form");
                               }},
                    law_);
}

std::string JumpLaw::describe() const {
  std::ostringstream os;
  std::visit(overloaded{[&](const BetaLaw& b) { os << "Beta(" << b.a << "," << b.b << ")"; },
                        [&](const UniformLaw&) { os << "Uniform"; },
                        [&](const PointMassLaw& p) { os << "PointMass(" << p.value << ")"; }},
             law_);
  return os.str();
}

double sample_log_gamma(double shape, RngStream& rng) {
  if (!(shape > 0.0)) throw InvalidParameter("gamma shape must be positive");
  if (shape < 1.0) {
    // Gamma(a) = Gamma(a + 1) * U^{1/a}.
    return sample_log_gamma(shape + 1.0, rng) + std::log(rng.uniform_open()) / shape;
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  while (true) {
    double x, v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform_open();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return std::log(d * v);
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return std::log(d * v);
  }
}

double sample_gamma(double shape, RngStream& rng) { return std::exp(sample_log_gamma(shape, rng)); }

double sample_jump(const JumpLaw& law, RngStream& rng) {
  return std::visit(overloaded{[&](const BetaLaw& b) {
                                 const double lx = sample_log_gamma(b.a, rng);
                                 const double ly = sample_log_gamma(b.b, rng);
                                 // x / (x + y) computed from the log ratio.
                                 return 1.0 / (1.0 + std::exp(ly - lx));
                               },
                               [&](const UniformLaw&) { return rng.uniform(); },
                               [](const PointMassLaw& p) { return p.value; }},
                    law.variant());
}

double beta_pdf(double a, double b, double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("beta_pdf: x outside [0,1]");
  const double lp = log_power(x, a - 1.0) + log_power(1.0 - x, b - 1.0);
  if (lp == kInf) return kInf;
  return std::exp(lp - special::log_beta(a, b));
}

double beta_cdf(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return special::incomplete_beta(a, b, x);
}

double jump_pdf(const JumpLaw& law, double x) {
  if (!law.has_density()) throw InvalidParameter("point-mass jump law has no density");
  const BetaLaw b = law.as_beta();
  return beta_pdf(b.a, b.b, x);
}

double jump_cdf(const JumpLaw& law, double x) {
  if (const auto* p = std::get_if<PointMassLaw>(&law.variant())) return x >= p->value ? 1.0 : 0.0;
  const BetaLaw b = law.as_beta();
  return beta_cdf(b.a, b.b, x);
}

double jump_tail(const JumpLaw& law, double x) {
  if (const auto* p = std::get_if<PointMassLaw>(&law.variant())) return p->value >= x ? 1.0 : 0.0;
  if (x <= 0.0) return 1.0;
  if (x >= 1.0) return 0.0;
  const BetaLaw b = law.as_beta();
  return special::incomplete_beta_complement(b.a, b.b, x);
}

DirichletParams::DirichletParams(std::vector<double> alpha) : alpha_(std::move(alpha)) {
  if (alpha_.size() < 2) throw InvalidParameter("Dirichlet needs at least two shapes");
  for (double a : alpha_) {
    if (!(a > 0.0) || !std::isfinite(a)) throw InvalidParameter("Dirichlet shapes must be positive");
  }
}

double DirichletParams::total() const { return std::accumulate(alpha_.begin(), alpha_.end(), 0.0); }

double dirichlet_log_pdf(const DirichletParams& params, const SimplexPoint& z) {
  const std::size_t d = params.dim();
  if (z.dim() != d) throw InvalidParameter("dirichlet_pdf: dimension mismatch");
  double log_norm = special::log_gamma(params.total());
  for (double a : params.alpha()) log_norm -= special::log_gamma(a);
  double acc = log_norm;
  for (std::size_t j = 0; j <= d; ++j) {
    const double e = params.shape_of_bary(j) - 1.0;
    const double w = z.bary(j);
    if (w <= 0.0 && e < 0.0) throw DomainError("dirichlet_pdf: density diverges on this face");
    acc += log_power(std::max(w, 0.0), e);
  }
  return acc;
}

double dirichlet_pdf(const DirichletParams& params, const SimplexPoint& z) {
  return std::exp(dirichlet_log_pdf(params, z));
}

SimplexPoint sample_dirichlet(const DirichletParams& params, RngStream& rng) {
  const auto& alpha = params.alpha();
  std::vector<double> logs(alpha.size());
  double top = -kInf;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    logs[i] = sample_log_gamma(alpha[i], rng);
    top = std::max(top, logs[i]);
  }
  double total = 0.0;
  for (double& l : logs) {
    l = std::exp(l - top);
    total += l;
  }
  std::vector<double> z(params.dim());
  for (std::size_t j = 0; j < z.size(); ++j) z[j] = logs[j] / total;
  return SimplexPoint(std::move(z));
}

Moments dirichlet_moments(const DirichletParams& params) {
  const std::size_t d = params.dim();
  const double a0 = params.total();
  Moments m;
  m.mean.resize(d);
  m.covariance.assign(d, std::vector<double>(d, 0.0));
  const double denom = a0 * a0 * (a0 + 1.0);
  for (std::size_t i = 0; i < d; ++i) {
    const double ai = params.alpha()[i];
    m.mean[i] = ai / a0;
    for (std::size_t j = 0; j < d; ++j) {
      const double aj = params.alpha()[j];
      m.covariance[i][j] = ((i == j ? ai * a0 : 0.0) - ai * aj) / denom;
    }
  }
  return m;
}

BetaLaw dirichlet_marginal(const DirichletParams& params, std::size_t j) {
  if (j < 1 || j > params.dim()) throw IndexError("dirichlet_marginal: index outside 1..d");
  const double a = params.alpha()[j - 1];
  return BetaLaw{a, params.total() - a};
}

double arcsine_cdf(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return 2.0 / std::numbers::pi * std::asin(std::sqrt(x));
}

double arcsine_pdf(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("arcsine_pdf: x outside [0,1]");
  if (x == 0.0 || x == 1.0) return kInf;
  return 1.0 / (std::numbers::pi * std::sqrt(x * (1.0 - x)));
}

}  // namespace swalk
