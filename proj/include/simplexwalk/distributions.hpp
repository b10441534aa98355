#pragma once

#include <string>
#include <variant>
#include <vector>

#include "simplexwalk/geometry.hpp"
#include "simplexwalk/rng.hpp"

namespace swalk {

struct BetaLaw {
  double a = 1.0;
  double b = 1.0;
};
struct UniformLaw {};
struct PointMassLaw {
  double value = 0.0;
};

/// Law of the jump fraction xi on [0, 1]. Uniform evaluates as Beta(1, 1).
class JumpLaw {
 public:
  using Variant = std::variant<BetaLaw, UniformLaw, PointMassLaw>;

  JumpLaw() : law_(UniformLaw{}) {}
  static JumpLaw beta(double a, double b);
  static JumpLaw uniform() { return JumpLaw(UniformLaw{}); }
  static JumpLaw point_mass(double v);

  const Variant& variant() const { return law_; }
  bool has_density() const { return !std::holds_alternative<PointMassLaw>(law_); }
  /// (a, b) of the equivalent Beta law; throws for a point mass.
  BetaLaw as_beta() const;
  std::string describe() const;

 private:
  explicit JumpLaw(Variant v) : law_(v) {}
  Variant law_;
};

double sample_jump(const JumpLaw& law, RngStream& rng);
/// Density at x in [0, 1]; +inf at an endpoint where the density diverges.
/// Throws InvalidParameter for a point mass.
double jump_pdf(const JumpLaw& law, double x);
double jump_cdf(const JumpLaw& law, double x);
/// P(xi >= x).
double jump_tail(const JumpLaw& law, double x);

/// Shape parameters (alpha_1, ..., alpha_{d+1}); the last belongs to z_0.
class DirichletParams {
 public:
  explicit DirichletParams(std::vector<double> alpha);

  std::size_t dim() const { return alpha_.size() - 1; }
  const std::vector<double>& alpha() const { return alpha_; }
  double total() const;
  /// Shape attached to barycentric weight j in 0..d.
  double shape_of_bary(std::size_t j) const { return j == 0 ? alpha_.back() : alpha_[j - 1]; }

 private:
  std::vector<double> alpha_;
};

/// Gamma(shape, 1) variate, returned as its logarithm so that small shapes
/// do not underflow. Marsaglia-Tsang squeeze, with the U^{1/a} boost for
/// shape < 1.
double sample_log_gamma(double shape, RngStream& rng);
double sample_gamma(double shape, RngStream& rng);

double dirichlet_log_pdf(const DirichletParams& params, const SimplexPoint& z);
/// Throws DomainError on the boundary when the exponent there is negative.
double dirichlet_pdf(const DirichletParams& params, const SimplexPoint& z);
SimplexPoint sample_dirichlet(const DirichletParams& params, RngStream& rng);

struct Moments {
  std::vector<double> mean;
  std::vector<std::vector<double>> covariance;
};
Moments dirichlet_moments(const DirichletParams& params);

/// Law of coordinate j (1..d) of a Dirichlet point: Beta(alpha_j, total - alpha_j).
BetaLaw dirichlet_marginal(const DirichletParams& params, std::size_t j);

double beta_pdf(double a, double b, double x);
double beta_cdf(double a, double b, double x);
double arcsine_cdf(double x);
double arcsine_pdf(double x);

}  // namespace swalk
