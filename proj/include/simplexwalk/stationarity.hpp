#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "simplexwalk/chain.hpp"
#include "simplexwalk/distributions.hpp"
#include "simplexwalk/geometry.hpp"
#include "simplexwalk/quadrature.hpp"

namespace swalk {

/// A candidate stationary density f on the interior of S_d.
struct DensityCandidate {
  std::function<double(const SimplexPoint&)> f;
  std::string label;

  double operator()(const SimplexPoint& z) const { return f(z); }
};

DensityCandidate dirichlet_candidate(const DirichletParams& params);
/// Constant density d! on S_d.
DensityCandidate uniform_candidate(std::size_t d);
DensityCandidate beta_candidate(double a, double b);
DensityCandidate arcsine_candidate();

struct StationarityOptions {
  quad::Tolerance tol{1e-9, 1e-11};
  int max_level = 12;
};

/// Contribution T_j(z) of moves toward vertex j to the density of
/// (1 - xi) Z + xi Theta:
///   integral over u in (1 - z_j, 1) of u^{-d} f(y) p_j(y) g(1 - u) du,
/// with y_i = z_i / u for i != j and y_j = (z_j - 1 + u) / u (barycentric
/// weights, so j = 0 gives the lower limit sum z). Throws InvalidParameter
/// for a jump law without density and QuadratureError when the rule does
/// not converge.
double operator_Tj(std::size_t j, const DensityCandidate& f, const ChoiceFunction& cf, const JumpLaw& g,
                   const SimplexPoint& z, const StationarityOptions& opts = {});

struct ResidualDetail {
  double residual = 0.0;  // |sum T_j - f| / f
  double f_value = 0.0;
  std::vector<double> terms;  // T_0..T_d
};

ResidualDetail residual_detail(const DensityCandidate& f, const ChoiceFunction& cf, const JumpLaw& g,
                               const SimplexPoint& z, const StationarityOptions& opts = {});
double residual(const DensityCandidate& f, const ChoiceFunction& cf, const JumpLaw& g, const SimplexPoint& z,
                const StationarityOptions& opts = {});

/// Points of a regular lattice with spacing (1 - (d+1) margin)/(n - 1) per
/// axis whose barycentric weights are all >= margin. For d = 1 this is n
/// points on [margin, 1 - margin].
std::vector<SimplexPoint> interior_grid(std::size_t d, std::size_t points_per_axis, double margin);

struct ResidualRow {
  SimplexPoint z;
  double residual = 0.0;
  bool failed = false;  // quadrature failure at this point
  std::string note;
};

struct ResidualReport {
  std::vector<ResidualRow> rows;
  double max_residual = 0.0;
  std::size_t failures = 0;
};

ResidualReport residual_report(const DensityCandidate& f, const ChoiceFunction& cf, const JumpLaw& g,
                               std::span<const SimplexPoint> grid, const StationarityOptions& opts = {});

struct IdentitySides {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// lhs = integral over (z, 1) of u^{-b-1} (u - z)^{a-1} [a u - b (u - z)] du
/// by Gauss-Jacobi on the singular end after u = z + (1 - z) w, adaptive
/// Gauss-Kronrod on the rest; rhs = (1 - z)^a.
IdentitySides beta_integral_identity(double a, double b, double z);

/// One draw of (1 - xi) Z + xi Theta with Z ~ Dirichlet(params), Theta from
/// the constant choice p = (p_1..p_d), xi from `jump`; all independent.
SimplexPoint sethuraman_onestep(const DirichletParams& params, std::span<const double> p, const JumpLaw& jump,
                                RngStream& rng);
/// As above with xi ~ Beta(1, gamma); requires params = (p_1 gamma, ..., p_0 gamma).
SimplexPoint sethuraman_onestep(const DirichletParams& params, std::span<const double> p, double gamma,
                                RngStream& rng);

}  // namespace swalk
