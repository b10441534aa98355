#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "simplexwalk/distributions.hpp"
#include "simplexwalk/geometry.hpp"
#include "simplexwalk/rng.hpp"

namespace swalk {

struct ConstantChoice {
  std::vector<double> p;  // p_1..p_d
};

/// p_k(z) = beta_k (1 - z_k) + (1 - sum beta + beta_k) z_k; beta_{d+1} is
/// attached to vertex 0.
struct LinearChoice {
  std::vector<double> beta;  // beta_1..beta_{d+1}
};

/// d = 1 only: p_1 interpolated linearly between knots (x_i, v_i). Repeated
/// abscissae encode jumps; the right-hand value wins at the jump.
struct Piecewise1DChoice {
  std::vector<double> x;
  std::vector<double> v;
};

struct CustomChoice {
  std::size_t dim = 1;
  std::function<std::vector<double>(const SimplexPoint&)> fn;  // returns p_1..p_d
  std::string label;
};

/// The probability choice function p: S_d -> S_d.
class ChoiceFunction {
 public:
  using Variant = std::variant<ConstantChoice, LinearChoice, Piecewise1DChoice, CustomChoice>;

  /// Requires p_j >= 0 and sum p_j <= 1.
  static ChoiceFunction constant(std::vector<double> p);
  /// Requires beta_k > 0 and sum beta - beta_k < 1 for every k.
  static ChoiceFunction linear(std::vector<double> beta);
  static ChoiceFunction piecewise1d(std::vector<double> x, std::vector<double> v);
  static ChoiceFunction custom(std::size_t d, std::function<std::vector<double>(const SimplexPoint&)> fn,
                               std::string label = "custom");

  std::size_t dim() const;
  const Variant& variant() const { return impl_; }
  /// Constant and linear choices are affine in z, so their extrema over a
  /// polytope sit on its vertices.
  bool is_affine() const;
  /// Abscissae where a Piecewise1D choice has a kink or jump.
  std::vector<double> breakpoints() const;
  std::string describe() const;

  /// Writes (p_0, ..., p_d) into out (size d + 1).
  void probs_into(const SimplexPoint& z, std::span<double> out) const;

 private:
  explicit ChoiceFunction(Variant v) : impl_(std::move(v)) {}
  Variant impl_;
};

/// Full vector (p_0, ..., p_d). Throws InvalidParameter if an entry leaves
/// [0, 1] by more than kTol; entries within kTol are clamped.
std::vector<double> choice_probs(const ChoiceFunction& cf, const SimplexPoint& z);

/// Cumulative-sum inversion of probs with one uniform u in [0, 1). Never
/// returns an index of zero probability.
std::size_t select_vertex(std::span<const double> probs, double u);

/// (1 - xi) z + xi E_vertex.
SimplexPoint move_toward(const SimplexPoint& z, std::size_t vertex, double xi);

struct ChainConfig {
  std::size_t d = 1;
  ChoiceFunction choice = ChoiceFunction::constant({0.5});
  JumpLaw jump = JumpLaw::uniform();
  std::optional<SimplexPoint> initial;  // barycenter when empty
  std::size_t steps = 0;
  std::size_t burn_in = 0;
  std::size_t thinning = 1;
  std::size_t ensemble = 1;
  std::uint64_t seed = 0;

  SimplexPoint start() const;
  /// Throws InvalidParameter on inconsistent dimensions or counts.
  void validate() const;
};

struct ChainState {
  SimplexPoint z;
  std::size_t n = 0;
  std::size_t last_vertex = 0;
};

/// One transition: vertex from a single uniform, then xi from the jump law.
ChainState step(const ChainState& state, const ChoiceFunction& cf, const JumpLaw& jump, RngStream& rng);

/// Trajectory of the chain on stream 0, keeping states n >= burn_in with
/// (n - burn_in) divisible by thinning.
std::vector<ChainState> run_chain(const ChainConfig& config);

/// Terminal state of chain i (stream i) for i < ensemble, ordered by chain
/// index whatever the thread count.
std::vector<SimplexPoint> run_ensemble(const ChainConfig& config, unsigned threads = 1);

/// Coordinate j (1..d) of each sample.
std::vector<double> marginal(std::span<const SimplexPoint> samples, std::size_t j);

}  // namespace swalk
