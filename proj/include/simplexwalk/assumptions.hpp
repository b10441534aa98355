#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "simplexwalk/chain.hpp"
#include "simplexwalk/distributions.hpp"
#include "simplexwalk/geometry.hpp"
#include "simplexwalk/rng.hpp"

namespace swalk {

struct TailCheck {
  double eta = 0.0;  // P(xi >= 1 - delta), closed form
  bool pass = false;
};

TailCheck check_tail(const JumpLaw& jump, double delta);

struct ChoiceInfResult {
  double epsilon = 0.0;  // smallest sampled value of sum_{j in J} p_j over all slabs
  double modulus = 0.0;  // largest change between neighbouring lattice points
  std::size_t resolution = 0;
  std::size_t evaluations = 0;
  std::vector<std::size_t> worst_subset;
  std::vector<double> worst_point;
  bool exact = false;  // affine choice: the lattice holds every slab vertex
  bool certified = false;
  std::string note;
};

/// Approximates, for every index set J of size 1..d in {0..d}, the infimum
/// of sum_{j in J} p_j(z) over the slab {z : sum_{j in J} z_j <= delta},
/// on a lattice of the slab (product of the [0, delta] mass axis and two
/// barycentric lattices) plus `random_samples` random points per slab.
ChoiceInfResult check_choice_inf(const ChoiceFunction& cf, double delta, std::size_t resolution,
                                 std::uint64_t seed = 0, std::size_t random_samples = 2000);

struct DensityLowerResult {
  double c = 0.0;
  double min_density = 0.0;
  double argmin = 0.0;
  double lo1 = 0.0, hi1 = 0.0;  // [s(1-t)^{d-1} - delta, t]
  double lo2 = 0.0, hi2 = 0.0;  // [(1-t)^d - delta, 1 - s]
  bool empty1 = false;
  bool empty2 = false;
  bool vacuous = false;
  bool pass = false;
};

/// Multiplicative slack applied to the sampled density minimum.
inline constexpr double kDensityMargin = 1e-6;

/// c = (1 - kDensityMargin) * min of the jump density over the union of the
/// two intervals, sampled on `resolution` + 1 points per interval.
/// Throws InvalidParameter for a point mass.
DensityLowerResult check_density_lower(const JumpLaw& jump, std::size_t d, double delta, double s, double t,
                                       std::size_t resolution);

struct InclusionPart {
  std::string label;   // "a" or "b"
  std::size_t k = 0;   // vertex of V_k (0 for part a)
  std::size_t samples = 0;
  std::size_t violations = 0;
  double worst_margin = 0.0;  // min over samples of the distance to the nearest box face
  std::vector<double> witness_u;
  std::vector<double> witness_z;
};

struct Lemma1Report {
  std::size_t d = 0;
  double delta = 0.0, s = 0.0, t = 0.0;
  double target_t = 0.0;  // t used when building the target boxes
  bool admissible = false;
  std::vector<InclusionPart> parts;

  std::size_t total_violations() const;
};

/// Samples u in K and z in V_k and checks that T^{-1} G_z^{-1}(u) (k = 0)
/// and T^{-1} G_{R_k z}^{-1}(R_k u) (k >= 1) fall in their target boxes.
/// `target_t` rebuilds the target boxes with a different t to test the
/// checker's power; the sampled sets always use t.
Lemma1Report verify_lemma1(std::size_t d, double delta, double s, double t, std::size_t n_samples,
                           RngStream& rng, std::optional<double> target_t = std::nullopt);

struct AssumptionReport {
  std::size_t d = 0;
  double delta = 0.0, s = 0.0, t = 0.0;
  bool admissible = false;
  TailCheck tail;
  ChoiceInfResult choice;
  DensityLowerResult density;
  std::optional<Lemma1Report> lemma1;
  double eta = 0.0;
  double epsilon = 0.0;
  double c = 0.0;
  bool certified = false;
  std::vector<std::string> witnesses;
};

struct AssumptionOptions {
  std::size_t grid_resolution = 200;
  std::size_t random_samples = 2000;
  std::size_t lemma1_samples = 0;  // 0 skips the inclusion sampling
  std::uint64_t seed = 0;
};

AssumptionReport check_assumptions(const ChoiceFunction& cf, const JumpLaw& jump, double delta, double s,
                                   double t, const AssumptionOptions& opts = {});

/// Tries delta = 10^-k (k = 1..8, below 2^-d) and (s, t) on a 9-point grid of
/// (delta^{1/d}, 1 - delta^{1/d}); returns the first certified report.
std::optional<AssumptionReport> search_parameters(const ChoiceFunction& cf, const JumpLaw& jump,
                                                  const AssumptionOptions& opts = {});

}  // namespace swalk
