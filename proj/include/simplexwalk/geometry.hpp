#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "simplexwalk/rng.hpp"

namespace swalk {

/// Boundary slack for membership and singularity guards.
inline constexpr double kTol = 1e-12;

/// A point (z_1, ..., z_d) of the closed standard simplex S_d. The vertex-0
/// weight z_0 = 1 - sum z_j is implicit.
class SimplexPoint {
 public:
  SimplexPoint() = default;
  /// Throws DomainError unless every coordinate is >= -kTol and the sum is
  /// at most 1 + kTol.
  explicit SimplexPoint(std::vector<double> coords);

  static SimplexPoint origin(std::size_t d);
  /// Vertex E_j, j in 0..d (E_0 is the origin).
  static SimplexPoint vertex(std::size_t d, std::size_t j);
  static SimplexPoint barycenter(std::size_t d);

  std::size_t dim() const { return coords_.size(); }
  std::span<const double> coords() const { return coords_; }
  /// z_j for j in 1..d.
  double coord(std::size_t j) const { return coords_[j - 1]; }
  double z0() const;
  /// Barycentric weight of vertex j in 0..d.
  double bary(std::size_t j) const { return j == 0 ? z0() : coords_[j - 1]; }

  /// True when every barycentric weight exceeds kTol.
  bool interior() const;

  friend bool operator==(const SimplexPoint&, const SimplexPoint&) = default;

 private:
  std::vector<double> coords_;
};

/// A point of the unit cube, the domain of the stick-breaking map.
class CubePoint {
 public:
  CubePoint() = default;
  explicit CubePoint(std::vector<double> coords) : coords_(std::move(coords)) {}

  std::size_t dim() const { return coords_.size(); }
  std::span<const double> coords() const { return coords_; }
  double coord(std::size_t j) const { return coords_[j - 1]; }

 private:
  std::vector<double> coords_;
};

/// Stick-breaking map T: coordinate j is x_j * prod_{l>j} (1 - x_l).
/// The remaining stick is tracked by subtraction, as inverse_T does.
/// Throws DomainError when a coordinate leaves [0, 1] by more than kTol.
SimplexPoint forward_T(const CubePoint& x);

/// Inverse of T: coordinate j is z_j / (1 - sum_{l>j} z_l). Throws
/// SingularityError when z_0 or a denominator is <= kTol.
CubePoint inverse_T(const SimplexPoint& z);

/// G_z(u): coordinate j is u_0 z_j + u_j.
SimplexPoint apply_G(const SimplexPoint& z, const SimplexPoint& u);

/// G_z^{-1}(u): coordinate j is u_j - z_j u_0 / z_0. Throws SingularityError
/// when z_0 <= kTol and DomainError when u lies outside G_z(S_d).
SimplexPoint invert_G(const SimplexPoint& z, const SimplexPoint& u);

/// R_j(u) = (u_0, u_1, ..., u_{j-1}, u_{j+1}, ..., u_d); R_0 is the cyclic
/// relabelling (u_0, u_1, ..., u_{d-1}). Throws IndexError for j > d.
SimplexPoint rotate_R(std::size_t j, const SimplexPoint& u);
SimplexPoint unrotate_R(std::size_t j, const SimplexPoint& y);

/// det D(G_z^{-1}) = 1 / z_0.
double jacobian_det_Ginv(const SimplexPoint& z);
/// det D(T^{-1})(v) = 1 / prod_j (1 - sum_{l>j} v_l).
double jacobian_det_Tinv(const SimplexPoint& v);
/// det D(T)(x) = prod_j prod_{l>j} (1 - x_l), the reciprocal of the above.
double jacobian_det_T(const CubePoint& x);

enum class RegionKind { V, U, K, K0, Box };

/// One of the sets V_j, U_{j1..jk}, K, K_0, or an axis-aligned box in z.
struct RegionSpec {
  RegionKind kind = RegionKind::Box;
  std::size_t dim = 0;
  double delta = 0.0;
  double s = 0.0;
  double t = 0.0;
  std::size_t index = 0;
  std::vector<std::size_t> index_set;
  std::vector<std::pair<double, double>> box;

  static RegionSpec V(std::size_t d, std::size_t j, double delta);
  static RegionSpec U(std::size_t d, std::vector<std::size_t> indices, double delta);
  static RegionSpec K(std::size_t d, double s, double t);
  static RegionSpec K0(std::size_t d, double delta, double s, double t);
  static RegionSpec Box(std::vector<std::pair<double, double>> bounds);
};

/// Closed membership test; points within kTol of a bound are members.
bool in_region(const RegionSpec& r, const SimplexPoint& z);

/// True when 0 < delta < 2^-d and delta^(1/d) < s < t < 1 - delta^(1/d).
bool admissible(std::size_t d, double delta, double s, double t);

/// Lower end s(1-t)^{d-1} - delta of the K_0 preimage box.
double k0_lower(std::size_t d, double delta, double s, double t);

// Samplers used by the inclusion checks.

/// Uniform point of S_d (normalized exponentials).
SimplexPoint sample_uniform_simplex(std::size_t d, RngStream& rng);
/// T applied to a uniform point of [s, t]^d.
SimplexPoint sample_K(std::size_t d, double s, double t, RngStream& rng);
/// V_0: uniform on delta * S_d. V_k: z_k = 1 - delta w, the remaining mass
/// delta w spread uniformly over the other d barycentric weights.
SimplexPoint sample_V(std::size_t d, std::size_t j, double delta, RngStream& rng);

}  // namespace swalk
