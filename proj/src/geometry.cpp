#include "simplexwalk/geometry.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "simplexwalk/errors.hpp"

namespace swalk {

namespace {

double sum_of(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }

void require_same_dim(const SimplexPoint& a, const SimplexPoint& b) {
  if (a.dim() != b.dim()) throw InvalidParameter("dimension mismatch");
}

}  // namespace

SimplexPoint::SimplexPoint(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw DomainError("simplex point needs d >= 1 coordinates");
  for (double c : coords_) {
    if (!std::isfinite(c) || c < -kTol) throw DomainError("simplex coordinate below zero");
  }
  if (sum_of(coords_) > 1.0 + kTol) throw DomainError("simplex coordinates sum above one");
}

SimplexPoint SimplexPoint::origin(std::size_t d) { return SimplexPoint(std::vector<double>(d, 0.0)); }

SimplexPoint SimplexPoint::vertex(std::size_t d, std::size_t j) {
  if (j > d) throw IndexError("vertex index out of range");
  std::vector<double> c(d, 0.0);
  if (j > 0) c[j - 1] = 1.0;
  return SimplexPoint(std::move(c));
}

SimplexPoint SimplexPoint::barycenter(std::size_t d) {
  return SimplexPoint(std::vector<double>(d, 1.0 / static_cast<double>(d + 1)));
}

double SimplexPoint::z0() const { return 1.0 - sum_of(coords_); }

bool SimplexPoint::interior() const {
  for (double c : coords_) {
    if (c <= kTol) return false;
  }
  return z0() > kTol;
}

SimplexPoint forward_T(const CubePoint& x) {
  const std::size_t d = x.dim();
  if (d == 0) throw DomainError("forward_T: empty point");
  std::vector<double> z(d);
  double tail = 1.0;
  for (std::size_t j = d; j-- > 0;) {
    const double xj = x.coords()[j];
    if (!std::isfinite(xj) || xj < -kTol || xj > 1.0 + kTol) {
      throw DomainError("forward_T: coordinate outside (0,1)");
    }
    z[j] = xj * tail;
    // same subtraction inverse_T performs, so the two retrace each other
    tail -= z[j];
  }
  return SimplexPoint(std::move(z));
}

CubePoint inverse_T(const SimplexPoint& z) {
  const std::size_t d = z.dim();
  if (z.z0() <= kTol) throw SingularityError("inverse_T: point on the face z_0 = 0");
  std::vector<double> x(d);
  double rem = 1.0;  // 1 - sum_{l>j} z_l, peeled one coordinate at a time
  for (std::size_t j = d; j-- > 0;) {
    if (rem <= kTol) throw SingularityError("inverse_T: vanishing tail denominator");
    x[j] = z.coords()[j] / rem;
    rem -= z.coords()[j];
  }
  return CubePoint(std::move(x));
}

SimplexPoint apply_G(const SimplexPoint& z, const SimplexPoint& u) {
  require_same_dim(z, u);
  const double u0 = u.z0();
  std::vector<double> out(z.dim());
  for (std::size_t j = 0; j < z.dim(); ++j) out[j] = u0 * z.coords()[j] + u.coords()[j];
  return SimplexPoint(std::move(out));
}

SimplexPoint invert_G(const SimplexPoint& z, const SimplexPoint& u) {
  require_same_dim(z, u);
  const double z0 = z.z0();
  if (z0 <= kTol) throw SingularityError("invert_G: z_0 vanishes");
  const double ratio = u.z0() / z0;
  std::vector<double> out(z.dim());
  for (std::size_t j = 0; j < z.dim(); ++j) out[j] = u.coords()[j] - z.coords()[j] * ratio;
  try {
    return SimplexPoint(std::move(out));
  } catch (const DomainError&) {
    throw DomainError("invert_G: u lies outside the image of G_z");
  }
}

SimplexPoint rotate_R(std::size_t j, const SimplexPoint& u) {
  const std::size_t d = u.dim();
  if (j > d) throw IndexError("rotate_R: index " + std::to_string(j) + " outside 0..d");
  std::vector<double> out;
  out.reserve(d);
  out.push_back(u.z0());
  if (j == 0) {
    for (std::size_t l = 1; l < d; ++l) out.push_back(u.coord(l));
  } else {
    for (std::size_t l = 1; l <= d; ++l) {
      if (l != j) out.push_back(u.coord(l));
    }
  }
  return SimplexPoint(std::move(out));
}

SimplexPoint unrotate_R(std::size_t j, const SimplexPoint& y) {
  const std::size_t d = y.dim();
  if (j > d) throw IndexError("unrotate_R: index " + std::to_string(j) + " outside 0..d");
  // y's own implicit weight is the coordinate R_j dropped.
  const double dropped = y.z0();
  std::vector<double> out(d);
  if (j == 0) {
    for (std::size_t l = 1; l < d; ++l) out[l - 1] = y.coord(l + 1);
    out[d - 1] = dropped;
  } else {
    std::size_t src = 2;
    for (std::size_t l = 1; l <= d; ++l) {
      out[l - 1] = (l == j) ? dropped : y.coord(src++);
    }
  }
  return SimplexPoint(std::move(out));
}

double jacobian_det_Ginv(const SimplexPoint& z) {
  const double z0 = z.z0();
  if (z0 <= kTol) throw SingularityError("jacobian_det_Ginv: z_0 vanishes");
  return 1.0 / z0;
}

double jacobian_det_Tinv(const SimplexPoint& v) {
  double prod = 1.0;
  double tail = 0.0;
  for (std::size_t j = v.dim(); j-- > 0;) {
    const double factor = 1.0 - tail;
    if (factor <= kTol) throw SingularityError("jacobian_det_Tinv: vanishing factor");
    prod *= factor;
    tail += v.coords()[j];
  }
  return 1.0 / prod;
}

double jacobian_det_T(const CubePoint& x) {
  double prod = 1.0;
  double tail = 1.0;
  for (std::size_t j = x.dim(); j-- > 0;) {
    prod *= tail;
    tail *= 1.0 - x.coords()[j];
  }
  return prod;
}

RegionSpec RegionSpec::V(std::size_t d, std::size_t j, double delta) {
  if (j > d) throw IndexError("V_j: index outside 0..d");
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidParameter("V_j: delta must lie in (0,1)");
  RegionSpec r;
  r.kind = RegionKind::V;
  r.dim = d;
  r.index = j;
  r.delta = delta;
  return r;
}

RegionSpec RegionSpec::U(std::size_t d, std::vector<std::size_t> indices, double delta) {
  if (indices.empty() || indices.size() > d) throw InvalidParameter("U: need 1..d indices");
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (indices[k] > d) throw IndexError("U: index outside 0..d");
    if (k > 0 && indices[k] <= indices[k - 1]) throw InvalidParameter("U: indices must increase");
  }
  RegionSpec r;
  r.kind = RegionKind::U;
  r.dim = d;
  r.index_set = std::move(indices);
  r.delta = delta;
  return r;
}

RegionSpec RegionSpec::K(std::size_t d, double s, double t) {
  if (!(0.0 < s && s < t && t < 1.0)) throw InvalidParameter("K: need 0 < s < t < 1");
  RegionSpec r;
  r.kind = RegionKind::K;
  r.dim = d;
  r.s = s;
  r.t = t;
  return r;
}

RegionSpec RegionSpec::K0(std::size_t d, double delta, double s, double t) {
  if (!admissible(d, delta, s, t)) throw InvalidParameter("K_0: (delta, s, t) not admissible");
  RegionSpec r;
  r.kind = RegionKind::K0;
  r.dim = d;
  r.delta = delta;
  r.s = s;
  r.t = t;
  return r;
}

RegionSpec RegionSpec::Box(std::vector<std::pair<double, double>> bounds) {
  for (const auto& [lo, hi] : bounds) {
    if (!(lo <= hi)) throw InvalidParameter("Box: lower bound above upper bound");
  }
  RegionSpec r;
  r.kind = RegionKind::Box;
  r.dim = bounds.size();
  r.box = std::move(bounds);
  return r;
}

namespace {

bool ratios_within(const SimplexPoint& z, double lo, double hi) {
  double tail = 0.0;
  for (std::size_t j = z.dim(); j-- > 0;) {
    const double denom = 1.0 - tail;
    if (denom <= kTol) return false;
    const double ratio = z.coords()[j] / denom;
    if (ratio < lo - kTol || ratio > hi + kTol) return false;
    tail += z.coords()[j];
  }
  return true;
}

}  // namespace

bool in_region(const RegionSpec& r, const SimplexPoint& z) {
  if (r.dim != z.dim()) throw InvalidParameter("in_region: dimension mismatch");
  switch (r.kind) {
    case RegionKind::V:
      return z.bary(r.index) >= 1.0 - r.delta - kTol;
    case RegionKind::U: {
      double s = 0.0;
      for (std::size_t j : r.index_set) s += z.bary(j);
      return s <= r.delta + kTol;
    }
    case RegionKind::K:
      return ratios_within(z, r.s, r.t);
    case RegionKind::K0:
      return ratios_within(z, k0_lower(r.dim, r.delta, r.s, r.t), r.t);
    case RegionKind::Box:
      for (std::size_t j = 0; j < r.dim; ++j) {
        const double c = z.coords()[j];
        if (c < r.box[j].first - kTol || c > r.box[j].second + kTol) return false;
      }
      return true;
  }
  return false;
}

bool admissible(std::size_t d, double delta, double s, double t) {
  if (d == 0) return false;
  if (!(delta > 0.0 && delta < std::ldexp(1.0, -static_cast<int>(d)))) return false;
  const double root = std::pow(delta, 1.0 / static_cast<double>(d));
  return root < s && s < t && t < 1.0 - root;
}

double k0_lower(std::size_t d, double delta, double s, double t) {
  return s * std::pow(1.0 - t, static_cast<double>(d) - 1.0) - delta;
}

SimplexPoint sample_uniform_simplex(std::size_t d, RngStream& rng) {
  std::vector<double> e(d + 1);
  double total = 0.0;
  for (double& x : e) {
    x = rng.exponential();
    total += x;
  }
  std::vector<double> z(d);
  for (std::size_t j = 0; j < d; ++j) z[j] = e[j + 1] / total;
  return SimplexPoint(std::move(z));
}

SimplexPoint sample_K(std::size_t d, double s, double t, RngStream& rng) {
  std::vector<double> x(d);
  for (double& xi : x) xi = s + (t - s) * rng.uniform();
  return forward_T(CubePoint(std::move(x)));
}

SimplexPoint sample_V(std::size_t d, std::size_t j, double delta, RngStream& rng) {
  if (j > d) throw IndexError("sample_V: index outside 0..d");
  if (j == 0) {
    SimplexPoint w = sample_uniform_simplex(d, rng);
    std::vector<double> z(d);
    for (std::size_t l = 0; l < d; ++l) z[l] = delta * w.coords()[l];
    return SimplexPoint(std::move(z));
  }
  const double mass = delta * rng.uniform_open();
  // Spread `mass` over the d barycentric weights other than j (vertex 0
  // included), uniformly on that face.
  std::vector<double> rest(d);
  double total = 0.0;
  for (double& x : rest) {
    x = rng.exponential();
    total += x;
  }
  std::vector<double> z(d);
  std::size_t slot = 1;  // rest[0] goes to vertex 0 (implicit)
  for (std::size_t l = 1; l <= d; ++l) {
    z[l - 1] = (l == j) ? 1.0 - mass : mass * rest[slot++] / total;
  }
  return SimplexPoint(std::move(z));
}

}  // namespace swalk
