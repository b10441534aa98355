#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "simplexwalk/assumptions.hpp"
#include "simplexwalk/errors.hpp"
#include "simplexwalk/geometry.hpp"

using namespace swalk;

namespace {

std::vector<double> vec(std::span<const double> s) { return {s.begin(), s.end()}; }

void check_close(std::span<const double> a, std::vector<double> b, double tol) {
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < tol);
}

// central differences, h = 1e-6
double fd_det(const std::function<std::vector<double>(const std::vector<double>&)>& f, std::vector<double> x) {
  const std::size_t d = x.size();
  const double h = 1e-6;
  Eigen::MatrixXd jac(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    auto xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    const auto fp = f(xp), fm = f(xm);
    for (std::size_t j = 0; j < d; ++j) jac(j, i) = (fp[j] - fm[j]) / (2 * h);
  }
  return jac.determinant();
}

SimplexPoint interior_uniform(std::size_t d, RngStream& rng, double floor) {
  while (true) {
    const SimplexPoint z = sample_uniform_simplex(d, rng);
    bool ok = true;
    for (std::size_t j = 0; j <= d; ++j) ok = ok && z.bary(j) >= floor;
    if (ok) return z;
  }
}

}  // namespace

TEST_CASE("SimplexPoint validation") {
  CHECK_THROWS_AS(SimplexPoint({0.7, 0.4}), DomainError);
  CHECK_THROWS_AS(SimplexPoint({-0.1, 0.4}), DomainError);
  CHECK_NOTHROW(SimplexPoint({0.5, 0.5}));
  CHECK(SimplexPoint::vertex(3, 2).coord(2) == 1.0);
  CHECK(SimplexPoint::barycenter(2).z0() == doctest::Approx(1.0 / 3));
}

TEST_CASE("forward_T examples") {
  check_close(forward_T(CubePoint({0.37})).coords(), {0.37}, 1e-15);
  check_close(forward_T(CubePoint({0.5, 0.5})).coords(), {0.25, 0.5}, 1e-15);
  CHECK_THROWS_AS(forward_T(CubePoint({1.2, 0.5})), DomainError);
}

TEST_CASE("inverse_T examples") {
  check_close(inverse_T(SimplexPoint({1.0 / 3, 1.0 / 3})).coords(), {0.5, 1.0 / 3}, 1e-15);
  CHECK_THROWS_AS(inverse_T(SimplexPoint({0.5, 0.5})), SingularityError);
}

TEST_CASE("apply_G and invert_G examples") {
  const SimplexPoint z({0.2, 0.3});
  const SimplexPoint u({0.1, 0.2});
  const SimplexPoint g = apply_G(z, u);
  check_close(g.coords(), {0.24, 0.41}, 1e-15);
  check_close(invert_G(z, g).coords(), {0.1, 0.2}, 1e-15);
  check_close(apply_G(z, SimplexPoint::origin(2)).coords(), {0.2, 0.3}, 1e-15);
  check_close(invert_G(z, z).coords(), {0.0, 0.0}, 1e-15);
  CHECK_THROWS_AS(invert_G(SimplexPoint({0.5, 0.5}), u), SingularityError);
}

TEST_CASE("rotate_R examples and inverse") {
  const SimplexPoint u({0.1, 0.2});
  check_close(rotate_R(0, u).coords(), {0.7, 0.1}, 1e-15);
  check_close(rotate_R(1, u).coords(), {0.7, 0.2}, 1e-15);
  CHECK_THROWS_AS(rotate_R(3, u), IndexError);
  RngStream rng(3, 0);
  for (std::size_t d : {1, 2, 3, 5}) {
    for (int i = 0; i < 200; ++i) {
      const SimplexPoint w = sample_uniform_simplex(d, rng);
      for (std::size_t j = 0; j <= d; ++j) check_close(unrotate_R(j, rotate_R(j, w)).coords(), vec(w.coords()), 1e-15);
    }
  }
}

TEST_CASE("Jacobian examples") {
  CHECK(jacobian_det_Ginv(SimplexPoint({0.2, 0.3})) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(jacobian_det_Ginv(SimplexPoint::origin(2)) == 1.0);
  CHECK(jacobian_det_Tinv(SimplexPoint({0.25, 0.5})) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(jacobian_det_Tinv(SimplexPoint({0.8})) == 1.0);
  CHECK_THROWS_AS(jacobian_det_Ginv(SimplexPoint({0.5, 0.5})), SingularityError);
}

TEST_CASE("Jacobians are >= 1 and match finite differences") {
  RngStream rng(11, 0);
  for (std::size_t d : {1, 2, 3, 5}) {
    double worst_g = 0.0, worst_t = 0.0;
    for (int i = 0; i < 500; ++i) {
      const SimplexPoint z = interior_uniform(d, rng, 0.01);
      const SimplexPoint u = interior_uniform(d, rng, 0.01);
      const double jg = jacobian_det_Ginv(z);
      const double jt = jacobian_det_Tinv(u);
      CHECK(jg >= 1.0);
      CHECK(jt >= 1.0);
      // G_z^{-1} as a map of u, with z held fixed; no domain check needed off S_d
      const auto ginv = [&](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x;
        std::vector<double> out(d);
        for (std::size_t j = 0; j < d; ++j) out[j] = v[j] - z.coords()[j] * (1.0 - s) / z.z0();
        return out;
      };
      const auto tinv = [&](const std::vector<double>& v) { return vec(inverse_T(SimplexPoint(v)).coords()); };
      worst_g = std::max(worst_g, std::abs(fd_det(ginv, vec(u.coords())) - jg) / jg);
      worst_t = std::max(worst_t, std::abs(fd_det(tinv, vec(u.coords())) - jt) / jt);
    }
    CHECK(worst_g < 1e-6);
    CHECK(worst_t < 1e-6);
  }
}

TEST_CASE("round trips in the well-conditioned direction") {
  RngStream rng(5, 0);
  for (std::size_t d : {1, 2, 3, 5}) {
    for (int i = 0; i < 1000; ++i) {
      const SimplexPoint z = interior_uniform(d, rng, 1e-6);
      check_close(forward_T(inverse_T(z)).coords(), vec(z.coords()), 1e-12);
      const SimplexPoint w = sample_uniform_simplex(d, rng);
      const SimplexPoint img = apply_G(w, sample_uniform_simplex(d, rng));
      check_close(apply_G(w, invert_G(w, img)).coords(), vec(img.coords()), 1e-12);
    }
  }
}

TEST_CASE("Step 4 reconstruction identity") {
  RngStream rng(9, 0);
  for (std::size_t d : {1, 2, 3}) {
    for (int i = 0; i < 200; ++i) {
      const SimplexPoint z = sample_uniform_simplex(d, rng);
      const SimplexPoint u = sample_uniform_simplex(d, rng);
      for (std::size_t k = 1; k <= d; ++k) {
        const SimplexPoint w = unrotate_R(k, apply_G(rotate_R(k, z), u));
        // vertex 0 and the kept vertices before k shift by one slot
        std::vector<double> expect(d + 1);
        expect[k] = u.z0() * z.bary(k);
        std::size_t slot = 1;
        for (std::size_t j = 0; j <= d; ++j) {
          if (j == k) continue;
          expect[j] = u.z0() * z.bary(j) + (j == 0 || j < k ? u.bary(slot) : u.bary(j));
          if (j < k) ++slot;
        }
        for (std::size_t j = 0; j <= d; ++j) CHECK(std::abs(w.bary(j) - expect[j]) < 1e-14);
      }
    }
  }
}

TEST_CASE("in_region examples") {
  CHECK(in_region(RegionSpec::V(2, 0, 0.1), SimplexPoint({0.05, 0.03})));
  CHECK_FALSE(in_region(RegionSpec::V(2, 0, 0.1), SimplexPoint({0.05, 0.3})));
  CHECK(in_region(RegionSpec::V(2, 1, 0.1), SimplexPoint({0.95, 0.01})));
  CHECK(in_region(RegionSpec::K(1, 0.3, 0.6), SimplexPoint({0.45})));
  CHECK_FALSE(in_region(RegionSpec::K(1, 0.3, 0.6), SimplexPoint({0.7})));
  CHECK(in_region(RegionSpec::U(2, {0, 1}, 0.1), SimplexPoint({0.05, 0.92})));
}

TEST_CASE("samplers land in their sets") {
  RngStream rng(2, 0);
  for (std::size_t d : {1, 2, 3}) {
    for (int i = 0; i < 500; ++i) {
      CHECK(in_region(RegionSpec::K(d, 0.3, 0.6), sample_K(d, 0.3, 0.6, rng)));
      for (std::size_t j = 0; j <= d; ++j) CHECK(in_region(RegionSpec::V(d, j, 0.005), sample_V(d, j, 0.005, rng)));
    }
  }
}

TEST_CASE("admissibility") {
  CHECK(admissible(2, 0.005, 0.3, 0.6));
  CHECK_FALSE(admissible(5, 0.005, 0.3, 0.6));
  CHECK_FALSE(admissible(1, 0.6, 0.3, 0.6));
  CHECK_FALSE(admissible(2, 0.005, 0.6, 0.3));
}

TEST_CASE("Lemma 1 inclusions hold and the checker has power") {
  for (std::size_t d : {1, 2, 3}) {
    RngStream rng(d, 1);
    const Lemma1Report rep = verify_lemma1(d, 0.005, 0.3, 0.6, 20000, rng);
    CHECK(rep.admissible);
    CHECK(rep.parts.size() == d + 1);
    CHECK(rep.total_violations() == 0);
    RngStream rng2(d, 1);
    CHECK(verify_lemma1(d, 0.005, 0.3, 0.6, 20000, rng2, 0.5).total_violations() > 0);
  }
}
