#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/gamma.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "simplexwalk/chain.hpp"
#include "simplexwalk/distributions.hpp"
#include "simplexwalk/errors.hpp"
#include "simplexwalk/special.hpp"
#include "simplexwalk/stats.hpp"

using namespace swalk;

namespace {

// chi-square over 100 equal-probability cells after the probability transform
bool equal_prob_chi2_ok(const std::vector<double>& u) {
  const ChiSquareResult r = chi_square_1d(u, [](double x) { return std::clamp(x, 0.0, 1.0); }, 100);
  return chi_square_test(r, 0.001).pass;
}

}  // namespace

TEST_CASE("JumpLaw validation and description") {
  CHECK_THROWS_AS(JumpLaw::beta(0.0, 1.0), InvalidParameter);
  CHECK_THROWS_AS(JumpLaw::point_mass(1.5), InvalidParameter);
  CHECK_THROWS_AS(jump_pdf(JumpLaw::point_mass(0.3), 0.5), InvalidParameter);
  CHECK(JumpLaw::uniform().as_beta().a == 1.0);
}

TEST_CASE("point mass draws its value") {
  RngStream rng(1, 0);
  for (int i = 0; i < 100; ++i) CHECK(sample_jump(JumpLaw::point_mass(1.0), rng) == 1.0);
  CHECK(jump_tail(JumpLaw::point_mass(0.4), 0.4) == 1.0);
  CHECK(jump_tail(JumpLaw::point_mass(0.4), 0.41) == 0.0);
}

TEST_CASE("jump pdf and tail") {
  CHECK(jump_pdf(JumpLaw::beta(1, 2), 0.5) == doctest::Approx(1.0).epsilon(1e-14));
  for (double x : {0.1, 0.5, 0.9}) CHECK(jump_pdf(JumpLaw::uniform(), x) == doctest::Approx(1.0).epsilon(1e-14));
  for (double gamma : {0.5, 1.0, 2.0, 3.5}) {
    for (double delta : {0.001, 0.05, 0.1, 0.4}) {
      CHECK(std::abs(jump_tail(JumpLaw::beta(1, gamma), 1 - delta) - std::pow(delta, gamma)) < 1e-12);
    }
  }
  for (double x : {0.05, 0.3, 0.77}) {
    CHECK(jump_cdf(JumpLaw::beta(0.4, 2.2), x) == doctest::Approx(boost::math::ibeta(0.4, 2.2, x)).epsilon(1e-12));
  }
}

TEST_CASE("Beta(a,a) symmetry") {
  RngStream rng(4, 0);
  const JumpLaw law = JumpLaw::beta(0.7, 0.7);
  std::vector<double> a(100000), b(100000);
  for (auto& v : a) v = sample_jump(law, rng);
  for (auto& v : b) v = 1.0 - sample_jump(law, rng);
  CHECK(ks_two_sample_test(a, b, 0.01).pass);
}

TEST_CASE("empirical tail of Beta(1, 2) at 1 - 0.1") {
  RngStream rng(8, 0);
  const JumpLaw law = JumpLaw::beta(1, 2);
  const int n = 200000;
  int hits = 0;
  for (int i = 0; i < n; ++i) hits += sample_jump(law, rng) >= 0.9;
  CHECK(std::abs(hits / double(n) - 0.01) < 3 * std::sqrt(0.0099 / n));
}

TEST_CASE("gamma sampler against boost") {
  RngStream rng(12, 0);
  for (double shape : {0.05, 0.5, 1.0, 3.7}) {
    const boost::math::gamma_distribution<> g(shape);
    std::vector<double> u(50000);
    for (auto& v : u) v = boost::math::cdf(g, sample_gamma(shape, rng));
    CHECK(equal_prob_chi2_ok(u));
  }
  // log form stays finite where the variate itself underflows
  RngStream r2(1, 0);
  for (int i = 0; i < 100; ++i) CHECK(std::isfinite(sample_log_gamma(0.005, r2)));
}

TEST_CASE("beta sampler against boost") {
  RngStream rng(13, 0);
  for (auto [a, b] : std::vector<std::pair<double, double>>{{0.5, 0.5}, {0.3, 0.7}, {1.0, 2.0}, {4.0, 1.5}}) {
    const boost::math::beta_distribution<> dist(a, b);
    std::vector<double> u(50000);
    for (auto& v : u) v = boost::math::cdf(dist, sample_jump(JumpLaw::beta(a, b), rng));
    CHECK(equal_prob_chi2_ok(u));
  }
}

TEST_CASE("Dirichlet pdf") {
  const DirichletParams ones({1, 1, 1});
  CHECK(dirichlet_pdf(ones, SimplexPoint({0.2, 0.3})) == doctest::Approx(2.0).epsilon(1e-13));
  const DirichletParams p({0.5, 1.5, 2.5});
  const DirichletParams q({1.5, 0.5, 2.5});
  CHECK(dirichlet_pdf(p, SimplexPoint({0.1, 0.6})) == doctest::Approx(dirichlet_pdf(q, SimplexPoint({0.6, 0.1}))));
  CHECK_THROWS_AS(dirichlet_pdf(p, SimplexPoint({0.0, 0.6})), DomainError);
  CHECK_THROWS_AS(DirichletParams({1.0}), InvalidParameter);
  CHECK_THROWS_AS(DirichletParams({1.0, -1.0}), InvalidParameter);
}

TEST_CASE("Dirichlet(0.6,0.6,0.6) pdf integrates to one") {
  const DirichletParams p({0.6, 0.6, 0.6});
  // oracle density in the cube coordinates (x, y) -> (x, y (1 - x)), z_0 kept exact
  const double norm = boost::math::tgamma(1.8) / std::pow(boost::math::tgamma(0.6), 3);
  const auto oracle = [&](double x, double y) {
    const double z2 = y * (1 - x), z0 = (1 - x) * (1 - y);
    return norm * std::pow(x * z2 * z0, -0.4);
  };
  // bounds pulled in by 1e-15; the dropped edges carry about 1e-9 of mass
  const double lo = 1e-15, hi = 1 - 1e-15;
  boost::math::quadrature::tanh_sinh<double> ts;
  const double total = ts.integrate(
      [&](double x) { return ts.integrate([&](double y) { return oracle(x, y) * (1 - x); }, lo, hi); }, lo, hi);
  CHECK(std::abs(total - 1.0) < 1e-6);
  RngStream rng(3, 0);
  for (int i = 0; i < 1000; ++i) {
    const double x = rng.uniform_open(), y = rng.uniform_open();
    CHECK(dirichlet_pdf(p, SimplexPoint({x, y * (1 - x)})) == doctest::Approx(oracle(x, y)).epsilon(1e-9));
  }
}

TEST_CASE("Dirichlet sampler") {
  RngStream rng(21, 0);
  SUBCASE("Dirichlet(1,1) is uniform") {
    std::vector<double> x(20000);
    for (auto& v : x) v = sample_dirichlet(DirichletParams({1, 1}), rng).coord(1);
    CHECK(ks_one_sample_test(x, [](double t) { return t; }, 0.01).pass);
  }
  SUBCASE("moments and marginals") {
    const DirichletParams p({2, 2, 2});
    std::vector<SimplexPoint> s(50000);
    for (auto& z : s) z = sample_dirichlet(p, rng);
    CHECK(moment_compare(s, p).max_dev < 4.0);
    const BetaLaw m = dirichlet_marginal(p, 1);
    CHECK(m.a == 2.0);
    CHECK(m.b == 4.0);
    const auto x = marginal(s, 2);
    CHECK(ks_one_sample_test(x, [](double t) { return boost::math::ibeta(2.0, 4.0, t); }, 0.01).pass);
  }
  SUBCASE("small shapes stay inside the simplex") {
    const DirichletParams p({0.05, 0.05, 0.05});
    for (int i = 0; i < 2000; ++i) {
      const SimplexPoint z = sample_dirichlet(p, rng);
      CHECK(z.z0() >= -kTol);
    }
  }
}

TEST_CASE("Dirichlet moments formula") {
  const Moments m = dirichlet_moments(DirichletParams({2, 3, 5}));
  CHECK(m.mean[0] == doctest::Approx(0.2));
  CHECK(m.covariance[0][0] == doctest::Approx(2.0 * 8.0 / (100.0 * 11.0)));
  CHECK(m.covariance[0][1] == doctest::Approx(-6.0 / (100.0 * 11.0)));
}

TEST_CASE("arcsine cdf") {
  CHECK(arcsine_cdf(0.5) == doctest::Approx(0.5).epsilon(1e-15));
  double worst = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double x = i / 1000.0;
    worst = std::max(worst, std::abs(arcsine_cdf(x) - boost::math::ibeta(0.5, 0.5, x)));
  }
  CHECK(worst < 1e-10);
  CHECK(beta_pdf(2, 3, 0.4) == doctest::Approx(12 * 0.4 * 0.36));
  CHECK(beta_cdf(2, 3, 0.4) == doctest::Approx(boost::math::ibeta(2.0, 3.0, 0.4)).epsilon(1e-13));
}

TEST_CASE("streams are reproducible and distinct") {
  RngStream a(42, 3), b(42, 3), c(42, 4);
  bool differ = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    differ = differ || x != c.next_u64();
  }
  CHECK(differ);
  RngStream r1(5, 0), r2(5, 0);
  const DirichletParams p({0.3, 0.9, 1.7});
  for (int i = 0; i < 50; ++i) CHECK(sample_dirichlet(p, r1) == sample_dirichlet(p, r2));
}
