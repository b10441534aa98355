#include <doctest.h>

#include <cmath>
#include <vector>

#include "simplexwalk/errors.hpp"
#include "simplexwalk/stats.hpp"

using namespace swalk;

namespace {
double identity_cdf(double x) { return x < 0 ? 0 : (x > 1 ? 1 : x); }

// P(K > x) for the Kolmogorov law
double kolmogorov_tail(double x) {
  double s = 0.0;
  for (int k = 1; k < 100; ++k) s += (k % 2 ? 2.0 : -2.0) * std::exp(-2.0 * k * k * x * x);
  return s;
}
}  // namespace

TEST_CASE("one-sample KS by hand") {
  const std::vector<double> half{0.5};
  CHECK(ks_one_sample(half, identity_cdf) == doctest::Approx(0.5));
  // midpoints of n equal cells sit 1/(2n) from the uniform CDF
  std::vector<double> mid;
  for (int i = 0; i < 40; ++i) mid.push_back((i + 0.5) / 40);
  CHECK(ks_one_sample(mid, identity_cdf) == doctest::Approx(1.0 / 80).epsilon(1e-12));
  CHECK_THROWS_AS(ks_one_sample(std::vector<double>{}, identity_cdf), InvalidParameter);
}

TEST_CASE("two-sample KS") {
  const std::vector<double> a{0.1, 0.4, 0.4, 0.9};
  CHECK(ks_two_sample(a, a) == 0.0);
  const std::vector<double> b{0.5, 0.6};
  CHECK(ks_two_sample(a, b) == doctest::Approx(0.75));
  // ties across samples are merged before comparing
  const std::vector<double> c{0.4, 0.4};
  CHECK(ks_two_sample(std::vector<double>{0.4}, c) == 0.0);
}

TEST_CASE("KS critical values") {
  CHECK(ks_coefficient(0.05) == 1.36);
  CHECK(ks_coefficient(0.01) == 1.63);
  CHECK(ks_coefficient(0.001) == 1.95);
  CHECK_THROWS_AS(ks_coefficient(0.02), InvalidParameter);
  CHECK(ks_critical(0.01, 10000) == doctest::Approx(0.0163));
  CHECK(ks_critical_two(0.001, 100000, 100000) == doctest::Approx(1.95 * std::sqrt(2e-5)));
  // the coefficients are upper quantiles of the Kolmogorov law
  for (double alpha : {0.05, 0.01, 0.001}) CHECK(kolmogorov_tail(ks_coefficient(alpha)) == doctest::Approx(alpha).epsilon(0.05));
}

TEST_CASE("KS test verdicts") {
  RngStream rng(1, 0);
  std::vector<double> u(5000), v(5000);
  for (auto& x : u) x = rng.uniform();
  for (auto& x : v) x = rng.uniform() * rng.uniform();
  CHECK(ks_one_sample_test(u, identity_cdf, 0.01).pass);
  CHECK_FALSE(ks_one_sample_test(v, identity_cdf, 0.01).pass);
  CHECK_FALSE(ks_two_sample_test(u, v, 0.01).pass);
  const GofReport r = ks_threshold_test(u, identity_cdf, 0.5);
  CHECK(r.pass);
  CHECK(r.threshold == 0.5);
  CHECK(r.n == 5000);
}

TEST_CASE("ecdf") {
  const std::vector<double> s{0.1, 0.2, 0.2, 0.7};
  CHECK(ecdf(s, 0.05) == 0.0);
  CHECK(ecdf(s, 0.2) == 0.75);
  CHECK(ecdf(s, 0.15) == 0.25);
  CHECK(ecdf(s, 1.0) == 1.0);
}

TEST_CASE("chi-square over [0, 1]") {
  RngStream rng(2, 0);
  std::vector<double> u(20000);
  for (auto& x : u) x = rng.uniform();
  const ChiSquareResult r = chi_square_1d(u, identity_cdf, 50);
  CHECK(r.cells == 50);
  CHECK(r.dof == 49);
  CHECK(r.probability_sum == doctest::Approx(1.0));
  CHECK(chi_square_test(r, 0.001).pass);
  // small sample forces merging
  const ChiSquareResult m = chi_square_1d(std::vector<double>(u.begin(), u.begin() + 60), identity_cdf, 50);
  CHECK(m.cells < 50);
  for (double e : m.expected) CHECK(e >= 5.0);
}

TEST_CASE("chi-square over the simplex") {
  const DirichletParams p({0.6, 0.6, 0.6});
  RngStream rng(3, 0);
  std::vector<SimplexPoint> s(20000);
  for (auto& z : s) z = sample_dirichlet(p, rng);
  const ChiSquareResult r = chi_square_simplex(s, p, 10);
  CHECK(r.probability_sum == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(chi_square_test(r, 0.001).pass);
  const DirichletParams wrong({1.5, 0.6, 0.6});
  CHECK_FALSE(chi_square_test(chi_square_simplex(s, wrong, 10), 0.001).pass);
}

TEST_CASE("moment comparison") {
  const DirichletParams p({2, 3, 4});
  RngStream rng(4, 0);
  std::vector<SimplexPoint> s(20000);
  for (auto& z : s) z = sample_dirichlet(p, rng);
  const MomentReport m = moment_compare(s, p);
  CHECK(m.max_dev < 4.0);
  CHECK(m.mean[0] == doctest::Approx(2.0 / 9).epsilon(0.02));
  CHECK(moment_compare(s, DirichletParams({3, 3, 4})).max_dev > 4.0);
}

TEST_CASE("histogram total variation shrinks with n") {
  const DirichletParams p({1.5, 1.5});
  const auto pdf = [&](const SimplexPoint& z) { return dirichlet_pdf(p, z); };
  RngStream rng(5, 0);
  std::vector<SimplexPoint> big(40000);
  for (auto& z : big) z = sample_dirichlet(p, rng);
  const std::vector<SimplexPoint> small(big.begin(), big.begin() + 400);
  const TvResult a = tv_histogram(small, pdf, 10), b = tv_histogram(big, pdf, 10);
  CHECK(b.model_mass == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(b.cells == 10);
  CHECK(b.estimate < a.estimate);
  CHECK(b.estimate < 0.05);
}
