#include <doctest.h>

#include <cmath>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "simplexwalk/rng.hpp"
#include "simplexwalk/special.hpp"

using namespace swalk;

TEST_CASE("log_gamma against boost and the recurrence") {
  for (double x = 0.1; x <= 50.0; x += 0.37) {
    CHECK(special::log_gamma(x) == doctest::Approx(boost::math::lgamma(x)).epsilon(1e-13));
    // lnG(x+1) = lnG(x) + ln x
    CHECK(std::abs(special::log_gamma(x + 1.0) - special::log_gamma(x) - std::log(x)) < 1e-12);
  }
  CHECK(std::abs(special::log_gamma(1.0)) < 1e-15);
  CHECK(special::log_gamma(0.5) == doctest::Approx(0.5 * std::log(M_PI)).epsilon(1e-14));
}

TEST_CASE("log_beta") {
  CHECK(special::log_beta(2.0, 3.0) == doctest::Approx(std::log(1.0 / 12.0)).epsilon(1e-14));
  CHECK(special::log_beta(0.5, 0.5) == doctest::Approx(std::log(M_PI)).epsilon(1e-14));
}

TEST_CASE("incomplete beta matches boost ibeta") {
  RngStream rng(7, 0);
  double worst = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const double a = 0.05 + 20.0 * rng.uniform();
    const double b = 0.05 + 20.0 * rng.uniform();
    const double x = rng.uniform();
    const double mine = special::incomplete_beta(a, b, x);
    const double ref = boost::math::ibeta(a, b, x);
    worst = std::max(worst, std::abs(mine - ref));
    const double cmine = special::incomplete_beta_complement(a, b, x);
    const double cref = boost::math::ibetac(a, b, x);
    worst = std::max(worst, std::abs(cmine - cref));
  }
  CHECK(worst < 1e-12);
  CHECK(special::incomplete_beta(2.0, 3.0, 0.0) == 0.0);
  CHECK(special::incomplete_beta(2.0, 3.0, 1.0) == 1.0);
}

TEST_CASE("incomplete gamma matches boost") {
  for (double a : {0.3, 1.0, 2.5, 10.0, 40.0}) {
    for (double x : {0.01, 0.5, 1.0, 3.0, 12.0, 60.0}) {
      CHECK(std::abs(special::incomplete_gamma_p(a, x) - boost::math::gamma_p(a, x)) < 1e-13);
      CHECK(std::abs(special::incomplete_gamma_q(a, x) - boost::math::gamma_q(a, x)) < 1e-13);
    }
  }
}

TEST_CASE("chi-square quantile matches boost") {
  for (double dof : {1.0, 2.0, 7.0, 30.0, 200.0}) {
    const boost::math::chi_squared dist(dof);
    for (double p : {0.01, 0.5, 0.95, 0.999}) {
      CHECK(special::chi_square_quantile(dof, p) == doctest::Approx(boost::math::quantile(dist, p)).epsilon(1e-9));
    }
  }
}
