#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

#include "simplexwalk/chain.hpp"
#include "simplexwalk/errors.hpp"
#include "simplexwalk/stats.hpp"

using namespace swalk;

TEST_CASE("linear choice in d = 1") {
  const double b = 0.3, c = 0.6;
  const ChoiceFunction cf = ChoiceFunction::linear({b, c});
  for (double z : {0.0, 0.2, 0.5, 1.0}) {
    const auto p = choice_probs(cf, SimplexPoint({z}));
    CHECK(p[1] == doctest::Approx(b * (1 - z) + (1 - c) * z).epsilon(1e-15));
    CHECK(p[0] + p[1] == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("linear choice with unit beta sum is constant") {
  const ChoiceFunction cf = ChoiceFunction::linear({0.2, 0.5, 0.3});
  RngStream rng(1, 0);
  for (int i = 0; i < 100; ++i) {
    const auto p = choice_probs(cf, sample_uniform_simplex(2, rng));
    CHECK(p[1] == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(p[2] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(p[0] == doctest::Approx(0.3).epsilon(1e-14));
  }
}

TEST_CASE("linear choice sweep over S_2") {
  const ChoiceFunction cf = ChoiceFunction::linear({0.3, 0.3, 0.3});
  for (int i = 0; i <= 100; ++i) {
    for (int j = 0; i + j <= 100; ++j) {
      const auto p = choice_probs(cf, SimplexPoint({i / 100.0, j / 100.0}));
      for (double v : p) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
      }
      CHECK(std::abs(std::accumulate(p.begin(), p.end(), 0.0) - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("choice validation") {
  CHECK_THROWS_AS(ChoiceFunction::constant({0.7, 0.5}), InvalidParameter);
  CHECK_THROWS_AS(ChoiceFunction::linear({1.2, 0.5}), InvalidParameter);
  CHECK_THROWS_AS(ChoiceFunction::linear({0.0, 0.5}), InvalidParameter);
  CHECK_THROWS_AS(ChoiceFunction::piecewise1d({0.0, 1.0}, {0.5, 1.2}), InvalidParameter);
}

TEST_CASE("piecewise choice") {
  const ChoiceFunction cf = ChoiceFunction::piecewise1d({0.0, 0.5, 0.5, 1.0}, {0.2, 0.4, 0.8, 1.0});
  CHECK(choice_probs(cf, SimplexPoint({0.25}))[1] == doctest::Approx(0.3));
  CHECK(choice_probs(cf, SimplexPoint({0.5}))[1] == doctest::Approx(0.8));
  CHECK(choice_probs(cf, SimplexPoint({0.75}))[1] == doctest::Approx(0.9));
  CHECK(cf.breakpoints().size() >= 1);
  CHECK_FALSE(cf.is_affine());
}

TEST_CASE("select_vertex never picks a zero-probability vertex") {
  const std::vector<double> p{0.0, 0.5, 0.0, 0.5};
  for (double u : {0.0, 0.25, 0.4999999, 0.5, 0.75, 0.9999999999}) {
    const auto v = select_vertex(p, u);
    CHECK((v == 1 || v == 3));
  }
}

TEST_CASE("degenerate jumps") {
  const ChoiceFunction cf = ChoiceFunction::constant({0.3, 0.3});
  RngStream rng(2, 0);
  ChainState s{SimplexPoint({0.2, 0.3}), 0, 0};
  for (int i = 0; i < 50; ++i) {
    const ChainState t = step(s, cf, JumpLaw::point_mass(1.0), rng);
    CHECK(t.z == SimplexPoint::vertex(2, t.last_vertex));
    CHECK(t.n == s.n + 1);
    const ChainState u = step(s, cf, JumpLaw::point_mass(0.0), rng);
    CHECK(u.z == s.z);
  }
}

TEST_CASE("containment along trajectories") {
  ChainConfig cfg;
  cfg.d = 3;
  cfg.choice = ChoiceFunction::linear({0.2, 0.2, 0.2, 0.2});
  cfg.jump = JumpLaw::beta(0.3, 0.3);
  cfg.steps = 5000;
  for (const auto& s : run_chain(cfg)) {
    CHECK(s.z.z0() >= -kTol);
    for (double v : s.z.coords()) CHECK(v >= -kTol);
  }
}

TEST_CASE("run_chain contracts") {
  ChainConfig cfg;
  cfg.d = 1;
  cfg.choice = ChoiceFunction::constant({1.0});
  cfg.jump = JumpLaw::point_mass(0.5);
  cfg.initial = SimplexPoint({0.0});
  SUBCASE("steps = 0") {
    const auto tr = run_chain(cfg);
    REQUIRE(tr.size() == 1);
    CHECK(tr[0].z == SimplexPoint({0.0}));
  }
  SUBCASE("halving toward 1") {
    cfg.steps = 30;
    const auto tr = run_chain(cfg);
    REQUIRE(tr.size() == 31);
    for (const auto& s : tr) CHECK(s.z.coord(1) == doctest::Approx(1.0 - std::pow(2.0, -double(s.n))).epsilon(1e-15));
  }
  SUBCASE("burn-in and thinning") {
    cfg.steps = 20;
    cfg.burn_in = 5;
    cfg.thinning = 5;
    const auto tr = run_chain(cfg);
    REQUIRE(tr.size() == 4);
    CHECK(tr.front().n == 5);
    CHECK(tr.back().n == 20);
  }
}

TEST_CASE("determinism and the ensemble contract") {
  ChainConfig cfg;
  cfg.d = 2;
  cfg.choice = ChoiceFunction::linear({0.3, 0.3, 0.3});
  cfg.jump = JumpLaw::beta(1, 2);
  cfg.steps = 200;
  cfg.seed = 77;
  const auto a = run_chain(cfg), b = run_chain(cfg);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].z == b[i].z);
  const auto one = run_ensemble(cfg, 1);
  REQUIRE(one.size() == 1);
  CHECK(one[0] == a.back().z);
  cfg.ensemble = 257;
  const auto e1 = run_ensemble(cfg, 1), e3 = run_ensemble(cfg, 3), e8 = run_ensemble(cfg, 8);
  CHECK(e1 == e3);
  CHECK(e1 == e8);
}

TEST_CASE("ensemble under a constant choice has Dirichlet means") {
  ChainConfig cfg;
  cfg.d = 2;
  cfg.choice = ChoiceFunction::constant({0.3, 0.3});
  cfg.jump = JumpLaw::beta(1, 2);
  cfg.steps = 300;
  cfg.ensemble = 10000;
  cfg.seed = 3;
  const auto s = run_ensemble(cfg, 2);
  const DirichletParams p({0.6, 0.6, 0.8});
  const Moments m = dirichlet_moments(p);
  for (std::size_t j = 1; j <= 2; ++j) {
    const auto x = marginal(s, j);
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
    CHECK(std::abs(mean - 0.3) < 3 * std::sqrt(m.covariance[j - 1][j - 1] / x.size()));
  }
}

TEST_CASE("a chain started at its stationary law stays there") {
  // Dirichlet(beta gamma) under Linear(beta), Beta(1, gamma): marginals after 1 and 100 steps agree
  const std::vector<double> beta{0.3, 0.3, 0.3};
  const double gamma = 2.0;
  const DirichletParams params({0.6, 0.6, 0.6});
  const ChoiceFunction cf = ChoiceFunction::linear(beta);
  const JumpLaw jump = JumpLaw::beta(1, gamma);
  const std::size_t n = 20000;
  std::vector<SimplexPoint> after1, after100;
  RngStream rng(31, 0);
  for (std::size_t i = 0; i < n; ++i) {
    ChainState s{sample_dirichlet(params, rng), 0, 0};
    s = step(s, cf, jump, rng);
    after1.push_back(s.z);
    for (int k = 1; k < 100; ++k) s = step(s, cf, jump, rng);
    after100.push_back(s.z);
  }
  for (std::size_t j = 1; j <= 2; ++j) {
    CHECK(ks_two_sample_test(marginal(after1, j), marginal(after100, j), 0.001).pass);
    CHECK(ks_one_sample_test(marginal(after100, j), [](double x) { return boost::math::ibeta(0.6, 1.2, x); }, 0.001)
              .pass);
  }
}
