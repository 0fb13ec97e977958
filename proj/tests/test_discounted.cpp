#include <doctest.h>

#include <cmath>
#include <random>

#include "ersg/discounted.hpp"
#include "ersg/evaluate.hpp"

#include "oracles.hpp"

using namespace ersg;

namespace {

RegularizationConfig disc_cfg(double b1, double b2, double gamma) {
  RegularizationConfig cfg;
  cfg.beta1 = Beta::finite(b1);
  cfg.beta2 = Beta::finite(b2);
  cfg.gamma = gamma;
  return cfg;
}

}  // namespace

TEST_CASE("zero payoffs give the closed-form stationary entropy value") {
  Game g(3, 2, 3);
  for (int x = 0; x < 3; ++x)
    for (int u = 0; u < 2; ++u)
      for (int w = 0; w < 3; ++w)
        g.set_transition(x, u, w, Vector::Constant(3, 1.0 / 3.0));
  g.finalize();

  const double gamma = 0.8;
  const RegularizationConfig cfg = disc_cfg(1.0, 2.0, gamma);
  const DiscountedSolution sol = solve_discounted(g, cfg, {1e-9, 100000, 100000, 0, {}});
  const double want = (std::log(2.0) - 0.5 * std::log(3.0)) / (1.0 - gamma);
  for (int x = 0; x < 3; ++x)
    CHECK(sol.value[x] == doctest::Approx(want).epsilon(1e-8));
  CHECK(sol.converged);
  CHECK(sol.gamma == gamma);
}

TEST_CASE("the operator is a sup-norm contraction") {
  std::mt19937_64 rng(113);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  for (int trial = 0; trial < 5; ++trial) {
    const Game g = oracles::random_game(rng, 5, 2, 2, 1.0);
    const double gamma = 0.8;
    const RegularizationConfig cfg = disc_cfg(2.0, 3.0, gamma);
    Vector v(5), vb(5);
    for (int i = 0; i < 5; ++i) {
      v[i] = unif(rng);
      vb[i] = unif(rng);
    }
    const double inner_tol = 1e-10;
    const Vector pv = shapley_apply(g, cfg, v, inner_tol).value;
    const Vector pvb = shapley_apply(g, cfg, vb, inner_tol).value;
    const double lhs = (pv - pvb).lpNorm<Eigen::Infinity>();
    const double rhs = gamma * (v - vb).lpNorm<Eigen::Infinity>();
    CHECK(lhs <= rhs + 4.0 * inner_tol);
  }
}

TEST_CASE("the fixed point does not depend on the starting guess") {
  std::mt19937_64 rng(127);
  const Game g = oracles::random_game(rng, 6, 3, 2, 1.0);
  const RegularizationConfig cfg = disc_cfg(1.5, 4.0, 0.85);
  const double tol = 1e-8;
  DiscountedOptions a, b;
  a.tol = b.tol = tol;
  Vector v0(6);
  std::uniform_real_distribution<double> unif(-5.0, 5.0);
  for (int i = 0; i < 6; ++i) v0[i] = unif(rng);
  b.v0 = v0;
  const DiscountedSolution sa = solve_discounted(g, cfg, a);
  const DiscountedSolution sb = solve_discounted(g, cfg, b);
  CHECK((sa.value - sb.value).lpNorm<Eigen::Infinity>() <= 2.0 * tol);
}

TEST_CASE("the returned value is a near-fixed point of the operator") {
  std::mt19937_64 rng(131);
  const Game g = oracles::random_game(rng, 5, 2, 3, 1.0);
  const RegularizationConfig cfg = disc_cfg(2.0, 2.0, 0.8);
  const double tol = 1e-7;
  DiscountedOptions opt;
  opt.tol = tol;
  const DiscountedSolution sol = solve_discounted(g, cfg, opt);
  const Vector applied = shapley_apply(g, cfg, sol.value, 1e-12).value;
  CHECK((applied - sol.value).lpNorm<Eigen::Infinity>() <= tol);
}

TEST_CASE("the evaluator reproduces the solver value at the equilibrium") {
  std::mt19937_64 rng(137);
  const Game g = oracles::random_game(rng, 5, 2, 2, 1.0);
  const RegularizationConfig cfg = disc_cfg(3.0, 2.0, 0.8);
  const double tol = 1e-8;
  DiscountedOptions opt;
  opt.tol = tol;
  const DiscountedSolution sol = solve_discounted(g, cfg, opt);
  const ValueFunction phi = phi_inf(g, cfg, sol.sigma, sol.tau);
  CHECK((phi - sol.value).lpNorm<Eigen::Infinity>() <= 5.0 * tol);
}

TEST_CASE("values obey the payoff-plus-entropy magnitude bound") {
  std::mt19937_64 rng(139);
  const Game g = oracles::random_game(rng, 4, 3, 3, 2.0);
  const double gamma = 0.9;
  const RegularizationConfig cfg = disc_cfg(1.0, 1.0, gamma);
  const DiscountedSolution sol = solve_discounted(g, cfg);
  const double cap =
      (g.max_abs_payoff() + std::log(3.0)) / (1.0 - gamma) + 1.0;
  CHECK(sol.value.cwiseAbs().maxCoeff() <= cap);
}

TEST_CASE("solves are deterministic across thread counts") {
  std::mt19937_64 rng(149);
  const Game g = oracles::random_game(rng, 8, 2, 2, 1.0);
  const RegularizationConfig cfg = disc_cfg(2.0, 2.0, 0.8);
  DiscountedOptions serial, parallel;
  serial.threads = 1;
  parallel.threads = 4;
  const DiscountedSolution ss = solve_discounted(g, cfg, serial);
  const DiscountedSolution sp = solve_discounted(g, cfg, parallel);
  CHECK((ss.value - sp.value).cwiseAbs().maxCoeff() == 0.0);
  for (int x = 0; x < 8; ++x) {
    CHECK((ss.sigma.at(x) - sp.sigma.at(x)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((ss.tau.at(x) - sp.tau.at(x)).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("infinite-rationality fixed point matches the matrix-game recursion") {
  std::mt19937_64 rng(151);
  const Game g = oracles::random_game(rng, 4, 2, 2, 1.0);
  RegularizationConfig cfg;
  cfg.beta1 = Beta::infinity();
  cfg.beta2 = Beta::infinity();
  cfg.gamma = 0.8;
  DiscountedOptions opt;
  opt.tol = 1e-8;
  const DiscountedSolution sol = solve_discounted(g, cfg, opt);
  // one extra exact sweep must stay put
  const Vector applied = shapley_apply(g, cfg, sol.value, 1e-12).value;
  CHECK((applied - sol.value).lpNorm<Eigen::Infinity>() <= opt.tol);
}

TEST_CASE("config validation") {
  std::mt19937_64 rng(157);
  const Game g = oracles::random_game(rng, 2, 2, 2);
  RegularizationConfig cfg = disc_cfg(1.0, 1.0, 0.8);
  cfg.gamma = 1.0;
  CHECK_THROWS_AS(solve_discounted(g, cfg), std::invalid_argument);
  cfg.gamma = 0.0;
  CHECK_THROWS_AS(solve_discounted(g, cfg), std::invalid_argument);
  cfg.gamma = 0.8;
  cfg.horizon = 3;
  CHECK_THROWS_AS(solve_discounted(g, cfg), std::invalid_argument);
}
