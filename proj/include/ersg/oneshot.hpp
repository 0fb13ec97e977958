#pragma once

#include <optional>
#include <stdexcept>

#include "ersg/game.hpp"
#include "ersg/lp.hpp"
#include "ersg/types.hpp"

namespace ersg {

// One-shot entropy-regularized matrix game: player 1 maximizes and player 2
// minimizes the expectation of
//   rho(u, w) - (1/beta1) log sigma(u) + (1/beta2) log tau(w)
// under sigma x tau. Either rationality coefficient may be infinite, which
// removes that player's entropy term.
struct OneShotProblem {
  Matrix rho;
  Beta beta1;
  Beta beta2;
};

struct OneShotOptions {
  double tol = 1e-9;
  int max_iters = 100000;
  // warm starts; must be strictly positive distributions when given
  std::optional<Vector> sigma0;
  std::optional<Vector> tau0;
};

struct OneShotSolution {
  Vector sigma;
  Vector tau;
  double value = 0.0;
  double gap = 0.0;       // certified upper - lower objective gap
  int iterations = 0;
  // true when an infinite beta makes the optimal strategy pair potentially
  // non-unique (the value is still unique)
  bool maybe_nonunique = false;
};

// Raised when the iteration budget runs out; carries the best certified
// iterate so callers can decide what to do with it.
class OneShotError : public std::runtime_error {
 public:
  OneShotError(const std::string& msg, OneShotSolution best)
      : std::runtime_error(msg), best_(std::move(best)) {}
  const OneShotSolution& best() const { return best_; }

 private:
  OneShotSolution best_;
};

// Guaranteed lower bound on the game value, as a function of sigma alone:
// the inner minimization over tau is carried out in closed form (soft-min
// for finite beta2, exact column minimum for infinite beta2).
double lower_objective(const OneShotProblem& p, const Vector& sigma);

// Guaranteed upper bound as a function of tau alone (soft-max over rows for
// finite beta1, exact row maximum for infinite beta1).
double upper_objective(const OneShotProblem& p, const Vector& tau);

// Exact best responses; the responding player's beta must be finite.
Vector best_response_p1(const OneShotProblem& p, const Vector& tau);
Vector best_response_p2(const OneShotProblem& p, const Vector& sigma);

// Solves the one-shot game to a certified duality gap <= tol. The returned
// value is the midpoint of the certified bracket. Throws OneShotError when
// the budget is exhausted and std::invalid_argument on malformed input.
OneShotSolution solve_oneshot(const OneShotProblem& p, const OneShotOptions& opt = {});

}  // namespace ersg
