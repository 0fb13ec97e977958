#pragma once

#include <stdexcept>
#include <vector>

#include "ersg/game.hpp"
#include "ersg/oneshot.hpp"
#include "ersg/types.hpp"

namespace ersg {

// Continuation payoff matrix at state x: R(x,u,w) + discount * E[v(X')].
// Computed with exact linear algebra; discount is 1 for finite-stage
// problems and gamma for discounted ones.
Matrix stage_payoff(const Game& g, int x, const Vector& v_next, double discount = 1.0);

struct NStageOptions {
  double tol = 1e-9;        // end-to-end value tolerance; stages get tol/N
  int max_iters = 100000;   // per one-shot solve
  int threads = 0;          // 0 = auto (ERSG_THREADS or hardware)
};

struct NStageSolution {
  int horizon = 0;
  // values[t-1] is the stage-t value vector, t = 1..N+1; the last entry is
  // the terminal payoff
  std::vector<Vector> values;
  MarkovStrategy sigma;
  MarkovStrategy tau;
  double max_gap = 0.0;  // worst certified one-shot gap across all stages
  bool converged = true;

  // objective achieved from an initial distribution
  double value(const Vector& mu1) const { return mu1.dot(values.front()); }
};

class NStageError : public std::runtime_error {
 public:
  NStageError(const std::string& msg, NStageSolution best)
      : std::runtime_error(msg), best_(std::move(best)) {}
  const NStageSolution& best() const { return best_; }

 private:
  NStageSolution best_;
};

// Backward recursion over stages: the stage-t strategies and values come
// from the one-shot game on the continuation payoffs. Requires cfg.horizon
// and no cfg.gamma.
NStageSolution solve_nstage(const Game& g, const RegularizationConfig& cfg,
                            const NStageOptions& opt = {});

}  // namespace ersg
