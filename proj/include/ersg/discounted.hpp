#pragma once

#include <optional>
#include <stdexcept>

#include "ersg/game.hpp"
#include "ersg/oneshot.hpp"
#include "ersg/types.hpp"

namespace ersg {

// One application of the discounted-game dynamic-programming operator:
// (Psi v)[x] is the one-shot value of the continuation payoffs
// R(x,.,.) + gamma E[v(X')]. The operator is a gamma-contraction in the
// sup norm, which is what the value-iteration stopping rule relies on.
struct ShapleyResult {
  Vector value;
  StationaryStrategy sigma;
  StationaryStrategy tau;
  double max_gap = 0.0;
};
ShapleyResult shapley_apply(const Game& g, const RegularizationConfig& cfg,
                            const Vector& v, double oneshot_tol, int threads = 0,
                            int max_iters = 100000);

struct DiscountedOptions {
  double tol = 1e-6;      // sup-norm tolerance on the fixed point
  int max_sweeps = 100000;
  int max_iters = 100000;  // per one-shot solve
  int threads = 0;
  std::optional<Vector> v0;  // start of the iteration, defaults to zero
};

struct DiscountedSolution {
  double gamma = 0.0;
  Vector value;
  StationaryStrategy sigma;
  StationaryStrategy tau;
  double residual = 0.0;  // sup-norm change of the final sweep
  int sweeps = 0;
  bool converged = true;
};

class DiscountedError : public std::runtime_error {
 public:
  DiscountedError(const std::string& msg, DiscountedSolution best)
      : std::runtime_error(msg), best_(std::move(best)) {}
  const DiscountedSolution& best() const { return best_; }

 private:
  DiscountedSolution best_;
};

// Value iteration on the operator above (full Jacobi sweeps, so results do
// not depend on state order or thread count). Stops when the sweep change
// is at most tol*(1-gamma)/(2*gamma), which brackets the fixed point within
// tol; the per-sweep one-shot tolerance is tol*(1-gamma)/10. Strategies are
// taken from the final sweep. Requires cfg.gamma in (0,1) and no horizon.
DiscountedSolution solve_discounted(const Game& g, const RegularizationConfig& cfg,
                                    const DiscountedOptions& opt = {});

}  // namespace ersg
