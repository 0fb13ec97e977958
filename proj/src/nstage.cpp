#include "ersg/nstage.hpp"

#include <atomic>

#include "ersg/parallel.hpp"

namespace ersg {

Matrix stage_payoff(const Game& g, int x, const Vector& v_next, double discount) {
  if (v_next.size() != g.num_states())
    throw std::invalid_argument("stage_payoff: value vector has wrong length");
  const int a1 = g.actions_p1_at(x);
  const int a2 = g.actions_p2_at(x);
  const Vector ev = g.expected_next(x, v_next);
  return g.payoff(x) +
         discount * Eigen::Map<const RowMatrix>(ev.data(), a1, a2);
}

NStageSolution solve_nstage(const Game& g, const RegularizationConfig& cfg,
                            const NStageOptions& opt) {
  if (!g.finalized()) throw std::invalid_argument("game is not finalized");
  if (!cfg.horizon.has_value())
    throw std::invalid_argument("n-stage solve requires a horizon");
  if (cfg.gamma.has_value())
    throw std::invalid_argument("n-stage solve does not take gamma");
  const int horizon = *cfg.horizon;
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");

  const int n = g.num_states();
  NStageSolution sol;
  sol.horizon = horizon;
  sol.values.assign(horizon + 1, Vector::Zero(n));
  sol.values[horizon] = g.terminal_payoff();
  sol.sigma.stages.assign(horizon, {});
  sol.tau.stages.assign(horizon, {});

  OneShotOptions inner;
  inner.tol = opt.tol / horizon;
  inner.max_iters = opt.max_iters;

  std::atomic<bool> failed{false};

  for (int t = horizon; t >= 1; --t) {
    StationaryStrategy& sig_t = sol.sigma.stages[t - 1];
    StationaryStrategy& tau_t = sol.tau.stages[t - 1];
    sig_t.dist.resize(n);
    tau_t.dist.resize(n);
    Vector& v_t = sol.values[t - 1];
    const Vector& v_next = sol.values[t];
    std::vector<double> gaps(n, 0.0);

    parallel_for(n, opt.threads, [&](int x) {
      OneShotProblem p{stage_payoff(g, x, v_next), cfg.beta1, cfg.beta2};
      OneShotSolution os;
      try {
        os = solve_oneshot(p, inner);
      } catch (const OneShotError& e) {
        os = e.best();
        failed.store(true);
      }
      v_t[x] = os.value;
      sig_t.dist[x] = os.sigma;
      tau_t.dist[x] = os.tau;
      gaps[x] = os.gap;
    });

    for (int x = 0; x < n; ++x) sol.max_gap = std::max(sol.max_gap, gaps[x]);
  }

  if (failed.load()) {
    sol.converged = false;
    throw NStageError("n-stage solve: a stage game did not converge", sol);
  }
  return sol;
}

}  // namespace ersg
