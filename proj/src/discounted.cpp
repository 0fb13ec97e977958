#include "ersg/discounted.hpp"

#include <atomic>
#include <cmath>

#include "ersg/nstage.hpp"
#include "ersg/parallel.hpp"

namespace ersg {

namespace {

struct SweepState {
  Vector value;
  StationaryStrategy sigma;
  StationaryStrategy tau;
  std::vector<double> gaps;
  std::atomic<bool> failed{false};
};

void run_sweep(const Game& g, const RegularizationConfig& cfg, const Vector& v,
               double oneshot_tol, int threads, int max_iters, bool warm_start,
               SweepState& s) {
  const int n = g.num_states();
  const double gamma = *cfg.gamma;
  const bool both_finite = !cfg.beta1.is_inf() && !cfg.beta2.is_inf();

  Vector v_new(n);
  parallel_for(n, threads, [&](int x) {
    OneShotProblem p{stage_payoff(g, x, v, gamma), cfg.beta1, cfg.beta2};
    OneShotOptions inner;
    inner.tol = oneshot_tol;
    inner.max_iters = max_iters;
    if (warm_start && both_finite) {
      inner.sigma0 = s.sigma.dist[x];
      inner.tau0 = s.tau.dist[x];
    }
    OneShotSolution os;
    try {
      os = solve_oneshot(p, inner);
    } catch (const OneShotError& e) {
      os = e.best();
      s.failed.store(true);
    }
    v_new[x] = os.value;
    s.sigma.dist[x] = os.sigma;
    s.tau.dist[x] = os.tau;
    s.gaps[x] = os.gap;
  });
  s.value = v_new;
}

}  // namespace

ShapleyResult shapley_apply(const Game& g, const RegularizationConfig& cfg,
                            const Vector& v, double oneshot_tol, int threads,
                            int max_iters) {
  if (!g.finalized()) throw std::invalid_argument("game is not finalized");
  if (!cfg.gamma.has_value())
    throw std::invalid_argument("shapley_apply requires gamma");
  if (!(*cfg.gamma > 0.0 && *cfg.gamma < 1.0))
    throw std::invalid_argument("gamma must lie in (0,1)");
  if (v.size() != g.num_states())
    throw std::invalid_argument("value vector has wrong length");

  SweepState s;
  s.sigma.dist.resize(g.num_states());
  s.tau.dist.resize(g.num_states());
  s.gaps.assign(g.num_states(), 0.0);
  run_sweep(g, cfg, v, oneshot_tol, threads, max_iters, false, s);
  if (s.failed.load())
    throw std::runtime_error("shapley_apply: a one-shot solve did not converge");

  ShapleyResult out;
  out.value = s.value;
  out.sigma = std::move(s.sigma);
  out.tau = std::move(s.tau);
  for (double gap : s.gaps) out.max_gap = std::max(out.max_gap, gap);
  return out;
}

DiscountedSolution solve_discounted(const Game& g, const RegularizationConfig& cfg,
                                    const DiscountedOptions& opt) {
  if (!g.finalized()) throw std::invalid_argument("game is not finalized");
  if (!cfg.gamma.has_value())
    throw std::invalid_argument("discounted solve requires gamma");
  if (cfg.horizon.has_value())
    throw std::invalid_argument("discounted solve does not take a horizon");
  const double gamma = *cfg.gamma;
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::invalid_argument("gamma must lie in (0,1)");
  if (!(opt.tol > 0.0)) throw std::invalid_argument("tol must be positive");

  const int n = g.num_states();
  const double stop = opt.tol * (1.0 - gamma) / (2.0 * gamma);
  const double oneshot_tol = opt.tol * (1.0 - gamma) / 10.0;

  SweepState s;
  s.value = opt.v0.value_or(Vector::Zero(n));
  if (s.value.size() != n)
    throw std::invalid_argument("v0 has wrong length");
  s.sigma.dist.resize(n);
  s.tau.dist.resize(n);
  s.gaps.assign(n, 0.0);

  DiscountedSolution sol;
  sol.gamma = gamma;

  Vector v_prev = s.value;
  for (int sweep = 1; sweep <= opt.max_sweeps; ++sweep) {
    v_prev = s.value;
    run_sweep(g, cfg, v_prev, oneshot_tol, opt.threads, opt.max_iters, sweep > 1, s);
    sol.sweeps = sweep;
    sol.residual = (s.value - v_prev).lpNorm<Eigen::Infinity>();

    if (s.failed.load()) {
      sol.value = s.value;
      sol.sigma = s.sigma;
      sol.tau = s.tau;
      sol.converged = false;
      throw DiscountedError("discounted solve: a one-shot subproblem did not converge",
                            sol);
    }
    if (sol.residual <= stop) {
      sol.value = s.value;
      sol.sigma = s.sigma;
      sol.tau = s.tau;
      sol.converged = true;
      return sol;
    }
  }

  sol.value = s.value;
  sol.sigma = s.sigma;
  sol.tau = s.tau;
  sol.converged = false;
  throw DiscountedError("discounted solve: sweep budget exhausted", sol);
}

}  // namespace ersg
