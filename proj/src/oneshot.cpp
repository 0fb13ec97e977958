#include "ersg/oneshot.hpp"

#include <Eigen/LU>
#include <cmath>
#include <deque>

#include "ersg/numeric.hpp"

namespace ersg {

namespace {

void check_problem(const OneShotProblem& p) {
  if (p.rho.rows() < 1 || p.rho.cols() < 1)
    throw std::invalid_argument("one-shot: payoff matrix is empty");
  if (!p.rho.allFinite())
    throw std::invalid_argument("one-shot: payoff entries must be finite");
}

void check_options(const OneShotOptions& opt) {
  if (!(opt.tol >= 0.0)) throw std::invalid_argument("one-shot: tol must be >= 0");
  if (opt.max_iters < 1) throw std::invalid_argument("one-shot: max_iters must be >= 1");
}

Vector log_of_warm_start(const Vector& p, int size, const char* what) {
  require_distribution(p, size, what);
  if (p.minCoeff() <= 0.0)
    throw std::invalid_argument("one-shot: warm start must be strictly positive");
  return log_normalize(p.array().log().matrix().eval());
}

// best certified pair seen so far
struct Bracket {
  Vector sigma;
  Vector tau;
  double lower = -1e300;
  double upper = 1e300;

  double gap() const { return upper - lower; }

  bool offer(const Vector& s, const Vector& t, double lo, double up) {
    if (up - lo < gap()) {
      sigma = s;
      tau = t;
      lower = lo;
      upper = up;
      return true;
    }
    return false;
  }
};

OneShotSolution finish(const OneShotProblem& p, const Bracket& b, int iterations) {
  OneShotSolution sol;
  sol.sigma = b.sigma;
  sol.tau = b.tau;
  sol.value = 0.5 * (b.lower + b.upper);
  sol.gap = b.gap();
  sol.iterations = iterations;
  sol.maybe_nonunique = p.beta1.is_inf() || p.beta2.is_inf();
  return sol;
}

// ---------------------------------------------------------------------------
// both players rational: plain matrix game, solved exactly by LP

OneShotSolution solve_lp_case(const OneShotProblem& p, const OneShotOptions& opt) {
  MatrixGameSolution lp = solve_matrix_lp(p.rho);
  Bracket b;
  b.offer(lp.sigma, lp.tau, lower_objective(p, lp.sigma), upper_objective(p, lp.tau));
  OneShotSolution sol = finish(p, b, lp.pivots);
  if (sol.gap > opt.tol)
    throw OneShotError("one-shot: requested tolerance below LP precision", sol);
  return sol;
}

// ---------------------------------------------------------------------------
// both betas finite: extragradient on the saddle with exact entropy prox
// steps, plus a damped Newton endgame on the interior stationarity condition
// sigma = softmax(beta1 rho tau(sigma)) that certifies gaps near machine
// precision once the iterate is in the basin.

struct Residual {
  Vector sigma;
  Vector tau;
  Vector r;
  double norm;
};

Residual stationarity_residual(const OneShotProblem& p, const Vector& logits) {
  Residual out;
  out.sigma = softmax(logits);
  const double b2 = p.beta2.value();
  out.tau = softmax((-b2 * (p.rho.transpose() * out.sigma)).eval());
  out.r = logits - p.beta1.value() * (p.rho * out.tau);
  out.r.array() -= out.r.mean();
  out.norm = out.r.lpNorm<Eigen::Infinity>();
  return out;
}

// returns the number of Newton steps taken
int newton_polish(const OneShotProblem& p, Vector logits, Bracket& b) {
  const int nu = static_cast<int>(p.rho.rows());
  const double b1 = p.beta1.value();
  const double b2 = p.beta2.value();
  const double res_floor = 1e-14 * (1.0 + b1 * p.rho.cwiseAbs().maxCoeff());

  logits.array() -= logits.mean();
  Residual cur = stationarity_residual(p, logits);
  int steps = 0;
  for (; steps < 40; ++steps) {
    b.offer(cur.sigma, cur.tau, lower_objective(p, cur.sigma),
            upper_objective(p, cur.tau));
    if (cur.norm < res_floor) break;

    const Matrix k_sig =
        Matrix(cur.sigma.asDiagonal()) - cur.sigma * cur.sigma.transpose();
    const Matrix k_tau = Matrix(cur.tau.asDiagonal()) - cur.tau * cur.tau.transpose();
    const Matrix jac = Matrix::Identity(nu, nu) +
                       (b1 * b2) * (p.rho * k_tau * p.rho.transpose()) * k_sig;
    const Vector delta = jac.partialPivLu().solve(-cur.r);
    if (!delta.allFinite()) break;

    double alpha = 1.0;
    bool accepted = false;
    for (int h = 0; h < 30; ++h) {
      Vector trial = logits + alpha * delta;
      trial.array() -= trial.mean();
      Residual next = stationarity_residual(p, trial);
      if (next.norm <= (1.0 - 0.25 * alpha) * cur.norm) {
        logits = trial;
        cur = next;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;
  }
  b.offer(cur.sigma, cur.tau, lower_objective(p, cur.sigma),
          upper_objective(p, cur.tau));
  return steps;
}

OneShotSolution solve_regularized(const OneShotProblem& p, const OneShotOptions& opt) {
  const int nu = static_cast<int>(p.rho.rows());
  const int nw = static_cast<int>(p.rho.cols());
  const double a1 = p.beta1.inv();
  const double a2 = p.beta2.inv();

  Vector lsig = opt.sigma0 ? log_of_warm_start(*opt.sigma0, nu, "sigma0")
                           : Vector::Constant(nu, -std::log(double(nu)));
  Vector ltau = opt.tau0 ? log_of_warm_start(*opt.tau0, nw, "tau0")
                         : Vector::Constant(nw, -std::log(double(nw)));

  const double spread = p.rho.maxCoeff() - p.rho.minCoeff();
  const double eta = 1.0 / std::max(spread, 1e-9);
  const double d1 = 1.0 / (1.0 + eta * a1);
  const double d2 = 1.0 / (1.0 + eta * a2);

  Bracket best;
  {
    Vector sig = lsig.array().exp();
    Vector tau = ltau.array().exp();
    best.offer(sig, tau, lower_objective(p, sig), upper_objective(p, tau));
  }
  double polish_below = std::max(1e-2 * (1.0 + spread), 1e3 * opt.tol);
  int iters = 0;

  while (best.gap() > opt.tol && iters < opt.max_iters) {
    ++iters;
    const Vector sig = lsig.array().exp();
    const Vector tau = ltau.array().exp();

    const Vector lsig_mid = log_normalize((d1 * (lsig + eta * (p.rho * tau))).eval());
    const Vector ltau_mid =
        log_normalize((d2 * (ltau - eta * (p.rho.transpose() * sig))).eval());
    const Vector sig_mid = lsig_mid.array().exp();
    const Vector tau_mid = ltau_mid.array().exp();

    lsig = log_normalize((d1 * (lsig + eta * (p.rho * tau_mid))).eval());
    ltau = log_normalize((d2 * (ltau - eta * (p.rho.transpose() * sig_mid))).eval());

    best.offer(sig_mid, tau_mid, lower_objective(p, sig_mid),
               upper_objective(p, tau_mid));

    if (best.gap() > opt.tol && best.gap() <= polish_below) {
      iters += newton_polish(p, best.sigma.array().log().matrix(), best);
      // if the endgame stalled, let the extragradient make progress before
      // paying for another attempt
      polish_below = best.gap() * 0.25;
    }
  }
  if (best.gap() > opt.tol)
    iters += newton_polish(p, best.sigma.array().log().matrix(), best);

  OneShotSolution sol = finish(p, best, iters);
  if (sol.gap > opt.tol)
    throw OneShotError("one-shot: iteration budget exhausted", sol);
  return sol;
}

// ---------------------------------------------------------------------------
// beta2 infinite, beta1 finite: player 2 minimizes the smooth convex
// log-sum-exp bound by entropic mirror descent with backtracking. Every
// gradient evaluation doubles as a supporting hyperplane of the objective;
// the lower bound comes from the best-response primal form and from
// minimizing the accumulated cut model over the simplex (itself a small
// matrix-game LP), so the duality gap is certified even when the optimal tau
// sits on a face.

struct CutModel {
  std::deque<double> intercept;
  std::deque<Vector> coef;
  static constexpr size_t kMaxCuts = 48;

  void add(double g_value, const Vector& grad, const Vector& at) {
    intercept.push_back(g_value - grad.dot(at));
    coef.push_back(grad);
    if (intercept.size() > kMaxCuts) {
      intercept.pop_front();
      coef.pop_front();
    }
  }

  // min over the simplex of the piecewise-linear model, with its argmin
  std::pair<double, Vector> minimize(int nw) const {
    Matrix m(static_cast<int>(intercept.size()), nw);
    for (size_t i = 0; i < intercept.size(); ++i)
      m.row(static_cast<int>(i)) = (coef[i].array() + intercept[i]).transpose();
    MatrixGameSolution game = solve_matrix_lp(m);
    return {game.value, game.tau};
  }
};

OneShotSolution solve_p2_rational(const OneShotProblem& p, const OneShotOptions& opt) {
  const int nw = static_cast<int>(p.rho.cols());
  const double b1 = p.beta1.value();

  auto g_value = [&](const Vector& tau) {
    return log_sum_exp((b1 * (p.rho * tau)).eval()) / b1;
  };
  auto g_grad = [&](const Vector& tau) {
    return (p.rho.transpose() * softmax((b1 * (p.rho * tau)).eval())).eval();
  };
  auto offer_primal = [&](Bracket& b, const Vector& tau, double up) {
    const Vector sigma = best_response_p1(p, tau);
    b.offer(sigma, tau, lower_objective(p, sigma), up);
  };

  Vector ltau = opt.tau0 ? log_of_warm_start(*opt.tau0, nw, "tau0")
                         : Vector::Constant(nw, -std::log(double(nw)));
  Vector tau = ltau.array().exp();
  double g_cur = g_value(tau);

  Bracket best;
  offer_primal(best, tau, g_cur);
  CutModel cuts;
  double eta = 1.0;
  int iters = 0;

  while (best.gap() > opt.tol && iters < opt.max_iters) {
    ++iters;
    const Vector grad = g_grad(tau);
    cuts.add(g_cur, grad, tau);

    for (int h = 0; h < 60; ++h) {
      const Vector ltau_t = log_normalize((ltau - eta * grad).eval());
      const Vector tau_t = ltau_t.array().exp();
      const double g_t = g_value(tau_t);
      if (g_t < g_cur) {
        ltau = ltau_t;
        tau = tau_t;
        g_cur = g_t;
        eta *= 2.0;
        offer_primal(best, tau, g_cur);
        break;
      }
      eta *= 0.5;
    }

    if (iters % 10 == 0 || best.gap() <= opt.tol) {
      auto [model_min, tau_lp] = cuts.minimize(nw);
      if (model_min > best.lower)
        best.offer(best.sigma, best.tau, model_min, best.upper);
      const double g_lp = g_value(tau_lp);
      cuts.add(g_lp, g_grad(tau_lp), tau_lp);
      offer_primal(best, tau_lp, g_lp);
      if (g_lp < g_cur) {
        // hop to the model minimizer; keep the iterate interior
        tau = (tau_lp.array().max(1e-16)).matrix();
        tau /= tau.sum();
        ltau = log_normalize(tau.array().log().matrix().eval());
        g_cur = g_value(tau);
      }
    }
  }

  if (best.gap() > opt.tol) {
    auto [model_min, tau_lp] = cuts.minimize(nw);
    if (model_min > best.lower)
      best.offer(best.sigma, best.tau, model_min, best.upper);
    offer_primal(best, tau_lp, g_value(tau_lp));
  }

  OneShotSolution sol = finish(p, best, iters);
  if (sol.gap > opt.tol)
    throw OneShotError("one-shot: iteration budget exhausted", sol);
  return sol;
}

// beta1 infinite, beta2 finite: swap the players on the negated transpose
// and map the solution back
OneShotSolution solve_p1_rational(const OneShotProblem& p, const OneShotOptions& opt) {
  OneShotProblem q;
  q.rho = -p.rho.transpose();
  q.beta1 = p.beta2;
  q.beta2 = Beta::infinity();
  OneShotOptions o = opt;
  o.sigma0 = opt.tau0;
  o.tau0 = opt.sigma0;

  auto map_back = [&](const OneShotSolution& s) {
    OneShotSolution out;
    out.sigma = s.tau;
    out.tau = s.sigma;
    out.value = -s.value;
    out.gap = s.gap;
    out.iterations = s.iterations;
    out.maybe_nonunique = true;
    return out;
  };

  try {
    return map_back(solve_p2_rational(q, o));
  } catch (const OneShotError& e) {
    throw OneShotError(e.what(), map_back(e.best()));
  }
}

}  // namespace

double lower_objective(const OneShotProblem& p, const Vector& sigma) {
  check_problem(p);
  require_distribution(sigma, static_cast<int>(p.rho.rows()), "sigma");
  const Vector per_column = p.rho.transpose() * sigma;
  const double h = p.beta1.inv() * entropy(sigma);
  if (p.beta2.is_inf()) return h + per_column.minCoeff();
  const double b2 = p.beta2.value();
  return h - log_sum_exp((-b2 * per_column).eval()) / b2;
}

double upper_objective(const OneShotProblem& p, const Vector& tau) {
  check_problem(p);
  require_distribution(tau, static_cast<int>(p.rho.cols()), "tau");
  const Vector per_row = p.rho * tau;
  const double h = p.beta2.inv() * entropy(tau);
  if (p.beta1.is_inf()) return per_row.maxCoeff() - h;
  const double b1 = p.beta1.value();
  return log_sum_exp((b1 * per_row).eval()) / b1 - h;
}

Vector best_response_p1(const OneShotProblem& p, const Vector& tau) {
  check_problem(p);
  require_distribution(tau, static_cast<int>(p.rho.cols()), "tau");
  if (p.beta1.is_inf())
    throw std::invalid_argument("best_response_p1 requires finite beta1");
  return softmax((p.beta1.value() * (p.rho * tau)).eval());
}

Vector best_response_p2(const OneShotProblem& p, const Vector& sigma) {
  check_problem(p);
  require_distribution(sigma, static_cast<int>(p.rho.rows()), "sigma");
  if (p.beta2.is_inf())
    throw std::invalid_argument("best_response_p2 requires finite beta2");
  return softmax((-p.beta2.value() * (p.rho.transpose() * sigma)).eval());
}

OneShotSolution solve_oneshot(const OneShotProblem& p, const OneShotOptions& opt) {
  check_problem(p);
  check_options(opt);
  if (p.beta1.is_inf() && p.beta2.is_inf()) return solve_lp_case(p, opt);
  if (p.beta1.is_inf()) return solve_p1_rational(p, opt);
  if (p.beta2.is_inf()) return solve_p2_rational(p, opt);
  return solve_regularized(p, opt);
}

}  // namespace ersg
