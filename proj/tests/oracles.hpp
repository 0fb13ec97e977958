#pragma once

// Brute-force reference implementations used only by tests. These are kept
// deliberately naive and independent of the library code paths they check.

#include <cmath>
#include <random>
#include <vector>

#include "ersg/game.hpp"
#include "ersg/types.hpp"

namespace oracles {

using ersg::Game;
using ersg::Matrix;
using ersg::Vector;

inline double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

inline double neg_entropy(const Vector& p) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) s += xlogx(p[i]);
  return s;
}

// one-shot objective sigma' rho tau - (1/b1) E log sigma ... written as the
// expectation form: payoff plus entropy of sigma minus entropy of tau
inline double oneshot_objective(const Matrix& rho, const Vector& sigma,
                                const Vector& tau, double inv_b1, double inv_b2) {
  return sigma.dot(rho * tau) - inv_b1 * neg_entropy(sigma) + inv_b2 * neg_entropy(tau);
}

// enumerates the probability simplex of dimension k with resolution 1/m
template <class Fn>
void for_each_simplex_point(int k, int m, Fn&& fn) {
  Vector p(k);
  std::vector<int> c(k, 0);
  // odometer over compositions of m into k parts
  int level = 0;
  std::vector<int> rem(k + 1, 0);
  rem[0] = m;
  while (true) {
    if (level == k - 1) {
      c[level] = rem[level];
      for (int i = 0; i < k; ++i) p[i] = double(c[i]) / m;
      fn(p);
      --level;
      while (level >= 0 && c[level] == rem[level]) --level;
      if (level < 0) return;
      ++c[level];
      rem[level + 1] = rem[level] - c[level];
      ++level;
    } else {
      c[level] = 0;
      rem[level + 1] = rem[level];
      ++level;
    }
  }
}

// max-min of the regularized objective over simplex grids with step 1/m;
// both players restricted to the same grid
inline double grid_saddle_value(const Matrix& rho, double b1, double b2, int m) {
  const int nu = static_cast<int>(rho.rows());
  const int nw = static_cast<int>(rho.cols());
  double best_outer = -1e300;
  for_each_simplex_point(nu, m, [&](const Vector& sigma) {
    double best_inner = 1e300;
    for_each_simplex_point(nw, m, [&](const Vector& tau) {
      best_inner = std::min(best_inner,
                            oneshot_objective(rho, sigma, tau, 1.0 / b1, 1.0 / b2));
    });
    best_outer = std::max(best_outer, best_inner);
  });
  return best_outer;
}

// minimizer of the objective over the tau grid at fixed sigma
inline Vector grid_best_response_p2(const Matrix& rho, const Vector& sigma,
                                    double b2, int m) {
  Vector best;
  double best_val = 1e300;
  for_each_simplex_point(static_cast<int>(rho.cols()), m, [&](const Vector& tau) {
    double v = oneshot_objective(rho, sigma, tau, 0.0, 1.0 / b2);
    if (v < best_val) {
      best_val = v;
      best = tau;
    }
  });
  return best;
}

// unregularized matrix game value via sigma grid; the inner minimum over tau
// is attained at a pure column because the objective is linear in tau
inline double grid_matrix_game_value(const Matrix& rho, int m) {
  double best_outer = -1e300;
  for_each_simplex_point(static_cast<int>(rho.rows()), m, [&](const Vector& sigma) {
    double inner = (sigma.transpose() * rho).minCoeff();
    best_outer = std::max(best_outer, inner);
  });
  return best_outer;
}

// expected continuation payoff by direct triple loop
inline Matrix naive_stage_payoff(const Game& g, int x, const Vector& v_next,
                                 double discount) {
  Matrix rho(g.actions_p1_at(x), g.actions_p2_at(x));
  for (int u = 0; u < g.actions_p1_at(x); ++u)
    for (int w = 0; w < g.actions_p2_at(x); ++w) {
      double acc = 0.0;
      for (int y = 0; y < g.num_states(); ++y)
        acc += g.transition(x, u, w, y) * v_next[y];
      rho(u, w) = g.payoff(x, u, w) + discount * acc;
    }
  return rho;
}

// exact N-stage objective by explicit history enumeration. Histories are
// expanded breadth-first with their joint probabilities; the per-stage terms
// are accumulated from the joint law directly.
struct TreeNode {
  ersg::History h;
  double prob;
};

inline double tree_phi(const Game& g, int horizon, double inv_b1, double inv_b2,
                       const ersg::HistoryStrategy& s1, const ersg::HistoryStrategy& s2,
                       const Vector& mu1) {
  std::vector<TreeNode> level;
  for (int x = 0; x < g.num_states(); ++x)
    if (mu1[x] > 0.0) level.push_back({ersg::History{{x}, {}, {}}, mu1[x]});
  double phi = 0.0;
  for (int t = 1; t <= horizon; ++t) {
    std::vector<TreeNode> next;
    for (const TreeNode& node : level) {
      const int x = node.h.current_state();
      const Vector sigma = s1.rule(node.h);
      const Vector tau = s2.rule(node.h);
      for (int u = 0; u < g.actions_p1_at(x); ++u) {
        if (sigma[u] == 0.0) continue;
        for (int w = 0; w < g.actions_p2_at(x); ++w) {
          if (tau[w] == 0.0) continue;
          const double joint = node.prob * sigma[u] * tau[w];
          phi += joint * (g.payoff(x, u, w) - inv_b1 * std::log(sigma[u]) +
                          inv_b2 * std::log(tau[w]));
          for (int y = 0; y < g.num_states(); ++y) {
            const double p = g.transition(x, u, w, y);
            if (p == 0.0) continue;
            TreeNode child = node;
            child.h.states.push_back(y);
            child.h.acts_p1.push_back(u);
            child.h.acts_p2.push_back(w);
            child.prob = joint * p;
            next.push_back(std::move(child));
          }
        }
      }
    }
    level = std::move(next);
  }
  for (const TreeNode& node : level)
    phi += node.prob * g.terminal_payoff()[node.h.current_state()];
  return phi;
}

// deterministic pseudo-random helpers for test data
inline Vector random_simplex_point(std::mt19937_64& rng, int k) {
  std::exponential_distribution<double> exp1(1.0);
  Vector p(k);
  for (int i = 0; i < k; ++i) p[i] = exp1(rng);
  p /= p.sum();
  return p;
}

inline Matrix random_payoff_matrix(std::mt19937_64& rng, int nu, int nw,
                                   double scale = 1.0) {
  std::uniform_real_distribution<double> unif(-scale, scale);
  Matrix rho(nu, nw);
  for (int u = 0; u < nu; ++u)
    for (int w = 0; w < nw; ++w) rho(u, w) = unif(rng);
  return rho;
}

inline Game random_game(std::mt19937_64& rng, int n_states, int a1, int a2,
                        double payoff_scale = 1.0, bool random_terminal = false) {
  Game g(n_states, a1, a2);
  std::uniform_real_distribution<double> unif(-payoff_scale, payoff_scale);
  for (int x = 0; x < n_states; ++x)
    for (int u = 0; u < a1; ++u)
      for (int w = 0; w < a2; ++w) {
        g.set_payoff(x, u, w, unif(rng));
        g.set_transition(x, u, w, random_simplex_point(rng, n_states));
      }
  if (random_terminal) {
    Vector t(n_states);
    for (int x = 0; x < n_states; ++x) t[x] = unif(rng);
    g.set_terminal_payoff(t);
  }
  g.finalize();
  return g;
}

// random stationary strategy for the given player
inline ersg::StationaryStrategy random_stationary(std::mt19937_64& rng, const Game& g,
                                                  int player) {
  ersg::StationaryStrategy s;
  s.dist.resize(g.num_states());
  for (int x = 0; x < g.num_states(); ++x) {
    int k = player == 1 ? g.actions_p1_at(x) : g.actions_p2_at(x);
    s.dist[x] = random_simplex_point(rng, k);
  }
  return s;
}

inline ersg::MarkovStrategy random_markov(std::mt19937_64& rng, const Game& g,
                                          int player, int horizon) {
  ersg::MarkovStrategy m;
  for (int t = 0; t < horizon; ++t) m.stages.push_back(random_stationary(rng, g, player));
  return m;
}

}  // namespace oracles
