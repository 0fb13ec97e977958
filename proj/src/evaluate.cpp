#include "ersg/evaluate.hpp"

#include <Eigen/LU>
#include <cmath>
#include <deque>
#include <sstream>

#include "ersg/nstage.hpp"
#include "ersg/numeric.hpp"

namespace ersg {

namespace {

constexpr int kDenseSolveLimit = 2000;
constexpr long long kMaxTreeNodes = 1000000;

void check_mu1(const Game& g, const Vector& mu1) {
  require_distribution(mu1, g.num_states(), "mu1");
}

void check_horizon_pair(const Game& g, const RegularizationConfig& cfg,
                        const MarkovStrategy& sigma, const MarkovStrategy& tau) {
  if (!cfg.horizon.has_value())
    throw std::invalid_argument("finite-stage evaluation requires cfg.horizon");
  const int n = *cfg.horizon;
  if (sigma.horizon() < n || tau.horizon() < n)
    throw std::invalid_argument("strategy horizon shorter than cfg.horizon");
  for (int t = 0; t < n; ++t) {
    require_strategy(g, sigma.stages[t], 1, "sigma stage");
    require_strategy(g, tau.stages[t], 2, "tau stage");
  }
}

// per-state payoff-plus-entropy rate of a stationary pair
Vector pair_rate(const Game& g, const RegularizationConfig& cfg,
                 const StationaryStrategy& sigma, const StationaryStrategy& tau) {
  const double a1 = cfg.beta1.inv();
  const double a2 = cfg.beta2.inv();
  Vector r(g.num_states());
  for (int x = 0; x < g.num_states(); ++x)
    r[x] = sigma.at(x).dot(g.payoff(x) * tau.at(x)) + a1 * entropy(sigma.at(x)) -
           a2 * entropy(tau.at(x));
  return r;
}

}  // namespace

void require_strategy(const Game& g, const StationaryStrategy& s, int player,
                      const char* what) {
  if (s.num_states() != g.num_states()) {
    std::ostringstream msg;
    msg << what << ": expected " << g.num_states() << " states, got "
        << s.num_states();
    throw std::invalid_argument(msg.str());
  }
  for (int x = 0; x < g.num_states(); ++x) {
    int k = player == 1 ? g.actions_p1_at(x) : g.actions_p2_at(x);
    if (!is_distribution(s.at(x), k)) {
      std::ostringstream msg;
      msg << what << ": row " << x << " is not a distribution over " << k
          << " actions";
      throw std::invalid_argument(msg.str());
    }
  }
}

Matrix strategy_chain(const Game& g, const StationaryStrategy& sigma,
                      const StationaryStrategy& tau) {
  const int n = g.num_states();
  Matrix chain(n, n);
  for (int x = 0; x < n; ++x) {
    const int a2 = g.actions_p2_at(x);
    Vector weights(g.actions_p1_at(x) * a2);
    for (int u = 0; u < g.actions_p1_at(x); ++u)
      for (int w = 0; w < a2; ++w) weights[u * a2 + w] = sigma.at(x)[u] * tau.at(x)[w];
    chain.row(x) = weights.transpose() * g.transition(x);
  }
  return chain;
}

Occupancy rollout_occupancy(const Game& g, const MarkovStrategy& sigma,
                            const MarkovStrategy& tau, const Vector& mu1) {
  check_mu1(g, mu1);
  const int horizon = std::min(sigma.horizon(), tau.horizon());
  Occupancy occ;
  occ.mu.reserve(horizon + 1);
  occ.mu.push_back(mu1);
  for (int t = 0; t < horizon; ++t) {
    require_strategy(g, sigma.stages[t], 1, "sigma stage");
    require_strategy(g, tau.stages[t], 2, "tau stage");
    const Matrix chain = strategy_chain(g, sigma.stages[t], tau.stages[t]);
    occ.mu.push_back(chain.transpose() * occ.mu.back());
  }
  return occ;
}

double phi_n(const Game& g, const RegularizationConfig& cfg,
             const MarkovStrategy& sigma, const MarkovStrategy& tau,
             const Vector& mu1) {
  check_mu1(g, mu1);
  check_horizon_pair(g, cfg, sigma, tau);
  const int horizon = *cfg.horizon;
  const Occupancy occ = rollout_occupancy(g, sigma, tau, mu1);

  double phi = 0.0;
  for (int t = 0; t < horizon; ++t) {
    const Vector rate = pair_rate(g, cfg, sigma.stages[t], tau.stages[t]);
    phi += occ.mu[t].dot(rate);
  }
  phi += occ.mu[horizon].dot(g.terminal_payoff());
  return phi;
}

double phi_n_tree(const Game& g, const RegularizationConfig& cfg,
                  const HistoryStrategy& sigma, const HistoryStrategy& tau,
                  const Vector& mu1) {
  check_mu1(g, mu1);
  if (!cfg.horizon.has_value())
    throw std::invalid_argument("finite-stage evaluation requires cfg.horizon");
  const int horizon = *cfg.horizon;
  const double a1 = cfg.beta1.inv();
  const double a2 = cfg.beta2.inv();

  struct Node {
    History h;
    double prob;
  };
  std::deque<Node> frontier;
  long long nodes = 0;
  for (int x = 0; x < g.num_states(); ++x)
    if (mu1[x] > 0.0) {
      frontier.push_back({History{{x}, {}, {}}, mu1[x]});
      ++nodes;
    }

  double phi = 0.0;
  for (int t = 1; t <= horizon; ++t) {
    std::deque<Node> next;
    for (Node& node : frontier) {
      const int x = node.h.current_state();
      const Vector s = sigma.rule(node.h);
      const Vector w_dist = tau.rule(node.h);
      require_distribution(s, g.actions_p1_at(x), "history sigma");
      require_distribution(w_dist, g.actions_p2_at(x), "history tau");
      for (int u = 0; u < g.actions_p1_at(x); ++u) {
        if (s[u] == 0.0) continue;
        for (int w = 0; w < g.actions_p2_at(x); ++w) {
          if (w_dist[w] == 0.0) continue;
          const double joint = node.prob * s[u] * w_dist[w];
          phi += joint * (g.payoff(x, u, w) - a1 * std::log(s[u]) +
                          a2 * std::log(w_dist[w]));
          for (int y = 0; y < g.num_states(); ++y) {
            const double p = g.transition(x, u, w, y);
            if (p == 0.0) continue;
            if (++nodes > kMaxTreeNodes)
              throw std::runtime_error("phi_n_tree: history tree exceeds 1e6 nodes");
            Node child;
            child.h.states = node.h.states;
            child.h.states.push_back(y);
            child.h.acts_p1 = node.h.acts_p1;
            child.h.acts_p1.push_back(u);
            child.h.acts_p2 = node.h.acts_p2;
            child.h.acts_p2.push_back(w);
            child.prob = joint * p;
            next.push_back(std::move(child));
          }
        }
      }
    }
    frontier = std::move(next);
  }
  for (const Node& node : frontier)
    phi += node.prob * g.terminal_payoff()[node.h.current_state()];
  return phi;
}

HistoryStrategy lift_markov(const MarkovStrategy& s) {
  HistoryStrategy h;
  h.rule = [s](const History& hist) {
    return s.stages.at(hist.stage() - 1).at(hist.current_state());
  };
  return h;
}

HistoryStrategy lift_stationary(const StationaryStrategy& s, int /*horizon*/) {
  HistoryStrategy h;
  h.rule = [s](const History& hist) { return s.at(hist.current_state()); };
  return h;
}

ValueFunction phi_inf(const Game& g, const RegularizationConfig& cfg,
                      const StationaryStrategy& sigma, const StationaryStrategy& tau) {
  if (!cfg.gamma.has_value())
    throw std::invalid_argument("phi_inf requires cfg.gamma");
  const double gamma = *cfg.gamma;
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::invalid_argument("gamma must lie in (0,1)");
  require_strategy(g, sigma, 1, "sigma");
  require_strategy(g, tau, 2, "tau");

  const int n = g.num_states();
  const Vector r = pair_rate(g, cfg, sigma, tau);
  const Matrix chain = strategy_chain(g, sigma, tau);

  if (n <= kDenseSolveLimit) {
    const Matrix system = Matrix::Identity(n, n) - gamma * chain;
    return system.partialPivLu().solve(r);
  }
  Vector v = Vector::Zero(n);
  for (int it = 0; it < 1000000; ++it) {
    Vector v_next = r + gamma * (chain * v);
    const double change = (v_next - v).lpNorm<Eigen::Infinity>();
    v = v_next;
    if (change <= 1e-10) break;
  }
  return v;
}

Absorption win_probability(const Game& g, const StationaryStrategy& sigma,
                           const StationaryStrategy& tau,
                           const std::vector<int>& win, const std::vector<int>& lose,
                           int start) {
  require_strategy(g, sigma, 1, "sigma");
  require_strategy(g, tau, 2, "tau");
  const int n = g.num_states();
  if (start < 0 || start >= n) throw std::invalid_argument("start state out of range");

  std::vector<int> kind(n, 0);  // 0 transient, 1 win, 2 lose
  for (int x : win) {
    if (x < 0 || x >= n) throw std::invalid_argument("win state out of range");
    kind[x] = 1;
  }
  for (int x : lose) {
    if (x < 0 || x >= n) throw std::invalid_argument("lose state out of range");
    if (kind[x] == 1) throw std::invalid_argument("win and lose sets overlap");
    kind[x] = 2;
  }
  for (int x = 0; x < n; ++x) {
    if (kind[x] == 0) continue;
    for (int u = 0; u < g.actions_p1_at(x); ++u)
      for (int w = 0; w < g.actions_p2_at(x); ++w)
        if (std::abs(g.transition(x, u, w, x) - 1.0) > kProbTol)
          throw std::invalid_argument("win/lose states must be absorbing");
  }

  if (kind[start] == 1) return {1.0, 0.0, 0.0};
  if (kind[start] == 2) return {0.0, 1.0, 0.0};

  const Matrix chain = strategy_chain(g, sigma, tau);

  // states that can reach an absorbing set at all; from the rest the chain
  // wanders forever and the mass is reported as never absorbed
  std::vector<char> reaches(n, 0);
  std::deque<int> queue;
  for (int x = 0; x < n; ++x)
    if (kind[x] != 0) {
      reaches[x] = 1;
      queue.push_back(x);
    }
  while (!queue.empty()) {
    const int y = queue.front();
    queue.pop_front();
    for (int x = 0; x < n; ++x)
      if (!reaches[x] && chain(x, y) > 0.0) {
        reaches[x] = 1;
        queue.push_back(x);
      }
  }
  if (!reaches[start]) return {0.0, 0.0, 1.0};

  std::vector<int> transient;
  std::vector<int> slot(n, -1);
  for (int x = 0; x < n; ++x)
    if (kind[x] == 0 && reaches[x]) {
      slot[x] = static_cast<int>(transient.size());
      transient.push_back(x);
    }
  const int m = static_cast<int>(transient.size());

  Matrix sub(m, m);
  Vector to_win = Vector::Zero(m);
  Vector to_lose = Vector::Zero(m);
  for (int i = 0; i < m; ++i) {
    const int x = transient[i];
    for (int j = 0; j < m; ++j) sub(i, j) = chain(x, transient[j]);
    for (int y = 0; y < n; ++y) {
      if (kind[y] == 1) to_win[i] += chain(x, y);
      if (kind[y] == 2) to_lose[i] += chain(x, y);
    }
  }

  Eigen::PartialPivLU<Matrix> lu(Matrix::Identity(m, m) - sub);
  const Vector p_win = lu.solve(to_win);
  const Vector p_lose = lu.solve(to_lose);

  Absorption out;
  out.win = std::min(1.0, std::max(0.0, p_win[slot[start]]));
  out.lose = std::min(1.0, std::max(0.0, p_lose[slot[start]]));
  out.never = std::max(0.0, 1.0 - out.win - out.lose);
  return out;
}

BestResponse best_response_value(const Game& g, const RegularizationConfig& cfg,
                                 const StationaryStrategy& fixed, int fixed_player,
                                 double tol) {
  if (!cfg.gamma.has_value())
    throw std::invalid_argument("best_response_value requires cfg.gamma");
  const double gamma = *cfg.gamma;
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::invalid_argument("gamma must lie in (0,1)");
  if (fixed_player != 1 && fixed_player != 2)
    throw std::invalid_argument("fixed_player must be 1 or 2");
  require_strategy(g, fixed, fixed_player, "fixed strategy");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");

  const int n = g.num_states();
  const bool free_is_p1 = fixed_player == 2;
  const Beta free_beta = free_is_p1 ? cfg.beta1 : cfg.beta2;
  const double a_fixed = free_is_p1 ? cfg.beta2.inv() : cfg.beta1.inv();
  const double stop = tol * (1.0 - gamma) / (2.0 * gamma);

  // soft optimум over the free player's actions of the marginalized payoffs;
  // the fixed player's entropy rides along as a per-state offset
  auto soft_opt = [&](const Vector& q) {
    if (free_is_p1)
      return free_beta.is_inf() ? q.maxCoeff()
                                : log_sum_exp((free_beta.value() * q).eval()) /
                                      free_beta.value();
    return free_beta.is_inf() ? q.minCoeff()
                              : -log_sum_exp((-free_beta.value() * q).eval()) /
                                    free_beta.value();
  };

  Vector v = Vector::Zero(n);
  BestResponse out;
  out.strategy.dist.resize(n);

  for (int sweep = 0; sweep < 1000000; ++sweep) {
    Vector v_next(n);
    for (int x = 0; x < n; ++x) {
      const Matrix a = stage_payoff(g, x, v, gamma);
      const Vector q = free_is_p1 ? Vector(a * fixed.at(x))
                                  : Vector(a.transpose() * fixed.at(x));
      const double offset = (free_is_p1 ? -1.0 : 1.0) * a_fixed * entropy(fixed.at(x));
      v_next[x] = soft_opt(q) + offset;
    }
    const double change = (v_next - v).lpNorm<Eigen::Infinity>();
    v = v_next;
    if (change <= stop) break;
  }

  for (int x = 0; x < n; ++x) {
    const Matrix a = stage_payoff(g, x, v, gamma);
    const Vector q = free_is_p1 ? Vector(a * fixed.at(x))
                                : Vector(a.transpose() * fixed.at(x));
    if (free_beta.is_inf()) {
      Eigen::Index arg;
      if (free_is_p1)
        q.maxCoeff(&arg);
      else
        q.minCoeff(&arg);
      out.strategy.dist[x] = Vector::Zero(q.size());
      out.strategy.dist[x][arg] = 1.0;
    } else {
      const double sign = free_is_p1 ? 1.0 : -1.0;
      out.strategy.dist[x] = softmax((sign * free_beta.value() * q).eval());
    }
  }
  out.value = v;
  return out;
}

}  // namespace ersg
