#pragma once

#include <vector>

#include "ersg/game.hpp"
#include "ersg/types.hpp"

namespace ersg {

// Checks that s is a stationary strategy for the given player of g: one
// valid distribution per state with the state's action count. Throws on
// violation.
void require_strategy(const Game& g, const StationaryStrategy& s, int player,
                      const char* what);

// Single-step state chain under a stationary pair:
// chain(x, y) = sum_{u,w} sigma(u|x) tau(w|x) P(y|x,u,w)
Matrix strategy_chain(const Game& g, const StationaryStrategy& sigma,
                      const StationaryStrategy& tau);

// State marginals mu_t, t = 1..N+1, under a Markov strategy pair started
// from mu1. mu[t-1] is the stage-t marginal.
struct Occupancy {
  std::vector<Vector> mu;
};
Occupancy rollout_occupancy(const Game& g, const MarkovStrategy& sigma,
                            const MarkovStrategy& tau, const Vector& mu1);

// Finite-stage objective of a Markov pair: expected payoffs plus the
// entropy terms weighted by 1/beta, each stage's conditional entropy taken
// under the stage marginal, plus the terminal payoff. Requires cfg.horizon.
double phi_n(const Game& g, const RegularizationConfig& cfg,
             const MarkovStrategy& sigma, const MarkovStrategy& tau,
             const Vector& mu1);

// Exact finite-stage objective of a history-dependent pair, by enumerating
// the full history tree. Guarded: throws when the tree exceeds 1e6 nodes.
double phi_n_tree(const Game& g, const RegularizationConfig& cfg,
                  const HistoryStrategy& sigma, const HistoryStrategy& tau,
                  const Vector& mu1);

// Lifts of memoryless strategies to history rules (read the current state,
// ignore the rest).
HistoryStrategy lift_markov(const MarkovStrategy& s);
HistoryStrategy lift_stationary(const StationaryStrategy& s, int horizon);

// Discounted objective of a stationary pair, per start state: the fixed
// point of v = r + gamma M v with r the per-state payoff-plus-entropy rate.
// Solved directly up to 2000 states, iteratively (to 1e-10) above.
ValueFunction phi_inf(const Game& g, const RegularizationConfig& cfg,
                      const StationaryStrategy& sigma, const StationaryStrategy& tau);

// Absorption split of the chain induced by a stationary pair: probability of
// reaching `win` and `lose` (both must be absorbing), plus the mass that
// never gets absorbed. The three components sum to one.
struct Absorption {
  double win = 0.0;
  double lose = 0.0;
  double never = 0.0;
};
Absorption win_probability(const Game& g, const StationaryStrategy& sigma,
                           const StationaryStrategy& tau,
                           const std::vector<int>& win, const std::vector<int>& lose,
                           int start);

// Best response of the free player against a fixed opponent strategy in the
// discounted game: soft value iteration with the closed-form per-state
// optimizer (log-sum-exp for finite beta, exact max/min for infinite).
// fixed_player names the player whose strategy is given (1 or 2).
struct BestResponse {
  StationaryStrategy strategy;
  ValueFunction value;
};
BestResponse best_response_value(const Game& g, const RegularizationConfig& cfg,
                                 const StationaryStrategy& fixed, int fixed_player,
                                 double tol = 1e-8);

}  // namespace ersg
