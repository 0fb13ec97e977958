#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ersg/types.hpp"

namespace ersg {

// Rationality coefficient. Infinity is a tagged state, never a large float:
// beta = inf means the player is an unregularized optimizer and every
// 1/beta entropy weight is exactly zero.
class Beta {
 public:
  Beta() : value_(1.0), inf_(false) {}

  static Beta finite(double v) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw std::invalid_argument("beta must be positive and finite");
    Beta b;
    b.value_ = v;
    b.inf_ = false;
    return b;
  }
  static Beta infinity() {
    Beta b;
    b.value_ = 0.0;
    b.inf_ = true;
    return b;
  }

  bool is_inf() const { return inf_; }
  double value() const {
    if (inf_) throw std::logic_error("value() on infinite beta");
    return value_;
  }
  // entropy weight 1/beta; exactly zero for infinite beta
  double inv() const { return inf_ ? 0.0 : 1.0 / value_; }

 private:
  double value_;
  bool inf_;
};

struct RegularizationConfig {
  Beta beta1;
  Beta beta2;
  std::optional<double> gamma;  // discounted problems
  std::optional<int> horizon;   // finite-stage problems
};

// Stationary (state-feedback) strategy: one distribution per state over the
// actions available there. Rows are ragged because sink states may expose a
// single action.
struct StationaryStrategy {
  std::vector<Vector> dist;

  int num_states() const { return static_cast<int>(dist.size()); }
  const Vector& at(int x) const { return dist[x]; }
};

// Markov strategy: one stationary slice per stage, t = 1..N.
struct MarkovStrategy {
  std::vector<StationaryStrategy> stages;

  int horizon() const { return static_cast<int>(stages.size()); }
};

// Play prefix seen by a history-dependent strategy at stage t:
// states x_1..x_t and both action sequences up to t-1.
struct History {
  std::vector<int> states;
  std::vector<int> acts_p1;
  std::vector<int> acts_p2;

  int stage() const { return static_cast<int>(states.size()); }
  int current_state() const { return states.back(); }
};

// History-dependent strategy, in rule form: the rule must return a valid
// distribution over the acting player's available actions at the current
// state. Only realizable for small trees; used by the exact evaluator.
struct HistoryStrategy {
  std::function<Vector(const History&)> rule;
};

using ValueFunction = Vector;

// Two-player zero-sum stochastic game on finite sets. Player 1 maximizes,
// player 2 minimizes. Per-state action counts allow absorbing sink states to
// carry a single action so their entropy contribution is exactly zero.
//
// Construction: fill the fields (or use the setters), then call finalize()
// once. After that the object is treated as immutable everywhere and is safe
// to share across threads.
class Game {
 public:
  Game() = default;
  Game(int num_states, int num_actions_p1, int num_actions_p2);

  int num_states() const { return num_states_; }
  int num_actions_p1() const { return max_a1_; }
  int num_actions_p2() const { return max_a2_; }
  int actions_p1_at(int x) const { return a1_at_[x]; }
  int actions_p2_at(int x) const { return a2_at_[x]; }

  void set_actions_at(int x, int a1, int a2);
  void set_transition(int x, int u, int w, const Vector& next_probs);
  void set_payoff(int x, int u, int w, double r);
  void set_terminal_payoff(const Vector& v);
  void set_label(int x, const std::string& label);

  // builds the per-state sparse rows (used when a kernel row has fewer than
  // 25% nonzeros) and freezes the object
  void finalize();
  bool finalized() const { return finalized_; }

  // payoff matrix R(x,.,.), shape actions_p1_at(x) x actions_p2_at(x)
  const Matrix& payoff(int x) const { return payoff_[x]; }
  double payoff(int x, int u, int w) const { return payoff_[x](u, w); }

  // kernel rows for state x: row (u * actions_p2_at(x) + w) holds P(.|x,u,w)
  const RowMatrix& transition(int x) const { return trans_[x]; }
  double transition(int x, int u, int w, int y) const {
    return trans_[x](u * a2_at_[x] + w, y);
  }

  const Vector& terminal_payoff() const { return terminal_; }
  const std::string& label(int x) const { return labels_[x]; }

  // expected continuation values E[v(X') | x, u, w] for all (u, w) at state
  // x, returned in kernel row order; uses the sparse rows when present
  Vector expected_next(int x, const Vector& v) const;

  double max_abs_payoff() const { return max_abs_payoff_; }

 private:
  int num_states_ = 0;
  int max_a1_ = 0;
  int max_a2_ = 0;
  std::vector<int> a1_at_;
  std::vector<int> a2_at_;
  std::vector<Matrix> payoff_;       // per state, a1 x a2
  std::vector<RowMatrix> trans_;     // per state, (a1*a2) x num_states
  Vector terminal_;
  std::vector<std::string> labels_;
  double max_abs_payoff_ = 0.0;
  bool finalized_ = false;

  // compressed kernel rows, populated by finalize() for sparse states
  struct SparseRow {
    std::vector<int> idx;
    std::vector<double> val;
  };
  std::vector<std::vector<SparseRow>> sparse_;  // [x][row], empty if dense
};

// Checks kernel rows (nonnegative, sum to one within 1e-9), payoff
// finiteness and shape consistency. Returns human-readable violations with
// coordinates; empty means valid.
std::vector<std::string> validate_game(const Game& g);

// Uniform stationary strategy for the given player (1 or 2)
StationaryStrategy uniform_strategy(const Game& g, int player);

// Validates a single distribution: nonnegative entries summing to one
// within kProbTol and the expected size.
bool is_distribution(const Vector& p, int expected_size);

// Throws std::invalid_argument when p is not a valid distribution.
void require_distribution(const Vector& p, int expected_size, const char* what);

}  // namespace ersg
