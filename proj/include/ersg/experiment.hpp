#pragma once

#include <string>
#include <vector>

#include "ersg/game.hpp"
#include "ersg/gridworld.hpp"

namespace ersg {

// Who player 2 is during evaluation: the unregularized equilibrium of the
// solve board, or the regularized opponent from the same solve as player 1.
enum class Opponent { kNash, kRegularized };

Opponent opponent_from_string(const std::string& s);

// Robustness sweep: solve the pursuit game on one board per beta, carry the
// strategies to each evaluation board unchanged, and measure how they hold
// up there.
struct ExperimentSpec {
  std::string solve_map = "builtin:nominal";
  std::vector<std::string> eval_maps = {"builtin:nominal", "builtin:blocked", "builtin:side"};
  std::vector<Beta> betas;
  double gamma = 0.8;
  double tol = 1e-6;
  Opponent opponent = Opponent::kNash;
  int threads = 0;
};

struct SweepRow {
  Beta beta1 = Beta::infinity();
  Beta beta2 = Beta::infinity();
  std::string solve_map;
  std::string eval_map;
  int start_state = -1;
  double win_prob = 0.0;
  double phi = 0.0;
  double exploitability_p1 = 0.0;
  double exploitability_p2 = 0.0;
};

// Rows come back sorted by (beta, eval map name); betas sort numerically
// with infinity last.
std::vector<SweepRow> run_sweep(const ExperimentSpec& spec);

std::string sweep_csv_header();
std::string sweep_csv(const std::vector<SweepRow>& rows);

// Fixed 12-significant-digit form used by the CSV and CLI summaries.
std::string format_double(double v);
std::string format_beta(const Beta& b);

}  // namespace ersg
