#include "ersg/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "ersg/discounted.hpp"
#include "ersg/evaluate.hpp"

namespace ersg {

Opponent opponent_from_string(const std::string& s) {
  if (s == "nash") return Opponent::kNash;
  if (s == "regularized") return Opponent::kRegularized;
  throw std::invalid_argument("opponent must be 'nash' or 'regularized', got '" + s + "'");
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string format_beta(const Beta& b) { return b.is_inf() ? "inf" : format_double(b.value()); }

std::string sweep_csv_header() {
  return "beta1,beta2,solve_map,eval_map,start_state,win_prob,phi,exploitability_p1,"
         "exploitability_p2";
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = sweep_csv_header() + "\n";
  for (const auto& r : rows) {
    out += format_beta(r.beta1) + "," + format_beta(r.beta2) + "," + r.solve_map + "," +
           r.eval_map + "," + std::to_string(r.start_state) + "," + format_double(r.win_prob) +
           "," + format_double(r.phi) + "," + format_double(r.exploitability_p1) + "," +
           format_double(r.exploitability_p2) + "\n";
  }
  return out;
}

namespace {

struct EvalBoard {
  std::string name;
  ProductGame pg;
};

SweepRow evaluate_pair(const ExperimentSpec& spec, const ProductGame& solved,
                       const EvalBoard& board, const Beta& beta,
                       const StationaryStrategy& sigma, const StationaryStrategy& tau) {
  SweepRow row;
  row.beta1 = beta;
  row.beta2 = beta;
  row.solve_map = spec.solve_map;
  row.eval_map = board.name;
  row.start_state = board.pg.start_state;

  const StationaryStrategy sig = transfer_strategy(solved, board.pg, sigma, 1);
  const StationaryStrategy ta = transfer_strategy(solved, board.pg, tau, 2);

  const Absorption abs =
      win_probability(board.pg.game, sig, ta, {board.pg.win_sink}, {board.pg.capture_sink},
                      board.pg.start_state);
  row.win_prob = abs.win;

  RegularizationConfig cfg;
  cfg.beta1 = beta;
  cfg.beta2 = beta;
  cfg.gamma = spec.gamma;
  const ValueFunction phi = phi_inf(board.pg.game, cfg, sig, ta);
  row.phi = phi[board.pg.start_state];

  const BestResponse br1 = best_response_value(board.pg.game, cfg, ta, 2);
  const BestResponse br2 = best_response_value(board.pg.game, cfg, sig, 1);
  row.exploitability_p1 = br1.value[board.pg.start_state] - row.phi;
  row.exploitability_p2 = row.phi - br2.value[board.pg.start_state];
  return row;
}

}  // namespace

std::vector<SweepRow> run_sweep(const ExperimentSpec& spec) {
  if (spec.betas.empty()) throw std::invalid_argument("sweep needs at least one beta");
  if (spec.eval_maps.empty()) throw std::invalid_argument("sweep needs at least one eval map");

  const ProductGame solved = build_game(load_map(spec.solve_map));
  std::vector<EvalBoard> boards;
  for (const auto& name : spec.eval_maps) boards.push_back({name, build_game(load_map(name))});

  DiscountedOptions opt;
  opt.tol = spec.tol;
  opt.threads = spec.threads;

  StationaryStrategy tau_nash;
  if (spec.opponent == Opponent::kNash) {
    RegularizationConfig cfg;
    cfg.beta1 = Beta::infinity();
    cfg.beta2 = Beta::infinity();
    cfg.gamma = spec.gamma;
    tau_nash = solve_discounted(solved.game, cfg, opt).tau;
  }

  std::vector<SweepRow> rows;
  for (const Beta& beta : spec.betas) {
    RegularizationConfig cfg;
    cfg.beta1 = beta;
    cfg.beta2 = beta;
    cfg.gamma = spec.gamma;
    const DiscountedSolution sol = solve_discounted(solved.game, cfg, opt);
    const StationaryStrategy& tau =
        spec.opponent == Opponent::kNash ? tau_nash : sol.tau;
    for (const auto& board : boards)
      rows.push_back(evaluate_pair(spec, solved, board, beta, sol.sigma, tau));
  }

  std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    const double ka = a.beta1.is_inf() ? std::numeric_limits<double>::infinity() : a.beta1.value();
    const double kb = b.beta1.is_inf() ? std::numeric_limits<double>::infinity() : b.beta1.value();
    if (ka != kb) return ka < kb;
    return a.eval_map < b.eval_map;
  });
  return rows;
}

}  // namespace ersg
