// ersg: equilibrium solvers and evaluators for entropy-regularized
// zero-sum stochastic games.
//
// Exit codes: 0 success, 2 invalid input, 3 solver did not converge (the
// best iterate is still written, with "converged": false), 4 strategy
// transfer mismatch.

#include <cctype>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ersg/discounted.hpp"
#include "ersg/evaluate.hpp"
#include "ersg/experiment.hpp"
#include "ersg/game.hpp"
#include "ersg/game_io.hpp"
#include "ersg/gridworld.hpp"
#include "ersg/nstage.hpp"
#include "ersg/oneshot.hpp"

namespace {

using ersg::Beta;
using ersg::Json;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitNoConverge = 3;
constexpr int kExitTransfer = 4;

Beta parse_beta(const std::string& s) {
  if (s == "inf") return Beta::infinity();
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("");
    return Beta::finite(v);
  } catch (const std::exception&) {
    throw std::invalid_argument("beta must be a positive number or 'inf', got '" + s + "'");
  }
}

// A game argument names a builtin board, an ASCII board file, or a JSON
// game file (recognized by a leading '{').
struct LoadedGame {
  ersg::Game game;
  std::optional<ersg::ProductGame> grid;
};

LoadedGame load_game_arg(const std::string& spec) {
  LoadedGame out;
  if (spec.rfind("builtin:", 0) == 0) {
    out.grid = ersg::build_game(ersg::load_map(spec));
    out.game = out.grid->game;
    return out;
  }
  std::ifstream in(spec);
  if (!in) throw std::invalid_argument("cannot open game file '" + spec + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  size_t i = 0;
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  if (i < text.size() && text[i] == '{') {
    out.game = ersg::game_from_json(Json::parse(text));
  } else {
    out.grid = ersg::build_game(ersg::parse_map(text));
    out.game = out.grid->game;
  }
  return out;
}

void emit_json(const Json& j, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << j.dump(2) << '\n';
  } else {
    ersg::write_json_file(j, out_path);
  }
}

void emit_text(const std::string& text, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::invalid_argument("cannot open '" + out_path + "' for writing");
    out << text;
    if (!out) throw std::invalid_argument("failed writing '" + out_path + "'");
  }
}

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

// Config-file fallback: a flag the user did not pass on the command line
// takes its value from the config document when present.
struct ConfigMerge {
  Json cfg = Json::object();

  void load(const std::string& path) {
    if (path.empty()) return;
    cfg = ersg::read_json_file(path);
    if (!cfg.is_object()) throw std::invalid_argument("config must be a JSON object");
  }
  template <typename T>
  void fill(const CLI::Option* opt, const char* key, T& value) const {
    if (opt->count() > 0 || !cfg.contains(key)) return;
    value = cfg.at(key).get<T>();
  }
  void fill_beta(const CLI::Option* opt, const char* key, std::string& value) const {
    if (opt->count() > 0 || !cfg.contains(key)) return;
    const Json& v = cfg.at(key);
    value = v.is_string() ? v.get<std::string>() : ersg::format_double(v.get<double>());
  }
};

void require_valid(const ersg::Game& g) {
  const auto issues = ersg::validate_game(g);
  if (issues.empty()) return;
  std::string msg = "invalid game:";
  for (const auto& s : issues) msg += "\n  " + s;
  throw std::invalid_argument(msg);
}

int report_invalid(const std::exception& e) {
  std::cerr << "error: " << e.what() << '\n';
  return kExitInvalid;
}

// ---------------------------------------------------------------- solve --

struct SolveArgs {
  std::string game, config, out, mode;
  std::string beta1 = "1", beta2 = "1";
  double gamma = 0.0;
  int horizon = 0;
  double tol = 0.0;
  int max_iters = 100000;
  int threads = 0;
  bool timestamp = false;
  const CLI::Option *o_game, *o_beta1, *o_beta2, *o_gamma, *o_horizon, *o_tol, *o_threads,
      *o_max_iters, *o_mode;
};

int run_solve(SolveArgs& a) {
  ConfigMerge cm;
  cm.load(a.config);
  cm.fill(a.o_game, "game", a.game);
  cm.fill(a.o_mode, "mode", a.mode);
  cm.fill_beta(a.o_beta1, "beta1", a.beta1);
  cm.fill_beta(a.o_beta2, "beta2", a.beta2);
  cm.fill(a.o_gamma, "gamma", a.gamma);
  cm.fill(a.o_horizon, "horizon", a.horizon);
  cm.fill(a.o_tol, "tol", a.tol);
  cm.fill(a.o_threads, "threads", a.threads);
  cm.fill(a.o_max_iters, "max_iters", a.max_iters);

  if (a.game.empty()) throw std::invalid_argument("solve needs --game");
  const bool discounted = a.gamma != 0.0;
  const bool staged = a.horizon != 0;
  if (discounted == staged)
    throw std::invalid_argument("solve needs exactly one of --gamma and --horizon");
  if (!a.mode.empty()) {
    if (a.mode != "nstage" && a.mode != "discounted")
      throw std::invalid_argument("solve --mode must be 'nstage' or 'discounted'");
    if ((a.mode == "nstage") != staged)
      throw std::invalid_argument("solve --mode " + a.mode + " does not match the " +
                                  (staged ? "--horizon" : "--gamma") + " flag");
  }

  ersg::RegularizationConfig cfg;
  cfg.beta1 = parse_beta(a.beta1);
  cfg.beta2 = parse_beta(a.beta2);

  const LoadedGame lg = load_game_arg(a.game);
  require_valid(lg.game);

  Json out;
  int code = kExitOk;
  if (staged) {
    cfg.horizon = a.horizon;
    ersg::NStageOptions opt;
    opt.tol = a.tol > 0.0 ? a.tol : opt.tol;
    opt.max_iters = a.max_iters;
    opt.threads = a.threads;
    try {
      out = ersg::solution_to_json(ersg::solve_nstage(lg.game, cfg, opt), cfg.beta1, cfg.beta2);
    } catch (const ersg::NStageError& e) {
      std::cerr << "warning: " << e.what() << '\n';
      out = ersg::solution_to_json(e.best(), cfg.beta1, cfg.beta2);
      code = kExitNoConverge;
    }
  } else {
    cfg.gamma = a.gamma;
    ersg::DiscountedOptions opt;
    opt.tol = a.tol > 0.0 ? a.tol : opt.tol;
    opt.max_iters = a.max_iters;
    opt.threads = a.threads;
    try {
      out = ersg::solution_to_json(ersg::solve_discounted(lg.game, cfg, opt), cfg.beta1,
                                   cfg.beta2);
    } catch (const ersg::DiscountedError& e) {
      std::cerr << "warning: " << e.what() << '\n';
      out = ersg::solution_to_json(e.best(), cfg.beta1, cfg.beta2);
      code = kExitNoConverge;
    }
  }
  if (lg.grid) out["start_state"] = lg.grid->start_state;
  if (a.timestamp) out["timestamp"] = iso_timestamp();
  emit_json(out, a.out);
  return code;
}

// ----------------------------------------------------------------- eval --

struct EvalArgs {
  std::string game, strategies, sigma_path, tau_path, config, out;
  std::string beta1, beta2;
  double gamma = 0.0;
  int horizon = 0;
  int start = -1;
  bool phi = false, win = false, exploitability = false;
  bool timestamp = false;
  std::vector<int> win_states, lose_states;
  const CLI::Option *o_game, *o_beta1, *o_beta2, *o_gamma, *o_horizon, *o_start;
};

int run_eval(EvalArgs& a) {
  ConfigMerge cm;
  cm.load(a.config);
  cm.fill(a.o_game, "game", a.game);
  cm.fill_beta(a.o_beta1, "beta1", a.beta1);
  cm.fill_beta(a.o_beta2, "beta2", a.beta2);
  cm.fill(a.o_gamma, "gamma", a.gamma);
  cm.fill(a.o_horizon, "horizon", a.horizon);

  if (a.game.empty()) throw std::invalid_argument("eval needs --game");
  if (a.strategies.empty() && (a.sigma_path.empty() || a.tau_path.empty()))
    throw std::invalid_argument("eval needs --strategies, or both --sigma and --tau");
  if (!a.phi && !a.win && !a.exploitability) a.phi = true;

  const LoadedGame lg = load_game_arg(a.game);
  require_valid(lg.game);

  ersg::LoadedSolution sol;
  if (!a.strategies.empty()) sol = ersg::read_solution_file(a.strategies);
  auto read_side = [](const std::string& path, std::optional<ersg::StationaryStrategy>& flat,
                      std::optional<ersg::MarkovStrategy>& staged) {
    const Json j = ersg::read_json_file(path);
    Json body = j;
    if (j.is_object()) {
      if (j.contains("sigma"))
        body = j.at("sigma");
      else if (j.contains("tau"))
        body = j.at("tau");
      else
        throw std::invalid_argument("'" + path + "' has no strategy array");
    }
    flat.reset();
    staged.reset();
    // depth 3 means one slice per stage
    if (body.is_array() && !body.empty() && body[0].is_array() && !body[0].empty() &&
        body[0][0].is_array())
      staged = ersg::markov_from_json(body);
    else
      flat = ersg::stationary_from_json(body);
  };
  if (!a.sigma_path.empty()) read_side(a.sigma_path, sol.sigma, sol.sigma_markov);
  if (!a.tau_path.empty()) read_side(a.tau_path, sol.tau, sol.tau_markov);

  ersg::RegularizationConfig cfg;
  if (!a.beta1.empty())
    cfg.beta1 = parse_beta(a.beta1);
  else if (sol.beta1)
    cfg.beta1 = *sol.beta1;
  else
    throw std::invalid_argument("eval needs --beta1 (not present in the strategy file)");
  if (!a.beta2.empty())
    cfg.beta2 = parse_beta(a.beta2);
  else if (sol.beta2)
    cfg.beta2 = *sol.beta2;
  else
    throw std::invalid_argument("eval needs --beta2 (not present in the strategy file)");

  double gamma = a.gamma;
  int horizon = a.horizon;
  if (gamma == 0.0 && horizon == 0) {
    if (sol.gamma)
      gamma = *sol.gamma;
    else if (sol.horizon)
      horizon = *sol.horizon;
  }
  if ((gamma != 0.0) == (horizon != 0))
    throw std::invalid_argument("eval needs exactly one of --gamma and --horizon");

  int start = a.start;
  if (a.o_start->count() == 0) start = lg.grid ? lg.grid->start_state : 0;
  if (start < 0 || start >= lg.game.num_states())
    throw std::invalid_argument("start state out of range");

  Json out;
  out["kind"] = "eval";
  out["beta1"] = ersg::beta_to_json(cfg.beta1);
  out["beta2"] = ersg::beta_to_json(cfg.beta2);
  out["start_state"] = start;

  if (horizon != 0) {
    cfg.horizon = horizon;
    if (a.win || a.exploitability)
      throw std::invalid_argument("--win and --exploitability need --gamma");
    const auto repeat = [horizon](const ersg::StationaryStrategy& s) {
      ersg::MarkovStrategy m;
      m.stages.assign(horizon, s);
      return m;
    };
    ersg::MarkovStrategy sig, tau;
    if (sol.sigma_markov)
      sig = *sol.sigma_markov;
    else if (sol.sigma)
      sig = repeat(*sol.sigma);
    else
      throw std::invalid_argument("no sigma available");
    if (sol.tau_markov)
      tau = *sol.tau_markov;
    else if (sol.tau)
      tau = repeat(*sol.tau);
    else
      throw std::invalid_argument("no tau available");
    ersg::Vector mu1 = ersg::Vector::Zero(lg.game.num_states());
    mu1[start] = 1.0;
    out["N"] = horizon;
    out["phi"] = ersg::phi_n(lg.game, cfg, sig, tau, mu1);
  } else {
    cfg.gamma = gamma;
    if (!sol.sigma || !sol.tau)
      throw std::invalid_argument("discounted eval needs stationary sigma and tau");
    out["gamma"] = gamma;
    const ersg::ValueFunction phi = ersg::phi_inf(lg.game, cfg, *sol.sigma, *sol.tau);
    if (a.phi) out["phi"] = phi[start];
    if (a.win) {
      std::vector<int> win = a.win_states, lose = a.lose_states;
      if (win.empty() && lg.grid) win = {lg.grid->win_sink};
      if (lose.empty() && lg.grid) lose = {lg.grid->capture_sink};
      if (win.empty())
        throw std::invalid_argument("--win needs a grid game or --win-states");
      const ersg::Absorption abs =
          ersg::win_probability(lg.game, *sol.sigma, *sol.tau, win, lose, start);
      out["win_prob"] = abs.win;
      out["lose_prob"] = abs.lose;
      out["never_prob"] = abs.never;
    }
    if (a.exploitability) {
      const ersg::BestResponse br1 = ersg::best_response_value(lg.game, cfg, *sol.tau, 2);
      const ersg::BestResponse br2 = ersg::best_response_value(lg.game, cfg, *sol.sigma, 1);
      out["exploitability_p1"] = br1.value[start] - phi[start];
      out["exploitability_p2"] = phi[start] - br2.value[start];
    }
  }
  if (a.timestamp) out["timestamp"] = iso_timestamp();
  emit_json(out, a.out);
  return kExitOk;
}

// ---------------------------------------------------------------- sweep --

struct SweepArgs {
  std::string solve_map = "builtin:nominal";
  std::vector<std::string> eval_maps;
  std::vector<std::string> betas;
  double gamma = 0.8;
  double tol = 1e-6;
  std::string opponent = "nash";
  int threads = 0;
  std::string config, out;
  const CLI::Option *o_solve_map, *o_eval_maps, *o_betas, *o_gamma, *o_tol, *o_opponent,
      *o_threads;
};

int run_sweep_cmd(SweepArgs& a) {
  ConfigMerge cm;
  cm.load(a.config);
  cm.fill(a.o_solve_map, "solve_map", a.solve_map);
  cm.fill(a.o_eval_maps, "eval_maps", a.eval_maps);
  cm.fill(a.o_betas, "betas", a.betas);
  cm.fill(a.o_gamma, "gamma", a.gamma);
  cm.fill(a.o_tol, "tol", a.tol);
  cm.fill(a.o_opponent, "opponent", a.opponent);
  cm.fill(a.o_threads, "threads", a.threads);

  ersg::ExperimentSpec spec;
  spec.solve_map = a.solve_map;
  if (!a.eval_maps.empty()) spec.eval_maps = a.eval_maps;
  if (a.betas.empty()) throw std::invalid_argument("sweep needs --betas");
  for (const auto& b : a.betas) spec.betas.push_back(parse_beta(b));
  spec.gamma = a.gamma;
  spec.tol = a.tol;
  spec.opponent = ersg::opponent_from_string(a.opponent);
  spec.threads = a.threads;

  emit_text(ersg::sweep_csv(ersg::run_sweep(spec)), a.out);
  return kExitOk;
}

// -------------------------------------------------------------- oneshot --

struct OneshotArgs {
  std::string payoff, config, out;
  std::string beta1 = "1", beta2 = "1";
  double tol = 1e-9;
  int max_iters = 100000;
  bool timestamp = false;
  const CLI::Option *o_payoff, *o_beta1, *o_beta2, *o_tol, *o_max_iters;
};

int run_oneshot(OneshotArgs& a) {
  ConfigMerge cm;
  cm.load(a.config);
  cm.fill(a.o_payoff, "payoff", a.payoff);
  cm.fill_beta(a.o_beta1, "beta1", a.beta1);
  cm.fill_beta(a.o_beta2, "beta2", a.beta2);
  cm.fill(a.o_tol, "tol", a.tol);
  cm.fill(a.o_max_iters, "max_iters", a.max_iters);

  if (a.payoff.empty()) throw std::invalid_argument("oneshot needs --payoff");
  const Json j = ersg::read_json_file(a.payoff);
  const Json& rows = j.is_object() && j.contains("payoff") ? j.at("payoff") : j;
  if (!rows.is_array() || rows.empty() || !rows[0].is_array())
    throw std::invalid_argument("payoff must be a JSON array of arrays");
  ersg::Matrix rho(rows.size(), rows[0].size());
  for (Eigen::Index u = 0; u < rho.rows(); ++u) {
    const Json& r = rows[u];
    if (static_cast<Eigen::Index>(r.size()) != rho.cols())
      throw std::invalid_argument("payoff rows must have equal length");
    for (Eigen::Index w = 0; w < rho.cols(); ++w) rho(u, w) = r[w].get<double>();
  }

  ersg::OneShotProblem p{rho, parse_beta(a.beta1), parse_beta(a.beta2)};
  ersg::OneShotOptions opt;
  opt.tol = a.tol;
  opt.max_iters = a.max_iters;

  Json out;
  out["kind"] = "oneshot";
  out["beta1"] = ersg::beta_to_json(p.beta1);
  out["beta2"] = ersg::beta_to_json(p.beta2);
  int code = kExitOk;
  ersg::OneShotSolution sol;
  try {
    sol = ersg::solve_oneshot(p, opt);
    out["converged"] = true;
  } catch (const ersg::OneShotError& e) {
    std::cerr << "warning: " << e.what() << '\n';
    sol = e.best();
    out["converged"] = false;
    code = kExitNoConverge;
  }
  out["value"] = sol.value;
  out["gap"] = sol.gap;
  out["iterations"] = sol.iterations;
  Json sig = Json::array(), tau = Json::array();
  for (Eigen::Index i = 0; i < sol.sigma.size(); ++i) sig.push_back(sol.sigma[i]);
  for (Eigen::Index i = 0; i < sol.tau.size(); ++i) tau.push_back(sol.tau[i]);
  out["sigma"] = std::move(sig);
  out["tau"] = std::move(tau);
  if (a.timestamp) out["timestamp"] = iso_timestamp();
  emit_json(out, a.out);
  return code;
}

// ------------------------------------------------------------- validate --

int run_validate(const std::string& game) {
  const LoadedGame lg = load_game_arg(game);
  const auto issues = ersg::validate_game(lg.game);
  if (issues.empty()) {
    std::cout << "ok: " << lg.game.num_states() << " states, " << lg.game.num_actions_p1()
              << "x" << lg.game.num_actions_p2() << " actions\n";
    return kExitOk;
  }
  for (const auto& s : issues) std::cout << s << '\n';
  return kExitInvalid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"equilibrium solvers for entropy-regularized zero-sum stochastic games"};
  app.require_subcommand(1);
  long long seed = 0;  // reserved for randomized features; current commands are deterministic
  app.add_option("--seed", seed, "random seed (reserved; outputs do not depend on it)");

  SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "solve a discounted or N-stage game");
  sa.o_game = solve->add_option("--game", sa.game, "JSON game, ASCII map file, or builtin:NAME");
  sa.o_mode = solve->add_option("--mode", sa.mode,
                                "nstage or discounted (redundant with --horizon/--gamma)");
  sa.o_beta1 = solve->add_option("--beta1", sa.beta1, "player 1 rationality (number or 'inf')");
  sa.o_beta2 = solve->add_option("--beta2", sa.beta2, "player 2 rationality (number or 'inf')");
  sa.o_gamma = solve->add_option("--gamma", sa.gamma, "discount factor in (0,1)");
  sa.o_horizon = solve->add_option("--horizon,-N", sa.horizon, "number of stages");
  sa.o_tol = solve->add_option("--tol", sa.tol, "convergence tolerance");
  sa.o_max_iters = solve->add_option("--max-iters", sa.max_iters, "per-solve iteration budget");
  sa.o_threads = solve->add_option("--threads", sa.threads, "worker threads (0 = auto)");
  solve->add_option("--config", sa.config, "JSON config file (flags win)");
  solve->add_option("--out,-o", sa.out, "output path ('-' = stdout)");
  solve->add_flag("--timestamp", sa.timestamp, "stamp the output with the wall-clock time");

  EvalArgs ea;
  auto* eval = app.add_subcommand("eval", "evaluate a strategy pair");
  ea.o_game = eval->add_option("--game", ea.game, "JSON game, ASCII map file, or builtin:NAME");
  eval->add_option("--strategies", ea.strategies, "solution file holding sigma and tau");
  eval->add_option("--sigma", ea.sigma_path, "player 1 strategy file");
  eval->add_option("--tau", ea.tau_path, "player 2 strategy file");
  ea.o_beta1 = eval->add_option("--beta1", ea.beta1, "player 1 rationality (number or 'inf')");
  ea.o_beta2 = eval->add_option("--beta2", ea.beta2, "player 2 rationality (number or 'inf')");
  ea.o_gamma = eval->add_option("--gamma", ea.gamma, "discount factor in (0,1)");
  ea.o_horizon = eval->add_option("--horizon,-N", ea.horizon, "number of stages");
  ea.o_start = eval->add_option("--start", ea.start, "initial state index");
  eval->add_flag("--phi", ea.phi, "report the regularized payoff rate");
  eval->add_flag("--win", ea.win, "report absorption probabilities");
  eval->add_flag("--exploitability", ea.exploitability, "report best-response gaps");
  eval->add_option("--win-states", ea.win_states, "absorbing win states")->delimiter(',');
  eval->add_option("--lose-states", ea.lose_states, "absorbing lose states")->delimiter(',');
  eval->add_option("--config", ea.config, "JSON config file (flags win)");
  eval->add_option("--out,-o", ea.out, "output path ('-' = stdout)");
  eval->add_flag("--timestamp", ea.timestamp, "stamp the output with the wall-clock time");

  SweepArgs wa;
  auto* sweep = app.add_subcommand("sweep", "robustness study: solve, transfer, evaluate");
  wa.o_solve_map = sweep->add_option("--solve-map", wa.solve_map, "board to solve on");
  wa.o_eval_maps =
      sweep->add_option("--eval-maps", wa.eval_maps, "boards to evaluate on")->delimiter(',');
  wa.o_betas = sweep->add_option("--betas", wa.betas, "rationality levels")->delimiter(',');
  wa.o_gamma = sweep->add_option("--gamma", wa.gamma, "discount factor in (0,1)");
  wa.o_tol = sweep->add_option("--tol", wa.tol, "solver tolerance");
  wa.o_opponent =
      sweep->add_option("--opponent", wa.opponent, "evaluation opponent: nash or regularized");
  wa.o_threads = sweep->add_option("--threads", wa.threads, "worker threads (0 = auto)");
  sweep->add_option("--config", wa.config, "JSON config file (flags win)");
  sweep->add_option("--out,-o", wa.out, "CSV output path ('-' = stdout)");

  OneshotArgs oa;
  auto* oneshot = app.add_subcommand("oneshot", "solve a single regularized matrix game");
  oa.o_payoff = oneshot->add_option("--payoff", oa.payoff, "JSON payoff matrix file");
  oa.o_beta1 = oneshot->add_option("--beta1", oa.beta1, "player 1 rationality");
  oa.o_beta2 = oneshot->add_option("--beta2", oa.beta2, "player 2 rationality");
  oa.o_tol = oneshot->add_option("--tol", oa.tol, "duality gap tolerance");
  oa.o_max_iters = oneshot->add_option("--max-iters", oa.max_iters, "iteration budget");
  oneshot->add_option("--config", oa.config, "JSON config file (flags win)");
  oneshot->add_option("--out,-o", oa.out, "output path ('-' = stdout)");
  oneshot->add_flag("--timestamp", oa.timestamp, "stamp the output with the wall-clock time");

  std::string vgame;
  auto* validate = app.add_subcommand("validate", "check a game file");
  validate->add_option("--game", vgame, "JSON game, ASCII map file, or builtin:NAME")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (solve->parsed()) return run_solve(sa);
    if (eval->parsed()) return run_eval(ea);
    if (sweep->parsed()) return run_sweep_cmd(wa);
    if (oneshot->parsed()) return run_oneshot(oa);
    if (validate->parsed()) return run_validate(vgame);
  } catch (const ersg::TransferError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitTransfer;
  } catch (const ersg::NStageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNoConverge;
  } catch (const ersg::DiscountedError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNoConverge;
  } catch (const ersg::OneShotError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNoConverge;
  } catch (const std::exception& e) {
    return report_invalid(e);
  }
  return kExitInvalid;
}
