#include "ersg/game_io.hpp"

#include <fstream>
#include <stdexcept>

namespace ersg {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

int require_int(const Json& j, const char* key, int min_value) {
  if (!j.contains(key)) fail(std::string("missing key '") + key + "'");
  const Json& v = j.at(key);
  if (!v.is_number_integer()) fail(std::string("'") + key + "' must be an integer");
  const int n = v.get<int>();
  if (n < min_value)
    fail(std::string("'") + key + "' must be >= " + std::to_string(min_value));
  return n;
}

int checked_index(const Json& v, int bound, const char* what) {
  if (!v.is_number_integer()) fail(std::string(what) + " must be an integer");
  const int i = v.get<int>();
  if (i < 0 || i >= bound)
    fail(std::string(what) + " " + std::to_string(i) + " out of range [0, " +
         std::to_string(bound) + ")");
  return i;
}

Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Vector vector_from_json(const Json& j, const char* what) {
  if (!j.is_array()) fail(std::string(what) + " must be an array");
  Vector v(j.size());
  Eigen::Index i = 0;
  for (const auto& e : j) {
    if (!e.is_number()) fail(std::string(what) + " entries must be numbers");
    v[i++] = e.get<double>();
  }
  return v;
}

}  // namespace

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    fail("'" + path + "': " + e.what());
  }
}

void write_json_file(const Json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail("cannot open '" + path + "' for writing");
  out << j.dump(2) << '\n';
  if (!out) fail("failed writing '" + path + "'");
}

Json beta_to_json(const Beta& b) {
  if (b.is_inf()) return Json("inf");
  return Json(b.value());
}

Beta beta_from_json(const Json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return Beta::infinity();
    fail("beta must be a positive number or \"inf\", got \"" + j.get<std::string>() + "\"");
  }
  if (!j.is_number()) fail("beta must be a positive number or \"inf\"");
  return Beta::finite(j.get<double>());
}

Json game_to_json(const Game& g) {
  if (!g.finalized()) fail("game_to_json: game not finalized");
  const int n = g.num_states();
  Json j;
  j["states"] = n;
  j["actions_p1"] = g.num_actions_p1();
  j["actions_p2"] = g.num_actions_p2();
  bool per_state = false;
  for (int x = 0; x < n && !per_state; ++x)
    per_state = g.actions_p1_at(x) != g.num_actions_p1() ||
                g.actions_p2_at(x) != g.num_actions_p2();
  if (per_state) {
    Json a1 = Json::array(), a2 = Json::array();
    for (int x = 0; x < n; ++x) {
      a1.push_back(g.actions_p1_at(x));
      a2.push_back(g.actions_p2_at(x));
    }
    j["actions_p1_per_state"] = std::move(a1);
    j["actions_p2_per_state"] = std::move(a2);
  }

  long long rows = 0, nnz = 0;
  for (int x = 0; x < n; ++x) {
    const auto& t = g.transition(x);
    rows += t.rows();
    nnz += (t.array() != 0.0).count();
  }
  const bool sparse = nnz * 4 < rows * n;

  Json trans = Json::array();
  for (int x = 0; x < n; ++x)
    for (int u = 0; u < g.actions_p1_at(x); ++u)
      for (int w = 0; w < g.actions_p2_at(x); ++w) {
        Json row;
        if (sparse) {
          row = Json::array();
          for (int y = 0; y < n; ++y) {
            const double p = g.transition(x, u, w, y);
            if (p != 0.0) row.push_back(Json::array({y, p}));
          }
        } else {
          Vector dense(n);
          for (int y = 0; y < n; ++y) dense[y] = g.transition(x, u, w, y);
          row = vector_to_json(dense);
        }
        trans.push_back(Json::array({x, u, w, std::move(row)}));
      }
  j["transition"] = std::move(trans);

  Json pay = Json::array();
  for (int x = 0; x < n; ++x)
    for (int u = 0; u < g.actions_p1_at(x); ++u)
      for (int w = 0; w < g.actions_p2_at(x); ++w)
        if (g.payoff(x, u, w) != 0.0)
          pay.push_back(Json::array({x, u, w, g.payoff(x, u, w)}));
  j["payoff"] = std::move(pay);

  if ((g.terminal_payoff().array() != 0.0).any())
    j["terminal_payoff"] = vector_to_json(g.terminal_payoff());

  Json labels = Json::object();
  for (int x = 0; x < n; ++x)
    if (!g.label(x).empty()) labels[std::to_string(x)] = g.label(x);
  if (!labels.empty()) j["labels"] = std::move(labels);
  return j;
}

Game game_from_json(const Json& j) {
  if (!j.is_object()) fail("game document must be an object");
  const int n = require_int(j, "states", 1);
  const int a1 = require_int(j, "actions_p1", 1);
  const int a2 = require_int(j, "actions_p2", 1);
  Game g(n, a1, a2);

  auto apply_per_state = [&](const char* key, int player) {
    if (!j.contains(key)) return;
    const Json& a = j.at(key);
    if (!a.is_array() || static_cast<int>(a.size()) != n)
      fail(std::string("'") + key + "' must be an array of length " + std::to_string(n));
    for (int x = 0; x < n; ++x) {
      const int k = checked_index(a[x], (player == 1 ? a1 : a2) + 1, key);
      if (k < 1) fail(std::string("'") + key + "' entries must be >= 1");
      if (player == 1)
        g.set_actions_at(x, k, g.actions_p2_at(x));
      else
        g.set_actions_at(x, g.actions_p1_at(x), k);
    }
  };
  apply_per_state("actions_p1_per_state", 1);
  apply_per_state("actions_p2_per_state", 2);

  if (!j.contains("transition") || !j.at("transition").is_array())
    fail("missing 'transition' array");
  for (const Json& e : j.at("transition")) {
    if (!e.is_array() || e.size() != 4) fail("transition entries must be [x, u, w, row]");
    const int x = checked_index(e[0], n, "transition state");
    const int u = checked_index(e[1], g.actions_p1_at(x), "transition action u");
    const int w = checked_index(e[2], g.actions_p2_at(x), "transition action w");
    const Json& row = e[3];
    if (!row.is_array()) fail("transition row must be an array");
    Vector dist = Vector::Zero(n);
    const bool sparse = row.empty() || row[0].is_array();
    if (sparse) {
      for (const Json& pr : row) {
        if (!pr.is_array() || pr.size() != 2) fail("sparse transition entries must be [state, prob]");
        const int y = checked_index(pr[0], n, "transition target");
        if (!pr[1].is_number()) fail("transition probabilities must be numbers");
        dist[y] += pr[1].get<double>();
      }
    } else {
      if (static_cast<int>(row.size()) != n)
        fail("dense transition row must have length " + std::to_string(n));
      dist = vector_from_json(row, "transition row");
    }
    g.set_transition(x, u, w, dist);
  }

  if (j.contains("payoff")) {
    if (!j.at("payoff").is_array()) fail("'payoff' must be an array");
    for (const Json& e : j.at("payoff")) {
      if (!e.is_array() || e.size() != 4) fail("payoff entries must be [x, u, w, value]");
      const int x = checked_index(e[0], n, "payoff state");
      const int u = checked_index(e[1], g.actions_p1_at(x), "payoff action u");
      const int w = checked_index(e[2], g.actions_p2_at(x), "payoff action w");
      if (!e[3].is_number()) fail("payoff values must be numbers");
      g.set_payoff(x, u, w, e[3].get<double>());
    }
  }

  if (j.contains("terminal_payoff"))
    g.set_terminal_payoff(vector_from_json(j.at("terminal_payoff"), "terminal_payoff"));

  if (j.contains("labels")) {
    const Json& labels = j.at("labels");
    if (!labels.is_object()) fail("'labels' must be an object");
    for (const auto& [key, val] : labels.items()) {
      int x = -1;
      try {
        x = std::stoi(key);
      } catch (...) {
        fail("label keys must be state indices, got '" + key + "'");
      }
      if (x < 0 || x >= n) fail("label state " + key + " out of range");
      if (!val.is_string()) fail("labels must be strings");
      g.set_label(x, val.get<std::string>());
    }
  }

  g.finalize();
  return g;
}

Game read_game_file(const std::string& path) { return game_from_json(read_json_file(path)); }

void write_game_file(const Game& g, const std::string& path) {
  write_json_file(game_to_json(g), path);
}

Json strategy_to_json(const StationaryStrategy& s) {
  Json out = Json::array();
  for (const auto& d : s.dist) out.push_back(vector_to_json(d));
  return out;
}

Json strategy_to_json(const MarkovStrategy& s) {
  Json out = Json::array();
  for (const auto& stage : s.stages) out.push_back(strategy_to_json(stage));
  return out;
}

StationaryStrategy stationary_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) fail("strategy must be a non-empty array");
  StationaryStrategy s;
  for (const auto& row : j) s.dist.push_back(vector_from_json(row, "strategy row"));
  return s;
}

MarkovStrategy markov_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) fail("stage strategy must be a non-empty array");
  MarkovStrategy s;
  for (const auto& stage : j) s.stages.push_back(stationary_from_json(stage));
  return s;
}

Json solution_to_json(const NStageSolution& sol, const Beta& beta1, const Beta& beta2) {
  Json j;
  j["kind"] = "nstage";
  j["N"] = sol.horizon;
  j["beta1"] = beta_to_json(beta1);
  j["beta2"] = beta_to_json(beta2);
  Json values = Json::array();
  for (const auto& v : sol.values) values.push_back(vector_to_json(v));
  j["values"] = std::move(values);
  j["sigma"] = strategy_to_json(sol.sigma);
  j["tau"] = strategy_to_json(sol.tau);
  j["max_gap"] = sol.max_gap;
  j["converged"] = sol.converged;
  return j;
}

Json solution_to_json(const DiscountedSolution& sol, const Beta& beta1, const Beta& beta2) {
  Json j;
  j["kind"] = "discounted";
  j["gamma"] = sol.gamma;
  j["beta1"] = beta_to_json(beta1);
  j["beta2"] = beta_to_json(beta2);
  j["value"] = vector_to_json(sol.value);
  j["sigma"] = strategy_to_json(sol.sigma);
  j["tau"] = strategy_to_json(sol.tau);
  j["residual"] = sol.residual;
  j["sweeps"] = sol.sweeps;
  j["converged"] = sol.converged;
  return j;
}

namespace {

// [state][action] nests two deep, [stage][state][action] three deep.
int nesting_depth(const Json& j) {
  int d = 0;
  const Json* cur = &j;
  while (cur->is_array() && !cur->empty()) {
    ++d;
    cur = &(*cur)[0];
  }
  return d;
}

}  // namespace

LoadedSolution solution_from_json(const Json& j) {
  LoadedSolution out;
  if (!j.is_object()) fail("solution document must be an object");
  out.kind = j.contains("kind") && j.at("kind").is_string() ? j.at("kind").get<std::string>()
                                                            : "strategies";
  if (j.contains("beta1")) out.beta1 = beta_from_json(j.at("beta1"));
  if (j.contains("beta2")) out.beta2 = beta_from_json(j.at("beta2"));
  if (j.contains("gamma")) {
    if (!j.at("gamma").is_number()) fail("'gamma' must be a number");
    out.gamma = j.at("gamma").get<double>();
  }
  if (j.contains("N")) out.horizon = require_int(j, "N", 1);

  auto load_side = [&](const char* key, std::optional<StationaryStrategy>& flat,
                       std::optional<MarkovStrategy>& staged) {
    if (!j.contains(key)) return;
    const Json& s = j.at(key);
    const int depth = nesting_depth(s);
    if (depth == 3)
      staged = markov_from_json(s);
    else if (depth == 2)
      flat = stationary_from_json(s);
    else
      fail(std::string("'") + key + "' must nest [state][action] or [stage][state][action]");
  };
  load_side("sigma", out.sigma, out.sigma_markov);
  load_side("tau", out.tau, out.tau_markov);
  if (!out.sigma && !out.sigma_markov && !out.tau && !out.tau_markov)
    fail("solution document has neither 'sigma' nor 'tau'");

  if (j.contains("values")) {
    for (const auto& v : j.at("values")) out.values.push_back(vector_from_json(v, "values"));
  } else if (j.contains("value")) {
    out.values.push_back(vector_from_json(j.at("value"), "value"));
  }
  return out;
}

LoadedSolution read_solution_file(const std::string& path) {
  return solution_from_json(read_json_file(path));
}

}  // namespace ersg
