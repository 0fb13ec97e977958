#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ersg/discounted.hpp"
#include "ersg/game.hpp"
#include "ersg/nstage.hpp"

namespace ersg {

// Insertion-ordered documents so emitted files keep a stable, readable key
// order.
using Json = nlohmann::ordered_json;

Json read_json_file(const std::string& path);
void write_json_file(const Json& j, const std::string& path);

// Betas serialize as a number or the string "inf".
Json beta_to_json(const Beta& b);
Beta beta_from_json(const Json& j);

// Game documents carry {states, actions_p1, actions_p2, transition, payoff}
// plus optional actions_*_per_state, terminal_payoff, and labels. Transition
// entries are [x, u, w, row]; the row is either a dense probability vector
// over states or a list of [state, prob] pairs. Payoff entries are
// [x, u, w, value] and omitted entries are zero. The writer emits sparse
// rows when fewer than a quarter of all row entries are nonzero.
Json game_to_json(const Game& g);
Game game_from_json(const Json& j);
Game read_game_file(const std::string& path);
void write_game_file(const Game& g, const std::string& path);

// Strategies serialize as nested arrays: [state][action] for stationary,
// [stage][state][action] for stage-dependent.
Json strategy_to_json(const StationaryStrategy& s);
Json strategy_to_json(const MarkovStrategy& s);
StationaryStrategy stationary_from_json(const Json& j);
MarkovStrategy markov_from_json(const Json& j);

Json solution_to_json(const NStageSolution& sol, const Beta& beta1, const Beta& beta2);
Json solution_to_json(const DiscountedSolution& sol, const Beta& beta1, const Beta& beta2);

// A solver output or a bare strategy-pair document, as far as it goes:
// kind is "nstage", "discounted", or "strategies". Stage-dependent pairs
// populate the markov fields, stationary pairs the stationary ones.
struct LoadedSolution {
  std::string kind;
  std::optional<Beta> beta1, beta2;
  std::optional<double> gamma;
  std::optional<int> horizon;
  std::optional<StationaryStrategy> sigma, tau;
  std::optional<MarkovStrategy> sigma_markov, tau_markov;
  std::vector<Vector> values;
};

LoadedSolution solution_from_json(const Json& j);
LoadedSolution read_solution_file(const std::string& path);

}  // namespace ersg
