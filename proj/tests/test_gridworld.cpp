#include <doctest.h>

#include <random>
#include <set>

#include "ersg/evaluate.hpp"
#include "ersg/gridworld.hpp"

#include "oracles.hpp"

using namespace ersg;

TEST_CASE("map parsing reads markers and rejects malformed boards") {
  const GridMap m = parse_map(".G.\n#..\n1.2\n");
  CHECK(m.height == 3);
  CHECK(m.width == 3);
  CHECK(m.goal == Cell{0, 1});
  CHECK(m.start_p1 == Cell{2, 0});
  CHECK(m.start_p2 == Cell{2, 2});
  CHECK(m.wall(1, 0));
  CHECK(!m.wall(0, 0));
  CHECK(m.wall(-1, 0));  // outside counts as wall
  CHECK(m.wall(0, 3));

  CHECK_THROWS_AS(parse_map(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_map("G..\n1.\n..2\n"), std::invalid_argument);   // ragged
  CHECK_THROWS_AS(parse_map("GG.\n1.2\n"), std::invalid_argument);       // two goals
  CHECK_THROWS_AS(parse_map("...\n1.2\n"), std::invalid_argument);       // no goal
  CHECK_THROWS_AS(parse_map("G%.\n1.2\n"), std::invalid_argument);       // bad char
  CHECK_THROWS_AS(parse_map("G1.\n1.2\n"), std::invalid_argument);       // two p1
}

TEST_CASE("moves stop at walls and board edges") {
  const GridMap m = parse_map(".G.\n#..\n1.2\n");
  CHECK(apply_move(m, {2, 0}, kUp) == Cell{2, 0});     // wall above
  CHECK(apply_move(m, {2, 0}, kLeft) == Cell{2, 0});   // board edge
  CHECK(apply_move(m, {2, 0}, kRight) == Cell{2, 1});
  CHECK(apply_move(m, {2, 0}, kDown) == Cell{2, 0});   // bottom edge
  CHECK(apply_move(m, {2, 0}, kStay) == Cell{2, 0});
  CHECK(apply_move(m, {1, 1}, kUp) == Cell{0, 1});
}

TEST_CASE("builtin boards have the expected shape") {
  const GridMap nominal = parse_map(builtin_map_text("nominal"));
  CHECK(nominal.height == 5);
  CHECK(nominal.width == 5);
  const ProductGame pg = build_game(nominal);
  CHECK(pg.num_free() == 19);
  CHECK(pg.game.num_states() == 19 * 19 + 2);

  CHECK(build_game(parse_map(builtin_map_text("blocked"))).num_free() == 18);
  CHECK(build_game(parse_map(builtin_map_text("side"))).num_free() == 18);
  CHECK_THROWS_AS(builtin_map_text("mystery"), std::invalid_argument);
  CHECK(builtin_map_names().size() == 3);
}

TEST_CASE("the product game is a valid deterministic game") {
  const ProductGame pg = build_game(parse_map(builtin_map_text("nominal")));
  CHECK(validate_game(pg.game).empty());
  const int live = pg.num_free() * pg.num_free();
  for (int x = 0; x < live; ++x) {
    for (int u = 0; u < 5; ++u)
      for (int w = 0; w < 5; ++w) {
        // deterministic: exactly one successor with probability one
        int hits = 0;
        for (int y = 0; y < pg.game.num_states(); ++y) {
          const double p = pg.game.transition(x, u, w, y);
          CHECK((p == 0.0 || p == 1.0));
          if (p == 1.0) ++hits;
        }
        CHECK(hits == 1);
        const double r = pg.game.payoff(x, u, w);
        CHECK((r == 0.0 || r == 1.0 || r == -1.0));
      }
  }
  // sinks are single-action self-loops with zero payoff
  for (int sink : {pg.win_sink, pg.capture_sink}) {
    CHECK(pg.game.actions_p1_at(sink) == 1);
    CHECK(pg.game.actions_p2_at(sink) == 1);
    CHECK(pg.game.transition(sink, 0, 0, sink) == 1.0);
    CHECK(pg.game.payoff(sink, 0, 0) == 0.0);
  }
  CHECK(pg.game.label(pg.win_sink) == "WIN");
  CHECK(pg.game.label(pg.capture_sink) == "CAPTURE");
}

TEST_CASE("goal arrivals pay one and win even on a meeting") {
  // tiny corridor: 1 . G with the pursuer adjacent
  const GridMap m = parse_map("1.G\n.2.\n");
  const ProductGame pg = build_game(m);
  const int p1_mid = pg.cell_ordinal[m.cell_id({0, 1})];
  const int p2_mid = pg.cell_ordinal[m.cell_id({1, 1})];
  const int x = pg.state_of(p1_mid, p2_mid);
  // player 1 steps onto the goal; player 2 steps onto the goal as well
  CHECK(pg.game.payoff(x, kRight, kRight) == 1.0);
  CHECK(pg.game.transition(x, kRight, kRight, pg.win_sink) == 1.0);
  // the goal takes precedence even when both land there
  const int p2_goalward = pg.cell_ordinal[m.cell_id({1, 2})];
  const int x2 = pg.state_of(p1_mid, p2_goalward);
  CHECK(pg.game.payoff(x2, kRight, kUp) == 1.0);
  CHECK(pg.game.transition(x2, kRight, kUp, pg.win_sink) == 1.0);
}

TEST_CASE("meetings off the goal are captures, swaps are not") {
  const GridMap m = parse_map("1.G\n.2.\n");
  const ProductGame pg = build_game(m);
  const int p1_start = pg.cell_ordinal[m.cell_id({0, 0})];
  const int p2_mid = pg.cell_ordinal[m.cell_id({1, 1})];
  const int x = pg.state_of(p1_start, p2_mid);
  // both move to (0, 1): capture
  CHECK(pg.game.payoff(x, kRight, kUp) == -1.0);
  CHECK(pg.game.transition(x, kRight, kUp, pg.capture_sink) == 1.0);

  // adjacent players exchanging cells pass through each other
  const int p1_mid = pg.cell_ordinal[m.cell_id({0, 1})];
  const int p2_below = pg.cell_ordinal[m.cell_id({1, 1})];
  const int swap_state = pg.state_of(p1_mid, p2_below);
  CHECK(pg.game.payoff(swap_state, kDown, kUp) == 0.0);
  const int swapped = pg.state_of(pg.cell_ordinal[m.cell_id({1, 1})],
                                  pg.cell_ordinal[m.cell_id({0, 1})]);
  CHECK(pg.game.transition(swap_state, kDown, kUp, swapped) == 1.0);
}

TEST_CASE("labels name cell pairs in display coordinates") {
  const ProductGame pg = build_game(parse_map(builtin_map_text("nominal")));
  CHECK(pg.game.label(pg.start_state) == "(2,0)|(4,0)");
}

TEST_CASE("rushing the goal wins the nominal board against anything") {
  const ProductGame pg = build_game(parse_map(builtin_map_text("nominal")));
  // player 1 always moves right; player 2 plays uniformly at random
  StationaryStrategy rush;
  rush.dist.resize(pg.game.num_states());
  for (int x = 0; x < pg.game.num_states(); ++x) {
    rush.dist[x] = Vector::Zero(pg.game.actions_p1_at(x));
    rush.dist[x][0] = 1.0;  // right at live states, the only action at sinks
  }
  const Absorption a = win_probability(pg.game, rush, uniform_strategy(pg.game, 2),
                                       {pg.win_sink}, {pg.capture_sink}, pg.start_state);
  CHECK(a.win == doctest::Approx(1.0).epsilon(1e-12));

  // on the blocked board the same rush walks into the new wall and stalls
  const ProductGame blocked = build_game(parse_map(builtin_map_text("blocked")));
  const StationaryStrategy carried = transfer_strategy(pg, blocked, rush, 1);
  const Absorption b =
      win_probability(blocked.game, carried, uniform_strategy(blocked.game, 2),
                      {blocked.win_sink}, {blocked.capture_sink}, blocked.start_state);
  CHECK(b.win == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("strategies carry across boards by cell pair") {
  std::mt19937_64 rng(211);
  const ProductGame nominal = build_game(parse_map(builtin_map_text("nominal")));
  const ProductGame blocked = build_game(parse_map(builtin_map_text("blocked")));
  const StationaryStrategy s = oracles::random_stationary(rng, nominal.game, 1);

  // blocked's free cells are a subset of nominal's, so every pair transfers
  const StationaryStrategy t = transfer_strategy(nominal, blocked, s, 1);
  require_strategy(blocked.game, t, 1, "carried");
  const int live = blocked.num_free() * blocked.num_free();
  for (int x = 0; x < live; ++x) {
    const auto [o1, o2] = blocked.ordinals_of(x);
    const int src = nominal.state_of(nominal.cell_ordinal[blocked.free_cells[o1]],
                                     nominal.cell_ordinal[blocked.free_cells[o2]]);
    CHECK((t.at(x) - s.at(src)).cwiseAbs().maxCoeff() == 0.0);
  }

  // the reverse direction hits pairs that do not exist on blocked; those
  // fall back to uniform
  const StationaryStrategy sb = oracles::random_stationary(rng, blocked.game, 2);
  const StationaryStrategy tb = transfer_strategy(blocked, nominal, sb, 2);
  require_strategy(nominal.game, tb, 2, "carried back");
  const GridMap& nm = nominal.map;
  const int hole = nm.cell_id({2, 3});  // wall on blocked, free on nominal
  const int x_hole = nominal.state_of(nominal.cell_ordinal[hole], 0);
  CHECK(tb.at(x_hole)[0] == doctest::Approx(0.2).epsilon(1e-15));

  // boards of different shapes cannot exchange strategies
  const ProductGame small = build_game(parse_map("1.G\n.2.\n"));
  CHECK_THROWS_AS(transfer_strategy(nominal, small, s, 1), TransferError);
}

TEST_CASE("load_map resolves builtins and files") {
  const GridMap m = load_map("builtin:side");
  CHECK(m.rows[1] == "####.");
  CHECK_THROWS_AS(load_map("builtin:unknown"), std::invalid_argument);
  CHECK_THROWS_AS(load_map("/nonexistent/board.txt"), std::invalid_argument);
}
