#include "ersg/gridworld.hpp"

#include "ersg/evaluate.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ersg {

const char* const kGridActionNames[kNumGridActions] = {"right", "left", "up", "down", "stay"};

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument("map: " + msg); }

}  // namespace

GridMap parse_map(const std::string& text) {
  GridMap m;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() && m.rows.empty()) continue;  // leading blank lines
    if (line.empty()) break;                       // blank line ends the map
    m.rows.push_back(line);
  }
  if (m.rows.empty()) fail("no rows");
  m.height = static_cast<int>(m.rows.size());
  m.width = static_cast<int>(m.rows[0].size());
  int goals = 0, p1s = 0, p2s = 0;
  for (int r = 0; r < m.height; ++r) {
    if (static_cast<int>(m.rows[r].size()) != m.width)
      fail("row " + std::to_string(r) + " has length " + std::to_string(m.rows[r].size()) +
           ", expected " + std::to_string(m.width));
    for (int c = 0; c < m.width; ++c) {
      switch (m.rows[r][c]) {
        case '.':
        case '#':
          break;
        case 'G':
          ++goals;
          m.goal = {r, c};
          break;
        case '1':
          ++p1s;
          m.start_p1 = {r, c};
          break;
        case '2':
          ++p2s;
          m.start_p2 = {r, c};
          break;
        default:
          fail(std::string("invalid character '") + m.rows[r][c] + "' at row " +
               std::to_string(r) + ", col " + std::to_string(c));
      }
    }
  }
  if (goals != 1) fail("expected exactly one 'G', found " + std::to_string(goals));
  if (p1s != 1) fail("expected exactly one '1', found " + std::to_string(p1s));
  if (p2s != 1) fail("expected exactly one '2', found " + std::to_string(p2s));
  return m;
}

Cell apply_move(const GridMap& m, const Cell& from, int action) {
  Cell to = from;
  switch (action) {
    case kRight: to.col += 1; break;
    case kLeft: to.col -= 1; break;
    case kUp: to.row -= 1; break;
    case kDown: to.row += 1; break;
    case kStay: break;
    default: throw std::invalid_argument("apply_move: bad action " + std::to_string(action));
  }
  if (m.wall(to.row, to.col)) return from;
  return to;
}

ProductGame build_game(const GridMap& m) {
  ProductGame pg;
  pg.map = m;
  pg.cell_ordinal.assign(static_cast<size_t>(m.height) * m.width, -1);
  for (int r = 0; r < m.height; ++r)
    for (int c = 0; c < m.width; ++c)
      if (m.rows[r][c] != '#') {
        pg.cell_ordinal[m.cell_id({r, c})] = static_cast<int>(pg.free_cells.size());
        pg.free_cells.push_back(m.cell_id({r, c}));
      }
  const int nfree = pg.num_free();
  const int live = nfree * nfree;
  pg.win_sink = live;
  pg.capture_sink = live + 1;
  pg.start_state = pg.state_of(pg.cell_ordinal[m.cell_id(m.start_p1)],
                               pg.cell_ordinal[m.cell_id(m.start_p2)]);

  Game g(live + 2, kNumGridActions, kNumGridActions);
  const int goal_id = m.cell_id(m.goal);
  for (int i1 = 0; i1 < nfree; ++i1) {
    const Cell c1{pg.free_cells[i1] / m.width, pg.free_cells[i1] % m.width};
    for (int i2 = 0; i2 < nfree; ++i2) {
      const Cell c2{pg.free_cells[i2] / m.width, pg.free_cells[i2] % m.width};
      const int x = pg.state_of(i1, i2);
      g.set_label(x, "(" + std::to_string(c1.row) + "," + std::to_string(c1.col) + ")|(" +
                         std::to_string(c2.row) + "," + std::to_string(c2.col) + ")");
      for (int u = 0; u < kNumGridActions; ++u) {
        const Cell n1 = apply_move(m, c1, u);
        for (int w = 0; w < kNumGridActions; ++w) {
          const Cell n2 = apply_move(m, c2, w);
          Vector next = Vector::Zero(live + 2);
          double pay = 0.0;
          if (m.cell_id(n1) == goal_id) {
            next[pg.win_sink] = 1.0;
            pay = 1.0;
          } else if (n1 == n2) {
            next[pg.capture_sink] = 1.0;
            pay = -1.0;
          } else {
            next[pg.state_of(pg.cell_ordinal[m.cell_id(n1)], pg.cell_ordinal[m.cell_id(n2)])] =
                1.0;
          }
          g.set_transition(x, u, w, next);
          g.set_payoff(x, u, w, pay);
        }
      }
    }
  }
  for (int sink : {pg.win_sink, pg.capture_sink}) {
    g.set_actions_at(sink, 1, 1);
    Vector self = Vector::Zero(live + 2);
    self[sink] = 1.0;
    g.set_transition(sink, 0, 0, self);
    g.set_payoff(sink, 0, 0, 0.0);
  }
  g.set_label(pg.win_sink, "WIN");
  g.set_label(pg.capture_sink, "CAPTURE");
  g.finalize();
  pg.game = std::move(g);
  return pg;
}

StationaryStrategy transfer_strategy(const ProductGame& from, const ProductGame& to,
                                     const StationaryStrategy& s, int player) {
  if (player != 1 && player != 2)
    throw std::invalid_argument("transfer_strategy: player must be 1 or 2");
  if (from.map.height != to.map.height || from.map.width != to.map.width)
    throw TransferError("transfer_strategy: board dimensions differ (" +
                        std::to_string(from.map.height) + "x" + std::to_string(from.map.width) +
                        " vs " + std::to_string(to.map.height) + "x" +
                        std::to_string(to.map.width) + ")");
  require_strategy(from.game, s, player, "transfer_strategy: source strategy");

  StationaryStrategy out;
  out.dist.resize(to.game.num_states());
  const int nfree_to = to.num_free();
  for (int x = 0; x < nfree_to * nfree_to; ++x) {
    auto [o1, o2] = to.ordinals_of(x);
    const int cell1 = to.free_cells[o1];
    const int cell2 = to.free_cells[o2];
    const int s1 = from.cell_ordinal[cell1];
    const int s2 = from.cell_ordinal[cell2];
    const int acts =
        player == 1 ? to.game.actions_p1_at(x) : to.game.actions_p2_at(x);
    if (s1 < 0 || s2 < 0) {
      out.dist[x] = Vector::Constant(acts, 1.0 / acts);
    } else {
      const Vector& src = s.at(from.state_of(s1, s2));
      if (src.size() != acts)
        throw TransferError("transfer_strategy: action count mismatch at state " +
                            std::to_string(x));
      out.dist[x] = src;
    }
  }
  out.dist[to.win_sink] = Vector::Ones(1);
  out.dist[to.capture_sink] = Vector::Ones(1);
  return out;
}

GridMap load_map(const std::string& spec) {
  constexpr const char* kPrefix = "builtin:";
  if (spec.rfind(kPrefix, 0) == 0) return parse_map(builtin_map_text(spec.substr(8)));
  std::ifstream in(spec);
  if (!in) throw std::invalid_argument("cannot open map file '" + spec + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_map(buf.str());
}

}  // namespace ersg
