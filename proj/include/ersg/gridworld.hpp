#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ersg/game.hpp"

namespace ersg {

// Grid cell in display coordinates: row 0 is the top line of the map text.
struct Cell {
  int row = 0;
  int col = 0;
  bool operator==(const Cell& o) const { return row == o.row && col == o.col; }
};

// Parsed pursuit grid. Alphabet: '.' free, '#' wall, 'G' goal, '1' player 1
// start, '2' player 2 start; exactly one of each marker, rectangular shape.
struct GridMap {
  int height = 0;
  int width = 0;
  std::vector<std::string> rows;
  Cell goal;
  Cell start_p1;
  Cell start_p2;

  bool wall(int r, int c) const {
    return r < 0 || r >= height || c < 0 || c >= width || rows[r][c] == '#';
  }
  int cell_id(const Cell& c) const { return c.row * width + c.col; }
};

GridMap parse_map(const std::string& text);

// Player moves, in this fixed order. A move into a wall or off the board
// resolves to stay.
enum GridAction { kRight = 0, kLeft = 1, kUp = 2, kDown = 3, kStay = 4 };
inline constexpr int kNumGridActions = 5;
extern const char* const kGridActionNames[kNumGridActions];

Cell apply_move(const GridMap& m, const Cell& from, int action);

// Zero-sum pursuit game on joint positions. Live states are ordered pairs
// of free cells; two absorbing sinks with a single action each terminate
// play, so strategies carry no entropy after termination. Transitions that
// land player 1 on the goal pay +1 and move to the win sink (the goal takes
// precedence over a simultaneous meeting); transitions that land both
// players on the same non-goal cell pay -1 and move to the capture sink.
// Passing through each other is not a capture.
struct ProductGame {
  Game game;
  GridMap map;
  std::vector<int> free_cells;   // ordinal -> cell id (row-major order)
  std::vector<int> cell_ordinal; // cell id -> ordinal or -1
  int win_sink = -1;
  int capture_sink = -1;
  int start_state = -1;

  int num_free() const { return static_cast<int>(free_cells.size()); }
  int state_of(int ord1, int ord2) const { return ord1 * num_free() + ord2; }
  std::pair<int, int> ordinals_of(int state) const {
    return {state / num_free(), state % num_free()};
  }
};

ProductGame build_game(const GridMap& m);

// Built-in study maps by name: "nominal", "blocked", "side". The map text
// lives in one data file so layout questions have a single point of truth.
const std::string& builtin_map_text(const std::string& name);
std::vector<std::string> builtin_map_names();

// Reads a map argument: "builtin:NAME" or a path to an ASCII map file.
GridMap load_map(const std::string& spec);

// Raised when a strategy cannot be carried between boards at all.
class TransferError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Carries a stationary strategy from one product game to another with the
// same board dimensions. States are matched by cell pairs; action indices
// keep their meaning and moves into new walls resolve to stay under the
// target dynamics. Pairs with no source counterpart fall back to uniform.
// Throws TransferError when the grids have different dimensions.
StationaryStrategy transfer_strategy(const ProductGame& from, const ProductGame& to,
                                     const StationaryStrategy& s, int player);

}  // namespace ersg
