#include "ersg/gridworld.hpp"

#include <stdexcept>

// Map data only. Keep layout edits here so every consumer sees the same
// boards.

namespace ersg {

namespace {

const std::string kNominal =
    ".....\n"
    ".###.\n"
    "1...G\n"
    ".###.\n"
    "2....\n";

// Nominal board with the corridor to the goal walled off next to G.
const std::string kBlocked =
    ".....\n"
    ".###.\n"
    "1..#G\n"
    ".###.\n"
    "2....\n";

// Nominal board with the upper detour closed except at its right end.
const std::string kSide =
    ".....\n"
    "####.\n"
    "1...G\n"
    ".###.\n"
    "2....\n";

}  // namespace

const std::string& builtin_map_text(const std::string& name) {
  if (name == "nominal") return kNominal;
  if (name == "blocked") return kBlocked;
  if (name == "side") return kSide;
  throw std::invalid_argument("unknown builtin map '" + name +
                              "' (available: nominal, blocked, side)");
}

std::vector<std::string> builtin_map_names() { return {"nominal", "blocked", "side"}; }

}  // namespace ersg
