#pragma once

#include "arena/game_state.hpp"

namespace arena {

/// Two-objective state value: h1 (combat score) is maximized, h2 (mean
/// distance to the enemy) is minimized.
struct ObjectiveVector {
  double h1 = 0.0;
  double h2 = 0.0;

  friend bool operator==(const ObjectiveVector&, const ObjectiveVector&) = default;
};

struct HeuristicParams {
  double unit_bonus = 1.0;     // per living unit, on top of its health fraction
  double terminal_value = 1000.0;  // must exceed any reachable material score
};

/// Material balance from `player`'s perspective:
///   sum(own: bonus + hp/max_hp) - sum(enemy: bonus + hp/max_hp)
/// Terminal states score +terminal_value / -terminal_value / 0.
double combat_score(const GameState& state, int player, const HeuristicParams& params = {});

/// Mean Chebyshev distance over all (own, enemy) unit pairs; 0 when either
/// side has no units.
double mean_distance(const GameState& state, int player);

ObjectiveVector objectives(const GameState& state, int player, const HeuristicParams& params = {});

}  // namespace arena
