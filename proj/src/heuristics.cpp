#include "arena/heuristics.hpp"

namespace arena {

double combat_score(const GameState& state, int player, const HeuristicParams& params) {
  switch (state.status) {
    case Outcome::ongoing: break;
    case Outcome::draw: return 0.0;
    case Outcome::win_player0: return player == 0 ? params.terminal_value : -params.terminal_value;
    case Outcome::win_player1: return player == 1 ? params.terminal_value : -params.terminal_value;
  }
  double score = 0.0;
  for (const auto& u : state.units) {
    const double value = params.unit_bonus + static_cast<double>(u.health) / static_cast<double>(u.max_health);
    score += u.owner == player ? value : -value;
  }
  return score;
}

double mean_distance(const GameState& state, int player) {
  long long sum = 0;
  long long pairs = 0;
  for (const auto& a : state.units) {
    if (a.owner != player) continue;
    for (const auto& b : state.units) {
      if (b.owner == player) continue;
      sum += chebyshev(a.pos, b.pos);
      ++pairs;
    }
  }
  return pairs == 0 ? 0.0 : static_cast<double>(sum) / static_cast<double>(pairs);
}

ObjectiveVector objectives(const GameState& state, int player, const HeuristicParams& params) {
  return {combat_score(state, player, params), mean_distance(state, player)};
}

}  // namespace arena
