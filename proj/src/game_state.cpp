#include "arena/game_state.hpp"

#include <algorithm>
#include <sstream>

namespace arena {

bool Unit::has_ability(const ModeConfig& mode, Ability a) const {
  const auto& abilities = mode.unit_types[static_cast<std::size_t>(type)].abilities;
  return std::find(abilities.begin(), abilities.end(), a) != abilities.end();
}

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::ongoing: return "ongoing";
    case Outcome::win_player0: return "win0";
    case Outcome::win_player1: return "win1";
    case Outcome::draw: return "draw";
  }
  return "?";
}

std::string_view to_string(Verb v) {
  switch (v) {
    case Verb::move: return "move";
    case Verb::attack: return "attack";
    case Verb::heal: return "heal";
    case Verb::push: return "push";
    case Verb::end_turn: return "end_turn";
  }
  return "?";
}

std::string describe(const Action& a) {
  std::ostringstream out;
  out << to_string(a.verb);
  if (a.is_end_turn()) return out.str();
  out << " actor=" << a.actor << " target=(" << a.target.x << "," << a.target.y << ")";
  if (a.target_id != kNoUnit) out << " target_id=" << a.target_id;
  return out.str();
}

const Unit* GameState::find(UnitId id) const {
  for (const auto& u : units) {
    if (u.id == id) return &u;
  }
  return nullptr;
}

Unit* GameState::find(UnitId id) {
  for (auto& u : units) {
    if (u.id == id) return &u;
  }
  return nullptr;
}

const Unit* GameState::unit_at(Position p) const {
  for (const auto& u : units) {
    if (u.pos == p) return &u;
  }
  return nullptr;
}

int GameState::count_units(int player) const {
  return static_cast<int>(std::count_if(units.begin(), units.end(), [player](const Unit& u) { return u.owner == player; }));
}

bool operator==(const GameState& a, const GameState& b) {
  const bool same_mode = a.mode == b.mode || (a.mode && b.mode && *a.mode == *b.mode);
  return same_mode && a.units == b.units && a.current_player == b.current_player &&
         a.starting_player == b.starting_player && a.turn == b.turn && a.status == b.status &&
         a.hidden_units == b.hidden_units && a.hidden_kings == b.hidden_kings;
}

}  // namespace arena
