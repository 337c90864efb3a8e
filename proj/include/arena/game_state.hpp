#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "arena/grid.hpp"
#include "arena/mode_config.hpp"

namespace arena {

using UnitId = int;
inline constexpr UnitId kNoUnit = -1;

struct Unit {
  UnitId id = kNoUnit;
  int owner = 0;
  int type = 0;  // index into ModeConfig::unit_types
  Position pos;
  int health = 1;
  int max_health = 1;
  int attack_damage = 0;
  int movement_range = 0;
  int attack_range = 0;
  int vision_range = 0;
  int action_points = 0;
  bool king = false;

  bool has_ability(const ModeConfig& mode, Ability a) const;

  friend bool operator==(const Unit&, const Unit&) = default;
};

enum class Outcome : std::uint8_t { ongoing, win_player0, win_player1, draw };

std::string_view to_string(Outcome o);

inline Outcome win_for(int player) { return player == 0 ? Outcome::win_player0 : Outcome::win_player1; }

enum class Verb : std::uint8_t { move, attack, heal, push, end_turn };

std::string_view to_string(Verb v);

struct Action {
  Verb verb = Verb::end_turn;
  UnitId actor = kNoUnit;
  Position target;              // destination (move) or target unit's tile
  UnitId target_id = kNoUnit;   // attack / heal / push

  static Action end_turn() { return {}; }
  static Action move(UnitId actor, Position to) { return {Verb::move, actor, to, kNoUnit}; }
  static Action on_unit(Verb verb, UnitId actor, const Unit& target) { return {verb, actor, target.pos, target.id}; }

  bool is_end_turn() const { return verb == Verb::end_turn; }

  friend bool operator==(const Action&, const Action&) = default;
};

std::string describe(const Action& a);

/// Complete game snapshot. Value type: the forward model never mutates its
/// input and always returns a fresh successor.
struct GameState {
  ModePtr mode;
  std::vector<Unit> units;  // living units only; order is not significant
  int current_player = 0;
  int starting_player = 0;  // the player who opens every round
  int turn = 0;
  Outcome status = Outcome::ongoing;
  // Enemy units redacted by observe(); elimination checks count them as alive.
  std::array<std::uint8_t, 2> hidden_units{};
  std::array<std::uint8_t, 2> hidden_kings{};

  const ModeConfig& config() const { return *mode; }
  const Grid& grid() const { return mode->grid; }

  const Unit* find(UnitId id) const;
  Unit* find(UnitId id);
  const Unit* unit_at(Position p) const;

  bool terminal() const { return status != Outcome::ongoing; }
  int count_units(int player) const;

  friend bool operator==(const GameState& a, const GameState& b);
};

}  // namespace arena
