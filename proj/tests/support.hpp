#pragma once

// Builders for hand-made positions used across the unit tests.

#include <memory>
#include <string>
#include <vector>

#include "arena/forward_model.hpp"
#include "arena/mode_config.hpp"
#include "arena/rng.hpp"

namespace arena::testing {

/// Mode with the given map rows and two unit types ("soldier", "medic"
/// [heal], "shover" [push], "king" [king]). Spawn zones are unused by the
/// builders below but must be valid, so rows 0 and last are reserved.
inline ModeConfig base_mode(std::vector<std::string> rows) {
  ModeConfig m;
  m.name = "test";
  const int h = static_cast<int>(rows.size());
  const int w = static_cast<int>(rows[0].size());
  std::vector<TileKind> tiles;
  for (const auto& r : rows) {
    for (char c : r) tiles.push_back(tile_from_char(c));
  }
  m.grid = Grid(w, h, std::move(tiles));
  m.unit_types = {
      {"soldier", 10, 3, 2, 1, 3, {}, false},
      {"medic", 10, 1, 1, 1, 3, {Ability::heal}, false},
      {"shover", 10, 0, 2, 1, 3, {Ability::push}, false},
      {"king", 12, 2, 1, 1, 3, {}, true},
      {"archer", 8, 2, 1, 3, 4, {}, false},
  };
  m.heal_amount = 4;
  m.roster = {"soldier"};
  for (int x = 0; x < w; ++x) {
    if (m.grid.at({x, 0}) == TileKind::plain) m.spawn_zones[0].push_back({x, 0});
    if (m.grid.at({x, h - 1}) == TileKind::plain) m.spawn_zones[1].push_back({x, h - 1});
  }
  return m;
}

inline std::vector<std::string> open_rows(int w, int h) { return std::vector<std::string>(static_cast<std::size_t>(h), std::string(static_cast<std::size_t>(w), '.')); }

struct Placement {
  int owner;
  const char* type;
  Position pos;
  int health = -1;  // -1: full
};

/// State with explicit units (ids in listed order); player 0 to move with
/// full action points.
inline GameState make_state(const ModeConfig& config, const std::vector<Placement>& units, int current = 0) {
  GameState s;
  s.mode = std::make_shared<const ModeConfig>(config);
  s.current_player = current;
  s.starting_player = 0;
  UnitId id = 0;
  for (const auto& p : units) {
    const int type = config.unit_type_index(p.type);
    const UnitType& t = config.unit_types[static_cast<std::size_t>(type)];
    Unit u;
    u.id = id++;
    u.owner = p.owner;
    u.type = type;
    u.pos = p.pos;
    u.max_health = t.health;
    u.health = p.health < 0 ? t.health : p.health;
    u.attack_damage = t.attack_damage;
    u.movement_range = t.movement_range;
    u.attack_range = t.attack_range;
    u.vision_range = t.vision_range;
    u.king = t.king;
    u.action_points = p.owner == current ? config.action_points : 0;
    s.units.push_back(u);
  }
  s.status = outcome(s);
  return s;
}

inline ModePtr shipped(const char* name) { return load_mode_ptr(name); }

/// Plays uniformly random legal actions (end_turn when no unit can act) for
/// `steps` forward-model calls or until terminal.
template <class Rng>
GameState random_walk(GameState s, int steps, Rng& rng) {
  for (int i = 0; i < steps && !s.terminal(); ++i) {
    Action a = Action::end_turn();
    if (auto actor = acting_unit(s)) {
      const auto legal = legal_actions(s, *actor);
      a = legal[rng.index(legal.size())];
    }
    s = advance(s, a);
  }
  return s;
}

}  // namespace arena::testing
