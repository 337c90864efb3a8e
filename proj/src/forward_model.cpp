#include "arena/forward_model.hpp"

#include <algorithm>
#include <string>

#include "arena/rng.hpp"

namespace arena {
namespace {

constexpr int kNeighbours[8][2] = {{-1, -1}, {0, -1}, {1, -1}, {-1, 0}, {1, 0}, {-1, 1}, {0, 1}, {1, 1}};

// Scratch buffers reused across calls; one set per thread.
struct Scratch {
  std::vector<std::int16_t> depth;
  std::vector<std::uint8_t> occupied;
  std::vector<int> frontier;
};

Scratch& scratch(int area) {
  thread_local Scratch s;
  if (static_cast<int>(s.depth.size()) < area) {
    s.depth.resize(static_cast<std::size_t>(area));
    s.occupied.resize(static_cast<std::size_t>(area));
    s.frontier.reserve(static_cast<std::size_t>(area));
  }
  return s;
}

int sign(int v) { return (v > 0) - (v < 0); }

// Straight-line push step; diagonals resolve along the dominant axis, ties toward x.
Position push_step(Position from, Position to) {
  const int dx = to.x - from.x;
  const int dy = to.y - from.y;
  if (std::abs(dx) >= std::abs(dy)) return {sign(dx), 0};
  return {0, sign(dy)};
}

enum class PushResult { illegal, displaced, killed };

PushResult resolve_push(const GameState& s, const Unit& pusher, const Unit& target, Position* destination) {
  const Position step = push_step(pusher.pos, target.pos);
  const Position dest{target.pos.x + step.x, target.pos.y + step.y};
  if (destination) *destination = dest;
  const Grid& g = s.grid();
  if (!g.in_bounds(dest)) return PushResult::illegal;
  switch (g.at(dest)) {
    case TileKind::hole: return PushResult::killed;
    case TileKind::impassable: return PushResult::illegal;
    case TileKind::plain: return s.unit_at(dest) ? PushResult::illegal : PushResult::displaced;
  }
  return PushResult::illegal;
}

// Breadth-first reachability; depth[i] holds the step count or -1.
void flood(const GameState& s, const Unit& unit, Scratch& sc) {
  const Grid& g = s.grid();
  const int area = g.area();
  std::fill_n(sc.depth.begin(), area, std::int16_t{-1});
  std::fill_n(sc.occupied.begin(), area, std::uint8_t{0});
  for (const auto& u : s.units) sc.occupied[static_cast<std::size_t>(g.index(u.pos))] = 1;

  sc.frontier.clear();
  const int start = g.index(unit.pos);
  sc.depth[static_cast<std::size_t>(start)] = 0;
  sc.frontier.push_back(start);
  for (std::size_t head = 0; head < sc.frontier.size(); ++head) {
    const int cur = sc.frontier[head];
    const int d = sc.depth[static_cast<std::size_t>(cur)];
    if (d >= unit.movement_range) continue;
    const Position p = g.position(cur);
    for (const auto& n : kNeighbours) {
      const Position q{p.x + n[0], p.y + n[1]};
      if (!g.walkable(q)) continue;
      const int qi = g.index(q);
      if (sc.depth[static_cast<std::size_t>(qi)] >= 0 || sc.occupied[static_cast<std::size_t>(qi)]) continue;
      sc.depth[static_cast<std::size_t>(qi)] = static_cast<std::int16_t>(d + 1);
      sc.frontier.push_back(qi);
    }
  }
}

const Unit& checked_actor(const GameState& s, UnitId id) {
  const Unit* u = s.find(id);
  if (!u) throw GameError("unknown unit id " + std::to_string(id));
  if (u->owner != s.current_player) {
    throw GameError("unit " + std::to_string(id) + " is not owned by the current player");
  }
  return *u;
}

struct Targeted {
  Position pos;
  UnitId id;
};

void append_sorted(std::vector<Action>& out, Verb verb, UnitId actor, std::vector<Targeted>& targets) {
  std::sort(targets.begin(), targets.end(), [](const Targeted& a, const Targeted& b) {
    if (!(a.pos == b.pos)) return row_major_less(a.pos, b.pos);
    return a.id < b.id;
  });
  for (const auto& t : targets) out.push_back({verb, actor, t.pos, t.id});
}

bool any_action_points(const GameState& s, int player) {
  return std::any_of(s.units.begin(), s.units.end(),
                     [player](const Unit& u) { return u.owner == player && u.action_points > 0; });
}

void remove_dead(GameState& s) {
  std::erase_if(s.units, [](const Unit& u) { return u.health <= 0; });
}

void end_turn_in_place(GameState& s) {
  const int ending = s.current_player;
  s.current_player = 1 - ending;
  if (ending != s.starting_player) {
    ++s.turn;
    const ModeConfig& m = s.config();
    if (m.round_effect == RoundEffect::decay) {
      for (auto& u : s.units) u.health -= m.decay_amount;
      remove_dead(s);
    }
  }
  const int allowance = s.config().action_points;
  for (auto& u : s.units) {
    if (u.owner == s.current_player) u.action_points = allowance;
  }
  s.status = outcome(s);
}

// Validates `a` against `s`; returns an empty string when legal.
std::string diagnose(const GameState& s, const Action& a) {
  if (s.terminal()) return "state is terminal";
  if (a.is_end_turn()) return {};
  const Unit* actor = s.find(a.actor);
  if (!actor) return "unknown actor " + std::to_string(a.actor);
  if (actor->owner != s.current_player) return "actor " + std::to_string(a.actor) + " belongs to the inactive player";
  if (actor->action_points <= 0) return "actor " + std::to_string(a.actor) + " has no action points";
  const ModeConfig& m = s.config();

  if (a.verb == Verb::move) {
    if (!s.grid().in_bounds(a.target)) return "move target out of bounds";
    Scratch& sc = scratch(s.grid().area());
    flood(s, *actor, sc);
    const int d = sc.depth[static_cast<std::size_t>(s.grid().index(a.target))];
    if (d <= 0) return "move target not reachable";
    return {};
  }

  const Unit* target = s.find(a.target_id);
  if (!target) return "unknown target " + std::to_string(a.target_id);
  if (!(target->pos == a.target)) return "target position does not match target unit";
  const int dist = chebyshev(actor->pos, target->pos);
  switch (a.verb) {
    case Verb::attack:
      if (target->owner == actor->owner) return "cannot attack a friendly unit";
      if (actor->attack_damage <= 0) return "actor cannot attack";
      if (dist > actor->attack_range) return "target out of attack range";
      return {};
    case Verb::heal:
      if (!actor->has_ability(m, Ability::heal)) return "actor has no heal ability";
      if (target->owner != actor->owner) return "cannot heal an enemy unit";
      if (dist > m.ability_range) return "target out of ability range";
      return {};
    case Verb::push:
      if (!m.push_enabled || !actor->has_ability(m, Ability::push)) return "actor has no push ability";
      if (target->owner == actor->owner) return "cannot push a friendly unit";
      if (target->id == actor->id || dist > m.ability_range) return "target out of ability range";
      if (resolve_push(s, *actor, *target, nullptr) == PushResult::illegal) return "push destination blocked";
      return {};
    default:
      return "unknown verb";
  }
}

}  // namespace

std::vector<Position> reachable_tiles(const GameState& state, const Unit& unit) {
  const Grid& g = state.grid();
  Scratch& sc = scratch(g.area());
  flood(state, unit, sc);
  std::vector<Position> out;
  // frontier is BFS order; emit row-major by scanning the grid.
  for (int i = 0; i < g.area(); ++i) {
    if (sc.depth[static_cast<std::size_t>(i)] > 0) out.push_back(g.position(i));
  }
  return out;
}

std::vector<Action> legal_actions(const GameState& state, UnitId unit_id) {
  std::vector<Action> out;
  if (state.terminal()) {
    if (!state.find(unit_id)) throw GameError("unknown unit id " + std::to_string(unit_id));
    return out;
  }
  const Unit& unit = checked_actor(state, unit_id);
  if (unit.action_points <= 0) return out;
  const ModeConfig& m = state.config();

  for (Position p : reachable_tiles(state, unit)) out.push_back(Action::move(unit.id, p));

  std::vector<Targeted> targets;
  if (unit.attack_damage > 0) {
    for (const auto& u : state.units) {
      if (u.owner != unit.owner && chebyshev(u.pos, unit.pos) <= unit.attack_range) targets.push_back({u.pos, u.id});
    }
    append_sorted(out, Verb::attack, unit.id, targets);
  }
  if (unit.has_ability(m, Ability::heal)) {
    targets.clear();
    for (const auto& u : state.units) {
      if (u.owner == unit.owner && chebyshev(u.pos, unit.pos) <= m.ability_range) targets.push_back({u.pos, u.id});
    }
    append_sorted(out, Verb::heal, unit.id, targets);
  }
  if (m.push_enabled && unit.has_ability(m, Ability::push)) {
    targets.clear();
    for (const auto& u : state.units) {
      if (u.owner == unit.owner || chebyshev(u.pos, unit.pos) > m.ability_range) continue;
      if (resolve_push(state, unit, u, nullptr) != PushResult::illegal) targets.push_back({u.pos, u.id});
    }
    append_sorted(out, Verb::push, unit.id, targets);
  }
  return out;
}

Position push_destination(Position pusher, Position target) {
  const Position step = push_step(pusher, target);
  return {target.x + step.x, target.y + step.y};
}

bool is_legal(const GameState& state, const Action& action) { return diagnose(state, action).empty(); }

GameState advance(const GameState& state, const Action& action) {
  if (auto why = diagnose(state, action); !why.empty()) {
    throw IllegalAction("illegal action [" + describe(action) + "]: " + why);
  }
  if (action.is_end_turn()) return end_turn(state);

  GameState next = state;
  Unit& actor = *next.find(action.actor);
  --actor.action_points;
  const ModeConfig& m = next.config();
  switch (action.verb) {
    case Verb::move:
      actor.pos = action.target;
      break;
    case Verb::attack:
      next.find(action.target_id)->health -= actor.attack_damage;
      break;
    case Verb::heal: {
      Unit& t = *next.find(action.target_id);
      t.health = std::min(t.max_health, t.health + m.heal_amount);
      break;
    }
    case Verb::push: {
      Unit& t = *next.find(action.target_id);
      Position dest;
      if (resolve_push(next, actor, t, &dest) == PushResult::killed) {
        t.health = 0;
      } else {
        t.pos = dest;
      }
      break;
    }
    case Verb::end_turn:
      break;
  }
  remove_dead(next);
  next.status = outcome(next);
  if (!next.terminal() && !any_action_points(next, next.current_player)) end_turn_in_place(next);
  return next;
}

GameState end_turn(const GameState& state) {
  if (state.terminal()) throw IllegalAction("illegal action [end_turn]: state is terminal");
  GameState next = state;
  end_turn_in_place(next);
  return next;
}

Outcome outcome(const GameState& state) {
  const ModeConfig& m = state.config();
  bool alive[2] = {false, false};
  for (int p = 0; p < 2; ++p) {
    alive[p] = m.win_rule == WinRule::king_death ? state.hidden_kings[static_cast<std::size_t>(p)] > 0
                                                 : state.hidden_units[static_cast<std::size_t>(p)] > 0;
  }
  for (const auto& u : state.units) {
    if (m.win_rule == WinRule::last_side_standing || u.king) alive[u.owner] = true;
  }
  if (!alive[0] && !alive[1]) return Outcome::draw;
  if (!alive[0]) return Outcome::win_player1;
  if (!alive[1]) return Outcome::win_player0;
  if (state.turn >= m.turn_limit) return Outcome::draw;
  return Outcome::ongoing;
}

GameState observe(const GameState& state, int player) {
  if (!state.config().fog_enabled) return state;
  GameState seen = state;
  const int enemy = 1 - player;
  std::erase_if(seen.units, [&](const Unit& e) {
    if (e.owner != enemy) return false;
    const bool visible = std::any_of(state.units.begin(), state.units.end(), [&](const Unit& f) {
      return f.owner == player && chebyshev(f.pos, e.pos) <= f.vision_range;
    });
    if (!visible) {
      ++seen.hidden_units[static_cast<std::size_t>(enemy)];
      if (e.king) ++seen.hidden_kings[static_cast<std::size_t>(enemy)];
    }
    return !visible;
  });
  return seen;
}

namespace {

// Cheap existence check equivalent to !legal_actions(s, u.id).empty().
bool has_legal_action(const GameState& s, const Unit& unit) {
  const ModeConfig& m = s.config();
  if (unit.movement_range > 0) {
    for (const auto& n : kNeighbours) {
      const Position q{unit.pos.x + n[0], unit.pos.y + n[1]};
      if (s.grid().walkable(q) && !s.unit_at(q)) return true;
    }
  }
  if (unit.has_ability(m, Ability::heal)) return true;  // self-heal is always available
  const bool can_push = m.push_enabled && unit.has_ability(m, Ability::push);
  for (const auto& u : s.units) {
    if (u.owner == unit.owner) continue;
    const int d = chebyshev(u.pos, unit.pos);
    if (unit.attack_damage > 0 && d <= unit.attack_range) return true;
    if (can_push && d <= m.ability_range && resolve_push(s, unit, u, nullptr) != PushResult::illegal) return true;
  }
  return false;
}

}  // namespace

std::optional<UnitId> acting_unit(const GameState& state) {
  if (state.terminal()) return std::nullopt;
  std::optional<UnitId> best;
  for (const auto& u : state.units) {
    if (u.owner != state.current_player || u.action_points <= 0) continue;
    if (best && *best < u.id) continue;
    if (has_legal_action(state, u)) best = u.id;
  }
  return best;
}

GameState initial_state(const ModePtr& mode, std::uint64_t seed, bool swap_seats) {
  const ModeConfig& m = *mode;
  GameState s;
  s.mode = mode;
  s.starting_player = swap_seats ? 1 : 0;
  s.current_player = s.starting_player;

  Rng rng(derive_seed(seed, 0x5eedULL));
  std::vector<Position> sides[2] = {m.spawn_zones[0], m.spawn_zones[1]};
  for (auto& side : sides) rng.shuffle(std::span<Position>(side));

  UnitId next_id = 0;
  for (int player = 0; player < 2; ++player) {
    // Unswapped: player p takes side p. Swapped: the same layout with owners exchanged.
    const auto& tiles = sides[swap_seats ? 1 - player : player];
    for (std::size_t i = 0; i < m.roster.size(); ++i) {
      const int type = m.unit_type_index(m.roster[i]);
      const UnitType& t = m.unit_types[static_cast<std::size_t>(type)];
      Unit u;
      u.id = next_id++;
      u.owner = player;
      u.type = type;
      u.pos = tiles[i];
      u.health = u.max_health = t.health;
      u.attack_damage = t.attack_damage;
      u.movement_range = t.movement_range;
      u.attack_range = t.attack_range;
      u.vision_range = t.vision_range;
      u.king = t.king;
      u.action_points = player == s.current_player ? m.action_points : 0;
      s.units.push_back(u);
    }
  }
  s.status = outcome(s);
  return s;
}

namespace {

Position reflect(const Grid& g, Position p) { return {g.width() - 1 - p.x, p.y}; }

}  // namespace

GameState mirrored(const GameState& state) {
  const ModeConfig& m = state.config();
  auto reflected = std::make_shared<ModeConfig>(m);
  std::vector<TileKind> tiles(static_cast<std::size_t>(m.grid.area()));
  for (int y = 0; y < m.grid.height(); ++y) {
    for (int x = 0; x < m.grid.width(); ++x) {
      tiles[static_cast<std::size_t>(m.grid.index({x, y}))] = m.grid.at(reflect(m.grid, {x, y}));
    }
  }
  reflected->grid = Grid(m.grid.width(), m.grid.height(), std::move(tiles));
  for (int p = 0; p < 2; ++p) {
    reflected->spawn_zones[p].clear();
    for (Position q : m.spawn_zones[1 - p]) reflected->spawn_zones[p].push_back(reflect(m.grid, q));
  }

  GameState out = state;
  out.mode = std::move(reflected);
  for (auto& u : out.units) {
    u.owner = 1 - u.owner;
    u.pos = reflect(m.grid, u.pos);
  }
  out.current_player = 1 - state.current_player;
  out.starting_player = 1 - state.starting_player;
  std::swap(out.hidden_units[0], out.hidden_units[1]);
  std::swap(out.hidden_kings[0], out.hidden_kings[1]);
  if (state.status == Outcome::win_player0) out.status = Outcome::win_player1;
  if (state.status == Outcome::win_player1) out.status = Outcome::win_player0;
  return out;
}

Action mirrored(const GameState& state, const Action& action) {
  Action out = action;
  if (!action.is_end_turn()) out.target = reflect(state.grid(), action.target);
  return out;
}

}  // namespace arena
