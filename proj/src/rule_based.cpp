#include "arena/rule_based.hpp"

#include <algorithm>
#include <deque>
#include <limits>

#include "arena/forward_model.hpp"

namespace arena {

namespace {

std::vector<const Unit*> ready_units(const GameState& state) {
  std::vector<const Unit*> out;
  for (const auto& u : state.units) {
    if (u.owner == state.current_player && u.action_points > 0) out.push_back(&u);
  }
  std::sort(out.begin(), out.end(), [](const Unit* a, const Unit* b) { return a->id < b->id; });
  return out;
}

const Unit* nearest_enemy(const GameState& state, const Unit& unit) {
  const Unit* best = nullptr;
  for (const auto& e : state.units) {
    if (e.owner == unit.owner) continue;
    if (!best) {
      best = &e;
      continue;
    }
    const int d = chebyshev(unit.pos, e.pos);
    const int bd = chebyshev(unit.pos, best->pos);
    if (d < bd || (d == bd && e.id < best->id)) best = &e;
  }
  return best;
}

// Move to the reachable tile with the smallest score, if it beats `current`.
template <class Score>
std::optional<Action> step_to_minimum(const std::vector<Action>& legal, UnitId actor, int current, Score score) {
  std::optional<Action> best;
  int best_score = current;
  for (const auto& a : legal) {
    if (a.verb != Verb::move) continue;
    const int s = score(a.target);
    if (s < best_score) {
      best_score = s;
      best = Action::move(actor, a.target);
    }
  }
  return best;
}

std::optional<Action> combat_action(const GameState& state, const Unit& unit) {
  const auto legal = legal_actions(state, unit.id);
  if (legal.empty()) return std::nullopt;

  const Action* heal = nullptr;
  const Unit* heal_target = nullptr;
  const Action* attack = nullptr;
  const Unit* attack_target = nullptr;
  int attack_support = 0;
  auto support = [&](const Unit& enemy) {
    int n = 0;
    for (const auto& o : state.units) {
      if (o.owner == enemy.owner && o.id != enemy.id && chebyshev(o.pos, enemy.pos) <= 1) ++n;
    }
    return n;
  };

  for (const auto& a : legal) {
    if (a.verb == Verb::heal) {
      const Unit* t = state.find(a.target_id);
      if (t->health >= t->max_health) continue;
      if (!heal_target || t->max_health > heal_target->max_health ||
          (t->max_health == heal_target->max_health && t->id < heal_target->id)) {
        heal = &a;
        heal_target = t;
      }
    } else if (a.verb == Verb::attack) {
      const Unit* t = state.find(a.target_id);
      const int s = support(*t);
      bool take = !attack_target;
      if (!take) {
        if (s != attack_support) {
          take = s < attack_support;
        } else if (t->attack_damage != attack_target->attack_damage) {
          take = t->attack_damage > attack_target->attack_damage;
        } else {
          take = t->id < attack_target->id;
        }
      }
      if (take) {
        attack = &a;
        attack_target = t;
        attack_support = s;
      }
    }
  }
  if (heal) return *heal;
  if (attack) return *attack;

  if (const Unit* enemy = nearest_enemy(state, unit)) {
    return step_to_minimum(legal, unit.id, chebyshev(unit.pos, enemy->pos),
                           [&](Position p) { return chebyshev(p, enemy->pos); });
  }
  const Grid& g = state.grid();
  const Position centre2{g.width() - 1, g.height() - 1};  // doubled coordinates
  auto to_centre = [&](Position p) { return chebyshev({2 * p.x, 2 * p.y}, centre2); };
  return step_to_minimum(legal, unit.id, to_centre(unit.pos), to_centre);
}

// 8-connected step distances from `source` over passable tiles not occupied by
// another unit; -1 marks unreachable tiles.
std::vector<int> distances_from(const GameState& state, Position source, UnitId self) {
  const Grid& g = state.grid();
  std::vector<int> dist(static_cast<std::size_t>(g.area()), -1);
  std::vector<char> blocked(dist.size(), 0);
  for (const auto& u : state.units) {
    if (u.id != self) blocked[static_cast<std::size_t>(g.index(u.pos))] = 1;
  }
  std::deque<Position> queue{source};
  dist[static_cast<std::size_t>(g.index(source))] = 0;
  while (!queue.empty()) {
    const Position p = queue.front();
    queue.pop_front();
    const int d = dist[static_cast<std::size_t>(g.index(p))];
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const Position q{p.x + dx, p.y + dy};
        if ((dx == 0 && dy == 0) || !g.walkable(q)) continue;
        const auto i = static_cast<std::size_t>(g.index(q));
        if (blocked[i] || dist[i] >= 0) continue;
        dist[i] = d + 1;
        queue.push_back(q);
      }
    }
  }
  return dist;
}

bool is_hole(const Grid& g, Position p) { return g.in_bounds(p) && g.at(p) == TileKind::hole; }

bool next_to_hole(const Grid& g, Position p) {
  return is_hole(g, {p.x + 1, p.y}) || is_hole(g, {p.x - 1, p.y}) || is_hole(g, {p.x, p.y + 1}) ||
         is_hole(g, {p.x, p.y - 1});
}

std::optional<Action> pusher_action(const GameState& state, const Unit& unit) {
  const auto legal = legal_actions(state, unit.id);
  if (legal.empty()) return std::nullopt;
  const Grid& g = state.grid();

  // Lethal push right now, lowest target id first.
  const Action* lethal = nullptr;
  for (const auto& a : legal) {
    if (a.verb != Verb::push || !is_hole(g, push_destination(unit.pos, a.target))) continue;
    if (!lethal || a.target_id < lethal->target_id) lethal = &a;
  }
  if (lethal) return *lethal;

  const bool can_push = unit.has_ability(state.config(), Ability::push);
  if (can_push) {
    // Closest stand tile that sets up a lethal push.
    const auto from_unit = distances_from(state, unit.pos, unit.id);
    const int range = state.config().ability_range;
    std::optional<Position> stand;
    int stand_dist = 0;
    UnitId stand_target = kNoUnit;
    for (int y = 0; y < g.height(); ++y) {
      for (int x = 0; x < g.width(); ++x) {
        const Position s{x, y};
        const int d = from_unit[static_cast<std::size_t>(g.index(s))];
        if (d <= 0) continue;
        for (const auto& e : state.units) {
          if (e.owner == unit.owner) continue;
          const int r = chebyshev(s, e.pos);
          if (r < 1 || r > range || !is_hole(g, push_destination(s, e.pos))) continue;
          if (!stand || d < stand_dist || (d == stand_dist && e.id < stand_target)) {
            stand = s;
            stand_dist = d;
            stand_target = e.id;
          }
        }
      }
    }
    if (stand) {
      const auto to_stand = distances_from(state, *stand, unit.id);
      auto score = [&](Position p) {
        const int d = to_stand[static_cast<std::size_t>(g.index(p))];
        return d < 0 ? std::numeric_limits<int>::max() : d;
      };
      if (auto step = step_to_minimum(legal, unit.id, score(unit.pos), score)) return step;
    }
  }

  if (const Unit* enemy = nearest_enemy(state, unit)) {
    auto score = [&](Position p) {
      return next_to_hole(g, p) ? std::numeric_limits<int>::max() : chebyshev(p, enemy->pos);
    };
    if (auto step = step_to_minimum(legal, unit.id, chebyshev(unit.pos, enemy->pos), score)) return step;
  }
  // Units that can fight still attack when nothing better exists.
  for (const auto& a : legal) {
    if (a.verb == Verb::attack) return a;
  }
  return std::nullopt;
}

template <class Policy>
Decision first_useful(const GameState& state, Policy policy) {
  Decision d;
  if (state.terminal()) return d;
  for (const Unit* u : ready_units(state)) {
    if (auto a = policy(state, *u)) {
      d.action = *a;
      return d;
    }
  }
  return d;
}

}  // namespace

Decision CombatAgent::decide(const GameState& state, Budget&, Rng&) { return first_useful(state, combat_action); }

Decision PusherAgent::decide(const GameState& state, Budget&, Rng&) { return first_useful(state, pusher_action); }

Decision RandomAgent::decide(const GameState& state, Budget&, Rng& rng) {
  Decision d;
  if (state.terminal()) return d;
  std::vector<Action> options;
  for (const Unit* u : ready_units(state)) {
    auto legal = legal_actions(state, u->id);
    options.insert(options.end(), legal.begin(), legal.end());
  }
  options.push_back(Action::end_turn());
  d.action = options[rng.index(options.size())];
  return d;
}

}  // namespace arena
