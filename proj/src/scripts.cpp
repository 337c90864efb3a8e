#include "arena/scripts.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

#include "arena/forward_model.hpp"

namespace arena {

namespace {

constexpr std::array<std::string_view, kScriptCount> kNames = {"AttackClosest", "AttackWeakest", "RunAway",
                                                               "RunToFriends",  "UseSpecialAbility", "Random"};
constexpr std::array<std::string_view, kScriptCount> kAbbrevs = {"AC", "AW", "RA", "RF", "UA", "RND"};

}  // namespace

std::optional<ScriptId> script_from_code(int c) {
  if (c < 0 || c >= kScriptCount) return std::nullopt;
  return static_cast<ScriptId>(c);
}

std::string_view script_name(ScriptId s) { return kNames[static_cast<std::size_t>(code(s))]; }

std::string_view script_abbrev(ScriptId s) { return kAbbrevs[static_cast<std::size_t>(code(s))]; }

std::optional<ScriptId> script_from_name(std::string_view name) {
  for (int i = 0; i < kScriptCount; ++i) {
    if (kNames[static_cast<std::size_t>(i)] == name || kAbbrevs[static_cast<std::size_t>(i)] == name) {
      return static_cast<ScriptId>(i);
    }
  }
  return std::nullopt;
}

Portfolio::Portfolio() : scripts_(kAllScripts.begin(), kAllScripts.end()) {}

Portfolio::Portfolio(std::vector<ScriptId> scripts) : scripts_(std::move(scripts)) {
  std::sort(scripts_.begin(), scripts_.end());
  scripts_.erase(std::unique(scripts_.begin(), scripts_.end()), scripts_.end());
  if (scripts_.empty()) throw std::invalid_argument("portfolio must contain at least one script");
}

Portfolio Portfolio::from_mask(unsigned mask) {
  std::vector<ScriptId> s;
  for (ScriptId id : kAllScripts) {
    if (mask & (1u << code(id))) s.push_back(id);
  }
  return Portfolio(std::move(s));
}

bool Portfolio::contains(ScriptId s) const { return std::find(scripts_.begin(), scripts_.end(), s) != scripts_.end(); }

unsigned Portfolio::mask() const {
  unsigned m = 0;
  for (ScriptId s : scripts_) m |= 1u << code(s);
  return m;
}

namespace {

// Lexicographic "is a better than b" for candidate selection with the
// documented tie-breaks: objective first, then lowest id, then row-major.
struct Candidate {
  long long key = 0;  // smaller is better
  UnitId id = kNoUnit;
  Position pos;
  const Action* action = nullptr;
};

bool better(const Candidate& a, const Candidate& b) {
  if (a.key != b.key) return a.key < b.key;
  if (a.id != b.id) return a.id < b.id;
  return row_major_less(a.pos, b.pos);
}

const Action* best_of(const std::vector<Candidate>& cands) {
  const Candidate* best = nullptr;
  for (const auto& c : cands) {
    if (!best || better(c, *best)) best = &c;
  }
  return best ? best->action : nullptr;
}

struct Context {
  const GameState& state;
  const Unit& unit;
  std::vector<Action> legal;
  std::vector<const Unit*> enemies;
  std::vector<const Unit*> allies;  // excludes the unit itself
};

std::vector<const Action*> with_verb(const std::vector<Action>& legal, Verb v) {
  std::vector<const Action*> out;
  for (const auto& a : legal) {
    if (a.verb == v) out.push_back(&a);
  }
  return out;
}

// Moves only: key computed per destination; requires a strict improvement over
// staying put. Ties resolve row-major.
template <class Key>
const Action* best_move(const Context& c, Key key) {
  const long long here = key(c.unit.pos);
  const Action* best = nullptr;
  long long best_key = here;
  for (const auto& a : c.legal) {
    if (a.verb != Verb::move) continue;
    const long long k = key(a.target);
    if (k < best_key || (best && k == best_key && row_major_less(a.target, best->target))) {
      best_key = k;
      best = &a;
    }
  }
  return best;
}

const Unit* closest_enemy(const Context& c) {
  const Unit* best = nullptr;
  int best_d = std::numeric_limits<int>::max();
  for (const Unit* e : c.enemies) {
    const int d = chebyshev(e->pos, c.unit.pos);
    if (d < best_d || (d == best_d && e->id < best->id)) {
      best = e;
      best_d = d;
    }
  }
  return best;
}

const Unit* weakest_enemy(const Context& c) {
  const Unit* best = nullptr;
  for (const Unit* e : c.enemies) {
    if (!best || e->health < best->health || (e->health == best->health && e->id < best->id)) best = e;
  }
  return best;
}

const Action* attack_by(const Context& c, bool weakest) {
  std::vector<Candidate> cands;
  for (const Action* a : with_verb(c.legal, Verb::attack)) {
    const Unit* t = c.state.find(a->target_id);
    const long long key = weakest ? t->health : chebyshev(t->pos, c.unit.pos);
    cands.push_back({key, t->id, t->pos, a});
  }
  return best_of(cands);
}

const Action* approach(const Context& c, const Unit* target) {
  if (!target) return nullptr;
  return best_move(c, [&](Position p) { return static_cast<long long>(chebyshev(p, target->pos)); });
}

const Action* run_away(const Context& c) {
  if (c.enemies.empty()) return nullptr;
  return best_move(c, [&](Position p) {
    long long sum = 0;
    for (const Unit* e : c.enemies) sum += chebyshev(p, e->pos);
    return -sum;
  });
}

const Action* run_to_friends(const Context& c) {
  if (c.allies.empty()) return nullptr;
  return best_move(c, [&](Position p) {
    long long sum = 0;
    for (const Unit* f : c.allies) sum += chebyshev(p, f->pos);
    return sum;
  });
}

const Action* special_ability(const Context& c) {
  const auto& abilities = c.state.config().unit_types[static_cast<std::size_t>(c.unit.type)].abilities;
  for (Ability ab : abilities) {
    std::vector<Candidate> cands;
    if (ab == Ability::heal) {
      for (const Action* a : with_verb(c.legal, Verb::heal)) {
        const Unit* t = c.state.find(a->target_id);
        cands.push_back({-(t->max_health - t->health), t->id, t->pos, a});
      }
    } else {
      const Grid& g = c.state.grid();
      for (const Action* a : with_verb(c.legal, Verb::push)) {
        const Unit* t = c.state.find(a->target_id);
        // Lethal pushes first: the destination tile is a hole.
        const Position dest = push_destination(c.unit.pos, t->pos);
        const bool lethal = g.in_bounds(dest) && g.at(dest) == TileKind::hole;
        cands.push_back({lethal ? 0 : 1, t->id, t->pos, a});
      }
    }
    if (const Action* a = best_of(cands)) return a;
  }
  return nullptr;
}

}  // namespace

Action script_action(ScriptId script, const GameState& state, UnitId unit_id, Rng& rng) {
  const Unit* unit = state.find(unit_id);
  if (!unit) throw std::invalid_argument("script_action: unknown unit " + std::to_string(unit_id));
  if (unit->owner != state.current_player) throw std::invalid_argument("script_action: unit not owned by current player");
  if (unit->action_points <= 0) throw std::invalid_argument("script_action: unit has no action points");

  Context c{state, *unit, legal_actions(state, unit_id), {}, {}};
  if (c.legal.empty()) throw std::invalid_argument("script_action: unit has no legal action");
  for (const auto& u : state.units) {
    if (u.owner != unit->owner) {
      c.enemies.push_back(&u);
    } else if (u.id != unit->id) {
      c.allies.push_back(&u);
    }
  }

  const Action* chosen = nullptr;
  switch (script) {
    case ScriptId::attack_closest:
      chosen = attack_by(c, false);
      if (!chosen) chosen = approach(c, closest_enemy(c));
      break;
    case ScriptId::attack_weakest:
      chosen = attack_by(c, true);
      if (!chosen) chosen = approach(c, weakest_enemy(c));
      break;
    case ScriptId::run_away:
      chosen = run_away(c);
      break;
    case ScriptId::run_to_friends:
      chosen = run_to_friends(c);
      break;
    case ScriptId::use_special_ability:
      chosen = special_ability(c);
      break;
    case ScriptId::random:
      break;
  }
  if (chosen) return *chosen;
  return c.legal[rng.index(c.legal.size())];
}

}  // namespace arena
