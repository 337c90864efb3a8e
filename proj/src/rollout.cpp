#include "arena/rollout.hpp"

#include <algorithm>

namespace arena {

namespace {

auto lower(std::vector<std::pair<UnitId, ScriptId>>& v, UnitId id) {
  return std::lower_bound(v.begin(), v.end(), id, [](const auto& e, UnitId u) { return e.first < u; });
}

}  // namespace

ScriptAssignment ScriptAssignment::random(const GameState& state, int player, const Portfolio& portfolio, Rng& rng) {
  std::vector<UnitId> ids;
  for (const auto& u : state.units) {
    if (u.owner == player) ids.push_back(u.id);
  }
  std::sort(ids.begin(), ids.end());
  ScriptAssignment a;
  for (UnitId id : ids) a.entries_.emplace_back(id, portfolio.sample(rng));
  return a;
}

ScriptAssignment ScriptAssignment::uniform(const GameState& state, int player, ScriptId script) {
  ScriptAssignment a;
  for (const auto& u : state.units) {
    if (u.owner == player) a.set(u.id, script);
  }
  return a;
}

std::optional<ScriptId> ScriptAssignment::get(UnitId id) const {
  for (const auto& [u, s] : entries_) {
    if (u == id) return s;
  }
  return std::nullopt;
}

void ScriptAssignment::set(UnitId id, ScriptId script) {
  auto it = lower(entries_, id);
  if (it != entries_.end() && it->first == id) {
    it->second = script;
  } else {
    entries_.insert(it, {id, script});
  }
}

bool ScriptAssignment::erase(UnitId id) {
  auto it = lower(entries_, id);
  if (it == entries_.end() || it->first != id) return false;
  entries_.erase(it);
  return true;
}

void ScriptAssignment::revalidate(const GameState& state, int player, const Portfolio& portfolio, Rng& rng) {
  std::erase_if(entries_, [&](const auto& e) {
    const Unit* u = state.find(e.first);
    return !u || u->owner != player;
  });
  for (auto& e : entries_) {
    if (!portfolio.contains(e.second)) e.second = portfolio.sample(rng);
  }
  std::vector<UnitId> missing;
  for (const auto& u : state.units) {
    if (u.owner == player && !get(u.id)) missing.push_back(u.id);
  }
  std::sort(missing.begin(), missing.end());
  for (UnitId id : missing) set(id, portfolio.sample(rng));
}

ChangeEvent SparsePlan::random_event(const Portfolio& portfolio, const std::vector<UnitId>& units, int max_ticks,
                                     Rng& rng) {
  ChangeEvent e;
  e.ticks_left = rng.between(1, std::max(1, max_ticks));
  e.unit = units.empty() ? kNoUnit : units[rng.index(units.size())];
  e.script = portfolio.sample(rng);
  return e;
}

void SparsePlan::tick(ScriptAssignment& base, std::vector<ChangeEvent>& changes, const Portfolio& portfolio,
                      const std::vector<UnitId>& units, int max_ticks, Rng& rng) {
  for (auto& e : changes) {
    if (--e.ticks_left > 0) continue;
    if (e.unit != kNoUnit && base.get(e.unit)) base.set(e.unit, e.script);
    e = random_event(portfolio, units, max_ticks, rng);
  }
}

}  // namespace arena
