#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "arena/forward_model.hpp"
#include "arena/heuristics.hpp"
#include "arena/scripts.hpp"

namespace arena {

/// Forward-model call allowance for one decision.
class Budget {
 public:
  explicit Budget(long limit) : limit_(limit) {}

  /// Reserves one advance() call; false once the allowance is used up.
  bool spend() {
    if (used_ >= limit_) return false;
    ++used_;
    return true;
  }
  long used() const { return used_; }
  long limit() const { return limit_; }
  long remaining() const { return limit_ - used_; }
  bool exhausted() const { return used_ >= limit_; }

 private:
  long limit_;
  long used_ = 0;
};

/// Map from unit id to script, kept sorted by unit id.
class ScriptAssignment {
 public:
  ScriptAssignment() = default;

  /// Uniformly random scripts for every living unit of `player`.
  static ScriptAssignment random(const GameState& state, int player, const Portfolio& portfolio, Rng& rng);
  static ScriptAssignment uniform(const GameState& state, int player, ScriptId script);

  std::optional<ScriptId> get(UnitId id) const;
  ScriptId at(UnitId id, ScriptId fallback) const { return get(id).value_or(fallback); }
  void set(UnitId id, ScriptId script);
  bool erase(UnitId id);

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::vector<std::pair<UnitId, ScriptId>>& entries() const { return entries_; }
  std::vector<std::pair<UnitId, ScriptId>>& entries() { return entries_; }

  /// Drops entries for units no longer alive and gives newly seen units a
  /// random script.
  void revalidate(const GameState& state, int player, const Portfolio& portfolio, Rng& rng);

  friend bool operator==(const ScriptAssignment&, const ScriptAssignment&) = default;

 private:
  std::vector<std::pair<UnitId, ScriptId>> entries_;
};

/// One scheduled script change of a sparse genome.
struct ChangeEvent {
  int ticks_left = 1;
  UnitId unit = kNoUnit;
  ScriptId script = ScriptId::attack_closest;

  friend bool operator==(const ChangeEvent&, const ChangeEvent&) = default;
};

// ---------------------------------------------------------------------------
// Plans: which script drives the next action of a side during a rollout.
// A plan exposes script_for(unit) and executed(unit, rng), called after every
// action the side executes.

struct FixedScriptPlan {
  ScriptId script;
  ScriptId script_for(UnitId) const { return script; }
  void executed(UnitId, Rng&) {}
};

struct SequencePlan {
  std::span<const ScriptId> genes;
  std::size_t next = 0;
  ScriptId script_for(UnitId) const { return genes[std::min(next, genes.size() - 1)]; }
  void executed(UnitId, Rng&) { ++next; }
};

struct AssignmentPlan {
  const ScriptAssignment* assignment;
  ScriptId fallback;
  ScriptId script_for(UnitId u) const { return assignment->at(u, fallback); }
  void executed(UnitId, Rng&) {}
};

/// Base assignment plus timed change events. Every executed action ticks all
/// events down by one; an event reaching zero rewrites the base entry and is
/// replaced by a fresh random event.
struct SparsePlan {
  ScriptAssignment base;
  std::vector<ChangeEvent> changes;
  const Portfolio* portfolio;
  std::vector<UnitId> units;  // candidates for replacement events
  int max_ticks = 1;
  ScriptId fallback = ScriptId::random;

  ScriptId script_for(UnitId u) const { return base.at(u, fallback); }
  void executed(UnitId, Rng& rng) { tick(base, changes, *portfolio, units, max_ticks, rng); }

  static ChangeEvent random_event(const Portfolio& portfolio, const std::vector<UnitId>& units, int max_ticks, Rng& rng);
  static void tick(ScriptAssignment& base, std::vector<ChangeEvent>& changes, const Portfolio& portfolio,
                   const std::vector<UnitId>& units, int max_ticks, Rng& rng);
};

/// Rollout stopping rule. A rollout stops once `controlled_actions` actions
/// of the controlling side have been executed (0 = unlimited) or once it has
/// finished `own_turns` turns (0 = unlimited). If the last controlled action
/// ended the turn, the opponent's reply is still played in full.
struct Horizon {
  int controlled_actions = 0;
  int own_turns = 0;

  static Horizon actions(int n) { return {n, 0}; }
  static Horizon turns(int n) { return {0, n}; }
};

struct RolloutStats {
  int controlled_actions = 0;
  int own_turns = 0;
  long fm_calls = 0;
};

/// Plays the state forward: `player` acts through `own`, the other side
/// through `opp`, units in lowest-id order, with end_turn inserted whenever the
/// side to move has no eligible unit. Every advance is charged to `budget`;
/// when it runs out the rollout stops where it is.
template <class OwnPlan, class OppPlan>
GameState simulate(GameState state, int player, OwnPlan& own, OppPlan& opp, Horizon horizon, Budget& budget, Rng& rng,
                   RolloutStats* stats = nullptr) {
  RolloutStats st;
  auto done = [&] {
    return (horizon.controlled_actions > 0 && st.controlled_actions >= horizon.controlled_actions) ||
           (horizon.own_turns > 0 && st.own_turns >= horizon.own_turns);
  };
  while (!state.terminal()) {
    const bool mine = state.current_player == player;
    if (mine && done()) break;
    const auto actor = acting_unit(state);
    Action action = Action::end_turn();
    if (actor) {
      const ScriptId s = mine ? own.script_for(*actor) : opp.script_for(*actor);
      action = script_action(s, state, *actor, rng);
    }
    if (!budget.spend()) break;
    ++st.fm_calls;
    state = advance(state, action);
    if (actor) {
      if (mine) {
        ++st.controlled_actions;
        own.executed(*actor, rng);
      } else {
        opp.executed(*actor, rng);
      }
    }
    if (mine && state.current_player != player) ++st.own_turns;
  }
  if (stats) *stats = st;
  return state;
}

}  // namespace arena
