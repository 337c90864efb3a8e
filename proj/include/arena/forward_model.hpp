#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "arena/game_state.hpp"

namespace arena {

class GameError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by advance() for actions that are not legal in the given state.
class IllegalAction : public GameError {
 public:
  using GameError::GameError;
};

/// Tiles the unit can reach this action: passable, unoccupied, within
/// movement_range steps of 8-connected movement that routes around blocked
/// tiles. Returned in row-major order; excludes the unit's own tile.
std::vector<Position> reachable_tiles(const GameState& state, const Unit& unit);

/// Legal non-end-turn actions of one unit, ordered by verb, then target tile
/// (row-major), then target id. Throws GameError for unknown ids or units of
/// the inactive player. Empty for units without action points and for
/// terminal states.
std::vector<Action> legal_actions(const GameState& state, UnitId unit_id);

bool is_legal(const GameState& state, const Action& action);

/// Tile a push would move `target` to: one step along the pusher->target line,
/// diagonals resolved along the dominant axis with ties going to x.
Position push_destination(Position pusher, Position target);

/// Successor state. Throws IllegalAction (input untouched) when the action is
/// illegal or the state is terminal. A turn ends automatically once none of
/// the current player's units has action points left.
GameState advance(const GameState& state, const Action& action);

/// Passes control to the other player, firing end-of-round effects when the
/// round closes. Throws IllegalAction on terminal states.
GameState end_turn(const GameState& state);

Outcome outcome(const GameState& state);

/// Copy of the state as seen by `player`. With fog enabled, enemy units
/// outside the union of the player's vision ranges are removed.
GameState observe(const GameState& state, int player);

/// Lowest-id unit of the current player that still has action points and at
/// least one legal action.
std::optional<UnitId> acting_unit(const GameState& state);

/// Builds the opening position. Spawn tiles are drawn by a seeded shuffle of
/// each side's spawn zone. With `swap_seats` the same layout is produced with
/// player identities exchanged, including who opens each round.
GameState initial_state(const ModePtr& mode, std::uint64_t seed, bool swap_seats = false);

/// Reflection across the vertical axis combined with swapping the players.
GameState mirrored(const GameState& state);
Action mirrored(const GameState& state, const Action& action);

}  // namespace arena
