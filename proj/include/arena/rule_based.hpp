#pragma once

#include "arena/agents.hpp"

namespace arena {

/// Hand-written baseline for fighting modes. Per unit, in id order: heal the
/// damaged ally with the highest max health; otherwise attack the enemy with
/// the fewest allies adjacent to it (ties: higher attack damage, then lower
/// id); otherwise step toward the nearest enemy, or toward the map centre when
/// no enemy is visible. Ends the turn when no unit has a useful action.
class CombatAgent final : public Agent {
 public:
  Decision decide(const GameState& observed, Budget& budget, Rng& rng) override;
  AgentKind kind() const override { return AgentKind::combat; }
};

/// Hand-written baseline for push modes. Pushes an enemy into a hole when
/// possible; otherwise walks along the shortest path to a tile from which such
/// a push exists (ties: lower target id); otherwise approaches the nearest
/// enemy while avoiding tiles next to a hole.
class PusherAgent final : public Agent {
 public:
  Decision decide(const GameState& observed, Budget& budget, Rng& rng) override;
  AgentKind kind() const override { return AgentKind::pusher; }
};

/// Uniform choice over every legal action of every own unit plus end_turn.
class RandomAgent final : public Agent {
 public:
  Decision decide(const GameState& observed, Budget& budget, Rng& rng) override;
  AgentKind kind() const override { return AgentKind::random; }
};

}  // namespace arena
