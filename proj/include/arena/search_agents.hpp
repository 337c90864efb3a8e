#pragma once

#include <optional>
#include <vector>

#include "arena/agents.hpp"
#include "arena/nsga2.hpp"

namespace arena {

struct SparseGenome {
  ScriptAssignment base;
  std::vector<ChangeEvent> changes;

  friend bool operator==(const SparseGenome&, const SparseGenome&) = default;
};

/// Result of one play-out evaluation.
struct Evaluation {
  double h1 = 0.0;
  ObjectiveVector objectives;
  bool truncated = false;  // the budget ran out before the horizon
  long fm_calls = 0;
};

// Play-out evaluators. Every call builds its random stream from `seed`, so an
// identical (state, plan, seed) always yields an identical value.
Evaluation rollout_sequence(const GameState& root, std::span<const ScriptId> genes, const AgentParams& params,
                            Budget& budget, std::uint64_t seed);
Evaluation rollout_assignment(const GameState& root, const ScriptAssignment& own, const AgentParams& params,
                              Horizon horizon, Budget& budget, std::uint64_t seed);
Evaluation rollout_sparse(const GameState& root, const SparseGenome& genome, const AgentParams& params,
                          Budget& budget, std::uint64_t seed);

/// Rolling-horizon shift: drop the executed first gene, append a random one.
std::vector<ScriptId> shift_sequence(std::vector<ScriptId> genes, const Portfolio& portfolio, Rng& rng);

/// Portfolio Greedy Search: alternating hill-climbing over the player's and
/// the opponent's unit-script assignments.
class PgsAgent final : public Agent {
 public:
  explicit PgsAgent(AgentParams params) : params_(std::move(params)) {}
  Decision decide(const GameState& observed, Budget& budget, Rng& rng) override;
  AgentKind kind() const override { return AgentKind::pgs; }

  const ScriptAssignment& last_assignment() const { return own_; }

 private:
  AgentParams params_;
  ScriptAssignment own_;
};

/// Portfolio Online Evolution over unit-script assignments.
class PoeAgent final : public Agent {
 public:
  explicit PoeAgent(AgentParams params) : params_(std::move(params)) {}
  Decision decide(const GameState& observed, Budget& budget, Rng& rng) override;
  AgentKind kind() const override { return AgentKind::poe; }

  struct Member {
    ScriptAssignment genome;
    double fitness = 0.0;
    bool evaluated = false;
  };
  const std::vector<Member>& population() const { return population_; }
  const std::vector<double>& best_per_generation() const { return history_; }

 private:
  AgentParams params_;
  std::vector<Member> population_;
  std::vector<double> history_;
};

/// Portfolio rolling-horizon evolution over script sequences; the script at
/// position i drives the lowest-id unit that still has actions.
class PrheaAgent final : public Agent {
 public:
  explicit PrheaAgent(AgentParams params) : params_(std::move(params)) {}
  Decision decide(const GameState& observed, Budget& budget, Rng& rng) override;
  AgentKind kind() const override { return AgentKind::prhea; }

  struct Member {
    std::vector<ScriptId> genome;
    double fitness = 0.0;
    bool evaluated = false;
  };
  const std::vector<Member>& population() const { return population_; }
  std::vector<Member>& population() { return population_; }
  const std::vector<double>& best_per_generation() const { return history_; }

 private:
  AgentParams params_;
  std::vector<Member> population_;
  std::vector<double> history_;
};

/// PRHEA with NSGA-II over (combat score, mean distance).
class MoPrheaAgent final : public Agent {
 public:
  explicit MoPrheaAgent(AgentParams params) : params_(std::move(params)) {}
  Decision decide(const GameState& observed, Budget& budget, Rng& rng) override;
  AgentKind kind() const override { return AgentKind::mo_prhea; }

  struct Member {
    std::vector<ScriptId> genome;
    ObjectiveVector fitness{};
    bool evaluated = false;
  };
  const std::vector<Member>& population() const { return population_; }

  /// Index of the member returned as the decision: highest h1 within front 0,
  /// ties to lower h2, then population order.
  static std::size_t choose(const std::vector<Member>& population);

 private:
  AgentParams params_;
  std::vector<Member> population_;
};

/// Sparse PRHEA: a base unit-script assignment plus timed change events.
class SprheaAgent final : public Agent {
 public:
  explicit SprheaAgent(AgentParams params) : params_(std::move(params)) {}
  Decision decide(const GameState& observed, Budget& budget, Rng& rng) override;
  AgentKind kind() const override { return AgentKind::sprhea; }

  struct Member {
    SparseGenome genome;
    double fitness = 0.0;
    bool evaluated = false;
  };
  const std::vector<Member>& population() const { return population_; }
  std::vector<Member>& population() { return population_; }

 private:
  AgentParams params_;
  std::vector<Member> population_;
};

}  // namespace arena
