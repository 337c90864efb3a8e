#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "arena/heuristics.hpp"
#include "arena/rollout.hpp"
#include "arena/scripts.hpp"

namespace arena {

enum class AgentKind : std::uint8_t { pgs, poe, prhea, mo_prhea, sprhea, combat, pusher, random };

std::string_view to_string(AgentKind k);
std::optional<AgentKind> agent_kind_from_string(std::string_view s);
bool is_portfolio_agent(AgentKind k);

/// Search parameters. Agents ignore the fields that do not apply to them.
struct AgentParams {
  int population_size = 10;     // {1, 10, 100}
  int individual_length = 3;    // [1, 10]
  double mutation_rate = 0.5;   // {0.1, 0.5, 0.9}
  int tournament_size = 3;      // {3, 5, 10}
  int num_changes = 5;          // {1, 3, 5, 10}, S-PRHEA
  int response_iterations = 1;  // [1, 5], PGS
  bool elitism = true;
  bool continue_search = true;
  Portfolio portfolio;
  // Script models for PGS initialisation and for the opponent in rollouts.
  ScriptId own_init_script = ScriptId::attack_weakest;
  ScriptId opponent_script = ScriptId::attack_closest;
  HeuristicParams heuristic;

  friend bool operator==(const AgentParams& a, const AgentParams& b);
};

/// Throws ConfigError when a field is outside its domain.
void validate(const AgentParams& p);

/// Per-kind defaults. The sequence agents count individual_length in single
/// actions rather than turns and default to 8, a little over one Kings turn.
AgentParams default_params(AgentKind kind);

struct AgentSpec {
  AgentKind kind = AgentKind::prhea;
  std::string label;  // display name; defaults to the kind name
  AgentParams params;

  std::string name() const;
  static AgentSpec defaults(AgentKind kind);

  friend bool operator==(const AgentSpec&, const AgentSpec&) = default;
};

AgentSpec parse_agent_spec(std::string_view text);
AgentSpec load_agent_spec(const std::filesystem::path& path);
std::string serialize_agent_spec(const AgentSpec& spec);

/// A file path, or a bare kind name ("prhea") for default parameters.
AgentSpec resolve_agent_spec(std::string_view name_or_path);

struct DecisionTrace {
  std::optional<ScriptId> script;  // script that produced the action, if any
  double fitness = 0.0;            // best fitness (h1) found
  int generations = 0;
  int evaluations = 0;
  long fm_calls = 0;
  std::uint64_t evaluation_seed = 0;  // common random numbers used by every rollout of this decision
};

struct Decision {
  Action action;
  DecisionTrace trace;
};

using TraceSink = std::function<void(const Action&, const DecisionTrace&)>;

/// Decision maker for one seat. Instances hold search state across decisions
/// (continue_search) and must not be shared between matches.
class Agent {
 public:
  virtual ~Agent() = default;

  /// Returns a legal action or end_turn for the current player of `observed`.
  /// Performs at most budget.remaining() forward-model calls.
  virtual Decision decide(const GameState& observed, Budget& budget, Rng& rng) = 0;

  virtual AgentKind kind() const = 0;
};

std::unique_ptr<Agent> make_agent(const AgentSpec& spec);

// Helpers shared by the search agents.

/// Action the script picks for the acting unit, or end_turn when no unit of
/// the current player is eligible.
Decision scripted_decision(const GameState& state, ScriptId script, Rng& rng);

}  // namespace arena
