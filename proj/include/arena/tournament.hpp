#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "arena/agents.hpp"

namespace arena {

inline constexpr int kWinPoints = 3;
inline constexpr int kDrawPoints = 1;
inline constexpr int kLossPoints = 0;
inline constexpr long kDefaultBudget = 1000;

using ScriptCounts = std::array<long, kScriptCount>;

struct MatchRecord {
  std::string mode;
  std::string agent0;  // controls player 0
  std::string agent1;
  std::uint64_t seed = 0;
  bool seats_swapped = false;
  Outcome outcome = Outcome::draw;
  int turns_played = 0;
  std::array<long, 2> fm_calls{};
  std::array<ScriptCounts, 2> usage{};

  friend bool operator==(const MatchRecord&, const MatchRecord&) = default;
};

/// Called after every decision with the state the action was applied to.
using MatchObserver = std::function<void(const GameState& before, int player, const Decision& decision)>;

/// Plays one full game between fresh instances of the two agents. Each seat
/// gets its own random stream derived from (seed, seats_swapped, seat) and a
/// fresh budget of `budget` forward-model calls per decision.
MatchRecord play_match(const ModePtr& mode, const AgentSpec& agent0, const AgentSpec& agent1, std::uint64_t seed,
                       bool seats_swapped, long budget, const MatchObserver& observer = {});

/// 3 / 1 / 0 points for a win / draw / loss of `player`.
int match_points(Outcome outcome, int player);

/// Rule-based opponent matched to the mode: the pusher agent when pushing is
/// enabled, the combat agent otherwise.
AgentSpec rule_based_opponent(const ModeConfig& mode);

// --- leagues -----------------------------------------------------------------

struct LeagueOptions {
  int games_per_pair = 200;  // seeds 1..games_per_pair/2, each played in both seat arrangements
  long budget = kDefaultBudget;
  int workers = 1;
  std::optional<std::filesystem::path> checkpoint;  // JSON-lines log; existing entries are reused
};

struct LeagueJob {
  int a = 0;  // index of the agent in player 0's seat
  int b = 0;
  std::uint64_t seed = 0;
  bool seats_swapped = false;
};

/// Jobs in their canonical (pair, seed, seat) order.
std::vector<LeagueJob> league_schedule(int agent_count, int games_per_pair);

/// Makes display names unique by suffixing repeats with "#2", "#3", ...
std::vector<AgentSpec> with_unique_names(std::vector<AgentSpec> specs);

using ProgressFn = std::function<void(int done, int total)>;

/// Round robin over every unordered pair. Matches are returned in schedule
/// order whatever the number of workers.
std::vector<MatchRecord> run_league(const ModePtr& mode, const std::vector<AgentSpec>& agents,
                                    const LeagueOptions& options, const ProgressFn& progress = {});

struct PairCell {
  int games = 0;
  int wins = 0;  // of the row agent
  int draws = 0;
  int losses = 0;

  double win_rate() const { return games ? static_cast<double>(wins) / games : 0.0; }
  friend bool operator==(const PairCell&, const PairCell&) = default;
};

struct AgentTotals {
  int games = 0;
  int wins = 0;
  int draws = 0;
  int losses = 0;
  long points = 0;

  friend bool operator==(const AgentTotals&, const AgentTotals&) = default;
};

struct LeagueTable {
  std::vector<std::string> agents;
  std::vector<std::vector<PairCell>> cells;  // cells[i][j]: row agent i against column agent j
  std::vector<AgentTotals> totals;
};

/// Aggregates match records. Records naming agents outside `agents` throw.
LeagueTable tabulate(const std::vector<std::string>& agents, const std::vector<MatchRecord>& matches);

// --- usage profiles ----------------------------------------------------------

struct UsageProfile {
  std::string agent;
  std::string mode;
  std::string opponent;
  int games = 0;
  ScriptCounts counts{};
  bool error = false;  // the agent never executed a script-chosen action

  long total() const;
  std::array<double, kScriptCount> frequencies() const;  // all zero when total() == 0

  friend bool operator==(const UsageProfile&, const UsageProfile&) = default;
};

/// Plays `games` games of `agent` (player 0) against `opponent`; game g uses
/// seed g/2 + 1 with seats swapped on odd g.
UsageProfile usage_profile(const ModePtr& mode, const AgentSpec& agent, const AgentSpec& opponent, int games,
                           long budget, int workers = 1, const ProgressFn& progress = {});

/// Per-agent script usage summed over a set of matches (opponent "league").
std::vector<UsageProfile> league_usage(const std::string& mode, const std::vector<std::string>& agents,
                                       const std::vector<MatchRecord>& matches);

/// Runs fn(i) for i in [0, count) on up to `workers` threads. Exceptions are
/// rethrown on the calling thread (lowest index first).
void parallel_for(int count, int workers, const std::function<void(int)>& fn);

}  // namespace arena
