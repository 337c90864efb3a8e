#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "arena/agents.hpp"
#include "arena/tournament.hpp"

namespace arena {

struct Dimension {
  std::string name;
  std::vector<double> values;
};

/// One value index per dimension.
using ParameterPoint = std::vector<int>;

/// Ordered, finite parameter space. Dimensions named "script_<ABBREV>" are
/// portfolio inclusion flags; a point must switch at least one of them on.
class SearchSpace {
 public:
  SearchSpace() = default;
  explicit SearchSpace(std::vector<Dimension> dims);

  /// Parameter domains applicable to the agent plus the six portfolio flags.
  static SearchSpace for_agent(AgentKind kind);

  const std::vector<Dimension>& dimensions() const { return dims_; }
  std::size_t size() const { return dims_.size(); }
  double cardinality() const;  // number of points, ignoring the portfolio rule

  bool valid(const ParameterPoint& p) const;
  ParameterPoint random_point(Rng& rng) const;

  /// Agent configuration for a point; fields outside the space keep `base`.
  AgentSpec to_spec(AgentKind kind, const ParameterPoint& p, const AgentParams& base = {}) const;
  /// Point whose values equal the given parameters (throws if one is off-grid).
  ParameterPoint point_of(const AgentParams& params) const;

  std::string describe(const ParameterPoint& p) const;

 private:
  std::vector<Dimension> dims_;
  std::vector<int> flag_dims_;
};

/// Bandit statistics over all 1-tuples, all 2-tuples and the full tuple of
/// dimensions (duplicates removed).
class LandscapeModel {
 public:
  struct Stats {
    long count = 0;
    double sum = 0.0;
    double mean() const { return count ? sum / static_cast<double>(count) : 0.0; }
  };
  using Table = std::map<std::vector<int>, Stats>;

  explicit LandscapeModel(std::size_t dimensions = 0);

  void add(const ParameterPoint& p, double fitness);

  const std::vector<std::vector<int>>& tuples() const { return tuples_; }
  const Table& table(std::size_t tuple_index) const { return tables_[tuple_index]; }
  long total() const { return total_; }

  /// Values of point `p` on the dimensions of tuple `t`.
  std::vector<int> key(std::size_t t, const ParameterPoint& p) const;

 private:
  std::vector<std::vector<int>> tuples_;
  std::vector<Table> tables_;
  long total_ = 0;
};

inline const double kDefaultExploration = std::sqrt(2.0);
inline constexpr double kDefaultEpsilon = 0.5;

/// Mean of the visited tuple entries' fitness means plus c times the mean over
/// all tuples of sqrt(log(total + 1) / (n + eps)). Unvisited entries add only
/// to the exploration term, with n = 0.
double model_estimate(const LandscapeModel& model, const ParameterPoint& p, double c = kDefaultExploration,
                      double epsilon = kDefaultEpsilon);

struct NtbeaOptions {
  int budget = 100;      // fitness evaluations
  int neighbours = 50;   // candidates per iteration
  double exploration = kDefaultExploration;
  double epsilon = kDefaultEpsilon;
  std::uint64_t seed = 1;
};

struct NtbeaEvaluation {
  int index = 0;
  ParameterPoint point;
  double fitness = 0.0;
};

struct NtbeaResult {
  ParameterPoint best;        // evaluated point with the highest exploitation-only estimate
  double best_estimate = 0.0;
  std::vector<NtbeaEvaluation> evaluations;
  LandscapeModel model;
};

/// fitness(point, evaluation_index) -> value to maximize.
using FitnessFn = std::function<double(const ParameterPoint&, int)>;

/// Neighbour of `p`: each dimension changes with probability 1/N, at least one
/// changes, and the result is valid.
ParameterPoint mutate_point(const SearchSpace& space, const ParameterPoint& p, Rng& rng);

NtbeaResult ntbea_run(const SearchSpace& space, const FitnessFn& fitness, const NtbeaOptions& options);

// --- the game fitness --------------------------------------------------------

struct FitnessProtocol {
  int games_per_eval = 20;
  int win_points = kWinPoints;
  int draw_points = kDrawPoints;
  int loss_points = kLossPoints;
  long budget = kDefaultBudget;
  int workers = 1;
};

/// Protocol points for games the agent played as player 0.
double protocol_score(const std::vector<Outcome>& outcomes, const FitnessProtocol& protocol = {});

/// Points scored by the configured agent over protocol.games_per_eval games
/// against the mode's rule-based opponent. Game g uses seed
/// derive_seed(run_seed, evaluation, g) with seats swapped on odd g.
double evaluate_point(const AgentSpec& agent, const ModePtr& mode, std::uint64_t run_seed, int evaluation,
                      const FitnessProtocol& protocol = {});

/// Files written by `tune`: evaluations.csv, model.csv, tuned.yaml and
/// summary.json.
void export_tuning(const NtbeaResult& result, const SearchSpace& space, const AgentSpec& tuned,
                   const std::filesystem::path& dir);

}  // namespace arena
