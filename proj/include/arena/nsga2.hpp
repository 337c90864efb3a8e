#pragma once

#include <span>
#include <vector>

#include "arena/heuristics.hpp"

namespace arena::nsga2 {

/// Pareto dominance for (maximize h1, minimize h2).
inline bool dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
  const bool no_worse = a.h1 >= b.h1 && a.h2 <= b.h2;
  const bool better = a.h1 > b.h1 || a.h2 < b.h2;
  return no_worse && better;
}

/// Fast non-dominated sort. Returns fronts of indices; front 0 is the
/// non-dominated set. Indices inside a front are ascending.
std::vector<std::vector<int>> non_dominated_sort(std::span<const ObjectiveVector> points);

/// Crowding distance of each member of `front` (same order). Boundary
/// points get +infinity.
std::vector<double> crowding_distance(std::span<const ObjectiveVector> points, std::span<const int> front);

struct Ranking {
  std::vector<int> rank;
  std::vector<double> crowding;
};

Ranking rank_population(std::span<const ObjectiveVector> points);

/// Crowded-comparison operator: lower rank wins, then larger crowding.
inline bool crowded_less(const Ranking& r, int a, int b) {
  if (r.rank[static_cast<std::size_t>(a)] != r.rank[static_cast<std::size_t>(b)]) {
    return r.rank[static_cast<std::size_t>(a)] < r.rank[static_cast<std::size_t>(b)];
  }
  return r.crowding[static_cast<std::size_t>(a)] > r.crowding[static_cast<std::size_t>(b)];
}

/// Environmental selection: indices of the `keep` survivors, filled front by
/// front with the last front truncated by crowding distance. Remaining ties
/// prefer higher h1, then lower h2, then lower index.
std::vector<int> select_survivors(std::span<const ObjectiveVector> points, std::size_t keep);

}  // namespace arena::nsga2
