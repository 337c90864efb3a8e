#include "arena/nsga2.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace arena::nsga2 {

std::vector<std::vector<int>> non_dominated_sort(std::span<const ObjectiveVector> points) {
  const int n = static_cast<int>(points.size());
  std::vector<std::vector<int>> dominated(static_cast<std::size_t>(n));
  std::vector<int> counter(static_cast<std::size_t>(n), 0);
  std::vector<std::vector<int>> fronts;
  std::vector<int> current;
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      if (p == q) continue;
      if (dominates(points[static_cast<std::size_t>(p)], points[static_cast<std::size_t>(q)])) {
        dominated[static_cast<std::size_t>(p)].push_back(q);
      } else if (dominates(points[static_cast<std::size_t>(q)], points[static_cast<std::size_t>(p)])) {
        ++counter[static_cast<std::size_t>(p)];
      }
    }
    if (counter[static_cast<std::size_t>(p)] == 0) current.push_back(p);
  }
  while (!current.empty()) {
    fronts.push_back(current);
    std::vector<int> next;
    for (int p : current) {
      for (int q : dominated[static_cast<std::size_t>(p)]) {
        if (--counter[static_cast<std::size_t>(q)] == 0) next.push_back(q);
      }
    }
    std::sort(next.begin(), next.end());
    current = std::move(next);
  }
  return fronts;
}

std::vector<double> crowding_distance(std::span<const ObjectiveVector> points, std::span<const int> front) {
  const std::size_t m = front.size();
  std::vector<double> dist(m, 0.0);
  if (m <= 2) {
    std::fill(dist.begin(), dist.end(), std::numeric_limits<double>::infinity());
    return dist;
  }
  std::vector<std::size_t> order(m);
  for (int objective = 0; objective < 2; ++objective) {
    auto value = [&](std::size_t i) {
      const auto& p = points[static_cast<std::size_t>(front[i])];
      return objective == 0 ? p.h1 : p.h2;
    };
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return value(a) < value(b); });
    const double span = value(order.back()) - value(order.front());
    dist[order.front()] = dist[order.back()] = std::numeric_limits<double>::infinity();
    if (span <= 0.0) continue;
    for (std::size_t k = 1; k + 1 < m; ++k) {
      dist[order[k]] += (value(order[k + 1]) - value(order[k - 1])) / span;
    }
  }
  return dist;
}

Ranking rank_population(std::span<const ObjectiveVector> points) {
  Ranking r;
  r.rank.assign(points.size(), 0);
  r.crowding.assign(points.size(), 0.0);
  const auto fronts = non_dominated_sort(points);
  for (std::size_t f = 0; f < fronts.size(); ++f) {
    const auto cd = crowding_distance(points, fronts[f]);
    for (std::size_t i = 0; i < fronts[f].size(); ++i) {
      r.rank[static_cast<std::size_t>(fronts[f][i])] = static_cast<int>(f);
      r.crowding[static_cast<std::size_t>(fronts[f][i])] = cd[i];
    }
  }
  return r;
}

std::vector<int> select_survivors(std::span<const ObjectiveVector> points, std::size_t keep) {
  const Ranking r = rank_population(points);
  std::vector<int> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (r.rank[static_cast<std::size_t>(a)] != r.rank[static_cast<std::size_t>(b)]) {
      return r.rank[static_cast<std::size_t>(a)] < r.rank[static_cast<std::size_t>(b)];
    }
    if (r.crowding[static_cast<std::size_t>(a)] != r.crowding[static_cast<std::size_t>(b)]) {
      return r.crowding[static_cast<std::size_t>(a)] > r.crowding[static_cast<std::size_t>(b)];
    }
    const auto& pa = points[static_cast<std::size_t>(a)];
    const auto& pb = points[static_cast<std::size_t>(b)];
    if (pa.h1 != pb.h1) return pa.h1 > pb.h1;
    if (pa.h2 != pb.h2) return pa.h2 < pb.h2;
    return a < b;
  });
  if (order.size() > keep) order.resize(keep);
  return order;
}

}  // namespace arena::nsga2
