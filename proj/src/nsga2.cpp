#include "glass/nsga2.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace glass {

bool dominates(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dominates: length mismatch");
  bool strictly_better = false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] > b[k]) return false;
    if (a[k] < b[k]) strictly_better = true;
  }
  return strictly_better;
}

std::vector<Front> non_dominated_sort(std::span<const ObjectiveVector> points) {
  const std::size_t n = points.size();
  std::vector<Front> fronts;
  if (n == 0) return fronts;
  const std::size_t m = points.front().size();
  for (const auto& p : points) {
    if (p.size() != m) throw std::invalid_argument("non_dominated_sort: mixed objective counts");
  }

  std::vector<std::vector<std::size_t>> dominated(n);
  std::vector<std::size_t> domination_count(n, 0);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = p + 1; q < n; ++q) {
      if (dominates(points[p], points[q])) {
        dominated[p].push_back(q);
        ++domination_count[q];
      } else if (dominates(points[q], points[p])) {
        dominated[q].push_back(p);
        ++domination_count[p];
      }
    }
  }
  Front current;
  for (std::size_t p = 0; p < n; ++p) {
    if (domination_count[p] == 0) current.push_back(p);
  }

  while (!current.empty()) {
    Front next;
    for (std::size_t p : current) {
      for (std::size_t q : dominated[p]) {
        if (--domination_count[q] == 0) next.push_back(q);
      }
    }
    std::sort(next.begin(), next.end());
    fronts.push_back(std::move(current));
    current = std::move(next);
  }
  return fronts;
}

std::vector<double> crowding_distance(std::span<const ObjectiveVector> front) {
  const std::size_t n = front.size();
  if (n == 0) throw std::invalid_argument("crowding_distance: empty front");
  std::vector<double> distance(n, 0.0);
  if (n <= 2) {
    std::fill(distance.begin(), distance.end(), kInfiniteCrowding);
    return distance;
  }
  const std::size_t m = front.front().size();
  std::vector<std::size_t> order(n);
  for (std::size_t k = 0; k < m; ++k) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return front[a][k] < front[b][k]; });
    const double lo = front[order.front()][k];
    const double hi = front[order.back()][k];
    distance[order.front()] = kInfiniteCrowding;
    distance[order.back()] = kInfiniteCrowding;
    const double range = hi - lo;
    if (range == 0.0) continue;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      distance[order[i]] += (front[order[i + 1]][k] - front[order[i - 1]][k]) / range;
    }
  }
  return distance;
}

const Individual& crowded_winner(const Individual& first, const Individual& second) {
  if (second.rank < first.rank) return second;
  if (second.rank == first.rank && second.crowding > first.crowding) return second;
  return first;
}

const Individual& tournament_select(std::span<const Individual> population, Rng& rng) {
  if (population.empty()) throw std::invalid_argument("tournament_select: empty population");
  const auto last = static_cast<std::int64_t>(population.size()) - 1;
  const Individual& first = population[static_cast<std::size_t>(rng.uniform_int(0, last))];
  const Individual& second = population[static_cast<std::size_t>(rng.uniform_int(0, last))];
  return crowded_winner(first, second);
}

Survivors environmental_select(std::span<const ObjectiveVector> combined, std::size_t count) {
  if (count > combined.size()) throw std::invalid_argument("environmental_select: count too large");
  Survivors out;
  const std::vector<Front> fronts = non_dominated_sort(combined);
  std::vector<ObjectiveVector> members;
  for (std::size_t r = 0; r < fronts.size() && out.indices.size() < count; ++r) {
    const Front& front = fronts[r];
    members.clear();
    for (std::size_t i : front) members.push_back(combined[i]);
    const std::vector<double> crowd = crowding_distance(members);

    std::vector<std::size_t> order(front.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const std::size_t room = count - out.indices.size();
    if (front.size() > room) {
      // Front indices are ascending, so a stable sort breaks ties by lower index.
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return crowd[a] > crowd[b]; });
      order.resize(room);
      std::sort(order.begin(), order.end());
    }
    for (std::size_t j : order) {
      out.indices.push_back(front[j]);
      out.rank.push_back(r);
      out.crowding.push_back(crowd[j]);
    }
  }
  return out;
}

}  // namespace glass
