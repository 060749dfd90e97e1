#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "glass/latent_space.hpp"
#include "glass/rng.hpp"

namespace glass {

/// Objective values in the engine convention: every component minimized.
using ObjectiveVector = std::vector<double>;

struct Individual {
  Genome genome;
  ObjectiveVector objectives;
  std::size_t rank = 0;
  double crowding = 0.0;
  bool penalized = false;

  friend bool operator==(const Individual&, const Individual&) = default;
};

using Front = std::vector<std::size_t>;

/// Pareto dominance under minimization.
bool dominates(std::span<const double> a, std::span<const double> b);

/// Fast non-dominated sort. Fronts are listed best first; indices inside a
/// front are ascending.
std::vector<Front> non_dominated_sort(std::span<const ObjectiveVector> points);

/// Crowding distance of each point of one front, in input order.
std::vector<double> crowding_distance(std::span<const ObjectiveVector> front);

/// Crowded comparison: lower rank wins, then larger crowding, then `first`.
const Individual& crowded_winner(const Individual& first, const Individual& second);

/// Binary crowded-comparison tournament. Ties on rank and crowding go to the
/// first draw.
const Individual& tournament_select(std::span<const Individual> population, Rng& rng);

struct Survivors {
  std::vector<std::size_t> indices;  // into the combined set, front by front
  std::vector<std::size_t> rank;
  std::vector<double> crowding;
};

/// Keeps `count` points: whole fronts while they fit, then the split front
/// truncated by descending crowding distance (lower index wins ties).
Survivors environmental_select(std::span<const ObjectiveVector> combined, std::size_t count);

inline constexpr double kInfiniteCrowding = std::numeric_limits<double>::infinity();

}  // namespace glass
