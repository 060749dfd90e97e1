#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "glass/latent_space.hpp"
#include "glass/nsga2.hpp"
#include "glass/objectives.hpp"
#include "glass/rng.hpp"

namespace glass {

/// Replaces non-finite objective values before they reach selection.
inline constexpr double kObjectivePenalty = 1e12;

struct Evaluation {
  ObjectiveVector objectives;  // minimization convention; may hold NaN
  std::optional<std::string> error;
};

/// Maps a batch of genomes to objective vectors, order-aligned. Throwing
/// aborts the run.
class Evaluator {
 public:
  virtual ~Evaluator() = default;
  virtual std::vector<Evaluation> evaluate(std::span<const Genome> genomes) = 0;
};

struct SearchConfig {
  LatentSpaceSpec space;
  OperatorParams operators;
  std::size_t population_size = 64;
  std::size_t generations = 500;
  std::vector<ObjectiveSpec> objectives;
  std::uint64_t seed = 0;
  std::size_t log_every = 1;

  void validate() const;
};

struct GenerationStats {
  std::size_t generation = 0;   // 0 is the initial population
  std::size_t evaluations = 0;  // cumulative oracle calls
  std::vector<double> best;     // raw direction, penalized individuals excluded
  std::vector<double> mean;
  std::size_t penalized = 0;
  std::uint64_t population_hash = 0;

  friend bool operator==(const GenerationStats&, const GenerationStats&) = default;
};

struct SearchResult {
  std::vector<Individual> pareto_front;
  Individual best;  // extreme of the first objective over the final population
  std::vector<GenerationStats> history;
  std::vector<Individual> final_population;
  std::size_t evaluations = 0;
  bool complete = true;
};

struct SearchHooks {
  /// Every log_every generations, plus the last one.
  std::function<void(const GenerationStats&)> on_progress;
  /// Every generation, with the ranked and crowded population.
  std::function<void(const GenerationStats&, std::span<const Individual>)> on_generation;
  /// Polled between generations; true ends the run early as incomplete.
  std::function<bool()> should_stop;
};

/// Thrown by run_search when the evaluator fails. Carries what was computed
/// up to the last completed generation.
class SearchAborted : public std::runtime_error {
 public:
  SearchAborted(const std::string& what, SearchResult partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const SearchResult& partial() const { return partial_; }

 private:
  SearchResult partial_;
};

/// Evaluates genomes and applies the penalty for failures and non-finite values.
std::vector<Individual> evaluate_genomes(std::vector<Genome> genomes, Evaluator& evaluator,
                                         std::size_t objective_count);

/// Sets rank and crowding in place from the population's own fronts.
void assign_rank_and_crowding(std::vector<Individual>& population);

/// One NSGA-II generation with (mu + lambda) replacement.
std::vector<Individual> evolve_generation(std::span<const Individual> population,
                                          const SearchConfig& config, Evaluator& evaluator,
                                          Rng& rng);

SearchResult run_search(const SearchConfig& config, Evaluator& evaluator,
                        const SearchHooks& hooks = {});

GenerationStats summarize_generation(std::size_t generation, std::size_t evaluations,
                                     std::span<const Individual> population,
                                     std::span<const ObjectiveSpec> objectives);

/// FNV-1a 64 over the bit patterns of every gene and objective value.
std::uint64_t population_hash(std::span<const Individual> population);

}  // namespace glass
