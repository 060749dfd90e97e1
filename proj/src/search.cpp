#include "glass/search.hpp"

#include <bit>
#include <cmath>
#include <limits>

namespace glass {
namespace {

void hash_bytes(std::uint64_t& h, std::uint64_t word) {
  for (int i = 0; i < 8; ++i) {
    h ^= (word >> (8 * i)) & 0xffu;
    h *= 0x100000001b3ULL;
  }
}

std::size_t best_index(std::span<const Individual> population) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < population.size(); ++i) {
    if (population[i].objectives[0] < population[best].objectives[0]) best = i;
  }
  return best;
}

SearchResult finish(std::vector<Individual> population, std::vector<GenerationStats> history,
                    std::size_t evaluations, bool complete) {
  SearchResult result;
  if (!population.empty()) {
    for (const Individual& ind : population) {
      if (ind.rank == 0) result.pareto_front.push_back(ind);
    }
    result.best = population[best_index(population)];
  }
  result.final_population = std::move(population);
  result.history = std::move(history);
  result.evaluations = evaluations;
  result.complete = complete;
  return result;
}

}  // namespace

void SearchConfig::validate() const {
  operators.validate();
  if (population_size < 4 || population_size % 2 != 0) {
    throw std::invalid_argument("population_size must be even and at least 4");
  }
  if (generations < 1) throw std::invalid_argument("generations must be at least 1");
  if (objectives.empty()) throw std::invalid_argument("at least one objective is required");
  if (log_every < 1) throw std::invalid_argument("log_every must be at least 1");
}

std::vector<Individual> evaluate_genomes(std::vector<Genome> genomes, Evaluator& evaluator,
                                         std::size_t objective_count) {
  std::vector<Evaluation> evals = evaluator.evaluate(genomes);
  if (evals.size() != genomes.size()) {
    throw std::runtime_error("evaluator returned " + std::to_string(evals.size()) +
                             " results for " + std::to_string(genomes.size()) + " genomes");
  }
  std::vector<Individual> out(genomes.size());
  for (std::size_t i = 0; i < genomes.size(); ++i) {
    Individual& ind = out[i];
    ind.genome = std::move(genomes[i]);
    ind.objectives = std::move(evals[i].objectives);
    ind.penalized = evals[i].error.has_value();
    if (ind.objectives.size() != objective_count) {
      if (!ind.penalized) {
        throw std::runtime_error("evaluator returned " + std::to_string(ind.objectives.size()) +
                                 " objectives, expected " + std::to_string(objective_count));
      }
      ind.objectives.assign(objective_count, kObjectivePenalty);
    }
    for (double& v : ind.objectives) {
      if (!std::isfinite(v) || ind.penalized) {
        v = kObjectivePenalty;
        ind.penalized = true;
      }
    }
  }
  return out;
}

void assign_rank_and_crowding(std::vector<Individual>& population) {
  std::vector<ObjectiveVector> points;
  points.reserve(population.size());
  for (const Individual& ind : population) points.push_back(ind.objectives);
  const std::vector<Front> fronts = non_dominated_sort(points);
  std::vector<ObjectiveVector> members;
  for (std::size_t r = 0; r < fronts.size(); ++r) {
    members.clear();
    for (std::size_t i : fronts[r]) members.push_back(points[i]);
    const std::vector<double> crowd = crowding_distance(members);
    for (std::size_t j = 0; j < fronts[r].size(); ++j) {
      population[fronts[r][j]].rank = r;
      population[fronts[r][j]].crowding = crowd[j];
    }
  }
}

std::vector<Individual> evolve_generation(std::span<const Individual> population,
                                          const SearchConfig& config, Evaluator& evaluator,
                                          Rng& rng) {
  const std::size_t n = population.size();
  std::vector<Genome> offspring;
  offspring.reserve(n);
  while (offspring.size() < n) {
    const Individual& a = tournament_select(population, rng);
    const Individual& b = tournament_select(population, rng);
    auto [c1, c2] = crossover(config.space, a.genome, b.genome, config.operators, rng);
    offspring.push_back(mutate(config.space, c1, config.operators, rng));
    if (offspring.size() < n) offspring.push_back(mutate(config.space, c2, config.operators, rng));
  }

  std::vector<Individual> children =
      evaluate_genomes(std::move(offspring), evaluator, config.objectives.size());

  std::vector<ObjectiveVector> combined;
  combined.reserve(2 * n);
  for (const Individual& ind : population) combined.push_back(ind.objectives);
  for (const Individual& ind : children) combined.push_back(ind.objectives);

  const Survivors survivors = environmental_select(combined, n);
  std::vector<Individual> next;
  next.reserve(n);
  for (std::size_t s = 0; s < survivors.indices.size(); ++s) {
    const std::size_t idx = survivors.indices[s];
    Individual ind = idx < n ? population[idx] : std::move(children[idx - n]);
    ind.rank = survivors.rank[s];
    ind.crowding = survivors.crowding[s];
    next.push_back(std::move(ind));
  }
  return next;
}

GenerationStats summarize_generation(std::size_t generation, std::size_t evaluations,
                                     std::span<const Individual> population,
                                     std::span<const ObjectiveSpec> objectives) {
  GenerationStats stats;
  stats.generation = generation;
  stats.evaluations = evaluations;
  stats.population_hash = population_hash(population);
  const std::size_t m = objectives.size();
  std::vector<double> best(m, std::numeric_limits<double>::infinity());
  std::vector<double> sum(m, 0.0);
  std::size_t counted = 0;
  for (const Individual& ind : population) {
    if (ind.penalized) {
      ++stats.penalized;
      continue;
    }
    ++counted;
    for (std::size_t k = 0; k < m; ++k) {
      best[k] = std::min(best[k], ind.objectives[k]);
      sum[k] += ind.objectives[k];
    }
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  stats.best.resize(m);
  stats.mean.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    stats.best[k] = counted ? from_minimization(objectives[k], best[k]) : nan;
    stats.mean[k] =
        counted ? from_minimization(objectives[k], sum[k] / static_cast<double>(counted)) : nan;
  }
  return stats;
}

std::uint64_t population_hash(std::span<const Individual> population) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const Individual& ind : population) {
    for (double g : ind.genome.genes) hash_bytes(h, std::bit_cast<std::uint64_t>(g));
    for (double v : ind.objectives) hash_bytes(h, std::bit_cast<std::uint64_t>(v));
  }
  return h;
}

SearchResult run_search(const SearchConfig& config, Evaluator& evaluator,
                        const SearchHooks& hooks) {
  config.validate();
  Rng rng(config.seed);
  std::vector<GenerationStats> history;
  std::vector<Individual> population;
  std::size_t evaluations = 0;

  auto record = [&](std::size_t generation) {
    GenerationStats stats =
        summarize_generation(generation, evaluations, population, config.objectives);
    if (hooks.on_generation) hooks.on_generation(stats, population);
    if (hooks.on_progress &&
        (generation % config.log_every == 0 || generation == config.generations)) {
      hooks.on_progress(stats);
    }
    history.push_back(std::move(stats));
  };

  try {
    std::vector<Genome> initial;
    initial.reserve(config.population_size);
    for (std::size_t i = 0; i < config.population_size; ++i) {
      initial.push_back(sample(config.space, rng));
    }
    population = evaluate_genomes(std::move(initial), evaluator, config.objectives.size());
    evaluations += config.population_size;
    assign_rank_and_crowding(population);
    record(0);

    for (std::size_t gen = 1; gen <= config.generations; ++gen) {
      if (hooks.should_stop && hooks.should_stop()) {
        return finish(std::move(population), std::move(history), evaluations, false);
      }
      population = evolve_generation(population, config, evaluator, rng);
      evaluations += config.population_size;
      record(gen);
    }
  } catch (const std::exception& e) {
    throw SearchAborted(e.what(),
                        finish(std::move(population), std::move(history), evaluations, false));
  }
  return finish(std::move(population), std::move(history), evaluations, true);
}

}  // namespace glass
