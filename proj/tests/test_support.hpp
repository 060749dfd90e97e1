#pragma once

// Independent reference implementations and fake oracles shared by the
// unit and acceptance suites. Nothing here calls into the code it checks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "glass/latent_space.hpp"
#include "glass/nsga2.hpp"
#include "glass/oracle/oracle.hpp"
#include "glass/oracle/protocol.hpp"

namespace glass::testing {

/// a dominates b, written out independently of glass::dominates.
inline bool reference_dominates(const std::vector<double>& a, const std::vector<double>& b) {
  bool no_worse = true;
  bool better = false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    no_worse = no_worse && a[k] <= b[k];
    better = better || a[k] < b[k];
  }
  return no_worse && better;
}

/// O(n^2 m) front assignment: a dominator is always lexicographically
/// smaller, so visiting points in lexicographic order lets each rank be one
/// more than the largest rank among its dominators.
inline std::vector<std::vector<std::size_t>> brute_force_fronts(
    const std::vector<std::vector<double>>& points) {
  const std::size_t n = points.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return points[a] < points[b]; });
  std::vector<std::size_t> rank(n, 0);
  std::size_t max_rank = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t q = order[i];
    for (std::size_t j = 0; j < i; ++j) {
      const std::size_t p = order[j];
      if (reference_dominates(points[p], points[q])) rank[q] = std::max(rank[q], rank[p] + 1);
    }
    max_rank = std::max(max_rank, rank[q]);
  }
  std::vector<std::vector<std::size_t>> fronts(n ? max_rank + 1 : 0);
  for (std::size_t i = 0; i < n; ++i) fronts[rank[i]].push_back(i);
  return fronts;
}

/// Random objective vectors. Values are drawn from a small grid part of the
/// time so that ties and duplicate points are exercised.
inline std::vector<std::vector<double>> random_points(std::mt19937_64& gen, std::size_t n,
                                                      std::size_t m) {
  std::uniform_real_distribution<double> real(0.0, 1.0);
  std::uniform_int_distribution<int> grid(0, 5);
  std::bernoulli_distribution coarse(0.3);
  std::vector<std::vector<double>> pts(n, std::vector<double>(m));
  for (auto& p : pts) {
    for (double& v : p) v = coarse(gen) ? grid(gen) / 5.0 : real(gen);
  }
  return pts;
}

/// A random mixed space of 1-4 blocks, including degenerate integer ranges
/// and narrow truncation windows.
inline LatentSpaceSpec random_space(std::mt19937_64& gen) {
  std::uniform_int_distribution<int> block_count(1, 4);
  std::uniform_int_distribution<int> kind(0, 2);
  std::uniform_int_distribution<std::size_t> length(1, 12);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::int64_t> int_lo(-50, 50);
  std::uniform_int_distribution<std::int64_t> int_span(0, 60);
  std::vector<BlockSpec> blocks;
  const int count = block_count(gen);
  for (int i = 0; i < count; ++i) {
    switch (kind(gen)) {
      case 0:
        blocks.push_back(BlockSpec::boolean(length(gen)));
        break;
      case 1: {
        const double mean = 4.0 * unit(gen) - 2.0;
        const double sd = 0.1 + 2.0 * unit(gen);
        if (unit(gen) < 0.5) {
          blocks.push_back(BlockSpec::normal(length(gen), mean, sd));
        } else {
          const double lo = mean - 3.0 * unit(gen) - 0.01;
          const double hi = mean + 3.0 * unit(gen) + 0.01;
          blocks.push_back(BlockSpec::truncated_normal(length(gen), mean, sd, lo, hi));
        }
        break;
      }
      default: {
        const std::int64_t lo = int_lo(gen);
        blocks.push_back(BlockSpec::integer(length(gen), lo, lo + int_span(gen)));
      }
    }
  }
  return LatentSpaceSpec(std::move(blocks));
}

inline OperatorParams random_params(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  OperatorParams p;
  if (unit(gen) < 0.8) p.mutation_prob_per_gene = unit(gen);
  p.real_mutation_sigma = 0.01 + 2.0 * unit(gen);
  p.crossover_prob = unit(gen);
  return p;
}

inline double random_value(std::mt19937_64& gen) {
  switch (gen() % 5) {
    case 0: return 0.0;
    case 1: return static_cast<double>(static_cast<int>(gen() % 50257));  // token id
    case 2: return static_cast<double>(gen() % 2);                        // boolean gene
    case 3: return -std::ldexp(static_cast<double>(gen() >> 11), -50);
    default: return std::normal_distribution<double>(0.0, 1.0)(gen);
  }
}

inline std::vector<double> random_values(std::mt19937_64& gen, std::size_t max_len) {
  std::vector<double> v(gen() % (max_len + 1));
  for (double& x : v) x = random_value(gen);
  return v;
}

inline std::string random_text(std::mt19937_64& gen) {
  static const char* const pieces[] = {"a", "b ", "\"", "\\", "/", "\n", "\t", "\xc3\xa9", "{", "}", "z"};
  std::string s;
  for (std::size_t i = gen() % 12; i > 0; --i) s += pieces[gen() % std::size(pieces)];
  return s;
}

inline Measurement random_measurement(std::mt19937_64& gen) {
  Measurement m;
  switch (gen() % 4) {
    case 0: m.error = random_text(gen); break;
    case 1:
      m.raw_objectives = random_values(gen, 3);
      if (m.raw_objectives.empty()) m.raw_objectives = {1.5};
      break;
    case 2:
      m.embedding = random_values(gen, 6);
      m.d_prob = std::uniform_real_distribution<>(0, 1)(gen);
      break;
    default: m.embedding = random_values(gen, 6); break;
  }
  return m;
}

/// A valid protocol message of any type, with awkward strings and numbers.
inline oracle::Message random_message(std::mt19937_64& gen) {
  switch (gen() % 8) {
    case 0: {
      oracle::Hello h;
      h.version = static_cast<int>(gen() % 3);
      h.space_fingerprint = "fnv1a64:" + std::to_string(gen());
      if (gen() % 2) h.embedding_dim = gen() % 1024;
      if (gen() % 2) h.supports_discriminator = gen() % 2 == 0;
      if (gen() % 3 == 0) h.raw_objectives = 1 + gen() % 3;
      if (gen() % 3 == 0) h.metadata = {{"model", random_text(gen)}, {"layers", 12}};
      return h;
    }
    case 1: {
      const auto kind = gen() % 2 ? oracle::TargetKind::Text : oracle::TargetKind::ImagePath;
      return oracle::TargetRequest{kind, random_text(gen)};
    }
    case 2: return oracle::TargetOk{random_values(gen, 8)};
    case 3: {
      oracle::EvalRequest r{gen(), {}};
      for (std::size_t i = gen() % 4; i > 0; --i) r.genomes.push_back(Genome{random_values(gen, 6)});
      return r;
    }
    case 4: {
      oracle::EvalOk r{gen() % 1000, {}};
      for (std::size_t i = gen() % 4; i > 0; --i) r.results.push_back(random_measurement(gen));
      return r;
    }
    case 5: return oracle::RenderRequest{Genome{random_values(gen, 6)}, random_text(gen)};
    case 6: return oracle::RenderOk{random_text(gen)};
    default: {
      oracle::ErrorMessage e;
      if (gen() % 2) e.id = gen() % 1000;
      e.message = random_text(gen);
      return e;
    }
  }
}

/// Area dominated by `points` inside the box below `reference`, by summing
/// the cells of the grid spanned by all coordinates.
inline double reference_hypervolume_2d(const std::vector<std::vector<double>>& points,
                                       double r0, double r1) {
  std::vector<double> xs{r0};
  std::vector<double> ys{r1};
  for (const auto& p : points) {
    if (p[0] < r0) xs.push_back(p[0]);
    if (p[1] < r1) ys.push_back(p[1]);
  }
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  double area = 0.0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
      const bool covered = std::any_of(points.begin(), points.end(), [&](const auto& p) {
        return p[0] <= xs[i] && p[1] <= ys[j];
      });
      if (covered) area += (xs[i + 1] - xs[i]) * (ys[j + 1] - ys[j]);
    }
  }
  return area;
}

/// Hypervolume of the analytic ZDT1 front f2 = 1 - sqrt(f1), f1 in [0,1],
/// against (r0, r1) with r0 >= 1 and r1 >= 1, by composite Simpson quadrature.
inline double zdt1_front_hypervolume(double r0, double r1, int intervals = 1 << 16) {
  auto height = [&](double x) { return r1 - (1.0 - std::sqrt(x)); };
  const double h = 1.0 / intervals;
  double sum = height(0.0) + height(1.0);
  for (int i = 1; i < intervals; ++i) sum += (i % 2 ? 4.0 : 2.0) * height(i * h);
  return sum * h / 3.0 + (r0 - 1.0) * r1;
}

/// Wraps an oracle and corrupts chosen entries of every batch.
class FaultInjectingOracle : public oracle::Oracle {
 public:
  enum class Fault { NaNEmbedding, ErrorEntry };

  FaultInjectingOracle(oracle::Oracle& inner, std::function<bool(const Genome&)> poisoned,
                       Fault fault = Fault::NaNEmbedding)
      : inner_(inner), poisoned_(std::move(poisoned)), fault_(fault) {}

  oracle::OracleHandshake handshake() override { return inner_.handshake(); }
  std::vector<double> target(oracle::TargetKind kind, const std::string& payload) override {
    return inner_.target(kind, payload);
  }
  std::vector<Measurement> evaluate_batch(std::span<const Genome> genomes) override {
    std::vector<Measurement> out = inner_.evaluate_batch(genomes);
    for (std::size_t i = 0; i < genomes.size(); ++i) {
      if (!poisoned_(genomes[i])) continue;
      if (fault_ == Fault::ErrorEntry) {
        out[i] = Measurement{};
        out[i].error = "injected failure";
      } else {
        out[i].embedding[0] = std::numeric_limits<double>::quiet_NaN();
      }
    }
    return out;
  }

 private:
  oracle::Oracle& inner_;
  std::function<bool(const Genome&)> poisoned_;
  Fault fault_;
};

/// Embedding = (genome[0], 1): lets a test read back which genome produced
/// which result.
class TaggingOracle : public oracle::Oracle {
 public:
  explicit TaggingOracle(std::string fingerprint) : fingerprint_(std::move(fingerprint)) {}
  oracle::OracleHandshake handshake() override {
    oracle::OracleHandshake hs;
    hs.embedding_dim = 2;
    hs.space_fingerprint = fingerprint_;
    return hs;
  }
  std::vector<double> target(oracle::TargetKind, const std::string&) override { return {1.0, 0.0}; }
  std::vector<Measurement> evaluate_batch(std::span<const Genome> genomes) override {
    std::vector<Measurement> out;
    for (const Genome& g : genomes) out.push_back(Measurement{{g.genes.at(0), 1.0}, {}, {}, {}});
    return out;
  }

 private:
  std::string fingerprint_;
};

}  // namespace glass::testing
