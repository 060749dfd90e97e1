#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "glass/rng.hpp"

namespace glass {

enum class BlockKind { Boolean, Real, Integer };
enum class RealDistribution { Normal, TruncatedNormal };

/// One contiguous run of genes of a single kind.
struct BlockSpec {
  BlockKind kind = BlockKind::Real;
  std::size_t length = 0;

  // Real blocks.
  RealDistribution distribution = RealDistribution::Normal;
  double mean = 0.0;
  double stddev = 1.0;
  double lo = 0.0;  // truncation bounds, TruncatedNormal only
  double hi = 0.0;

  // Integer blocks, inclusive.
  std::int64_t int_lo = 0;
  std::int64_t int_hi = 0;

  static BlockSpec boolean(std::size_t length);
  static BlockSpec normal(std::size_t length, double mean, double stddev);
  static BlockSpec truncated_normal(std::size_t length, double mean, double stddev, double lo,
                                    double hi);
  static BlockSpec integer(std::size_t length, std::int64_t lo, std::int64_t hi);

  bool truncated() const {
    return kind == BlockKind::Real && distribution == RealDistribution::TruncatedNormal;
  }

  friend bool operator==(const BlockSpec&, const BlockSpec&) = default;
};

/// A point in the latent space: block-by-block flat gene sequence.
/// Booleans are stored as 0/1 and integers as whole numbers.
struct Genome {
  std::vector<double> genes;

  std::size_t size() const { return genes.size(); }
  friend bool operator==(const Genome&, const Genome&) = default;
};

/// Ordered list of blocks. Throws std::invalid_argument on construction if
/// any block is malformed or the space is empty.
class LatentSpaceSpec {
 public:
  explicit LatentSpaceSpec(std::vector<BlockSpec> blocks);

  const std::vector<BlockSpec>& blocks() const { return blocks_; }
  std::size_t total_dim() const { return total_dim_; }
  bool real_only() const;

  /// Canonical text form, e.g. "B1000;R128:TN(0,1,-2,2)". Reals use "%.17g".
  std::string descriptor() const;

  /// "fnv1a64:" + 16 hex digits of FNV-1a 64 over descriptor().
  std::string fingerprint() const;

  friend bool operator==(const LatentSpaceSpec&, const LatentSpaceSpec&) = default;

 private:
  std::vector<BlockSpec> blocks_;
  std::size_t total_dim_ = 0;
};

/// Genetic operator rates. An unset mutation rate resolves to 1 / total_dim.
struct OperatorParams {
  std::optional<double> mutation_prob_per_gene;
  /// Fraction of (hi - lo) for truncated reals, of stddev otherwise.
  double real_mutation_sigma = 0.1;
  double crossover_prob = 0.9;

  void validate() const;
  double mutation_rate(const LatentSpaceSpec& spec) const;

  friend bool operator==(const OperatorParams&, const OperatorParams&) = default;
};

struct Violation {
  std::size_t index = 0;
  std::string constraint;
};

/// Named genotypes: "biggan", "stylegan2", "gpt2" or "gpt2(n)".
LatentSpaceSpec preset_space(std::string_view name);

Genome sample(const LatentSpaceSpec& spec, Rng& rng);
Genome mutate(const LatentSpaceSpec& spec, const Genome& genome, const OperatorParams& params,
              Rng& rng);
std::pair<Genome, Genome> crossover(const LatentSpaceSpec& spec, const Genome& a,
                                    const Genome& b, const OperatorParams& params, Rng& rng);

/// First offending gene, or nullopt when the genome is valid for the spec.
std::optional<Violation> validate(const LatentSpaceSpec& spec, const Genome& genome);

}  // namespace glass
