#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "glass/latent_space.hpp"
#include "glass/oracle/oracle.hpp"

namespace glass::oracle {

/// In-process stand-in for generator + encoder: embedding = tanh(M z) with a
/// seeded Gaussian matrix M, and d_prob = exp(-|z|^2 / dim).
///
/// Target requests plant an optimum: the payload seeds a latent point z*
/// drawn from the space, and the answer is tanh(M z*).
class SyntheticLinearOracle : public Oracle {
 public:
  SyntheticLinearOracle(LatentSpaceSpec space, std::uint64_t matrix_seed,
                        std::size_t embedding_dim = 32, bool with_discriminator = true);

  OracleHandshake handshake() override;
  std::vector<double> target(TargetKind kind, const std::string& payload) override;
  std::vector<Measurement> evaluate_batch(std::span<const Genome> genomes) override;

  std::vector<double> embed(const Genome& z) const;
  double d_prob(const Genome& z) const;
  Genome planted_optimum(const std::string& payload) const;

 private:
  LatentSpaceSpec space_;
  std::uint64_t matrix_seed_;
  std::size_t embedding_dim_;
  bool with_discriminator_;
  std::vector<double> matrix_;  // embedding_dim x total_dim, row-major
};

/// Oracle returning benchmark objective values directly (raw-objective
/// extension of the handshake).
///   sphere: f = |z|^2
///   zdt1:   f1 = z0, g = 1 + 9 * mean(z1..), f2 = g * (1 - sqrt(f1 / g)), genes in [0,1]
class BenchmarkOracle : public Oracle {
 public:
  BenchmarkOracle(std::string name, LatentSpaceSpec space);

  OracleHandshake handshake() override;
  std::vector<double> target(TargetKind kind, const std::string& payload) override;
  std::vector<Measurement> evaluate_batch(std::span<const Genome> genomes) override;

  std::size_t objective_count() const { return name_ == "zdt1" ? 2 : 1; }

 private:
  std::string name_;
  LatentSpaceSpec space_;
};

std::vector<double> sphere(std::span<const double> z);
std::vector<double> zdt1(std::span<const double> z);

/// Default genotype for a benchmark: sphere and linear use Normal(0,1) reals,
/// zdt1 uses reals truncated to [0,1].
LatentSpaceSpec benchmark_space(std::string_view name, std::size_t dim);

}  // namespace glass::oracle
