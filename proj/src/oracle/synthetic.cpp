#include "glass/oracle/synthetic.hpp"

#include <cmath>
#include <stdexcept>

#include "glass/kernels.hpp"
#include "glass/rng.hpp"

namespace glass::oracle {
namespace {

std::uint64_t hash_payload(const std::string& payload) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : payload) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void require_real(const LatentSpaceSpec& space, std::string_view who) {
  if (!space.real_only()) {
    throw std::invalid_argument(std::string(who) + " oracle needs a real-only latent space");
  }
}

}  // namespace

SyntheticLinearOracle::SyntheticLinearOracle(LatentSpaceSpec space, std::uint64_t matrix_seed,
                                             std::size_t embedding_dim, bool with_discriminator)
    : space_(std::move(space)),
      matrix_seed_(matrix_seed),
      embedding_dim_(embedding_dim),
      with_discriminator_(with_discriminator) {
  require_real(space_, "linear");
  if (embedding_dim_ == 0) throw std::invalid_argument("embedding_dim must be positive");
  const std::size_t n = space_.total_dim();
  // Unit-variance pre-activations for unit-variance inputs.
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  Rng rng(matrix_seed_);
  matrix_.resize(embedding_dim_ * n);
  for (double& m : matrix_) m = scale * rng.normal();
}

OracleHandshake SyntheticLinearOracle::handshake() {
  OracleHandshake hs;
  hs.embedding_dim = embedding_dim_;
  hs.supports_discriminator = with_discriminator_;
  hs.space_fingerprint = space_.fingerprint();
  hs.metadata = {{"oracle", "linear"}, {"matrix_seed", matrix_seed_}};
  return hs;
}

std::vector<double> SyntheticLinearOracle::embed(const Genome& z) const {
  if (z.size() != space_.total_dim()) throw std::invalid_argument("linear oracle: genome length");
  std::vector<double> out(embedding_dim_);
  kernels::matvec(matrix_, embedding_dim_, z.genes, out);
  for (double& v : out) v = std::tanh(v);
  return out;
}

double SyntheticLinearOracle::d_prob(const Genome& z) const {
  return std::exp(-kernels::sum_squares(z.genes) / static_cast<double>(z.size()));
}

Genome SyntheticLinearOracle::planted_optimum(const std::string& payload) const {
  Rng rng(hash_payload(payload) ^ matrix_seed_);
  return sample(space_, rng);
}

std::vector<double> SyntheticLinearOracle::target(TargetKind, const std::string& payload) {
  return embed(planted_optimum(payload));
}

std::vector<Measurement> SyntheticLinearOracle::evaluate_batch(std::span<const Genome> genomes) {
  std::vector<Measurement> out;
  out.reserve(genomes.size());
  for (const Genome& z : genomes) {
    Measurement m;
    m.embedding = embed(z);
    if (with_discriminator_) m.d_prob = d_prob(z);
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<double> sphere(std::span<const double> z) { return {kernels::sum_squares(z)}; }

std::vector<double> zdt1(std::span<const double> z) {
  if (z.size() < 2) throw std::invalid_argument("zdt1 needs at least 2 variables");
  double tail = 0.0;
  for (std::size_t i = 1; i < z.size(); ++i) tail += z[i];
  const double f1 = z[0];
  const double g = 1.0 + 9.0 * tail / static_cast<double>(z.size() - 1);
  return {f1, g * (1.0 - std::sqrt(f1 / g))};
}

BenchmarkOracle::BenchmarkOracle(std::string name, LatentSpaceSpec space)
    : name_(std::move(name)), space_(std::move(space)) {
  if (name_ != "sphere" && name_ != "zdt1") {
    throw std::invalid_argument("unknown benchmark landscape: " + name_);
  }
  require_real(space_, name_);
  if (name_ == "zdt1") {
    if (space_.total_dim() < 2) throw std::invalid_argument("zdt1 needs at least 2 variables");
    for (const BlockSpec& b : space_.blocks()) {
      if (!b.truncated() || b.lo < 0.0 || b.hi > 1.0) {
        throw std::invalid_argument("zdt1 genes must be truncated to within [0,1]");
      }
    }
  }
}

OracleHandshake BenchmarkOracle::handshake() {
  OracleHandshake hs;
  hs.space_fingerprint = space_.fingerprint();
  hs.raw_objectives = objective_count();
  hs.metadata = {{"oracle", name_}, {"dim", space_.total_dim()}};
  return hs;
}

std::vector<double> BenchmarkOracle::target(TargetKind, const std::string&) { return {}; }

std::vector<Measurement> BenchmarkOracle::evaluate_batch(std::span<const Genome> genomes) {
  std::vector<Measurement> out;
  out.reserve(genomes.size());
  for (const Genome& z : genomes) {
    if (z.size() != space_.total_dim()) throw std::invalid_argument("benchmark: genome length");
    Measurement m;
    m.raw_objectives = name_ == "zdt1" ? zdt1(z.genes) : sphere(z.genes);
    out.push_back(std::move(m));
  }
  return out;
}

LatentSpaceSpec benchmark_space(std::string_view name, std::size_t dim) {
  if (dim == 0) throw std::invalid_argument("benchmark dimension must be positive");
  if (name == "zdt1") return LatentSpaceSpec({BlockSpec::truncated_normal(dim, 0.5, 1.0, 0.0, 1.0)});
  if (name == "sphere" || name == "linear") return LatentSpaceSpec({BlockSpec::normal(dim, 0.0, 1.0)});
  throw std::invalid_argument("unknown benchmark landscape: " + std::string(name));
}

}  // namespace glass::oracle
