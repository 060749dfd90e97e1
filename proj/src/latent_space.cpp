#include "glass/latent_space.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace glass {
namespace {

constexpr std::int64_t kGpt2VocabSize = 50257;
constexpr std::size_t kGpt2DefaultContext = 20;

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void check_block(const BlockSpec& b) {
  if (b.length == 0) throw std::invalid_argument("block length must be positive");
  switch (b.kind) {
    case BlockKind::Boolean:
      break;
    case BlockKind::Real:
      if (!std::isfinite(b.mean)) throw std::invalid_argument("real block mean must be finite");
      if (!(b.stddev > 0.0) || !std::isfinite(b.stddev)) {
        throw std::invalid_argument("real block stddev must be positive");
      }
      if (b.distribution == RealDistribution::TruncatedNormal &&
          !(std::isfinite(b.lo) && std::isfinite(b.hi) && b.lo < b.hi)) {
        throw std::invalid_argument("truncated block needs finite bounds with lo < hi");
      }
      break;
    case BlockKind::Integer:
      if (b.int_lo > b.int_hi) throw std::invalid_argument("integer block needs lo <= hi");
      break;
  }
}

void require_valid(const LatentSpaceSpec& spec, const Genome& g, const char* what) {
  if (auto v = validate(spec, g)) {
    throw std::invalid_argument(std::string(what) + ": gene " + std::to_string(v->index) + " " +
                                v->constraint);
  }
}

double sample_truncated(const BlockSpec& b, Rng& rng) {
  // Rejection keeps the exact truncated distribution.
  for (;;) {
    const double x = rng.normal(b.mean, b.stddev);
    if (x >= b.lo && x <= b.hi) return x;
  }
}

}  // namespace

BlockSpec BlockSpec::boolean(std::size_t length) {
  BlockSpec b;
  b.kind = BlockKind::Boolean;
  b.length = length;
  return b;
}

BlockSpec BlockSpec::normal(std::size_t length, double mean, double stddev) {
  BlockSpec b;
  b.kind = BlockKind::Real;
  b.length = length;
  b.distribution = RealDistribution::Normal;
  b.mean = mean;
  b.stddev = stddev;
  return b;
}

BlockSpec BlockSpec::truncated_normal(std::size_t length, double mean, double stddev, double lo,
                                      double hi) {
  BlockSpec b = normal(length, mean, stddev);
  b.distribution = RealDistribution::TruncatedNormal;
  b.lo = lo;
  b.hi = hi;
  return b;
}

BlockSpec BlockSpec::integer(std::size_t length, std::int64_t lo, std::int64_t hi) {
  BlockSpec b;
  b.kind = BlockKind::Integer;
  b.length = length;
  b.int_lo = lo;
  b.int_hi = hi;
  return b;
}

LatentSpaceSpec::LatentSpaceSpec(std::vector<BlockSpec> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw std::invalid_argument("latent space needs at least one block");
  for (const BlockSpec& b : blocks_) {
    check_block(b);
    total_dim_ += b.length;
  }
}

bool LatentSpaceSpec::real_only() const {
  return std::all_of(blocks_.begin(), blocks_.end(),
                     [](const BlockSpec& b) { return b.kind == BlockKind::Real; });
}

std::string LatentSpaceSpec::descriptor() const {
  std::string out;
  for (const BlockSpec& b : blocks_) {
    if (!out.empty()) out += ';';
    switch (b.kind) {
      case BlockKind::Boolean:
        out += "B" + std::to_string(b.length);
        break;
      case BlockKind::Real:
        out += "R" + std::to_string(b.length) + ":";
        if (b.truncated()) {
          out += "TN(" + format_real(b.mean) + "," + format_real(b.stddev) + "," +
                 format_real(b.lo) + "," + format_real(b.hi) + ")";
        } else {
          out += "N(" + format_real(b.mean) + "," + format_real(b.stddev) + ")";
        }
        break;
      case BlockKind::Integer:
        out += "I" + std::to_string(b.length) + ":[" + std::to_string(b.int_lo) + "," +
               std::to_string(b.int_hi) + "]";
        break;
    }
  }
  return out;
}

std::string LatentSpaceSpec::fingerprint() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : descriptor()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void OperatorParams::validate() const {
  auto is_prob = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (mutation_prob_per_gene && !is_prob(*mutation_prob_per_gene)) {
    throw std::invalid_argument("mutation_prob_per_gene must be in [0,1]");
  }
  if (!is_prob(crossover_prob)) throw std::invalid_argument("crossover_prob must be in [0,1]");
  if (!(real_mutation_sigma > 0.0) || !std::isfinite(real_mutation_sigma)) {
    throw std::invalid_argument("real_mutation_sigma must be positive");
  }
}

double OperatorParams::mutation_rate(const LatentSpaceSpec& spec) const {
  return mutation_prob_per_gene.value_or(1.0 / static_cast<double>(spec.total_dim()));
}

LatentSpaceSpec preset_space(std::string_view name) {
  if (name == "biggan") {
    // 1000 class booleans followed by the 128-dim truncated noise vector.
    return LatentSpaceSpec({BlockSpec::boolean(1000),
                            BlockSpec::truncated_normal(128, 0.0, 1.0, -2.0, 2.0)});
  }
  if (name == "stylegan2") return LatentSpaceSpec({BlockSpec::normal(512, 0.0, 1.0)});
  if (name.starts_with("gpt2")) {
    std::size_t context = kGpt2DefaultContext;
    std::string_view rest = name.substr(4);
    if (!rest.empty()) {
      if (rest.size() < 3 || rest.front() != '(' || rest.back() != ')') {
        throw std::invalid_argument("unknown preset: " + std::string(name));
      }
      rest = rest.substr(1, rest.size() - 2);
      const auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), context);
      if (ec != std::errc() || ptr != rest.data() + rest.size() || context == 0) {
        throw std::invalid_argument("bad gpt2 context length: " + std::string(name));
      }
    }
    // Token ids index a vocabulary of 50257 entries.
    return LatentSpaceSpec({BlockSpec::integer(context, 0, kGpt2VocabSize - 1)});
  }
  throw std::invalid_argument("unknown preset: " + std::string(name));
}

Genome sample(const LatentSpaceSpec& spec, Rng& rng) {
  Genome g;
  g.genes.reserve(spec.total_dim());
  for (const BlockSpec& b : spec.blocks()) {
    for (std::size_t i = 0; i < b.length; ++i) {
      switch (b.kind) {
        case BlockKind::Boolean:
          g.genes.push_back(rng.bernoulli(0.5) ? 1.0 : 0.0);
          break;
        case BlockKind::Real:
          g.genes.push_back(b.truncated() ? sample_truncated(b, rng) : rng.normal(b.mean, b.stddev));
          break;
        case BlockKind::Integer:
          g.genes.push_back(static_cast<double>(rng.uniform_int(b.int_lo, b.int_hi)));
          break;
      }
    }
  }
  return g;
}

Genome mutate(const LatentSpaceSpec& spec, const Genome& genome, const OperatorParams& params,
              Rng& rng) {
  require_valid(spec, genome, "mutate");
  const double rate = params.mutation_rate(spec);
  Genome out = genome;
  std::size_t pos = 0;
  for (const BlockSpec& b : spec.blocks()) {
    const double sigma = params.real_mutation_sigma * (b.truncated() ? b.hi - b.lo : b.stddev);
    for (std::size_t i = 0; i < b.length; ++i, ++pos) {
      if (!rng.bernoulli(rate)) continue;
      double& gene = out.genes[pos];
      switch (b.kind) {
        case BlockKind::Boolean:
          gene = 1.0 - gene;
          break;
        case BlockKind::Real:
          gene += sigma * rng.normal();
          if (b.truncated()) gene = std::clamp(gene, b.lo, b.hi);
          break;
        case BlockKind::Integer:
          gene = static_cast<double>(rng.uniform_int(b.int_lo, b.int_hi));
          break;
      }
    }
  }
  return out;
}

std::pair<Genome, Genome> crossover(const LatentSpaceSpec& spec, const Genome& a,
                                    const Genome& b, const OperatorParams& params, Rng& rng) {
  require_valid(spec, a, "crossover");
  require_valid(spec, b, "crossover");
  std::pair<Genome, Genome> children{a, b};
  if (!rng.bernoulli(params.crossover_prob)) return children;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (rng.bernoulli(0.5)) std::swap(children.first.genes[i], children.second.genes[i]);
  }
  return children;
}

std::optional<Violation> validate(const LatentSpaceSpec& spec, const Genome& genome) {
  if (genome.size() != spec.total_dim()) {
    return Violation{std::min(genome.size(), spec.total_dim()),
                     "genome length " + std::to_string(genome.size()) + " != total_dim " +
                         std::to_string(spec.total_dim())};
  }
  std::size_t pos = 0;
  for (const BlockSpec& b : spec.blocks()) {
    for (std::size_t i = 0; i < b.length; ++i, ++pos) {
      const double v = genome.genes[pos];
      switch (b.kind) {
        case BlockKind::Boolean:
          if (v != 0.0 && v != 1.0) return Violation{pos, "boolean gene not in {0,1}"};
          break;
        case BlockKind::Real:
          if (!std::isfinite(v)) return Violation{pos, "real gene not finite"};
          if (b.truncated() && (v < b.lo || v > b.hi)) {
            return Violation{pos, "real gene outside [" + format_real(b.lo) + ", " +
                                      format_real(b.hi) + "]"};
          }
          break;
        case BlockKind::Integer:
          if (!std::isfinite(v) || v != std::floor(v)) {
            return Violation{pos, "integer gene not a whole number"};
          }
          if (v < static_cast<double>(b.int_lo) || v > static_cast<double>(b.int_hi)) {
            return Violation{pos, "integer gene outside [" + std::to_string(b.int_lo) + ", " +
                                      std::to_string(b.int_hi) + "]"};
          }
          break;
      }
    }
  }
  return std::nullopt;
}

}  // namespace glass
