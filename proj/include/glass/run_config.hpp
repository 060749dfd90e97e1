#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "glass/latent_space.hpp"

namespace glass {

/// Invalid or inconsistent run configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Everything needed to reproduce a run. Serialized as JSON with sections
/// preset | space, operators, engine, objectives, oracle, output.
struct RunConfig {
  // Latent space: a preset name or explicit blocks (benchmarks supply a default).
  std::optional<std::string> preset;
  std::optional<std::vector<BlockSpec>> blocks;

  OperatorParams operators;

  std::size_t population = 64;
  std::size_t generations = 500;
  std::uint64_t seed = 0;
  std::size_t log_every = 1;

  bool use_discriminator = true;
  double real_label = 1.0;
  std::optional<std::string> target_text;
  std::optional<std::string> target_image;

  // Exactly one oracle source.
  std::optional<std::string> benchmark;  // sphere | zdt1 | linear
  std::optional<std::string> oracle_cmd;
  std::optional<std::string> oracle_addr;
  std::size_t dim = 0;  // benchmark genome length, 0 for the landscape default
  double timeout_s = 300.0;
  std::size_t batch_size = 0;
  std::uint64_t matrix_seed = 1;
  std::size_t embedding_dim = 32;

  std::string out_dir = "glass-run";

  /// Throws ConfigError.
  void validate() const;
  LatentSpaceSpec space() const;
  std::size_t benchmark_dim() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Throws ConfigError on unknown keys, wrong types or invalid values.
RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& config);

/// Reads and parses a config file. Throws ConfigError.
RunConfig load_config(const std::string& path);

nlohmann::json block_to_json(const BlockSpec& block);
BlockSpec block_from_json(const nlohmann::json& j);

}  // namespace glass
