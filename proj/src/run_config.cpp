#include "glass/run_config.hpp"

#include <fstream>
#include <set>

#include "glass/oracle/synthetic.hpp"

namespace glass {
namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::string& section, std::set<std::string> allowed) {
  if (!obj.is_object()) throw ConfigError("config section \"" + section + "\" must be an object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) {
      throw ConfigError("unknown config key \"" + key + "\" in \"" + section + "\"");
    }
  }
}

template <typename T>
void read(const json& obj, const char* key, T& out, const std::string& section) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config key \"" + section + "." + key + "\" has the wrong type");
  }
}

template <typename T>
void read(const json& obj, const char* key, std::optional<T>& out, const std::string& section) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return;
  T value{};
  read(obj, key, value, section);
  out = std::move(value);
}

void read_count(const json& obj, const char* key, std::size_t& out, const std::string& section) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return;
  if (!it->is_number_integer() || it->get<std::int64_t>() < 0) {
    throw ConfigError("config key \"" + section + "." + key + "\" must be a non-negative integer");
  }
  out = it->get<std::size_t>();
}

void read_u64(const json& obj, const char* key, std::uint64_t& out, const std::string& section) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return;
  if (!it->is_number_unsigned() && !(it->is_number_integer() && it->get<std::int64_t>() >= 0)) {
    throw ConfigError("config key \"" + section + "." + key + "\" must be an unsigned integer");
  }
  out = it->get<std::uint64_t>();
}

template <typename T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

json block_to_json(const BlockSpec& b) {
  switch (b.kind) {
    case BlockKind::Boolean:
      return {{"kind", "boolean"}, {"length", b.length}};
    case BlockKind::Integer:
      return {{"kind", "integer"}, {"length", b.length}, {"lo", b.int_lo}, {"hi", b.int_hi}};
    case BlockKind::Real:
      break;
  }
  json j = {{"kind", "real"}, {"length", b.length}, {"mean", b.mean}, {"stddev", b.stddev}};
  if (b.truncated()) {
    j["distribution"] = "truncated_normal";
    j["lo"] = b.lo;
    j["hi"] = b.hi;
  } else {
    j["distribution"] = "normal";
  }
  return j;
}

BlockSpec block_from_json(const json& j) {
  check_keys(j, "space.blocks[]", {"kind", "length", "distribution", "mean", "stddev", "lo", "hi"});
  std::string kind;
  read(j, "kind", kind, "block");
  std::size_t length = 0;
  read_count(j, "length", length, "block");
  if (kind == "boolean") return BlockSpec::boolean(length);
  if (kind == "integer") {
    std::int64_t lo = 0;
    std::int64_t hi = 0;
    if (!j.contains("lo") || !j.contains("hi")) throw ConfigError("integer block needs lo and hi");
    read(j, "lo", lo, "block");
    read(j, "hi", hi, "block");
    return BlockSpec::integer(length, lo, hi);
  }
  if (kind == "real") {
    std::string distribution = "normal";
    double mean = 0.0;
    double stddev = 1.0;
    read(j, "distribution", distribution, "block");
    read(j, "mean", mean, "block");
    read(j, "stddev", stddev, "block");
    if (distribution == "normal") return BlockSpec::normal(length, mean, stddev);
    if (distribution == "truncated_normal") {
      if (!j.contains("lo") || !j.contains("hi")) {
        throw ConfigError("truncated_normal block needs lo and hi");
      }
      double lo = 0.0;
      double hi = 0.0;
      read(j, "lo", lo, "block");
      read(j, "hi", hi, "block");
      return BlockSpec::truncated_normal(length, mean, stddev, lo, hi);
    }
    throw ConfigError("unknown real distribution \"" + distribution + "\"");
  }
  throw ConfigError("unknown block kind \"" + kind + "\"");
}

std::size_t RunConfig::benchmark_dim() const {
  if (dim) return dim;
  if (benchmark == "zdt1") return 10;
  if (benchmark == "linear") return 16;
  return 8;
}

LatentSpaceSpec RunConfig::space() const {
  try {
    if (blocks) return LatentSpaceSpec(*blocks);
    if (preset) return preset_space(*preset);
    if (benchmark) return oracle::benchmark_space(*benchmark, benchmark_dim());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  throw ConfigError("no latent space: give a preset, explicit space blocks or a benchmark");
}

void RunConfig::validate() const {
  const int sources = (benchmark ? 1 : 0) + (oracle_cmd ? 1 : 0) + (oracle_addr ? 1 : 0);
  if (sources != 1) {
    throw ConfigError("exactly one of benchmark, oracle command or oracle address is required");
  }
  if (preset && blocks) throw ConfigError("give either a preset or explicit space blocks, not both");
  if (benchmark && *benchmark != "sphere" && *benchmark != "zdt1" && *benchmark != "linear") {
    throw ConfigError("unknown benchmark \"" + *benchmark + "\"");
  }
  if (target_text && target_image) throw ConfigError("give either a target text or a target image");
  if (!benchmark && !target_text && !target_image) {
    throw ConfigError("a target text or target image is required");
  }
  if (population < 4 || population % 2 != 0) {
    throw ConfigError("population must be even and at least 4");
  }
  if (generations < 1) throw ConfigError("generations must be at least 1");
  if (log_every < 1) throw ConfigError("log_every must be at least 1");
  if (!(real_label > 0.0 && real_label <= 1.0)) throw ConfigError("real_label must be in (0, 1]");
  if (!(timeout_s > 0.0)) throw ConfigError("timeout_s must be positive");
  if (embedding_dim == 0) throw ConfigError("embedding_dim must be positive");
  if (out_dir.empty()) throw ConfigError("output dir must not be empty");
  try {
    operators.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  (void)space();
}

RunConfig config_from_json(const json& j) {
  check_keys(j, "config", {"preset", "space", "operators", "engine", "objectives", "oracle", "output"});
  RunConfig c;
  read(j, "preset", c.preset, "config");
  if (auto it = j.find("space"); it != j.end() && !it->is_null()) {
    check_keys(*it, "space", {"blocks", "preset"});
    read(*it, "preset", c.preset, "space");
    if (auto b = it->find("blocks"); b != it->end()) {
      if (!b->is_array()) throw ConfigError("space.blocks must be an array");
      std::vector<BlockSpec> blocks;
      try {
        for (const json& block : *b) blocks.push_back(block_from_json(block));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
      c.blocks = std::move(blocks);
    }
  }
  if (auto it = j.find("operators"); it != j.end()) {
    check_keys(*it, "operators", {"mutation_prob_per_gene", "real_mutation_sigma", "crossover_prob"});
    read(*it, "mutation_prob_per_gene", c.operators.mutation_prob_per_gene, "operators");
    read(*it, "real_mutation_sigma", c.operators.real_mutation_sigma, "operators");
    read(*it, "crossover_prob", c.operators.crossover_prob, "operators");
  }
  if (auto it = j.find("engine"); it != j.end()) {
    check_keys(*it, "engine", {"population", "generations", "seed", "log_every"});
    read_count(*it, "population", c.population, "engine");
    read_count(*it, "generations", c.generations, "engine");
    read_u64(*it, "seed", c.seed, "engine");
    read_count(*it, "log_every", c.log_every, "engine");
  }
  if (auto it = j.find("objectives"); it != j.end()) {
    check_keys(*it, "objectives", {"discriminator", "real_label", "target_text", "target_image"});
    read(*it, "discriminator", c.use_discriminator, "objectives");
    read(*it, "real_label", c.real_label, "objectives");
    read(*it, "target_text", c.target_text, "objectives");
    read(*it, "target_image", c.target_image, "objectives");
  }
  if (auto it = j.find("oracle"); it != j.end()) {
    check_keys(*it, "oracle", {"benchmark", "command", "address", "dim", "timeout_s", "batch_size",
                               "matrix_seed", "embedding_dim"});
    read(*it, "benchmark", c.benchmark, "oracle");
    read(*it, "command", c.oracle_cmd, "oracle");
    read(*it, "address", c.oracle_addr, "oracle");
    read_count(*it, "dim", c.dim, "oracle");
    read(*it, "timeout_s", c.timeout_s, "oracle");
    read_count(*it, "batch_size", c.batch_size, "oracle");
    read_u64(*it, "matrix_seed", c.matrix_seed, "oracle");
    read_count(*it, "embedding_dim", c.embedding_dim, "oracle");
  }
  if (auto it = j.find("output"); it != j.end()) {
    check_keys(*it, "output", {"dir"});
    read(*it, "dir", c.out_dir, "output");
  }
  return c;
}

json config_to_json(const RunConfig& c) {
  json space = json::object();
  if (c.blocks) {
    json blocks = json::array();
    for (const BlockSpec& b : *c.blocks) blocks.push_back(block_to_json(b));
    space["blocks"] = std::move(blocks);
  }
  return {
      {"preset", opt(c.preset)},
      {"space", c.blocks ? space : json(nullptr)},
      {"operators",
       {{"mutation_prob_per_gene", opt(c.operators.mutation_prob_per_gene)},
        {"real_mutation_sigma", c.operators.real_mutation_sigma},
        {"crossover_prob", c.operators.crossover_prob}}},
      {"engine",
       {{"population", c.population},
        {"generations", c.generations},
        {"seed", c.seed},
        {"log_every", c.log_every}}},
      {"objectives",
       {{"discriminator", c.use_discriminator},
        {"real_label", c.real_label},
        {"target_text", opt(c.target_text)},
        {"target_image", opt(c.target_image)}}},
      {"oracle",
       {{"benchmark", opt(c.benchmark)},
        {"command", opt(c.oracle_cmd)},
        {"address", opt(c.oracle_addr)},
        {"dim", c.dim},
        {"timeout_s", c.timeout_s},
        {"batch_size", c.batch_size},
        {"matrix_seed", c.matrix_seed},
        {"embedding_dim", c.embedding_dim}}},
      {"output", {{"dir", c.out_dir}}},
  };
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file \"" + path + "\"");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file \"" + path + "\" is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

}  // namespace glass
