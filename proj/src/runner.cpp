#include "glass/runner.hpp"

#include <bit>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "glass/oracle/evaluator.hpp"
#include "glass/oracle/synthetic.hpp"
#include "glass/oracle/transport.hpp"

namespace glass {
namespace {

using nlohmann::json;

std::string hex64(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

json numbers(const std::vector<double>& values) {
  json out = json::array();
  for (double v : values) out.push_back(std::isfinite(v) ? json(v) : json(nullptr));
  return out;
}

json raw_objectives(const Individual& ind, const std::vector<ObjectiveSpec>& specs) {
  std::vector<double> raw;
  for (std::size_t k = 0; k < specs.size(); ++k) {
    raw.push_back(from_minimization(specs[k], ind.objectives[k]));
  }
  return numbers(raw);
}

json individual_json(const Individual& ind, const std::vector<ObjectiveSpec>& specs) {
  return {{"genome", numbers(ind.genome.genes)},
          {"objectives", raw_objectives(ind, specs)},
          {"rank", ind.rank},
          {"penalized", ind.penalized}};
}

bool same_bits(const json& a, const json& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_null() || b[i].is_null()) {
      if (a[i].is_null() != b[i].is_null()) return false;
      continue;
    }
    if (std::bit_cast<std::uint64_t>(a[i].get<double>()) !=
        std::bit_cast<std::uint64_t>(b[i].get<double>())) {
      return false;
    }
  }
  return true;
}

}  // namespace

std::unique_ptr<oracle::Oracle> open_oracle(const RunConfig& config, const LatentSpaceSpec& space) {
  using namespace std::chrono;
  const auto timeout = duration_cast<milliseconds>(duration<double>(config.timeout_s));
  if (config.benchmark) {
    try {
      if (*config.benchmark == "linear") {
        return std::make_unique<oracle::SyntheticLinearOracle>(space, config.matrix_seed,
                                                               config.embedding_dim, true);
      }
      return std::make_unique<oracle::BenchmarkOracle>(*config.benchmark, space);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  if (config.oracle_cmd) {
    return std::make_unique<oracle::RemoteOracle>(
        std::make_unique<oracle::ProcessTransport>(*config.oracle_cmd), space.fingerprint(),
        timeout);
  }
  return std::make_unique<oracle::RemoteOracle>(oracle::connect_tcp(*config.oracle_addr),
                                                space.fingerprint(), timeout);
}

RunOutcome execute_run(const RunConfig& config, const SearchHooks& hooks, bool render) {
  config.validate();
  const LatentSpaceSpec space = config.space();
  std::unique_ptr<oracle::Oracle> oracle = open_oracle(config, space);

  RunOutcome outcome;
  outcome.space_fingerprint = space.fingerprint();
  outcome.handshake = oracle->handshake();
  oracle::check_handshake(outcome.handshake, outcome.space_fingerprint);
  outcome.objectives =
      oracle::objectives_for(outcome.handshake, config.use_discriminator, config.real_label);

  std::vector<double> target;
  if (!outcome.handshake.raw_objectives) {
    if (config.target_image) {
      target = oracle->target(oracle::TargetKind::ImagePath, *config.target_image);
    } else {
      target = oracle->target(oracle::TargetKind::Text,
                              config.target_text.value_or("planted optimum"));
    }
  }
  oracle::OracleEvaluator evaluator(*oracle, outcome.handshake, outcome.objectives,
                                    std::move(target), config.batch_size);

  SearchConfig search{space,
                      config.operators,
                      config.population,
                      config.generations,
                      outcome.objectives,
                      config.seed,
                      config.log_every};
  try {
    outcome.result = run_search(search, evaluator, hooks);
  } catch (const SearchAborted& e) {
    outcome.result = e.partial();
    outcome.failure = e.what();
    return outcome;
  }

  if (render && !outcome.result.final_population.empty()) {
    try {
      outcome.render_path =
          oracle->render(outcome.result.best.genome, config.out_dir + "/best");
    } catch (const std::exception&) {
      outcome.render_path.reset();
    }
  }
  return outcome;
}

json manifest_json(const RunConfig& config, const RunOutcome& outcome) {
  const SearchResult& r = outcome.result;
  json history = json::array();
  for (const GenerationStats& g : r.history) {
    history.push_back({{"generation", g.generation},
                       {"evaluations", g.evaluations},
                       {"best", numbers(g.best)},
                       {"mean", numbers(g.mean)},
                       {"penalized", g.penalized},
                       {"population_hash", hex64(g.population_hash)}});
  }
  json front = json::array();
  for (const Individual& ind : r.pareto_front) {
    front.push_back(individual_json(ind, outcome.objectives));
  }
  json objectives = json::array();
  for (const ObjectiveSpec& o : outcome.objectives) {
    objectives.push_back({{"name", o.label()},
                          {"direction", o.direction == Direction::Maximize ? "maximize" : "minimize"}});
  }
  return {
      {"format", "glass-manifest"},
      {"engine_version", kEngineVersion},
      {"protocol_version", oracle::kProtocolVersion},
      {"complete", r.complete && !outcome.failure},
      {"failure", outcome.failure ? json(*outcome.failure) : json(nullptr)},
      {"seed", config.seed},
      {"config", config_to_json(config)},
      {"space_fingerprint", outcome.space_fingerprint},
      {"oracle", {{"embedding_dim", outcome.handshake.embedding_dim},
                  {"supports_discriminator", outcome.handshake.supports_discriminator},
                  {"raw_objectives", outcome.handshake.raw_objectives},
                  {"metadata", outcome.handshake.metadata}}},
      {"objectives", objectives},
      {"evaluations", r.evaluations},
      {"history", history},
      {"pareto_front", front},
      {"best", r.final_population.empty() ? json(nullptr)
                                          : individual_json(r.best, outcome.objectives)},
      {"render", outcome.render_path ? json(*outcome.render_path) : json(nullptr)},
  };
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << contents;
    if (!out.flush()) throw std::runtime_error("cannot write " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

VerifyReport verify_manifest(const json& manifest) {
  if (!manifest.is_object() || manifest.value("format", "") != "glass-manifest") {
    throw ConfigError("not a glass manifest");
  }
  const std::string version = manifest.value("engine_version", "");
  if (version != kEngineVersion) {
    throw ConfigError("manifest was written by engine " + version + ", this is " + kEngineVersion);
  }
  const RunConfig config = config_from_json(manifest.at("config"));
  const RunOutcome rerun = execute_run(config);
  if (rerun.failure) {
    return {false, "re-run failed: " + *rerun.failure, std::nullopt};
  }
  const json fresh = manifest_json(config, rerun);

  const json& old_history = manifest.at("history");
  const json& new_history = fresh.at("history");
  const std::size_t common = std::min(old_history.size(), new_history.size());
  for (std::size_t g = 0; g < common; ++g) {
    if (old_history[g].at("population_hash") != new_history[g].at("population_hash")) {
      return {false, "populations diverge at generation " + std::to_string(g), g};
    }
  }
  if (old_history.size() != new_history.size()) {
    return {false,
            "manifest records " + std::to_string(old_history.size()) +
                " generations, re-run produced " + std::to_string(new_history.size()),
            common};
  }

  const std::size_t last = new_history.empty() ? 0 : new_history.size() - 1;
  const json& old_front = manifest.at("pareto_front");
  const json& new_front = fresh.at("pareto_front");
  bool front_ok = old_front.size() == new_front.size();
  for (std::size_t i = 0; front_ok && i < old_front.size(); ++i) {
    front_ok = same_bits(old_front[i].at("genome"), new_front[i].at("genome")) &&
               same_bits(old_front[i].at("objectives"), new_front[i].at("objectives"));
  }
  if (!front_ok) {
    return {false, "final front differs from re-run at generation " + std::to_string(last), last};
  }
  if (!same_bits(manifest.at("best").at("genome"), fresh.at("best").at("genome"))) {
    return {false, "best genome differs from re-run at generation " + std::to_string(last), last};
  }
  return {true, std::to_string(new_history.size()) + " generations reproduced",
          std::nullopt};
}

VerifyReport verify_manifest_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open manifest \"" + path + "\"");
  json manifest;
  try {
    manifest = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("manifest \"" + path + "\" is not valid JSON: " + e.what());
  }
  return verify_manifest(manifest);
}

}  // namespace glass
