// glass: evolutionary latent-space search against an embedding oracle.
//
//   glass run     --benchmark sphere --dim 8 --generations 100 --seed 7
//   glass run     --preset stylegan2 --target-text "..." --oracle-cmd "python sidecar.py"
//   glass verify  glass-run/manifest.json
//   glass oracle  --benchmark linear --dim 16        (serve a built-in oracle on stdio)

#include <unistd.h>

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "glass/kernels.hpp"
#include "glass/oracle/synthetic.hpp"
#include "glass/runner.hpp"

namespace {

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop.store(true); }

enum class Level { Error = 0, Warn = 1, Info = 2, Debug = 3 };

Level log_level() {
  const char* env = std::getenv("GLASS_LOG_LEVEL");
  const std::string v = env ? env : "info";
  if (v == "error") return Level::Error;
  if (v == "warn") return Level::Warn;
  if (v == "debug") return Level::Debug;
  return Level::Info;
}

void log(Level level, const std::string& msg) {
  static const Level threshold = log_level();
  if (level > threshold) return;
  static constexpr const char* names[] = {"error", "warn", "info", "debug"};
  std::cerr << "[glass " << names[static_cast<int>(level)] << "] " << msg << '\n';
}

std::string now_iso8601() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

struct RunFlags {
  std::string config_path;
  std::optional<std::string> preset, target_text, target_image, oracle_cmd, oracle_addr, benchmark,
      out_dir;
  std::optional<std::size_t> dim, population, generations, log_every, batch_size;
  std::optional<std::uint64_t> seed;
  std::optional<double> timeout_s;
  bool no_discriminator = false;
};

glass::RunConfig build_config(const RunFlags& f) {
  glass::RunConfig c = f.config_path.empty() ? glass::RunConfig{} : glass::load_config(f.config_path);
  // Flags override the file; choosing an oracle source on the command line
  // replaces whichever one the file named.
  if (f.benchmark || f.oracle_cmd || f.oracle_addr) {
    c.benchmark = f.benchmark;
    c.oracle_cmd = f.oracle_cmd;
    c.oracle_addr = f.oracle_addr;
  }
  if (f.preset) {
    c.preset = f.preset;
    c.blocks.reset();
  }
  if (f.target_text) {
    c.target_text = f.target_text;
    c.target_image.reset();
  }
  if (f.target_image) {
    c.target_image = f.target_image;
    c.target_text.reset();
  }
  if (f.dim) c.dim = *f.dim;
  if (f.population) c.population = *f.population;
  if (f.generations) c.generations = *f.generations;
  if (f.log_every) c.log_every = *f.log_every;
  if (f.batch_size) c.batch_size = *f.batch_size;
  if (f.seed) c.seed = *f.seed;
  if (f.timeout_s) c.timeout_s = *f.timeout_s;
  if (f.out_dir) c.out_dir = *f.out_dir;
  if (f.no_discriminator) c.use_discriminator = false;
  c.validate();
  return c;
}

std::string format_values(const std::vector<double>& v) {
  std::string out;
  for (double x : v) {
    if (!out.empty()) out += ", ";
    out += std::to_string(x);
  }
  return "[" + out + "]";
}

int cmd_run(const RunFlags& flags) {
  glass::RunConfig config;
  try {
    config = build_config(flags);
  } catch (const glass::ConfigError& e) {
    log(Level::Error, std::string("config error: ") + e.what());
    return glass::kExitConfigError;
  }

  std::filesystem::create_directories(config.out_dir);
  const std::string manifest_path = config.out_dir + "/manifest.json";
  std::ofstream gen_log(config.out_dir + "/generations.jsonl", std::ios::trunc);
  auto emit = [&](const nlohmann::json& record) {
    gen_log << record.dump() << '\n';
    gen_log.flush();
  };
  emit({{"event", "start"}, {"time", now_iso8601()}, {"seed", config.seed},
        {"engine_version", glass::kEngineVersion}});
  log(Level::Debug, std::string("kernels: ") + std::string(glass::kernels::active_kernels().name));

  glass::SearchHooks hooks;
  hooks.on_progress = [&](const glass::GenerationStats& g) {
    nlohmann::json best = nlohmann::json::array();
    nlohmann::json mean = nlohmann::json::array();
    for (double v : g.best) best.push_back(std::isfinite(v) ? nlohmann::json(v) : nullptr);
    for (double v : g.mean) mean.push_back(std::isfinite(v) ? nlohmann::json(v) : nullptr);
    emit({{"event", "generation"},
          {"generation", g.generation},
          {"evaluations", g.evaluations},
          {"best", best},
          {"mean", mean},
          {"penalized", g.penalized}});
    log(Level::Info, "generation " + std::to_string(g.generation) + " best " +
                         format_values(g.best) + " evaluations " + std::to_string(g.evaluations));
  };
  hooks.should_stop = [] { return g_stop.load(); };

  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);

  glass::RunOutcome outcome;
  try {
    outcome = glass::execute_run(config, hooks, /*render=*/true);
  } catch (const glass::ConfigError& e) {
    log(Level::Error, std::string("config error: ") + e.what());
    emit({{"event", "end"}, {"time", now_iso8601()}, {"complete", false}});
    return glass::kExitConfigError;
  } catch (const glass::oracle::OracleError& e) {
    log(Level::Error, std::string("oracle failure: ") + e.what());
    emit({{"event", "end"}, {"time", now_iso8601()}, {"complete", false}});
    return glass::kExitOracleFailure;
  }

  glass::write_file_atomic(manifest_path, glass::manifest_json(config, outcome).dump(2) + "\n");
  const bool complete = outcome.result.complete && !outcome.failure;
  emit({{"event", "end"}, {"time", now_iso8601()}, {"complete", complete},
        {"evaluations", outcome.result.evaluations}});

  if (outcome.failure) {
    log(Level::Error, "oracle failure: " + *outcome.failure + " (partial manifest written)");
    return glass::kExitOracleFailure;
  }
  if (!outcome.result.complete) {
    log(Level::Warn, "interrupted; partial manifest written to " + manifest_path);
    return glass::kExitInterrupted;
  }
  if (outcome.render_path) log(Level::Info, "rendered best genome to " + *outcome.render_path);
  log(Level::Info, "manifest written to " + manifest_path);
  return glass::kExitOk;
}

int cmd_verify(const std::string& path) {
  try {
    const glass::VerifyReport report = glass::verify_manifest_file(path);
    std::cout << (report.ok ? "ok" : "mismatch") << ": " << report.message << '\n';
    return report.ok ? glass::kExitOk : glass::kExitVerifyMismatch;
  } catch (const glass::ConfigError& e) {
    log(Level::Error, std::string("cannot verify: ") + e.what());
    return glass::kExitConfigError;
  } catch (const glass::oracle::OracleError& e) {
    log(Level::Error, std::string("oracle unavailable: ") + e.what());
    return glass::kExitOracleFailure;
  }
}

struct OracleFlags {
  std::string benchmark = "linear";
  std::optional<std::string> preset, listen;
  std::size_t dim = 0;
  std::uint64_t matrix_seed = 1;
  std::size_t embedding_dim = 32;
  bool no_discriminator = false;
};

int cmd_oracle(const OracleFlags& f) {
  std::unique_ptr<glass::oracle::Oracle> oracle;
  try {
    glass::RunConfig c;
    c.benchmark = f.benchmark;
    c.preset = f.preset;
    c.dim = f.dim;
    const glass::LatentSpaceSpec space = c.space();
    if (f.benchmark == "linear") {
      oracle = std::make_unique<glass::oracle::SyntheticLinearOracle>(
          space, f.matrix_seed, f.embedding_dim, !f.no_discriminator);
    } else {
      oracle = std::make_unique<glass::oracle::BenchmarkOracle>(f.benchmark, space);
    }
  } catch (const std::exception& e) {
    log(Level::Error, std::string("config error: ") + e.what());
    return glass::kExitConfigError;
  }

  if (f.listen) {
    const auto [fd, port] = glass::oracle::listen_tcp(*f.listen);
    std::cerr << "listening on port " << port << std::endl;
    auto transport = glass::oracle::accept_one(fd);
    ::close(fd);
    glass::oracle::serve(*oracle, *transport);
  } else {
    glass::oracle::FdTransport stdio(STDIN_FILENO, STDOUT_FILENO);
    glass::oracle::serve(*oracle, stdio);
  }
  return glass::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evolutionary latent-space search against an embedding oracle"};
  app.require_subcommand(1);

  RunFlags run;
  CLI::App* run_cmd = app.add_subcommand("run", "Run a search and write a manifest");
  run_cmd->add_option("--config", run.config_path, "JSON config file")->check(CLI::ExistingFile);
  run_cmd->add_option("--preset", run.preset, "biggan | stylegan2 | gpt2 | gpt2(n)");
  run_cmd->add_option("--target-text", run.target_text, "Target caption");
  run_cmd->add_option("--target-image", run.target_image, "Target image path");
  run_cmd->add_option("--oracle-cmd", run.oracle_cmd, "Oracle command, spoken to over stdio");
  run_cmd->add_option("--oracle-addr", run.oracle_addr, "Oracle host:port");
  run_cmd->add_option("--benchmark", run.benchmark, "Built-in oracle")
      ->check(CLI::IsMember({"sphere", "zdt1", "linear"}));
  run_cmd->add_option("--dim", run.dim, "Benchmark genome length");
  run_cmd->add_option("--population", run.population, "Population size (even, >= 4)");
  run_cmd->add_option("--generations", run.generations, "Generations (default 500)");
  run_cmd->add_option("--seed", run.seed, "64-bit seed");
  run_cmd->add_option("--log-every", run.log_every, "Progress record stride");
  run_cmd->add_option("--batch-size", run.batch_size, "Genomes per oracle request (0 = all)");
  run_cmd->add_option("--timeout", run.timeout_s, "Oracle timeout per batch, seconds");
  run_cmd->add_flag("--no-discriminator", run.no_discriminator, "Optimize similarity only");
  run_cmd->add_option("--out-dir", run.out_dir, "Output directory");

  std::string manifest_path;
  CLI::App* verify_cmd = app.add_subcommand("verify", "Re-run a manifest and compare bit-exactly");
  verify_cmd->add_option("manifest", manifest_path, "manifest.json")->required();

  OracleFlags oracle_flags;
  CLI::App* oracle_cmd = app.add_subcommand("oracle", "Serve a built-in oracle over the wire protocol");
  oracle_cmd->add_option("--benchmark", oracle_flags.benchmark, "linear | sphere | zdt1")
      ->check(CLI::IsMember({"sphere", "zdt1", "linear"}));
  oracle_cmd->add_option("--preset", oracle_flags.preset, "Latent space preset");
  oracle_cmd->add_option("--dim", oracle_flags.dim, "Genome length");
  oracle_cmd->add_option("--matrix-seed", oracle_flags.matrix_seed, "Linear oracle matrix seed");
  oracle_cmd->add_option("--embedding-dim", oracle_flags.embedding_dim, "Linear oracle embedding size");
  oracle_cmd->add_flag("--no-discriminator", oracle_flags.no_discriminator, "Do not report d_prob");
  oracle_cmd->add_option("--listen", oracle_flags.listen, "Serve one TCP connection on host:port");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? glass::kExitOk : glass::kExitConfigError;
  }

  try {
    if (*run_cmd) return cmd_run(run);
    if (*verify_cmd) return cmd_verify(manifest_path);
    if (*oracle_cmd) return cmd_oracle(oracle_flags);
  } catch (const std::exception& e) {
    log(Level::Error, std::string("internal error: ") + e.what());
    return glass::kExitInternalError;
  }
  return glass::kExitInternalError;
}
