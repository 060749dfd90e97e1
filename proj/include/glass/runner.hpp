#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "glass/oracle/oracle.hpp"
#include "glass/run_config.hpp"
#include "glass/search.hpp"

namespace glass {

inline constexpr const char* kEngineVersion = "1.0.0";

/// Process exit codes of the glass CLI.
enum ExitCode : int {
  kExitOk = 0,
  kExitVerifyMismatch = 1,
  kExitConfigError = 2,
  kExitOracleFailure = 3,
  kExitInternalError = 4,
  kExitInterrupted = 130,
};

struct RunOutcome {
  SearchResult result;
  std::vector<ObjectiveSpec> objectives;
  oracle::OracleHandshake handshake;
  std::string space_fingerprint;
  std::optional<std::string> render_path;
  /// Set when the run stopped early because the oracle failed.
  std::optional<std::string> failure;
};

/// In-process oracle for benchmark configs, otherwise a RemoteOracle over a
/// child process or TCP connection.
std::unique_ptr<oracle::Oracle> open_oracle(const RunConfig& config, const LatentSpaceSpec& space);

/// Validates the config, handshakes, fetches the target and runs the search.
/// Throws ConfigError for bad configs and oracle::OracleError when the
/// oracle cannot be started; failures mid-search come back in `failure`
/// with the partial result.
RunOutcome execute_run(const RunConfig& config, const SearchHooks& hooks = {},
                       bool render = false);

nlohmann::json manifest_json(const RunConfig& config, const RunOutcome& outcome);

/// Writes through a temporary file and rename.
void write_file_atomic(const std::string& path, const std::string& contents);

struct VerifyReport {
  bool ok = false;
  std::string message;
  std::optional<std::size_t> divergent_generation;
};

/// Re-runs a manifest's config and compares history and final front
/// bit-exactly. Throws ConfigError for unreadable manifests or an engine
/// version mismatch.
VerifyReport verify_manifest(const nlohmann::json& manifest);
VerifyReport verify_manifest_file(const std::string& path);

}  // namespace glass
