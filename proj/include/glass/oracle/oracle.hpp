#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "glass/latent_space.hpp"
#include "glass/objectives.hpp"
#include "glass/oracle/protocol.hpp"
#include "glass/oracle/transport.hpp"

namespace glass::oracle {

struct OracleHandshake {
  int protocol_version = kProtocolVersion;
  std::size_t embedding_dim = 0;
  bool supports_discriminator = false;
  std::string space_fingerprint;
  std::size_t raw_objectives = 0;
  nlohmann::json metadata;
};

/// The evaluation boundary: maps genomes to what the generator and encoder
/// make of them.
class Oracle {
 public:
  virtual ~Oracle() = default;
  virtual OracleHandshake handshake() = 0;
  virtual std::vector<double> target(TargetKind kind, const std::string& payload) = 0;
  /// Order-aligned with `genomes`. Per-genome failures go in Measurement::error.
  virtual std::vector<Measurement> evaluate_batch(std::span<const Genome> genomes) = 0;
  /// Writes a rendering of the genome next to `path_stem` and returns the
  /// file written. The default reports that rendering is unsupported.
  virtual std::string render(const Genome& genome, const std::string& path_stem);
};

/// Throws OracleError on a version or fingerprint mismatch, or an unusable
/// description.
void check_handshake(const OracleHandshake& handshake, const std::string& expected_fingerprint,
                     int expected_version = kProtocolVersion);

/// Throws OracleError if the batch is misaligned or an entry's shape drifts
/// from the handshake.
void check_batch(const OracleHandshake& handshake, std::size_t genome_count,
                 std::span<const Measurement> results);

inline constexpr std::chrono::seconds kDefaultBatchTimeout{300};

/// Engine-side client of an oracle speaking the line protocol.
class RemoteOracle : public Oracle {
 public:
  RemoteOracle(std::unique_ptr<LineTransport> transport, std::string space_fingerprint,
               std::chrono::milliseconds timeout = kDefaultBatchTimeout);

  OracleHandshake handshake() override;
  std::vector<double> target(TargetKind kind, const std::string& payload) override;
  std::vector<Measurement> evaluate_batch(std::span<const Genome> genomes) override;
  std::string render(const Genome& genome, const std::string& path_stem) override;

 private:
  Message exchange(const Message& request, std::chrono::milliseconds timeout);

  std::unique_ptr<LineTransport> transport_;
  std::string space_fingerprint_;
  std::chrono::milliseconds timeout_;
  std::uint64_t next_id_ = 1;
};

/// Answers protocol requests with `oracle` until the peer closes the stream.
void serve(Oracle& oracle, LineTransport& transport);

}  // namespace glass::oracle
