#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "glass/latent_space.hpp"
#include "glass/objectives.hpp"

namespace glass::oracle {

inline constexpr int kProtocolVersion = 1;

/// Any failure talking to, or reported by, an oracle.
class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A line that is not a valid protocol message. `byte` is the 1-based offset
/// of the last byte read at a syntax error; `path` is the JSON pointer of a
/// schema error.
class ProtocolError : public OracleError {
 public:
  ProtocolError(const std::string& what, std::size_t byte, std::string path)
      : OracleError(what), byte_(byte), path_(std::move(path)) {}
  std::size_t byte() const { return byte_; }
  const std::string& path() const { return path_; }

 private:
  std::size_t byte_;
  std::string path_;
};

enum class TargetKind { Text, ImagePath };

/// Sent by the engine with only version and fingerprint; the oracle answers
/// with the full description.
struct Hello {
  int version = kProtocolVersion;
  std::string space_fingerprint;
  std::optional<std::size_t> embedding_dim;
  std::optional<bool> supports_discriminator;
  /// Extension: oracles that report objective values directly set this to
  /// the number of objectives and leave embedding_dim at 0.
  std::size_t raw_objectives = 0;
  nlohmann::json metadata;

  friend bool operator==(const Hello&, const Hello&) = default;
};

struct TargetRequest {
  TargetKind kind = TargetKind::Text;
  std::string payload;
  friend bool operator==(const TargetRequest&, const TargetRequest&) = default;
};

struct TargetOk {
  std::vector<double> embedding;
  friend bool operator==(const TargetOk&, const TargetOk&) = default;
};

struct EvalRequest {
  std::uint64_t id = 0;
  std::vector<Genome> genomes;
  friend bool operator==(const EvalRequest&, const EvalRequest&) = default;
};

struct EvalOk {
  std::uint64_t id = 0;
  std::vector<Measurement> results;
  friend bool operator==(const EvalOk&, const EvalOk&) = default;
};

struct RenderRequest {
  Genome genome;
  std::string path;  // output stem; the oracle picks the extension
  friend bool operator==(const RenderRequest&, const RenderRequest&) = default;
};

struct RenderOk {
  std::string path;
  friend bool operator==(const RenderOk&, const RenderOk&) = default;
};

struct ErrorMessage {
  std::optional<std::uint64_t> id;
  std::string message;
  friend bool operator==(const ErrorMessage&, const ErrorMessage&) = default;
};

using Message = std::variant<Hello, TargetRequest, TargetOk, EvalRequest, EvalOk, RenderRequest,
                             RenderOk, ErrorMessage>;

/// One line of JSON without the trailing newline. Keys are sorted, integral
/// values are written as integers and non-finite values as null.
std::string serialize(const Message& message);

/// Throws ProtocolError.
Message parse_message(std::string_view line);

std::string_view type_name(const Message& message);

}  // namespace glass::oracle
