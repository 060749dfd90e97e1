#include "glass/oracle/oracle.hpp"

namespace glass::oracle {
namespace {

Hello to_hello(const OracleHandshake& hs) {
  Hello h;
  h.version = hs.protocol_version;
  h.space_fingerprint = hs.space_fingerprint;
  h.embedding_dim = hs.embedding_dim;
  h.supports_discriminator = hs.supports_discriminator;
  h.raw_objectives = hs.raw_objectives;
  h.metadata = hs.metadata;
  return h;
}

[[noreturn]] void unexpected(const Message& reply, std::string_view wanted) {
  if (const auto* err = std::get_if<ErrorMessage>(&reply)) {
    throw OracleError("oracle error: " + err->message);
  }
  throw OracleError("expected \"" + std::string(wanted) + "\" from oracle, got \"" +
                    std::string(type_name(reply)) + "\"");
}

}  // namespace

std::string Oracle::render(const Genome&, const std::string&) {
  throw OracleError("oracle does not support rendering");
}

void check_handshake(const OracleHandshake& hs, const std::string& expected_fingerprint,
                     int expected_version) {
  if (hs.protocol_version != expected_version) {
    throw OracleError("protocol version mismatch: engine speaks " +
                      std::to_string(expected_version) + ", oracle speaks " +
                      std::to_string(hs.protocol_version));
  }
  if (hs.space_fingerprint != expected_fingerprint) {
    throw OracleError("latent space fingerprint mismatch: engine " + expected_fingerprint +
                      ", oracle " + hs.space_fingerprint);
  }
  if (hs.raw_objectives == 0 && hs.embedding_dim == 0) {
    throw OracleError("oracle reported neither an embedding dimension nor raw objectives");
  }
}

void check_batch(const OracleHandshake& hs, std::size_t genome_count,
                 std::span<const Measurement> results) {
  if (results.size() != genome_count) {
    throw OracleError("oracle returned " + std::to_string(results.size()) + " results for " +
                      std::to_string(genome_count) + " genomes");
  }
  for (std::size_t i = 0; i < results.size(); ++i) {
    const Measurement& m = results[i];
    if (m.error) continue;
    if (hs.raw_objectives) {
      if (m.raw_objectives.size() != hs.raw_objectives) {
        throw OracleError("result " + std::to_string(i) + " has " +
                          std::to_string(m.raw_objectives.size()) + " objectives, expected " +
                          std::to_string(hs.raw_objectives));
      }
    } else if (m.embedding.size() != hs.embedding_dim) {
      throw OracleError("embedding dimension drift at result " + std::to_string(i) + ": got " +
                        std::to_string(m.embedding.size()) + ", handshake said " +
                        std::to_string(hs.embedding_dim));
    }
  }
}

RemoteOracle::RemoteOracle(std::unique_ptr<LineTransport> transport, std::string space_fingerprint,
                           std::chrono::milliseconds timeout)
    : transport_(std::move(transport)),
      space_fingerprint_(std::move(space_fingerprint)),
      timeout_(timeout) {}

Message RemoteOracle::exchange(const Message& request, std::chrono::milliseconds timeout) {
  transport_->send_line(serialize(request));
  return parse_message(transport_->receive_line(timeout));
}

OracleHandshake RemoteOracle::handshake() {
  Hello hello;
  hello.space_fingerprint = space_fingerprint_;
  const Message reply = exchange(hello, timeout_);
  const auto* h = std::get_if<Hello>(&reply);
  if (!h) unexpected(reply, "hello");
  OracleHandshake hs;
  hs.protocol_version = h->version;
  hs.space_fingerprint = h->space_fingerprint;
  if (h->version == kProtocolVersion && !h->embedding_dim && !h->raw_objectives) {
    throw OracleError("malformed handshake: missing embedding_dim");
  }
  hs.embedding_dim = h->embedding_dim.value_or(0);
  hs.supports_discriminator = h->supports_discriminator.value_or(false);
  hs.raw_objectives = h->raw_objectives;
  hs.metadata = h->metadata;
  return hs;
}

std::vector<double> RemoteOracle::target(TargetKind kind, const std::string& payload) {
  const Message reply = exchange(TargetRequest{kind, payload}, timeout_);
  const auto* ok = std::get_if<TargetOk>(&reply);
  if (!ok) unexpected(reply, "target_ok");
  return ok->embedding;
}

std::vector<Measurement> RemoteOracle::evaluate_batch(std::span<const Genome> genomes) {
  if (genomes.empty()) return {};
  const std::uint64_t id = next_id_++;
  EvalRequest request{id, std::vector<Genome>(genomes.begin(), genomes.end())};
  Message reply = exchange(request, timeout_);
  auto* ok = std::get_if<EvalOk>(&reply);
  if (!ok) unexpected(reply, "eval_ok");
  if (ok->id != id) {
    throw OracleError("eval_ok id " + std::to_string(ok->id) + " does not match request " +
                      std::to_string(id));
  }
  if (ok->results.size() != genomes.size()) {
    throw OracleError("oracle returned " + std::to_string(ok->results.size()) +
                      " results for " + std::to_string(genomes.size()) + " genomes");
  }
  return std::move(ok->results);
}

std::string RemoteOracle::render(const Genome& genome, const std::string& path_stem) {
  const Message reply = exchange(RenderRequest{genome, path_stem}, timeout_);
  const auto* ok = std::get_if<RenderOk>(&reply);
  if (!ok) unexpected(reply, "render_ok");
  return ok->path;
}

void serve(Oracle& oracle, LineTransport& transport) {
  for (;;) {
    std::string line;
    try {
      line = transport.receive_line(std::chrono::hours(24));
    } catch (const TransportError& e) {
      if (std::string_view(e.what()).find("timed out") != std::string_view::npos) continue;
      return;
    }
    if (line.empty()) continue;

    Message reply;
    std::optional<std::uint64_t> id;
    try {
      const Message request = parse_message(line);
      if (std::holds_alternative<Hello>(request)) {
        reply = to_hello(oracle.handshake());
      } else if (const auto* t = std::get_if<TargetRequest>(&request)) {
        reply = TargetOk{oracle.target(t->kind, t->payload)};
      } else if (const auto* e = std::get_if<EvalRequest>(&request)) {
        id = e->id;
        reply = EvalOk{e->id, oracle.evaluate_batch(e->genomes)};
      } else if (const auto* r = std::get_if<RenderRequest>(&request)) {
        reply = RenderOk{oracle.render(r->genome, r->path)};
      } else {
        reply = ErrorMessage{std::nullopt,
                             "unexpected message type \"" + std::string(type_name(request)) + "\""};
      }
    } catch (const std::exception& ex) {
      reply = ErrorMessage{id, ex.what()};
    }
    try {
      transport.send_line(serialize(reply));
    } catch (const TransportError&) {
      return;
    }
  }
}

}  // namespace glass::oracle
