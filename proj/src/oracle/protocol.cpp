#include "glass/oracle/protocol.hpp"

#include <cmath>
#include <limits>

namespace glass::oracle {
namespace {

using nlohmann::json;

constexpr double kMaxExactInteger = 9007199254740992.0;  // 2^53

json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  if (v == std::floor(v) && std::fabs(v) < kMaxExactInteger && !(v == 0.0 && std::signbit(v))) {
    return static_cast<std::int64_t>(v);
  }
  return v;
}

json number_list(const std::vector<double>& values) {
  json out = json::array();
  for (double v : values) out.push_back(number(v));
  return out;
}

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  throw ProtocolError("invalid message at " + path + ": " + what, 0, path);
}

const json& field(const json& obj, const std::string& key, const std::string& base) {
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(base + "/" + key, "missing field");
  return *it;
}

std::string get_string(const json& obj, const std::string& key, const std::string& base) {
  const json& v = field(obj, key, base);
  if (!v.is_string()) schema_error(base + "/" + key, "expected string");
  return v.get<std::string>();
}

std::uint64_t get_uint(const json& obj, const std::string& key, const std::string& base) {
  const json& v = field(obj, key, base);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    schema_error(base + "/" + key, "expected non-negative integer");
  }
  return v.get<std::uint64_t>();
}

double to_double(const json& v, const std::string& path, bool allow_null) {
  if (v.is_null() && allow_null) return std::numeric_limits<double>::quiet_NaN();
  if (!v.is_number()) schema_error(path, "expected number");
  return v.get<double>();
}

std::vector<double> get_numbers(const json& v, const std::string& path, bool allow_null) {
  if (!v.is_array()) schema_error(path, "expected array");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(to_double(v[i], path + "/" + std::to_string(i), allow_null));
  }
  return out;
}

std::vector<Genome> get_genomes(const json& obj, const std::string& key) {
  const json& v = field(obj, key, "");
  if (!v.is_array()) schema_error("/" + key, "expected array");
  std::vector<Genome> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(Genome{get_numbers(v[i], "/" + key + "/" + std::to_string(i), false)});
  }
  return out;
}

json measurement_to_json(const Measurement& m) {
  json out = json::object();
  if (m.error) {
    out["error"] = *m.error;
    return out;
  }
  if (!m.raw_objectives.empty()) {
    out["objectives"] = number_list(m.raw_objectives);
    return out;
  }
  out["embedding"] = number_list(m.embedding);
  if (m.d_prob) out["d_prob"] = number(*m.d_prob);
  return out;
}

Measurement measurement_from_json(const json& v, const std::string& path) {
  if (!v.is_object()) schema_error(path, "expected object");
  Measurement m;
  if (v.contains("error")) {
    m.error = get_string(v, "error", path);
    return m;
  }
  if (v.contains("objectives")) {
    m.raw_objectives = get_numbers(v["objectives"], path + "/objectives", true);
    return m;
  }
  m.embedding = get_numbers(field(v, "embedding", path), path + "/embedding", true);
  if (v.contains("d_prob")) m.d_prob = to_double(v["d_prob"], path + "/d_prob", true);
  return m;
}

json to_json(const Message& message) {
  return std::visit(
      [](const auto& msg) -> json {
        using T = std::decay_t<decltype(msg)>;
        json j = json::object();
        if constexpr (std::is_same_v<T, Hello>) {
          j["type"] = "hello";
          j["version"] = msg.version;
          j["space_fingerprint"] = msg.space_fingerprint;
          if (msg.embedding_dim) j["embedding_dim"] = *msg.embedding_dim;
          if (msg.supports_discriminator) j["supports_discriminator"] = *msg.supports_discriminator;
          if (msg.raw_objectives) j["raw_objectives"] = msg.raw_objectives;
          if (!msg.metadata.is_null()) j["metadata"] = msg.metadata;
        } else if constexpr (std::is_same_v<T, TargetRequest>) {
          j["type"] = "target";
          j["kind"] = msg.kind == TargetKind::Text ? "text" : "image_path";
          j["payload"] = msg.payload;
        } else if constexpr (std::is_same_v<T, TargetOk>) {
          j["type"] = "target_ok";
          j["embedding"] = number_list(msg.embedding);
        } else if constexpr (std::is_same_v<T, EvalRequest>) {
          j["type"] = "eval";
          j["id"] = msg.id;
          json genomes = json::array();
          for (const Genome& g : msg.genomes) genomes.push_back(number_list(g.genes));
          j["genomes"] = std::move(genomes);
        } else if constexpr (std::is_same_v<T, EvalOk>) {
          j["type"] = "eval_ok";
          j["id"] = msg.id;
          json results = json::array();
          for (const Measurement& m : msg.results) results.push_back(measurement_to_json(m));
          j["results"] = std::move(results);
        } else if constexpr (std::is_same_v<T, RenderRequest>) {
          j["type"] = "render";
          j["genome"] = number_list(msg.genome.genes);
          j["path"] = msg.path;
        } else if constexpr (std::is_same_v<T, RenderOk>) {
          j["type"] = "render_ok";
          j["path"] = msg.path;
        } else {
          j["type"] = "error";
          if (msg.id) j["id"] = *msg.id;
          j["message"] = msg.message;
        }
        return j;
      },
      message);
}

}  // namespace

std::string serialize(const Message& message) { return to_json(message).dump(); }

std::string_view type_name(const Message& message) {
  static constexpr std::string_view names[] = {"hello",  "target",    "target_ok", "eval",
                                               "eval_ok", "render", "render_ok", "error"};
  return names[message.index()];
}

Message parse_message(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ProtocolError(std::string("malformed message: ") + e.what(), e.byte, "");
  }
  if (!j.is_object()) schema_error("", "expected object");
  const std::string type = get_string(j, "type", "");

  if (type == "hello") {
    Hello h;
    const json& version = field(j, "version", "");
    if (!version.is_number_integer()) schema_error("/version", "expected integer");
    h.version = version.get<int>();
    h.space_fingerprint = get_string(j, "space_fingerprint", "");
    if (j.contains("embedding_dim")) h.embedding_dim = get_uint(j, "embedding_dim", "");
    if (j.contains("supports_discriminator")) {
      if (!j["supports_discriminator"].is_boolean()) {
        schema_error("/supports_discriminator", "expected boolean");
      }
      h.supports_discriminator = j["supports_discriminator"].get<bool>();
    }
    if (j.contains("raw_objectives")) h.raw_objectives = get_uint(j, "raw_objectives", "");
    if (j.contains("metadata")) h.metadata = j["metadata"];
    return h;
  }
  if (type == "target") {
    TargetRequest t;
    const std::string kind = get_string(j, "kind", "");
    if (kind == "text") {
      t.kind = TargetKind::Text;
    } else if (kind == "image_path") {
      t.kind = TargetKind::ImagePath;
    } else {
      schema_error("/kind", "expected \"text\" or \"image_path\"");
    }
    t.payload = get_string(j, "payload", "");
    return t;
  }
  if (type == "target_ok") {
    return TargetOk{get_numbers(field(j, "embedding", ""), "/embedding", false)};
  }
  if (type == "eval") {
    return EvalRequest{get_uint(j, "id", ""), get_genomes(j, "genomes")};
  }
  if (type == "eval_ok") {
    EvalOk ok;
    ok.id = get_uint(j, "id", "");
    const json& results = field(j, "results", "");
    if (!results.is_array()) schema_error("/results", "expected array");
    for (std::size_t i = 0; i < results.size(); ++i) {
      ok.results.push_back(measurement_from_json(results[i], "/results/" + std::to_string(i)));
    }
    return ok;
  }
  if (type == "render") {
    return RenderRequest{Genome{get_numbers(field(j, "genome", ""), "/genome", false)},
                         get_string(j, "path", "")};
  }
  if (type == "render_ok") return RenderOk{get_string(j, "path", "")};
  if (type == "error") {
    ErrorMessage e;
    if (j.contains("id")) e.id = get_uint(j, "id", "");
    e.message = get_string(j, "message", "");
    return e;
  }
  schema_error("/type", "unknown message type \"" + type + "\"");
}

}  // namespace glass::oracle
