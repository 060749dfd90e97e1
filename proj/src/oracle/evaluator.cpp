#include "glass/oracle/evaluator.hpp"

#include <algorithm>

namespace glass::oracle {

std::vector<ObjectiveSpec> objectives_for(const OracleHandshake& hs, bool use_discriminator,
                                          double real_label) {
  std::vector<ObjectiveSpec> specs;
  if (hs.raw_objectives) {
    for (std::size_t k = 0; k < hs.raw_objectives; ++k) {
      specs.push_back(ObjectiveSpec::custom("f" + std::to_string(k + 1), Direction::Minimize));
    }
    return specs;
  }
  specs.push_back(ObjectiveSpec::similarity());
  if (use_discriminator && hs.supports_discriminator) {
    specs.push_back(ObjectiveSpec::discriminator_loss(real_label));
  }
  return specs;
}

OracleEvaluator::OracleEvaluator(Oracle& oracle, OracleHandshake handshake,
                                 std::vector<ObjectiveSpec> objectives, std::vector<double> target,
                                 std::size_t batch_size)
    : oracle_(oracle),
      handshake_(std::move(handshake)),
      objectives_(std::move(objectives)),
      target_(std::move(target)),
      batch_size_(batch_size) {
  if (!handshake_.raw_objectives && target_.size() != handshake_.embedding_dim) {
    throw OracleError("target embedding has dimension " + std::to_string(target_.size()) +
                      ", handshake said " + std::to_string(handshake_.embedding_dim));
  }
}

std::vector<Evaluation> OracleEvaluator::evaluate(std::span<const Genome> genomes) {
  std::vector<Evaluation> out;
  out.reserve(genomes.size());
  const std::size_t chunk = batch_size_ ? batch_size_ : std::max<std::size_t>(genomes.size(), 1);
  for (std::size_t start = 0; start < genomes.size(); start += chunk) {
    const auto part = genomes.subspan(start, std::min(chunk, genomes.size() - start));
    const std::vector<Measurement> results = oracle_.evaluate_batch(part);
    ++requests_;
    check_batch(handshake_, part.size(), results);
    for (const Measurement& m : results) {
      out.push_back(Evaluation{assemble_objectives(objectives_, m, target_), m.error});
    }
  }
  return out;
}

}  // namespace glass::oracle
