#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "glass/objectives.hpp"
#include "glass/oracle/oracle.hpp"
#include "glass/search.hpp"

namespace glass::oracle {

/// Objective list implied by a handshake: raw objectives as minimized
/// customs, otherwise similarity plus the discriminator loss when the oracle
/// has a discriminator and it is wanted.
std::vector<ObjectiveSpec> objectives_for(const OracleHandshake& handshake, bool use_discriminator,
                                          double real_label = 1.0);

/// Engine-side adapter: sends genomes to an oracle in chunks, checks the
/// replies against the handshake and turns measurements into objective
/// vectors against a fixed target embedding.
class OracleEvaluator : public Evaluator {
 public:
  /// batch_size 0 sends each population as one request.
  OracleEvaluator(Oracle& oracle, OracleHandshake handshake, std::vector<ObjectiveSpec> objectives,
                  std::vector<double> target, std::size_t batch_size = 0);

  std::vector<Evaluation> evaluate(std::span<const Genome> genomes) override;

  std::size_t requests() const { return requests_; }

 private:
  Oracle& oracle_;
  OracleHandshake handshake_;
  std::vector<ObjectiveSpec> objectives_;
  std::vector<double> target_;
  std::size_t batch_size_;
  std::size_t requests_ = 0;
};

}  // namespace glass::oracle
