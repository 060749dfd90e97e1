#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace glass {

enum class ObjectiveId { Similarity, DiscriminatorLoss, Custom };
enum class Direction { Maximize, Minimize };

struct ObjectiveSpec {
  ObjectiveId id = ObjectiveId::Similarity;
  Direction direction = Direction::Maximize;
  double real_label = 1.0;  // discriminator loss only, in (0, 1]
  std::string name;         // custom only

  static ObjectiveSpec similarity();
  static ObjectiveSpec discriminator_loss(double real_label = 1.0);
  static ObjectiveSpec custom(std::string name, Direction direction);

  std::string label() const;

  friend bool operator==(const ObjectiveSpec&, const ObjectiveSpec&) = default;
};

/// Everything the oracle reports for one genome.
struct Measurement {
  std::vector<double> embedding;
  std::optional<double> d_prob;
  /// Objective values reported directly by benchmark oracles, in raw direction.
  std::vector<double> raw_objectives;
  std::optional<std::string> error;

  friend bool operator==(const Measurement&, const Measurement&) = default;
};

inline constexpr double kProbabilityEpsilon = 1e-7;

/// <a,b> / (|a| |b|). Throws std::invalid_argument on dimension mismatch or
/// a zero-norm input.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

/// Binary cross-entropy of a discriminator probability against the real
/// label, with the probability clamped to [eps, 1 - eps].
double discriminator_loss(double d_prob, double real_label = 1.0);

/// Maps a raw objective onto the engine's minimize-everything convention.
/// Throws std::domain_error for non-finite input.
double to_minimization(const ObjectiveSpec& spec, double raw);
double from_minimization(const ObjectiveSpec& spec, double minimized);

/// Objective vector for one measurement, in spec order, already in the
/// minimization convention. Values that cannot be computed (non-finite
/// embedding, zero-norm embedding, oracle error) come out as NaN and are
/// penalized by the engine. Throws std::invalid_argument when d_prob is
/// required but missing, or the embedding dimension differs from target.
std::vector<double> assemble_objectives(std::span<const ObjectiveSpec> specs,
                                        const Measurement& measurement,
                                        std::span<const double> target);

std::vector<std::vector<double>> assemble_objectives(std::span<const ObjectiveSpec> specs,
                                                     std::span<const Measurement> measurements,
                                                     std::span<const double> target);

}  // namespace glass
