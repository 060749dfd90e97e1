#include "glass/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "glass/kernels.hpp"

namespace glass {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

ObjectiveSpec ObjectiveSpec::similarity() { return {ObjectiveId::Similarity, Direction::Maximize, 1.0, {}}; }

ObjectiveSpec ObjectiveSpec::discriminator_loss(double real_label) {
  if (!(real_label > 0.0 && real_label <= 1.0)) {
    throw std::invalid_argument("real_label must be in (0, 1]");
  }
  return {ObjectiveId::DiscriminatorLoss, Direction::Minimize, real_label, {}};
}

ObjectiveSpec ObjectiveSpec::custom(std::string name, Direction direction) {
  return {ObjectiveId::Custom, direction, 1.0, std::move(name)};
}

std::string ObjectiveSpec::label() const {
  switch (id) {
    case ObjectiveId::Similarity:
      return "similarity";
    case ObjectiveId::DiscriminatorLoss:
      return "discriminator_loss";
    case ObjectiveId::Custom:
      break;
  }
  return name.empty() ? "custom" : name;
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("cosine_similarity: dimension mismatch");
  const double na = kernels::sum_squares(a);
  const double nb = kernels::sum_squares(b);
  if (na == 0.0 || nb == 0.0) throw std::invalid_argument("cosine_similarity: zero-norm input");
  return kernels::dot(a, b) / (std::sqrt(na) * std::sqrt(nb));
}

double discriminator_loss(double d_prob, double real_label) {
  if (!(d_prob >= 0.0 && d_prob <= 1.0)) {
    throw std::invalid_argument("discriminator_loss: d_prob outside [0,1]");
  }
  if (!(real_label >= 0.0 && real_label <= 1.0)) {
    throw std::invalid_argument("discriminator_loss: real_label outside [0,1]");
  }
  const double p = std::clamp(d_prob, kProbabilityEpsilon, 1.0 - kProbabilityEpsilon);
  return -(real_label * std::log(p) + (1.0 - real_label) * std::log(1.0 - p));
}

double to_minimization(const ObjectiveSpec& spec, double raw) {
  if (!std::isfinite(raw)) throw std::domain_error("to_minimization: non-finite objective");
  return spec.direction == Direction::Maximize ? -raw : raw;
}

double from_minimization(const ObjectiveSpec& spec, double minimized) {
  return spec.direction == Direction::Maximize ? -minimized : minimized;
}

std::vector<double> assemble_objectives(std::span<const ObjectiveSpec> specs,
                                        const Measurement& m, std::span<const double> target) {
  std::vector<double> out(specs.size(), kNaN);
  if (m.error) return out;

  const bool raw_mode = !m.raw_objectives.empty();
  if (raw_mode) {
    if (m.raw_objectives.size() != specs.size()) {
      throw std::invalid_argument("raw objective count does not match objective specs");
    }
    for (std::size_t k = 0; k < specs.size(); ++k) {
      if (std::isfinite(m.raw_objectives[k])) {
        out[k] = to_minimization(specs[k], m.raw_objectives[k]);
      }
    }
    return out;
  }

  for (std::size_t k = 0; k < specs.size(); ++k) {
    const ObjectiveSpec& spec = specs[k];
    switch (spec.id) {
      case ObjectiveId::Similarity: {
        if (m.embedding.size() != target.size()) {
          throw std::invalid_argument("embedding dimension " + std::to_string(m.embedding.size()) +
                                      " != target dimension " + std::to_string(target.size()));
        }
        if (!all_finite(m.embedding)) break;
        if (kernels::sum_squares(m.embedding) == 0.0) break;
        out[k] = to_minimization(spec, cosine_similarity(m.embedding, target));
        break;
      }
      case ObjectiveId::DiscriminatorLoss: {
        if (!m.d_prob) throw std::invalid_argument("discriminator loss requires d_prob");
        const double p = *m.d_prob;
        if (!(p >= 0.0 && p <= 1.0)) break;
        out[k] = to_minimization(spec, discriminator_loss(p, spec.real_label));
        break;
      }
      case ObjectiveId::Custom:
        throw std::invalid_argument("custom objective needs raw objective values from the oracle");
    }
  }
  return out;
}

std::vector<std::vector<double>> assemble_objectives(std::span<const ObjectiveSpec> specs,
                                                     std::span<const Measurement> measurements,
                                                     std::span<const double> target) {
  std::vector<std::vector<double>> out;
  out.reserve(measurements.size());
  for (const Measurement& m : measurements) out.push_back(assemble_objectives(specs, m, target));
  return out;
}

}  // namespace glass
