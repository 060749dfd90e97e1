#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "glass/objectives.hpp"

using namespace glass;

TEST_CASE("cosine similarity examples") {
  const std::vector<double> a = {0.3, -1.2, 4.0, 0.01, 7.5};
  CHECK(std::fabs(cosine_similarity(a, a) - 1.0) <= 1e-9);
  CHECK(cosine_similarity(std::vector<double>{1, 0}, std::vector<double>{0, 1}) == 0.0);
  // 1 / sqrt(2)
  CHECK(std::fabs(cosine_similarity(std::vector<double>{1, 0}, std::vector<double>{1, 1}) -
                  0.70710678118654752) <= 1e-12);
}

TEST_CASE("cosine similarity errors") {
  CHECK_THROWS_AS(cosine_similarity(std::vector<double>{0, 0}, std::vector<double>{1, 1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(cosine_similarity(std::vector<double>{1, 0}, std::vector<double>{1, 1, 1}),
                  std::invalid_argument);
}

TEST_CASE("discriminator loss examples") {
  CHECK(discriminator_loss(1.0, 1.0) >= 0.0);
  CHECK(discriminator_loss(1.0, 1.0) <= 1e-6);
  CHECK(std::fabs(discriminator_loss(0.5, 1.0) - 0.693147180559945) <= 1e-12);
  // -ln(1e-7)
  CHECK(std::fabs(discriminator_loss(0.0, 1.0) - 16.11809565095832) <= 1e-9);
  // Soft label: -(0.9 ln 0.8 + 0.1 ln 0.2)
  CHECK(std::fabs(discriminator_loss(0.8, 0.9) - 0.3617729874261988) <= 1e-12);
}

TEST_CASE("discriminator loss rejects out-of-range inputs") {
  CHECK_THROWS_AS(discriminator_loss(-0.1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(discriminator_loss(1.1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(discriminator_loss(0.5, -0.5), std::invalid_argument);
  CHECK_THROWS_AS(ObjectiveSpec::discriminator_loss(0.0), std::invalid_argument);
  CHECK_THROWS_AS(discriminator_loss(std::nan(""), 1.0), std::invalid_argument);
}

TEST_CASE("direction normalization") {
  CHECK(to_minimization(ObjectiveSpec::similarity(), 0.8) == -0.8);
  CHECK(to_minimization(ObjectiveSpec::discriminator_loss(), 0.3) == 0.3);
  CHECK(from_minimization(ObjectiveSpec::similarity(), -0.8) == 0.8);
  CHECK_THROWS_AS(to_minimization(ObjectiveSpec::similarity(), INFINITY), std::domain_error);

  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> d(-5, 5);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> raw(1 + t % 17);
    for (double& x : raw) x = d(gen);
    std::vector<double> mapped;
    for (double x : raw) mapped.push_back(to_minimization(ObjectiveSpec::similarity(), x));
    CHECK(std::max_element(raw.begin(), raw.end()) - raw.begin() ==
          std::min_element(mapped.begin(), mapped.end()) - mapped.begin());
  }
}

TEST_CASE("assemble: similarity only") {
  const std::vector<ObjectiveSpec> specs = {ObjectiveSpec::similarity()};
  const std::vector<double> target = {0.2, 0.4, -0.1};
  Measurement m;
  m.embedding = target;
  auto v = assemble_objectives(specs, m, target);
  REQUIRE(v.size() == 1);
  CHECK(std::fabs(v[0] + 1.0) <= 1e-12);

  m.d_prob = 0.25;  // ignored without a discriminator objective
  v = assemble_objectives(specs, m, target);
  CHECK(v.size() == 1);
}

TEST_CASE("assemble: similarity and discriminator loss") {
  const std::vector<ObjectiveSpec> specs = {ObjectiveSpec::similarity(),
                                            ObjectiveSpec::discriminator_loss(1.0)};
  Measurement m;
  m.embedding = {0.0, 3.0};
  m.d_prob = 0.5;
  const auto v = assemble_objectives(specs, m, std::vector<double>{2.0, 0.0});
  REQUIRE(v.size() == 2);
  CHECK(std::fabs(v[0]) <= 1e-12);
  CHECK(std::fabs(v[1] - 0.693147) <= 1e-6);
}

TEST_CASE("assemble: contract violations throw, unusable values become NaN") {
  const std::vector<ObjectiveSpec> both = {ObjectiveSpec::similarity(),
                                           ObjectiveSpec::discriminator_loss()};
  Measurement m;
  m.embedding = {1.0, 0.0};
  CHECK_THROWS_AS(assemble_objectives(both, m, std::vector<double>{1.0, 0.0}),
                  std::invalid_argument);
  m.d_prob = 0.5;
  CHECK_THROWS_AS(assemble_objectives(both, m, std::vector<double>{1.0, 0.0, 0.0}),
                  std::invalid_argument);

  m.embedding = {std::nan(""), 1.0};
  auto v = assemble_objectives(both, m, std::vector<double>{1.0, 0.0});
  CHECK(std::isnan(v[0]));
  CHECK(std::isfinite(v[1]));

  m.embedding = {0.0, 0.0};
  CHECK(std::isnan(assemble_objectives(both, m, std::vector<double>{1.0, 0.0})[0]));

  Measurement failed;
  failed.error = "boom";
  v = assemble_objectives(both, failed, std::vector<double>{1.0, 0.0});
  CHECK(std::isnan(v[0]));
  CHECK(std::isnan(v[1]));
}

TEST_CASE("assemble: raw objectives pass through the direction mapping") {
  const std::vector<ObjectiveSpec> specs = {ObjectiveSpec::custom("f1", Direction::Minimize),
                                            ObjectiveSpec::custom("f2", Direction::Maximize)};
  Measurement m;
  m.raw_objectives = {0.5, 0.25};
  const auto v = assemble_objectives(specs, m, {});
  CHECK(v == std::vector<double>{0.5, -0.25});
  m.raw_objectives = {0.5};
  CHECK_THROWS_AS(assemble_objectives(specs, m, {}), std::invalid_argument);
}

TEST_CASE("property: symmetry, scale invariance and range of cosine similarity") {
  std::mt19937_64 gen(31);
  std::normal_distribution<double> d(0, 1);
  std::uniform_real_distribution<double> scale(1e-3, 1e3);
  for (int t = 0; t < 2000; ++t) {
    std::vector<double> a(1 + t % 64);
    std::vector<double> b(a.size());
    for (double& x : a) x = d(gen);
    for (double& x : b) x = d(gen);
    const double s = cosine_similarity(a, b);
    CHECK(s == doctest::Approx(cosine_similarity(b, a)).epsilon(1e-12));
    std::vector<double> scaled = a;
    const double alpha = scale(gen);
    for (double& x : scaled) x *= alpha;
    CHECK(std::fabs(cosine_similarity(scaled, b) - s) <= 1e-12);
    CHECK(s <= 1.0 + 1e-9);
    CHECK(s >= -1.0 - 1e-9);
  }
}

TEST_CASE("property: loss decreasing in d_prob for R = 1, increasing for R = 0") {
  std::mt19937_64 gen(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 10000; ++t) {
    double p = u(gen);
    double q = u(gen);
    if (p > q) std::swap(p, q);
    CHECK(discriminator_loss(p, 1.0) >= discriminator_loss(q, 1.0));
    CHECK(discriminator_loss(p, 0.0) <= discriminator_loss(q, 0.0));
  }
}
