#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "glass/nsga2.hpp"
#include "test_support.hpp"

using namespace glass;
using glass::testing::brute_force_fronts;
using glass::testing::random_points;

namespace {

Individual make(std::size_t rank, double crowding, double tag = 0.0) {
  Individual ind;
  ind.genome.genes = {tag};
  ind.objectives = {tag};
  ind.rank = rank;
  ind.crowding = crowding;
  return ind;
}

}  // namespace

TEST_CASE("dominance examples") {
  using V = std::vector<double>;
  CHECK(dominates(V{1, 1}, V{2, 2}));
  CHECK(!dominates(V{1, 2}, V{2, 1}));
  CHECK(!dominates(V{2, 1}, V{1, 2}));
  CHECK(!dominates(V{1, 1}, V{1, 1}));
  CHECK(dominates(V{1, 1}, V{1, 2}));
  CHECK_THROWS_AS(dominates(V{1}, V{1, 2}), std::invalid_argument);
}

TEST_CASE("non-dominated sort examples") {
  using P = std::vector<ObjectiveVector>;
  CHECK(non_dominated_sort(P{{0, 0}, {1, 1}}) == std::vector<Front>{{0}, {1}});
  CHECK(non_dominated_sort(P{{1, 2}, {2, 1}, {3, 3}}) == std::vector<Front>{{0, 1}, {2}});
  CHECK(non_dominated_sort(P{}).empty());
  // Duplicates share a front.
  CHECK(non_dominated_sort(P{{1, 1}, {1, 1}, {0, 5}}) == std::vector<Front>{{0, 1, 2}});
  CHECK_THROWS_AS(non_dominated_sort(P{{1, 2}, {1}}), std::invalid_argument);
}

TEST_CASE("brute-force oracle agrees on the worked examples") {
  CHECK(brute_force_fronts({{1, 2}, {2, 1}, {3, 3}}) ==
        std::vector<std::vector<std::size_t>>{{0, 1}, {2}});
}

TEST_CASE("property: sort matches brute force, fronts are internally non-dominated") {
  std::mt19937_64 gen(1);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + gen() % 80;
    const std::size_t m = 1 + gen() % 4;
    const auto pts = random_points(gen, n, m);
    const auto fronts = non_dominated_sort(pts);
    REQUIRE(fronts == brute_force_fronts(pts));
    std::vector<int> seen(n, 0);
    for (const Front& f : fronts) {
      for (std::size_t a : f) {
        ++seen[a];
        for (std::size_t b : f) CHECK(!dominates(pts[a], pts[b]));
      }
    }
    CHECK(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));
  }
}

TEST_CASE("property: shuffling the input only relabels the fronts") {
  std::mt19937_64 gen(2);
  for (int t = 0; t < 50; ++t) {
    const auto pts = random_points(gen, 60, 3);
    std::vector<std::size_t> perm(pts.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), gen);
    std::vector<ObjectiveVector> shuffled;
    for (std::size_t i : perm) shuffled.push_back(pts[i]);

    const auto original = non_dominated_sort(pts);
    auto relabelled = non_dominated_sort(shuffled);
    for (Front& f : relabelled) {
      for (std::size_t& i : f) i = perm[i];
      std::sort(f.begin(), f.end());
    }
    CHECK(relabelled == original);
  }
}

TEST_CASE("crowding distance examples") {
  using P = std::vector<ObjectiveVector>;
  const double inf = kInfiniteCrowding;
  CHECK(crowding_distance(P{{0.3, 0.4}}) == std::vector<double>{inf});
  CHECK(crowding_distance(P{{0, 1}, {1, 0}}) == std::vector<double>{inf, inf});
  // (1 - 0) / 1 + (1 - 0) / 1
  CHECK(crowding_distance(P{{0, 1}, {0.5, 0.5}, {1, 0}}) == std::vector<double>{inf, 2.0, inf});
  CHECK_THROWS_AS(crowding_distance(P{}), std::invalid_argument);
}

TEST_CASE("a constant objective column contributes nothing") {
  using P = std::vector<ObjectiveVector>;
  const auto d = crowding_distance(P{{0, 7}, {0.25, 7}, {0.5, 7}, {1, 7}});
  CHECK(std::isinf(d[0]));
  CHECK(std::isinf(d[3]));
  CHECK(d[1] == doctest::Approx(0.5));
  CHECK(d[2] == doctest::Approx(0.75));
}

TEST_CASE("property: crowding is invariant under positive affine rescaling") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> scale(0.01, 100.0);
  std::uniform_real_distribution<double> shift(-50.0, 50.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 3 + gen() % 30;
    const std::size_t m = 1 + gen() % 4;
    std::vector<ObjectiveVector> pts(n, ObjectiveVector(m));
    for (auto& p : pts) for (double& v : p) v = u(gen);
    auto rescaled = pts;
    for (std::size_t k = 0; k < m; ++k) {
      const double a = scale(gen);
      const double b = shift(gen);
      for (auto& p : rescaled) p[k] = a * p[k] + b;
    }
    const auto d0 = crowding_distance(pts);
    const auto d1 = crowding_distance(rescaled);
    for (std::size_t i = 0; i < n; ++i) {
      if (std::isinf(d0[i])) {
        CHECK(std::isinf(d1[i]));
      } else {
        CHECK(std::fabs(d0[i] - d1[i]) <= 1e-9);
      }
    }
  }
}

TEST_CASE("crowded comparison rules") {
  CHECK(crowded_winner(make(0, 0.1, 1), make(1, 9.0, 2)).objectives[0] == 1);
  CHECK(crowded_winner(make(1, 9.0, 1), make(0, 0.1, 2)).objectives[0] == 2);
  CHECK(crowded_winner(make(0, 1.3, 1), make(0, kInfiniteCrowding, 2)).objectives[0] == 2);
  CHECK(crowded_winner(make(0, kInfiniteCrowding, 1), make(0, 1.3, 2)).objectives[0] == 1);
  CHECK(crowded_winner(make(2, 0.5, 1), make(2, 0.5, 2)).objectives[0] == 1);
}

TEST_CASE("tournament picks the better of two uniform draws") {
  // With ranks {0, 1} the rank-1 individual only wins when drawn twice: p = 1/4.
  const std::vector<Individual> pop = {make(0, 1.0, 0), make(1, 1.0, 1)};
  Rng rng(10);
  int worse = 0;
  const int trials = 40000;
  for (int t = 0; t < trials; ++t) worse += tournament_select(pop, rng).rank == 1;
  CHECK(std::fabs(static_cast<double>(worse) / trials - 0.25) < 0.01);
  CHECK_THROWS_AS(tournament_select(std::span<const Individual>{}, rng), std::invalid_argument);
}

TEST_CASE("environmental selection keeps an exact first front") {
  // 8 points on the line f1 + f2 = 1 (mutually non-dominated) and 8 points
  // each dominated by one of them.
  std::vector<ObjectiveVector> combined;
  for (int i = 0; i < 8; ++i) combined.push_back({i / 7.0 + 0.5, 1.5 - i / 7.0});
  for (int i = 0; i < 8; ++i) combined.push_back({i / 7.0, 1.0 - i / 7.0});
  REQUIRE(brute_force_fronts(combined).front() ==
          std::vector<std::size_t>{8, 9, 10, 11, 12, 13, 14, 15});
  const Survivors s = environmental_select(combined, 8);
  CHECK(s.indices == std::vector<std::size_t>{8, 9, 10, 11, 12, 13, 14, 15});
  CHECK(std::all_of(s.rank.begin(), s.rank.end(), [](std::size_t r) { return r == 0; }));
}

TEST_CASE("environmental selection truncates the split front by crowding") {
  // Front 0 = {0}; front 1 = five points on a line, equally spaced except
  // index 3 which sits close to index 2.
  std::vector<ObjectiveVector> combined = {{-1, -1}, {0, 4}, {1, 3}, {2, 2}, {2.1, 1.9}, {4, 0}};
  const Survivors s = environmental_select(combined, 4);
  // Boundaries 1 and 5 are infinite; interior 2 and 4 tie at 1.0 and the
  // lower index takes the last slot.
  CHECK(s.indices == std::vector<std::size_t>{0, 1, 2, 5});
  CHECK(s.rank == std::vector<std::size_t>{0, 1, 1, 1});
}

TEST_CASE("environmental selection breaks crowding ties by lower index") {
  // Four duplicates: all crowding ties after the two boundaries.
  std::vector<ObjectiveVector> combined = {{0, 2}, {1, 1}, {1, 1}, {1, 1}, {2, 0}};
  const Survivors s = environmental_select(combined, 3);
  CHECK(s.indices == std::vector<std::size_t>{0, 1, 4});
}
