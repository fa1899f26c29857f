#include <cmath>

#include "doctest.h"
#include "support.hpp"
#include "topsteer/complexity.hpp"
#include "topsteer/error.hpp"
#include "topsteer/rng.hpp"

using namespace topsteer;
using testsupport::data_path;

namespace {

const KnotoidTable& table() {
  static const KnotoidTable t = KnotoidTable::load(data_path("knotoid_table.csv"));
  return t;
}

}  // namespace

TEST_CASE("a straight segment has zero AUN and zero TUN") {
  const auto c = read_curve(data_path("straight.xyz"));
  const auto a = aun(c, 200, 1, table());
  CHECK(a.value == 0.0);
  CHECK(a.stderr_ == 0.0);
  CHECK(a.n_samples == 200);
  CHECK(tun(c, 4, 32, 1, table()).value == 0.0);
}

TEST_CASE("the trefoil asset has AUN near its unravelling number") {
  const auto c = read_curve(data_path("trefoil.xyz"));
  const auto a = aun(c, 200, 3, table());
  CHECK(a.value > 1.8);
  CHECK(a.value <= 2.0 + 1e-12);
  CHECK(a.unclassified_fraction == 0.0);
}

TEST_CASE("AUN is the mean of the per-direction unravelling numbers") {
  std::mt19937_64 rng(8);
  const auto walk = testsupport::random_walk(rng, 60);
  const auto dirs = sample_directions(100, DirectionScheme::fibonacci_rotated(5));
  const auto types = projection_types(walk, dirs, table(), 0);
  double sum = 0.0, sum2 = 0.0;
  for (const auto& t : types) {
    REQUIRE_FALSE(t.name.empty());
    sum += t.unravelling;
    sum2 += t.unravelling * t.unravelling;
  }
  const double n = static_cast<double>(types.size());
  const auto a = aun(walk, dirs, table(), 0);
  CHECK(a.value == doctest::Approx(sum / n));
  CHECK(a.stderr_ == doctest::Approx(std::sqrt((sum2 - sum * sum / n) / (n - 1) / n)));
  CHECK(a.direction_hash == hash_directions(dirs));
}

TEST_CASE("the knotoid spectrum sums to one and agrees with AUN") {
  const auto c = read_curve(data_path("figure_eight.xyz"));
  const auto dist = knotoid_spectrum(c, 100, 4, table());
  double total = 0.0, mean_u = 0.0;
  for (const auto& [name, w] : dist.weights) {
    total += w;
    mean_u += w * dist.unravelling.at(name);
  }
  CHECK(total == doctest::Approx(1.0));
  CHECK(mean_u == doctest::Approx(aun(c, 100, 4, table()).value));
}

TEST_CASE("multi-threaded evaluation matches single-threaded") {
  const auto c = read_curve(data_path("granny.xyz"));
  ProjectionOptions opt;
  opt.threads = 4;
  const auto a1 = aun(c, 64, 9, table());
  const auto a4 = aun(c, 64, 9, table(), opt);
  CHECK(a1.value == a4.value);
  CHECK(a1.stderr_ == a4.stderr_);
}

TEST_CASE("TUN grid and weights") {
  CHECK(tun_grid(10, 4) == std::vector<std::size_t>{0, 4, 8, 9});
  CHECK(tun_grid(9, 4) == std::vector<std::size_t>{0, 4, 8});
  CHECK(tun_grid(5, 1).size() == 5);
  CHECK(tun_cell_weight(9, 4) == doctest::Approx(0.25));
  CHECK_THROWS_AS(tun_grid(2, 1), Error);
  CHECK_THROWS_AS(tun_grid(10, 0), Error);
}

TEST_CASE("TUN is the weighted sum of subchain AUNs") {
  std::mt19937_64 rng(21);
  const auto walk = testsupport::random_walk(rng, 25);
  const auto dirs = sample_directions(40, DirectionScheme::fibonacci_rotated(2));
  const auto grid = tun_grid(walk.size(), 4);
  double expect = 0.0;
  std::size_t k = 0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (std::size_t j = i + 1; j < grid.size(); ++j) {
      if (grid[j] - grid[i] < 2) continue;
      const std::span<const Vec3> sub(walk.data() + grid[i], grid[j] - grid[i] + 1);
      expect += aun(sub, dirs, table(), derive_seed(7, k++)).value;
    }
  expect *= tun_cell_weight(walk.size(), 4);
  CHECK(tun(walk, 4, dirs, table(), 7).value == doctest::Approx(expect));
}

TEST_CASE("the slipknot is nearly trivial in AUN but not in TUN") {
  const auto c = read_curve(data_path("slipknot.xyz"));
  const auto a = aun(c, 200, 1, table());
  const auto t = tun(c, 4, 64, 1, table());
  CHECK(a.value < 0.1);
  CHECK(t.value > 5.0 * a.stderr_);
  CHECK(t.value > 0.0);
}

TEST_CASE("invalid inputs are rejected") {
  const auto c = read_curve(data_path("straight.xyz"));
  CHECK_THROWS_AS(aun(c, 1, 0, table()), Error);
  CHECK_THROWS_AS(knotoid_spectrum(c, std::span<const Direction>{}, table()), Error);
}

TEST_CASE("persistent degeneracy is reported") {
  // every vertex on one line: every projection along the line is degenerate,
  // other directions give no crossings
  const std::vector<Vec3> v{{0, 0, 0}, {0, 0, 1}, {0, 0, 2}, {0, 0, 3}};
  std::vector<Direction> dirs(10, Direction(Vec3{0, 0, 1}));
  ProjectionOptions opt;
  opt.perturb_angle = 0.0;
  try {
    aun(v, dirs, table(), 0, opt);
    FAIL("expected numerical_degeneracy");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::numerical_degeneracy);
  }
}
