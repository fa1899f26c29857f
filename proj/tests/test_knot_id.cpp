#include <cmath>
#include <random>

#include "doctest.h"
#include "support.hpp"
#include "topsteer/error.hpp"
#include "topsteer/knot_id.hpp"

using namespace topsteer;
using testsupport::data_path;

namespace {

const KnotTable& table() {
  static const KnotTable t = KnotTable::load(data_path("knot_table.csv"));
  return t;
}

std::optional<Diagram> closed_diagram(const std::vector<Vec3>& poly, std::uint64_t seed) {
  for (const auto& d : sample_directions(8, DirectionScheme::uniform_random(seed))) {
    try {
      return simplify(extract_diagram(project(poly, d, true)));
    } catch (const Error&) {
    }
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("knot table parsing and lookup") {
  CHECK(table().entries().size() >= 17);
  KnotInvariants triv;
  CHECK(table().lookup(triv).name == "0_1");
  KnotInvariants tref;
  tref.determinant = 3;
  tref.alexander = Laurent(0, {1, -1, 1});
  CHECK(table().lookup(tref).name == "3_1");
  CHECK(table().lookup(tref).family == KnotFamily::torus);
  KnotInvariants unknown;
  unknown.determinant = 999;
  unknown.alexander = Laurent(0, {5});
  CHECK(table().lookup(unknown).name == "other");
  CHECK_THROWS_AS(KnotTable::parse("name,determinant,fingerprint,family\n3_1,x,\"0:1\",torus\n"), Error);
}

TEST_CASE("family rule") {
  CHECK(classify_family("0_1") == KnotFamily::unknot);
  CHECK(classify_family("5_1") == KnotFamily::torus);
  CHECK(classify_family("6_1") == KnotFamily::twist);
  CHECK(classify_family("3_1#4_1") == KnotFamily::composite);
  CHECK(classify_family("6_2") == KnotFamily::other);
}

TEST_CASE("Alexander polynomials of the standard closed trefoil and figure-eight") {
  const Diagram tref({{0, true}, {1, false}, {2, true}, {0, false}, {1, true}, {2, false}}, {1, 1, 1}, true);
  const auto it = knot_invariants(tref);
  CHECK(it.determinant == 3);
  CHECK(it.alexander == Laurent(0, {1, -1, 1}));
  // figure-eight: O0 U1 O2 U3 O1 U0 O3 U2, signs (-,-,+,+)
  const Diagram fig({{0, true}, {1, false}, {2, true}, {3, false}, {1, true}, {0, false}, {3, true}, {2, false}},
                    {-1, -1, 1, 1}, true);
  if (is_planar(fig)) {
    const auto inv = knot_invariants(fig);
    CHECK(inv.determinant == 5);
    CHECK(inv.alexander == Laurent(0, {-1, 3, -1}));
  } else {
    const Diagram fig2({{0, true}, {1, false}, {2, true}, {3, false}, {1, true}, {0, false}, {3, true}, {2, false}},
                       {1, 1, -1, -1}, true);
    REQUIRE(is_planar(fig2));
    CHECK(knot_invariants(fig2).determinant == 5);
  }
}

TEST_CASE("the determinant agrees with Fox colouring counts") {
  // p divides det exactly when the diagram has non-trivial p-colourings
  std::mt19937_64 rng(5);
  int checked = 0;
  for (int i = 0; i < 2000 && checked < 60; ++i) {
    auto walk = testsupport::random_walk(rng, 25, 1.0);
    const auto d = closed_diagram(walk, rng());
    if (!d || d->crossings() == 0 || d->crossings() > 8) continue;
    const auto det = knot_invariants(*d).determinant;
    for (int p : {3, 5, 7}) {
      if (p == 7 && d->crossings() > 7) continue;
      CHECK((det % p == 0) == (testsupport::fox_colourings(*d, p) > p));
    }
    ++checked;
  }
  CHECK(checked >= 30);
}

TEST_CASE("the Alexander polynomial is normalized and independent of the projection") {
  std::mt19937_64 rng(17);
  int nontrivial = 0;
  for (int i = 0; i < 200; ++i) {
    const auto walk = testsupport::random_walk(rng, 30, 1.0);
    const auto d1 = closed_diagram(walk, rng());
    const auto d2 = closed_diagram(walk, rng());
    if (!d1 || !d2) continue;
    const auto inv = knot_invariants(*d1);
    CHECK(inv.alexander.low() == 0);
    CHECK(inv.alexander.eval(1) == 1);
    CHECK(std::llabs(inv.alexander.eval(-1)) == inv.determinant);
    CHECK(knot_invariants(*d2).alexander == inv.alexander);
    if (inv.determinant != 1) ++nontrivial;
  }
  CHECK(nontrivial > 0);
}

TEST_CASE("closure construction") {
  const auto c = read_curve(data_path("trefoil.xyz"));
  const Direction u(Vec3{0, 0, 1});
  const auto poly = close_curve(c, u);
  CHECK(poly.size() > c.size());
  for (std::size_t i = 0; i < c.size(); ++i) CHECK(poly[i] == c[i]);
  const Vec3 centre = c.centroid();
  bool far = false;
  for (const auto& p : poly)
    if (distance(p, centre) > 2.9 * c.diameter()) far = true;
  CHECK(far);
}

TEST_CASE("polygon reduction keeps the knot type") {
  const auto c = read_curve(data_path("figure_eight.xyz"));
  const auto poly = close_curve(c, Direction(Vec3{0.2, 0.3, 1.0}));
  const auto red = reduce_closed_polygon(poly);
  CHECK(red.size() < poly.size());
  CHECK(identify_closed(red, table(), 1).name == identify_closed(poly, table(), 1).name);
  CHECK(identify_closed(red, table(), 1).name == "4_1");
}

TEST_CASE("stochastic closure of the bundled knots") {
  struct Case {
    const char* file;
    const char* name;
    std::int64_t det;
  };
  for (const Case& k : {Case{"trefoil.xyz", "3_1", 3}, Case{"figure_eight.xyz", "4_1", 5},
                        Case{"granny.xyz", "3_1#3_1", 9}, Case{"straight.xyz", "0_1", 1}}) {
    const auto d = stochastic_closure(read_curve(data_path(k.file)), 40, 2, table());
    CHECK(d.n_closures == 40);
    CHECK(d.dominant == k.name);
    CHECK(d.fractions.at(k.name) >= 0.9);
    double sum = 0.0;
    for (const auto& [n, f] : d.fractions) sum += f;
    CHECK(sum == doctest::Approx(1.0));
    const auto* row = &table().entries().front();
    for (const auto& e : table().entries())
      if (e.name == k.name) row = &e;
    CHECK(row->determinant == k.det);
  }
}

TEST_CASE("stochastic closure is deterministic across thread counts") {
  const auto c = read_curve(data_path("deep_trefoil.xyz"));
  const auto a = stochastic_closure(c, 20, 7, table(), 1);
  const auto b = stochastic_closure(c, 20, 7, table(), 4);
  CHECK(a.counts == b.counts);
}
