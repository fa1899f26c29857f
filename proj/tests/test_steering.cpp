#include <cmath>
#include <map>

#include "doctest.h"
#include "support.hpp"
#include "topsteer/error.hpp"
#include "topsteer/rng.hpp"
#include "topsteer/steering.hpp"

using namespace topsteer;
using testsupport::data_path;

namespace {

const KnotoidTable& knotoids() {
  static const KnotoidTable t = KnotoidTable::load(data_path("knotoid_table.csv"));
  return t;
}
const KnotTable& knots() {
  static const KnotTable t = KnotTable::load(data_path("knot_table.csv"));
  return t;
}

ChainState deep_trefoil() { return init_from_curve(read_curve(data_path("deep_trefoil.xyz")).vertices()); }

SteeringConfig small_config() {
  SteeringConfig cfg;
  cfg.k = 4;
  cfg.horizon = 300;
  cfg.functional.n_dirs = 24;
  cfg.max_iterations = 3;
  cfg.stop_threshold.reset();
  cfg.seed = 11;
  return cfg;
}

}  // namespace

TEST_CASE("the extremal candidate is adopted") {
  for (auto dir : {SteerDirection::minimize, SteerDirection::maximize}) {
    auto cfg = small_config();
    cfg.direction = dir;
    const auto prop = langevin_propagator(0.005);
    auto state = deep_trefoil();
    auto replay = state;
    const auto traj = steer<ChainState>(state, prop, chain_curve, cfg, knotoids(), knots());
    REQUIRE(traj.records.size() == 3);
    for (const auto& rec : traj.records) {
      const auto dirs = iteration_directions(cfg, rec.iteration);
      CHECK(rec.direction_hash == hash_directions(dirs));
      std::vector<double> values;
      std::vector<ChainState> cands;
      for (int c = 0; c < cfg.k; ++c) {
        auto s = replay;
        auto rng = make_stream({cfg.seed, static_cast<std::uint64_t>(rec.iteration), static_cast<std::uint64_t>(c)});
        prop(s, cfg.horizon, rng);
        values.push_back(aun(s.x, dirs, knotoids(), derive_seed(cfg.seed, 0)).value);
        cands.push_back(s);
      }
      std::size_t best = 0;
      for (std::size_t c = 1; c < values.size(); ++c)
        if (dir == SteerDirection::minimize ? values[c] < values[best] : values[c] > values[best]) best = c;
      CHECK(rec.chosen_index == static_cast<int>(best));
      CHECK(rec.chosen_value == doctest::Approx(values[best]));
      for (std::size_t c = 0; c < values.size(); ++c) CHECK(rec.candidate_values[c] == doctest::Approx(values[c]));
      replay = cands[best];
    }
    CHECK(state.x == replay.x);
  }
}

TEST_CASE("steering is deterministic and independent of the thread count") {
  auto cfg = small_config();
  auto a = deep_trefoil(), b = deep_trefoil();
  const auto ta = steer<ChainState>(a, langevin_propagator(0.005), chain_curve, cfg, knotoids(), knots());
  cfg.threads = 4;
  const auto tb = steer<ChainState>(b, langevin_propagator(0.005), chain_curve, cfg, knotoids(), knots());
  CHECK(a.x == b.x);
  for (std::size_t i = 0; i < ta.records.size(); ++i) {
    CHECK(ta.records[i].candidate_values == tb.records[i].candidate_values);
    CHECK(ta.records[i].chosen_index == tb.records[i].chosen_index);
  }
}

TEST_CASE("a constant functional selects candidate 0 and the stop rule fires") {
  auto cfg = small_config();
  cfg.max_iterations = 10;
  cfg.stop_threshold = 0.02;
  cfg.stop_sustain = 3;
  auto s = init_straight(12);
  const auto t = steer<ChainState>(s, crankshaft_propagator(0.01), chain_curve, cfg, knotoids(), knots());
  CHECK(t.stopped);
  CHECK(t.stop_iteration == 0);
  CHECK(t.records.size() == 3);
  for (const auto& r : t.records) {
    CHECK(r.chosen_index == 0);
    CHECK(r.chosen_value == 0.0);
  }
}

TEST_CASE("K = 1 steering equals an undirected run") {
  auto cfg = small_config();
  cfg.k = 1;
  const auto start = deep_trefoil();
  const auto ens = undirected_ensemble<ChainState>(start, langevin_propagator(0.005), chain_curve, 2, cfg, knotoids(),
                                                   knots());
  REQUIRE(ens.runs.size() == 2);
  for (std::uint64_t r = 0; r < 2; ++r) {
    auto c = cfg;
    c.seed = cfg.seed + r;
    auto s = start;
    const auto t = steer<ChainState>(s, langevin_propagator(0.005), chain_curve, c, knotoids(), knots());
    REQUIRE(t.records.size() == ens.runs[r].records.size());
    for (std::size_t i = 0; i < t.records.size(); ++i)
      CHECK(t.records[i].chosen_value == ens.runs[r].records[i].chosen_value);
  }
  REQUIRE(ens.mean.size() == 3);
  CHECK(ens.mean[0] ==
        doctest::Approx(0.5 * (ens.runs[0].records[0].chosen_value + ens.runs[1].records[0].chosen_value)));
}

TEST_CASE("failed candidates are skipped and total failure aborts") {
  auto cfg = small_config();
  int calls = 0;
  Propagator<ChainState> flaky = [&](ChainState& s, int h, std::mt19937_64& rng) {
    if (calls++ % 2 == 0) fail(ErrorCode::integration_blowup, "synthetic");
    langevin_propagator(0.005)(s, h, rng);
  };
  auto s = deep_trefoil();
  const auto t = steer<ChainState>(s, flaky, chain_curve, cfg, knotoids(), knots());
  for (const auto& r : t.records) {
    CHECK(std::isnan(r.candidate_values[0]));
    CHECK(r.chosen_index % 2 == 1);
  }

  Propagator<ChainState> broken = [](ChainState&, int, std::mt19937_64&) {
    fail(ErrorCode::integration_blowup, "synthetic");
  };
  auto b = deep_trefoil();
  const auto before = b.x;
  try {
    steer<ChainState>(b, broken, chain_curve, cfg, knotoids(), knots());
    FAIL("expected steering_abort");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::steering_abort);
  }
  CHECK(b.x == before);
  cfg.abort_throws = false;
  CHECK(steer<ChainState>(b, broken, chain_curve, cfg, knotoids(), knots()).aborted);

  Propagator<ChainState> misuse = [](ChainState&, int, std::mt19937_64&) { fail(ErrorCode::invalid_argument, "bad"); };
  CHECK_THROWS_AS(steer<ChainState>(b, misuse, chain_curve, cfg, knotoids(), knots()), Error);
}

TEST_CASE("closures and snapshots are recorded") {
  auto cfg = small_config();
  cfg.max_iterations = 1;
  cfg.closures = 10;
  cfg.keep_snapshots = true;
  auto s = deep_trefoil();
  const auto t = steer<ChainState>(s, langevin_propagator(0.005), chain_curve, cfg, knotoids(), knots());
  CHECK(t.records[0].knot_type == "3_1");
  CHECK(t.records[0].snapshot == s.x);
}

TEST_CASE("the functional of short curves is zero") {
  const std::vector<Vec3> two{{0, 0, 0}, {1, 0, 0}};
  const auto dirs = sample_directions(8, DirectionScheme::fibonacci());
  CHECK(evaluate_functional(two, {}, dirs, knotoids(), 0).value == 0.0);
  FunctionalSpec tunf;
  tunf.kind = FunctionalSpec::Kind::tun;
  const auto c = read_curve(data_path("trefoil.xyz"));
  CHECK(evaluate_functional(c.vertices(), tunf, dirs, knotoids(), 0).value ==
        doctest::Approx(tun(c.vertices(), 4, dirs, knotoids(), 0).value));
}

TEST_CASE("sustained-threshold helper") {
  const std::vector<double> v{0.5, 0.01, 0.3, 0.01, 0.0, 0.01, 0.2};
  CHECK(first_sustained_below(v, 0.02, 3) == 3);
  CHECK(first_sustained_below(v, 0.02, 1) == 1);
  CHECK_FALSE(first_sustained_below(v, 0.02, 4).has_value());
}

TEST_CASE("twist family") {
  for (const char* k : {"4_1", "5_2", "6_1", "7_2"}) CHECK(is_nontrefoil_twist(k));
  for (const char* k : {"0_1", "3_1", "5_1", "3_1#3_1", "other"}) CHECK_FALSE(is_nontrefoil_twist(k));
}

TEST_CASE("steered growth ensembles") {
  GrowthConfig cfg;
  cfg.n_walks = 3;
  cfg.target_length = 40;
  cfg.k = 3;
  cfg.beads_per_step = 10;
  cfg.n_dirs = 16;
  cfg.closures = 5;
  cfg.seed = 5;
  const auto e = grow_steered_ensemble(AngleModel::semiflexible(), "unbiased", cfg, knotoids(), knots());
  REQUIRE(e.walks.size() == 3);
  for (const auto& w : e.walks) {
    CHECK(w.lengths == std::vector<int>{10, 20, 30, 40});
    CHECK(w.final_curve.size() == 40);
  }
  std::map<int, double> sums;
  for (const auto& r : e.rows) {
    sums[r.length] += r.fraction;
    CHECK(r.population == 3);
  }
  CHECK(sums.size() == 4);
  for (const auto& [len, s] : sums) CHECK(s == doctest::Approx(1.0));
  const auto tw = twist_series(e);
  CHECK(tw.size() == 4);
  CHECK(knotted_fraction(e, 40) == doctest::Approx(static_cast<double>(tw.back().knotted) / 3.0));

  cfg.threads = 3;
  const auto e2 = grow_steered_ensemble(AngleModel::semiflexible(), "unbiased", cfg, knotoids(), knots());
  for (std::size_t w = 0; w < 3; ++w) CHECK(e2.walks[w].final_curve == e.walks[w].final_curve);

  cfg.n_walks = 0;
  CHECK_THROWS_AS(grow_steered_ensemble(AngleModel::uniform(), "uniform", cfg, knotoids(), knots()), Error);
  cfg.n_walks = 1;
  cfg.target_length = 45;
  CHECK_THROWS_AS(grow_steered_ensemble(AngleModel::uniform(), "uniform", cfg, knotoids(), knots()), Error);
}
