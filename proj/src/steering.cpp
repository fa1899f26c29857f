#include "topsteer/steering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "topsteer/error.hpp"
#include "topsteer/parallel.hpp"
#include "topsteer/rng.hpp"

namespace topsteer {

namespace {

constexpr std::uint64_t kDirTag = 0x64697273ull;
constexpr std::uint64_t kRetryTag = 0x72657472ull;
constexpr std::uint64_t kClosureTag = 0x636c6f73ull;

bool candidate_failure(const Error& e) {
  return e.code() != ErrorCode::invalid_argument && e.code() != ErrorCode::internal;
}

}  // namespace

Propagator<ChainState> langevin_propagator(double dt) {
  require(dt > 0.0, "dt must be positive");
  return [dt](ChainState& s, int horizon, std::mt19937_64& rng) {
    DynamicsConfig cfg;
    cfg.dt = dt;
    cfg.steps = horizon;
    cfg.seed = rng();
    run_langevin(s, cfg);
  };
}

Propagator<ChainState> crankshaft_propagator(double max_angle) {
  return [max_angle](ChainState& s, int horizon, std::mt19937_64& rng) {
    for (int i = 0; i < horizon; ++i) crankshaft_move(s, rng, max_angle);
  };
}

Propagator<GrowthState> growth_propagator(AngleModel model) {
  return [model = std::move(model)](GrowthState& s, int horizon, std::mt19937_64& rng) {
    grow(s, model, static_cast<std::size_t>(horizon), rng);
    if (s.status() == GrowthStatus::trapped)
      fail(ErrorCode::invalid_configuration, "walk trapped at length " + std::to_string(s.size()));
  };
}

std::span<const Vec3> chain_curve(const ChainState& s) { return s.x; }
std::span<const Vec3> growth_curve(const GrowthState& s) { return s.beads(); }

std::vector<Direction> iteration_directions(const SteeringConfig& cfg, int iteration) {
  return sample_directions(cfg.functional.n_dirs,
                           DirectionScheme::fibonacci_rotated(derive_seed(derive_seed(cfg.seed, kDirTag),
                                                                          static_cast<std::uint64_t>(iteration))));
}

ComplexityEstimate evaluate_functional(std::span<const Vec3> curve, const FunctionalSpec& f,
                                       std::span<const Direction> dirs, const KnotoidTable& table,
                                       std::uint64_t retry_seed) {
  if (curve.size() < 3) {
    ComplexityEstimate e;
    e.n_samples = dirs.size();
    e.direction_hash = hash_directions(dirs);
    return e;
  }
  if (f.kind == FunctionalSpec::Kind::aun) return aun(curve, dirs, table, retry_seed);
  return tun(curve, f.stride, dirs, table, retry_seed);
}

template <class State>
SteeringTrajectory steer(State& state, const Propagator<State>& propagate, const CurveOf<State>& curve_of,
                         const SteeringConfig& cfg, const KnotoidTable& knotoids, const KnotTable& knots) {
  require(cfg.k >= 1, "steering needs K >= 1");
  require(cfg.horizon >= 1, "steering needs horizon >= 1");
  require(cfg.max_iterations >= 0, "max_iterations must be >= 0");
  require(cfg.stop_sustain >= 1, "stop_sustain must be >= 1");
  const bool minimize = cfg.direction == SteerDirection::minimize;
  SteeringTrajectory traj;
  int streak = 0;
  for (int it = 0; it < cfg.max_iterations; ++it) {
    const auto dirs = iteration_directions(cfg, it);
    const std::uint64_t retry_seed = derive_seed(derive_seed(cfg.seed, kRetryTag), static_cast<std::uint64_t>(it));
    const std::size_t k = static_cast<std::size_t>(cfg.k);
    std::vector<std::optional<State>> cands(k);
    std::vector<ComplexityEstimate> est(k);
    parallel_for(k, cfg.threads, [&](std::size_t c) {
      State s = state;
      auto rng = make_stream({cfg.seed, static_cast<std::uint64_t>(it), c});
      try {
        propagate(s, cfg.horizon, rng);
        est[c] = evaluate_functional(curve_of(s), cfg.functional, dirs, knotoids, retry_seed);
      } catch (const Error& e) {
        if (!candidate_failure(e)) throw;
        return;
      }
      cands[c] = std::move(s);
    });

    IterationRecord rec;
    rec.iteration = it;
    rec.direction_hash = hash_directions(dirs);
    rec.candidate_values.assign(k, std::numeric_limits<double>::quiet_NaN());
    int best = -1;
    for (std::size_t c = 0; c < k; ++c) {
      if (!cands[c]) continue;
      rec.candidate_values[c] = est[c].value;
      if (best < 0 || (minimize ? est[c].value < est[best].value : est[c].value > est[best].value))
        best = static_cast<int>(c);
    }
    if (best < 0) {
      if (cfg.abort_throws)
        fail(ErrorCode::steering_abort, "all " + std::to_string(k) + " candidates failed at iteration " +
                                            std::to_string(it));
      traj.aborted = true;
      break;
    }
    state = std::move(*cands[best]);
    rec.chosen_index = best;
    rec.chosen_value = est[best].value;
    rec.stderr_ = est[best].stderr_;
    const auto curve = curve_of(state);
    if (cfg.functional.kind == FunctionalSpec::Kind::aun) {
      rec.aun = rec.chosen_value;
    } else {
      FunctionalSpec a = cfg.functional;
      a.kind = FunctionalSpec::Kind::aun;
      rec.aun = evaluate_functional(curve, a, dirs, knotoids, retry_seed).value;
    }
    if (cfg.closures > 0 && curve.size() >= 2) {
      const auto dist = stochastic_closure(PolyCurve(std::vector<Vec3>(curve.begin(), curve.end())), cfg.closures,
                                           derive_seed(derive_seed(cfg.seed, kClosureTag), static_cast<std::uint64_t>(it)),
                                           knots, cfg.threads);
      rec.knot_type = dist.dominant;
      rec.knot_fraction = dist.fractions.at(dist.dominant);
    }
    if (cfg.keep_snapshots) rec.snapshot.assign(curve.begin(), curve.end());
    traj.records.push_back(std::move(rec));

    if (cfg.stop_threshold) {
      const double v = traj.records.back().aun;
      const bool hit = minimize ? v < *cfg.stop_threshold : v > *cfg.stop_threshold;
      streak = hit ? streak + 1 : 0;
      if (streak >= cfg.stop_sustain) {
        traj.stopped = true;
        traj.stop_iteration = it - cfg.stop_sustain + 1;
        break;
      }
    }
  }
  return traj;
}

template <class State>
EnsembleResult undirected_ensemble(const State& initial, const Propagator<State>& propagate,
                                   const CurveOf<State>& curve_of, std::size_t n_runs, SteeringConfig cfg,
                                   const KnotoidTable& knotoids, const KnotTable& knots) {
  require(n_runs >= 1, "undirected ensemble needs n_runs >= 1");
  EnsembleResult out;
  out.runs.resize(n_runs);
  const int threads = cfg.threads;
  cfg.k = 1;
  cfg.threads = 1;
  parallel_for(n_runs, threads, [&](std::size_t r) {
    SteeringConfig c = cfg;
    c.seed = cfg.seed + r;
    State s = initial;
    out.runs[r] = steer(s, propagate, curve_of, c, knotoids, knots);
  });
  std::size_t longest = 0;
  for (const auto& r : out.runs) longest = std::max(longest, r.records.size());
  for (std::size_t i = 0; i < longest; ++i) {
    double sum = 0.0, sum2 = 0.0;
    std::size_t n = 0;
    for (const auto& r : out.runs) {
      if (i >= r.records.size()) continue;
      const double v = r.records[i].chosen_value;
      sum += v;
      sum2 += v * v;
      ++n;
    }
    const double mean = sum / static_cast<double>(n);
    out.mean.push_back(mean);
    out.spread.push_back(n > 1 ? std::sqrt(std::max(0.0, (sum2 - n * mean * mean) / (n - 1.0))) : 0.0);
  }
  return out;
}

template SteeringTrajectory steer<ChainState>(ChainState&, const Propagator<ChainState>&, const CurveOf<ChainState>&,
                                              const SteeringConfig&, const KnotoidTable&, const KnotTable&);
template SteeringTrajectory steer<GrowthState>(GrowthState&, const Propagator<GrowthState>&,
                                               const CurveOf<GrowthState>&, const SteeringConfig&,
                                               const KnotoidTable&, const KnotTable&);
template EnsembleResult undirected_ensemble<ChainState>(const ChainState&, const Propagator<ChainState>&,
                                                        const CurveOf<ChainState>&, std::size_t, SteeringConfig,
                                                        const KnotoidTable&, const KnotTable&);
template EnsembleResult undirected_ensemble<GrowthState>(const GrowthState&, const Propagator<GrowthState>&,
                                                         const CurveOf<GrowthState>&, std::size_t, SteeringConfig,
                                                         const KnotoidTable&, const KnotTable&);

GrowthEnsemble grow_steered_ensemble(const AngleModel& model, const std::string& model_name, const GrowthConfig& cfg,
                                     const KnotoidTable& knotoids, const KnotTable& knots) {
  require(cfg.n_walks >= 1, "grow: n_walks must be >= 1");
  require(cfg.beads_per_step >= 1 && cfg.target_length >= cfg.beads_per_step,
          "grow: need 1 <= beads_per_step <= target_length");
  require(cfg.target_length % cfg.beads_per_step == 0, "grow: target_length must be a multiple of beads_per_step");
  require(cfg.k >= 1, "grow: K must be >= 1");
  require(cfg.closures >= 1, "grow: closures must be >= 1");

  GrowthEnsemble out;
  out.model = model_name;
  out.walks.resize(cfg.n_walks);
  const auto propagate = growth_propagator(model);
  const CurveOf<GrowthState> curve_of = growth_curve;
  SteeringConfig sc;
  sc.k = cfg.k;
  sc.horizon = cfg.beads_per_step;
  sc.direction = SteerDirection::maximize;
  sc.functional.kind = FunctionalSpec::Kind::aun;
  sc.functional.n_dirs = cfg.n_dirs;
  sc.max_iterations = cfg.target_length / cfg.beads_per_step;
  sc.stop_threshold.reset();
  sc.threads = 1;
  sc.closures = cfg.closures;
  sc.abort_throws = false;

  parallel_for(cfg.n_walks, cfg.threads, [&](std::size_t w) {
    SteeringConfig c = sc;
    c.seed = derive_seed(cfg.seed, w);
    GrowthState s(cfg.policy, cfg.max_attempts);
    const auto traj = steer(s, propagate, curve_of, c, knotoids, knots);
    GrowthWalk& walk = out.walks[w];
    for (std::size_t i = 0; i < traj.records.size(); ++i) {
      walk.lengths.push_back(static_cast<int>((i + 1) * static_cast<std::size_t>(cfg.beads_per_step)));
      walk.knot_types.push_back(traj.records[i].knot_type);
    }
    if (traj.aborted) walk.trapped_at = s.size();
    walk.final_curve = s.beads();
  });

  for (int len = cfg.beads_per_step; len <= cfg.target_length; len += cfg.beads_per_step) {
    std::map<std::string, std::size_t> counts;
    std::size_t pop = 0;
    const std::size_t idx = static_cast<std::size_t>(len / cfg.beads_per_step - 1);
    for (const auto& w : out.walks) {
      if (idx >= w.knot_types.size()) continue;
      ++pop;
      ++counts[w.knot_types[idx]];
    }
    counts.try_emplace("0_1", 0);
    for (const auto& [type, n] : counts) {
      KymographRow row;
      row.length = len;
      row.knot_type = type;
      row.count = n;
      row.population = pop;
      row.fraction = pop ? static_cast<double>(n) / static_cast<double>(pop) : 0.0;
      out.rows.push_back(row);
    }
  }
  return out;
}

bool is_nontrefoil_twist(const std::string& t) {
  return classify_family(t) == KnotFamily::twist;
}

std::vector<TwistRow> twist_series(const GrowthEnsemble& e) {
  std::map<int, TwistRow> rows;
  for (const auto& r : e.rows) {
    TwistRow& t = rows[r.length];
    t.length = r.length;
    t.population = r.population;
    if (r.knot_type != "0_1") t.knotted += r.count;
    if (is_nontrefoil_twist(r.knot_type)) t.twist += r.count;
    if (r.knot_type == "3_1") t.trefoil += r.count;
  }
  std::vector<TwistRow> out;
  for (auto& [len, t] : rows) {
    t.twist_fraction = t.population ? static_cast<double>(t.twist) / static_cast<double>(t.population) : 0.0;
    t.twist_of_knotted = t.knotted ? static_cast<double>(t.twist) / static_cast<double>(t.knotted) : 0.0;
    out.push_back(t);
  }
  return out;
}

double knotted_fraction(const GrowthEnsemble& e, int length) {
  std::size_t pop = 0, knotted = 0;
  for (const auto& r : e.rows) {
    if (r.length != length) continue;
    pop = r.population;
    if (r.knot_type != "0_1") knotted += r.count;
  }
  return pop ? static_cast<double>(knotted) / static_cast<double>(pop) : 0.0;
}

std::optional<int> first_sustained_below(std::span<const double> values, double threshold, int sustain) {
  require(sustain >= 1, "sustain must be >= 1");
  int streak = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    streak = values[i] < threshold ? streak + 1 : 0;
    if (streak >= sustain) return static_cast<int>(i) - sustain + 1;
  }
  return std::nullopt;
}

}  // namespace topsteer
