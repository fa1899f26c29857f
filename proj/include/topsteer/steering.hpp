#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "topsteer/complexity.hpp"
#include "topsteer/dynamics.hpp"
#include "topsteer/gsaw.hpp"
#include "topsteer/knot_id.hpp"
#include "topsteer/knotoid.hpp"

namespace topsteer {

enum class SteerDirection { minimize, maximize };

struct FunctionalSpec {
  enum class Kind { aun, tun };
  Kind kind = Kind::aun;
  std::size_t n_dirs = 64;
  std::size_t stride = 4;  // tun only
};

struct SteeringConfig {
  int k = 40;          // candidates per iteration
  int horizon = 500;   // Langevin steps / crankshaft moves / beads per candidate
  SteerDirection direction = SteerDirection::minimize;
  FunctionalSpec functional;
  int max_iterations = 100;
  /// Stops once the adopted configuration's AUN is below (minimize) or above
  /// (maximize) the threshold for `stop_sustain` consecutive iterations.
  std::optional<double> stop_threshold = 0.02;
  int stop_sustain = 3;
  std::uint64_t seed = 0;
  int threads = 1;
  /// Stochastic closures of the adopted configuration per iteration (0 = off).
  std::size_t closures = 0;
  bool keep_snapshots = false;
  /// When false, an iteration in which every candidate fails ends the run
  /// with `aborted` set instead of throwing steering_abort.
  bool abort_throws = true;
};

struct IterationRecord {
  int iteration = 0;
  double chosen_value = 0.0;
  double stderr_ = 0.0;
  int chosen_index = 0;
  double aun = 0.0;  // AUN of the adopted configuration (= chosen_value for AUN runs)
  std::vector<double> candidate_values;  // NaN for failed candidates
  std::uint64_t direction_hash = 0;
  std::string knot_type;  // dominant closure type when closures > 0
  double knot_fraction = 0.0;
  std::vector<Vec3> snapshot;  // adopted configuration when keep_snapshots
};

struct SteeringTrajectory {
  std::vector<IterationRecord> records;
  bool stopped = false;  // stop rule met
  /// First iteration of the sustained run that met the stop rule.
  std::optional<int> stop_iteration;
  bool aborted = false;
};

/// Advances a configuration by `horizon` units with the given stream; throws
/// topsteer::Error on failure (the candidate is discarded).
template <class State>
using Propagator = std::function<void(State&, int horizon, std::mt19937_64& rng)>;

template <class State>
using CurveOf = std::function<std::span<const Vec3>(const State&)>;

Propagator<ChainState> langevin_propagator(double dt);
Propagator<ChainState> crankshaft_propagator(double max_angle = 3.141592653589793);
Propagator<GrowthState> growth_propagator(AngleModel model);

std::span<const Vec3> chain_curve(const ChainState& s);
std::span<const Vec3> growth_curve(const GrowthState& s);

/// Iteration i: candidate c copies `state`, is propagated with
/// make_stream({seed, i, c}) and scored with a direction set common to all
/// candidates; the extremal candidate (lowest index on ties) becomes `state`.
/// `state` holds the last adopted configuration even when this throws
/// steering_abort (every candidate failed).
template <class State>
SteeringTrajectory steer(State& state, const Propagator<State>& propagate, const CurveOf<State>& curve_of,
                         const SteeringConfig& cfg, const KnotoidTable& knotoids, const KnotTable& knots);

/// Direction set used by steer() at an iteration.
std::vector<Direction> iteration_directions(const SteeringConfig& cfg, int iteration);

/// Functional of a curve for the given direction set; 0 for fewer than 3 vertices.
ComplexityEstimate evaluate_functional(std::span<const Vec3> curve, const FunctionalSpec& f,
                                       std::span<const Direction> dirs, const KnotoidTable& table,
                                       std::uint64_t retry_seed);

struct EnsembleResult {
  std::vector<SteeringTrajectory> runs;
  std::vector<double> mean;    // per iteration over runs still recorded
  std::vector<double> spread;  // sample sd
};

/// n_runs K = 1 runs; run r uses seed + r, so run r equals steer(K = 1) with
/// that seed. Runs execute concurrently up to `threads`.
template <class State>
EnsembleResult undirected_ensemble(const State& initial, const Propagator<State>& propagate,
                                   const CurveOf<State>& curve_of, std::size_t n_runs, SteeringConfig cfg,
                                   const KnotoidTable& knotoids, const KnotTable& knots);

struct GrowthWalk {
  std::vector<int> lengths;              // after each iteration
  std::vector<std::string> knot_types;   // dominant closure type per length
  std::optional<std::size_t> trapped_at;
  std::vector<Vec3> final_curve;
};

struct KymographRow {
  int length = 0;
  std::string knot_type;
  double fraction = 0.0;
  std::size_t count = 0;
  std::size_t population = 0;  // walks alive at this length
};

struct GrowthEnsemble {
  std::string model;
  std::vector<GrowthWalk> walks;
  std::vector<KymographRow> rows;
};

struct GrowthConfig {
  std::size_t n_walks = 100;
  int target_length = 250;
  int k = 20;
  int beads_per_step = 10;
  std::size_t n_dirs = 64;
  std::size_t closures = 50;
  std::uint64_t seed = 0;
  int threads = 1;
  OverlapPolicy policy = OverlapPolicy::strict;
  int max_attempts = GrowthState::kDefaultMaxAttempts;
};

/// Walk w is steered (maximize AUN) from an empty chain with seed
/// derive_seed(cfg.seed, w). Walks whose candidates are all trapped stop and
/// drop out of the population at longer lengths.
GrowthEnsemble grow_steered_ensemble(const AngleModel& model, const std::string& model_name, const GrowthConfig& cfg,
                                     const KnotoidTable& knotoids, const KnotTable& knots);

/// Knot types counted as non-trefoil twist knots.
bool is_nontrefoil_twist(const std::string& knot_type);

struct TwistRow {
  int length = 0;
  std::size_t population = 0;
  std::size_t knotted = 0;
  std::size_t twist = 0;          // non-trefoil twist knots
  std::size_t trefoil = 0;
  double twist_fraction = 0.0;    // twist / population
  double twist_of_knotted = 0.0;  // twist / knotted
};
std::vector<TwistRow> twist_series(const GrowthEnsemble& e);

/// Fraction of walks alive at `length` whose type is not the unknot.
double knotted_fraction(const GrowthEnsemble& e, int length);

/// First index i with values[i .. i + sustain - 1] all below `threshold`.
std::optional<int> first_sustained_below(std::span<const double> values, double threshold, int sustain);

}  // namespace topsteer
