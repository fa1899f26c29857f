#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "topsteer/geometry.hpp"

namespace topsteer {

/// Kremer-Grest parameters in Lennard-Jones units (sigma = epsilon = m = 1).
struct ChainParams {
  /// Bending constant for a 10 sigma persistence length, measured with
  /// calibrate_bending (see tests); analytic start value 10.8.
  static constexpr double kDefaultBend = 10.1;

  double k_fene = 30.0;
  double r0 = 1.5;
  double epsilon = 1.0;
  double sigma = 1.0;
  double k_bend = kDefaultBend;
  double temperature = 1.0;
  double gamma = 1.0;
  double mass = 1.0;
};

/// Zero of the FENE + WCA bond force.
double equilibrium_bond_length(const ChainParams& p);

struct ChainState {
  std::vector<Vec3> x;
  std::vector<Vec3> v;
  ChainParams params;

  std::size_t size() const noexcept { return x.size(); }
  PolyCurve curve() const { return PolyCurve(x); }
};

struct DynamicsConfig {
  double dt = 0.001;
  int steps = 500;
  std::uint64_t seed = 0;
};

/// Straight chain along x at the equilibrium bond length.
ChainState init_straight(std::size_t n, const ChainParams& p = {});
/// Random self-avoiding coil at the equilibrium bond length with bend
/// angles drawn from the Kratky-Porod Boltzmann weight.
ChainState init_coil(std::size_t n, std::uint64_t seed, const ChainParams& p = {});
/// Positions from a curve; throws invalid_configuration when non-bonded
/// beads overlap (< 0.8 sigma) or a bond is outside (0.5 sigma, R0).
ChainState init_from_curve(std::span<const Vec3> positions, const ChainParams& p = {});

struct Energies {
  double fene = 0.0, wca = 0.0, bend = 0.0;
  double total() const { return fene + wca + bend; }
};

/// Conservative forces into `f` (resized); returns the potential energy.
/// Throws integration_blowup when a bond reaches R0 within 1e-6.
Energies compute_forces(const ChainState& s, std::vector<Vec3>& f);
double kinetic_energy(const ChainState& s);
/// Smallest distance between beads more than one bond apart.
double min_nonbonded_distance(std::span<const Vec3> x);

/// Velocity-Verlet Langevin integration for cfg.steps steps:
/// m dv = (F - gamma m v) dt + sqrt(2 gamma m T / dt) xi dt.
/// Deterministic given cfg.seed. `observer` (optional) runs after each step.
void run_langevin(ChainState& s, const DynamicsConfig& cfg,
                  const std::function<void(const ChainState&, int)>& observer = {});
inline ChainState step_langevin(ChainState s, const DynamicsConfig& cfg) {
  run_langevin(s, cfg);
  return s;
}

/// Overdamped T = 0 relaxation by steepest descent with a capped step.
void relax(ChainState& s, int steps, double step_size = 1e-3);

struct CrankshaftProposal {
  std::size_t i = 0, j = 0;  // pivots; beads i+1 .. j-1 rotate
  double angle = 0.0;
};

/// Rigidly rotates beads i+1..j-1 about the axis x_i -> x_j. Returns false
/// (state unchanged) when a non-bonded pair would come closer than 1 sigma.
bool apply_crankshaft(ChainState& s, const CrankshaftProposal& move);
/// Random pivots (j - i >= 2) and an angle uniform in [-max_angle, max_angle].
bool crankshaft_move(ChainState& s, std::mt19937_64& rng, double max_angle = 3.141592653589793);

/// Tangent-correlation decay length in sigma: least-squares fit of
/// ln <t_k . t_{k+s}> = -s b / lp over lags with correlation above 1/e.
double tangent_decay_length(const std::vector<std::vector<Vec3>>& snapshots);

struct CalibrationResult {
  double k_bend = 0.0;
  double measured_lp = 0.0;
  int iterations = 0;
};

struct CalibrationOptions {
  std::size_t chain_length = 64;
  int equilibration_steps = 20000;
  int sample_steps = 200000;
  int sample_every = 200;
  double dt = 0.005;
  double tolerance = 0.03;  // relative
  int max_iterations = 8;
  std::uint64_t seed = 1;
};

/// Adjusts K_bend until the measured tangent decay length matches target_lp.
/// Throws calibration_failure when the tolerance is not reached.
CalibrationResult calibrate_bending(double target_lp, const ChainParams& base = {}, const CalibrationOptions& opt = {});
/// Measured decay length for a given K_bend under `opt`.
double measure_persistence(const ChainParams& p, const CalibrationOptions& opt);

}  // namespace topsteer
