#include "topsteer/dynamics.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <numbers>

#include "topsteer/error.hpp"
#include "topsteer/rng.hpp"

namespace topsteer {

namespace {

constexpr double kTwoSixth = 1.122462048309373;  // 2^(1/6)

double wca_force_over_r(double r2, const ChainParams& p, double* energy) {
  const double rc = kTwoSixth * p.sigma;
  if (r2 >= rc * rc) return 0.0;
  const double s2 = p.sigma * p.sigma / r2;
  const double s6 = s2 * s2 * s2;
  if (energy) *energy += 4.0 * p.epsilon * (s6 * s6 - s6) + p.epsilon;
  return 24.0 * p.epsilon * (2.0 * s6 * s6 - s6) / r2;
}

// Linked-cell binning with cell edge >= cutoff; dense over the bounding
// box, hashed when the box holds too many cells.
class CellList {
 public:
  void build(const std::vector<Vec3>& x, double cell) {
    cell_ = cell;
    const std::size_t n = x.size();
    lo_ = x[0];
    Vec3 hi = x[0];
    for (const auto& p : x) {
      lo_ = {std::min(lo_.x, p.x), std::min(lo_.y, p.y), std::min(lo_.z, p.z)};
      hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
    }
    for (int k = 0; k < 3; ++k) dims_[k] = static_cast<std::int64_t>((hi[k] - lo_[k]) / cell_) + 1;
    const double cells = static_cast<double>(dims_[0]) * static_cast<double>(dims_[1]) * static_cast<double>(dims_[2]);
    dense_ = cells <= 64.0 * static_cast<double>(n) + 4096.0;
    std::size_t size;
    if (dense_) {
      size = static_cast<std::size_t>(cells);
    } else {
      size = 1;
      while (size < 2 * n) size <<= 1;
      mask_ = size - 1;
    }
    head_.assign(size, -1);
    next_.assign(n, -1);
    coords_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::array<std::int64_t, 3> c;
      for (int k = 0; k < 3; ++k) c[k] = static_cast<std::int64_t>(std::floor((x[i][k] - lo_[k]) / cell_));
      coords_[i] = c;
      const std::size_t b = bucket(c[0], c[1], c[2]);
      next_[i] = head_[b];
      head_[b] = static_cast<int>(i);
    }
  }

  template <class F>
  void for_neighbours(std::size_t i, F&& f) const {
    const auto& c = coords_[i];
    std::size_t buckets[27];
    int nb = 0;
    for (int dx = -1; dx <= 1; ++dx)
      for (int dy = -1; dy <= 1; ++dy)
        for (int dz = -1; dz <= 1; ++dz) {
          const std::int64_t a = c[0] + dx, b = c[1] + dy, cc = c[2] + dz;
          if (dense_ && (a < 0 || b < 0 || cc < 0 || a >= dims_[0] || b >= dims_[1] || cc >= dims_[2])) continue;
          buckets[nb++] = bucket(a, b, cc);
        }
    if (!dense_) {
      std::sort(buckets, buckets + nb);
      nb = static_cast<int>(std::unique(buckets, buckets + nb) - buckets);
    }
    for (int k = 0; k < nb; ++k)
      for (int j = head_[buckets[k]]; j >= 0; j = next_[j]) f(static_cast<std::size_t>(j));
  }

 private:
  std::size_t bucket(std::int64_t a, std::int64_t b, std::int64_t c) const {
    if (dense_) return static_cast<std::size_t>((a * dims_[1] + b) * dims_[2] + c);
    std::uint64_t h = static_cast<std::uint64_t>(a) * 0x9e3779b97f4a7c15ull;
    h ^= static_cast<std::uint64_t>(b) * 0xc2b2ae3d27d4eb4full + (h << 6) + (h >> 2);
    h ^= static_cast<std::uint64_t>(c) * 0x165667b19e3779f9ull + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(mix_seed(h)) & mask_;
  }

  double cell_ = 1.0;
  Vec3 lo_;
  std::array<std::int64_t, 3> dims_{1, 1, 1};
  bool dense_ = true;
  std::size_t mask_ = 0;
  std::vector<int> head_, next_;
  std::vector<std::array<std::int64_t, 3>> coords_;
};

// Verlet pair list over the WCA cutoff plus a skin, rebuilt from the cell
// list once any bead has moved more than half the skin.
class PairList {
 public:
  explicit PairList(double skin) : skin_(skin) {}

  const std::vector<std::pair<int, int>>& pairs(const std::vector<Vec3>& x, double cutoff) {
    if (stale(x)) rebuild(x, cutoff);
    return pairs_;
  }

 private:
  bool stale(const std::vector<Vec3>& x) const {
    if (ref_.size() != x.size()) return true;
    const double lim = 0.25 * skin_ * skin_;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (norm2(x[i] - ref_[i]) > lim) return true;
    return false;
  }
  void rebuild(const std::vector<Vec3>& x, double cutoff) {
    const double rl = cutoff + skin_;
    cells_.build(x, rl);
    pairs_.clear();
    for (std::size_t i = 0; i < x.size(); ++i)
      cells_.for_neighbours(i, [&](std::size_t j) {
        if (j > i && norm2(x[i] - x[j]) < rl * rl) pairs_.emplace_back(static_cast<int>(i), static_cast<int>(j));
      });
    std::sort(pairs_.begin(), pairs_.end());
    ref_ = x;
  }

  double skin_;
  CellList cells_;
  std::vector<Vec3> ref_;
  std::vector<std::pair<int, int>> pairs_;
};

Energies forces_with(const ChainState& s, PairList& list, std::vector<Vec3>& f);

}  // namespace

double equilibrium_bond_length(const ChainParams& p) {
  // bond force: FENE attraction + WCA repulsion; root by bisection
  auto force = [&](double r) {
    const double fene = -p.k_fene * r / (1.0 - (r * r) / (p.r0 * p.r0));
    return fene + wca_force_over_r(r * r, p, nullptr) * r;
  };
  double lo = 0.5 * p.sigma, hi = std::min(kTwoSixth * p.sigma, p.r0 * (1.0 - 1e-9));
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (force(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

ChainState init_straight(std::size_t n, const ChainParams& p) {
  require(n >= 3, "a chain needs at least 3 beads");
  const double b = equilibrium_bond_length(p);
  ChainState s;
  s.params = p;
  for (std::size_t i = 0; i < n; ++i) s.x.push_back({b * static_cast<double>(i), 0.0, 0.0});
  s.v.assign(n, Vec3{});
  return s;
}

namespace {

// Sample theta (angle between successive bonds) from exp(K cos theta) sin theta / T.
double sample_bend(double k_over_t, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (k_over_t < 1e-8) return std::acos(1.0 - 2.0 * u(rng));
  // inverse CDF of cos theta on [-1, 1] with density ~ exp(K c)
  const double r = u(rng);
  const double c = 1.0 + std::log(r + (1.0 - r) * std::exp(-2.0 * k_over_t)) / k_over_t;
  return std::acos(std::clamp(c, -1.0, 1.0));
}

Vec3 any_perpendicular(const Vec3& t) {
  const Vec3 axis = std::abs(t.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
  return normalized(cross(t, axis));
}

}  // namespace

ChainState init_coil(std::size_t n, std::uint64_t seed, const ChainParams& p) {
  require(n >= 3, "a chain needs at least 3 beads");
  const double b = equilibrium_bond_length(p);
  auto rng = make_stream({seed, 0x636f696cull});
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double kt = p.temperature > 0.0 ? p.k_bend / p.temperature : 1e6;
  for (int restart = 0; restart < 1000; ++restart) {
    std::vector<Vec3> x{{0, 0, 0}, {b, 0, 0}};
    bool ok = true;
    while (x.size() < n && ok) {
      ok = false;
      const Vec3 t = normalized(x.back() - x[x.size() - 2]);
      for (int attempt = 0; attempt < 200; ++attempt) {
        const double theta = sample_bend(kt, rng);
        const double psi = 2.0 * std::numbers::pi * u(rng);
        const Vec3 e1 = any_perpendicular(t), e2 = cross(t, e1);
        const Vec3 dir = t * std::cos(theta) + (e1 * std::cos(psi) + e2 * std::sin(psi)) * std::sin(theta);
        const Vec3 cand = x.back() + dir * b;
        bool clash = false;
        for (std::size_t k = 0; k + 1 < x.size() && !clash; ++k) clash = distance(cand, x[k]) < kTwoSixth * p.sigma;
        if (!clash) {
          x.push_back(cand);
          ok = true;
          break;
        }
      }
    }
    if (ok) {
      ChainState s;
      s.params = p;
      s.x = std::move(x);
      s.v.assign(n, Vec3{});
      return s;
    }
  }
  fail(ErrorCode::invalid_configuration, "could not grow a self-avoiding coil");
}

ChainState init_from_curve(std::span<const Vec3> positions, const ChainParams& p) {
  require(positions.size() >= 3, "a chain needs at least 3 beads");
  for (std::size_t i = 0; i + 1 < positions.size(); ++i) {
    const double b = distance(positions[i], positions[i + 1]);
    if (!(b > 0.5 * p.sigma && b < p.r0))
      fail(ErrorCode::invalid_configuration, "bond " + std::to_string(i) + " length " + std::to_string(b) +
                                                 " outside (0.5 sigma, R0)");
  }
  const double dmin = min_nonbonded_distance(positions);
  if (dmin < 0.8 * p.sigma)
    fail(ErrorCode::invalid_configuration, "non-bonded beads overlap (min distance " + std::to_string(dmin) + ")");
  ChainState s;
  s.params = p;
  s.x.assign(positions.begin(), positions.end());
  s.v.assign(positions.size(), Vec3{});
  return s;
}

double min_nonbonded_distance(std::span<const Vec3> x) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 2; j < x.size(); ++j) best = std::min(best, norm2(x[i] - x[j]));
  return std::sqrt(best);
}

Energies compute_forces(const ChainState& s, std::vector<Vec3>& f) {
  PairList list(0.0);
  return forces_with(s, list, f);
}

namespace {

Energies forces_with(const ChainState& s, PairList& list, std::vector<Vec3>& f) {
  const auto& x = s.x;
  const auto& p = s.params;
  const std::size_t n = x.size();
  f.assign(n, Vec3{});
  Energies e;
  const double r0sq = p.r0 * p.r0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const Vec3 d = x[i + 1] - x[i];
    const double r2 = norm2(d);
    const double r = std::sqrt(r2);
    if (!(r < p.r0 - 1e-6))
      fail(ErrorCode::integration_blowup, "bond " + std::to_string(i) + " reached the FENE limit (r = " +
                                              std::to_string(r) + "); reduce dt");
    const double ratio = r2 / r0sq;
    e.fene += -0.5 * p.k_fene * r0sq * std::log(1.0 - ratio);
    const Vec3 fb = d * (-p.k_fene / (1.0 - ratio));  // force on i+1
    f[i + 1] += fb;
    f[i] -= fb;
  }
  for (const auto& [i, j] : list.pairs(x, kTwoSixth * p.sigma)) {
    const Vec3 d = x[i] - x[j];
    const double fr = wca_force_over_r(norm2(d), p, &e.wca);
    if (fr == 0.0) continue;
    f[i] += d * fr;
    f[j] -= d * fr;
  }
  if (p.k_bend != 0.0) {
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const Vec3 b1 = x[i] - x[i - 1], b2 = x[i + 1] - x[i];
      const double l1 = norm(b1), l2 = norm(b2);
      const double c = dot(b1, b2) / (l1 * l2);
      e.bend += p.k_bend * (1.0 - c);
      const Vec3 dc1 = b2 / (l1 * l2) - b1 * (c / (l1 * l1));
      const Vec3 dc2 = b1 / (l1 * l2) - b2 * (c / (l2 * l2));
      f[i - 1] -= dc1 * p.k_bend;
      f[i + 1] += dc2 * p.k_bend;
      f[i] += (dc1 - dc2) * p.k_bend;
    }
  }
  return e;
}

}  // namespace

double kinetic_energy(const ChainState& s) {
  double ke = 0.0;
  for (const auto& v : s.v) ke += 0.5 * s.params.mass * norm2(v);
  return ke;
}

void run_langevin(ChainState& s, const DynamicsConfig& cfg, const std::function<void(const ChainState&, int)>& observer) {
  require(cfg.dt > 0.0, "dt must be positive");
  require(cfg.steps >= 0, "steps must be non-negative");
  require(s.x.size() == s.v.size(), "positions and velocities differ in length");
  const auto& p = s.params;
  auto rng = make_stream({cfg.seed, 0x6c616e67ull});
  std::normal_distribution<double> normal(0.0, 1.0);
  const double m = p.mass;
  const double noise = std::sqrt(2.0 * p.gamma * m * std::max(0.0, p.temperature) / cfg.dt);
  const double half = 0.5 * cfg.dt / m;
  const std::size_t n = s.x.size();
  std::vector<Vec3> fc;
  PairList list(0.4 * p.sigma);
  forces_with(s, list, fc);
  // total force at the start uses the current velocities and a fresh kick
  std::vector<Vec3> f(n);
  auto add_thermostat = [&](std::vector<Vec3>& out) {
    for (std::size_t i = 0; i < n; ++i) {
      Vec3 fr{normal(rng), normal(rng), normal(rng)};
      out[i] = fc[i] - s.v[i] * (p.gamma * m) + fr * noise;
    }
  };
  add_thermostat(f);
  for (int step = 0; step < cfg.steps; ++step) {
    for (std::size_t i = 0; i < n; ++i) {
      s.v[i] += f[i] * half;
      s.x[i] += s.v[i] * cfg.dt;
    }
    forces_with(s, list, fc);
    add_thermostat(f);
    for (std::size_t i = 0; i < n; ++i) s.v[i] += f[i] * half;
    for (std::size_t i = 0; i < n; ++i)
      if (!is_finite(s.x[i]) || !is_finite(s.v[i])) fail(ErrorCode::integration_blowup, "non-finite state");
    if (observer) observer(s, step);
  }
}

void relax(ChainState& s, int steps, double step_size) {
  std::vector<Vec3> f;
  for (int k = 0; k < steps; ++k) {
    compute_forces(s, f);
    double fmax = 0.0;
    for (const auto& v : f) fmax = std::max(fmax, norm(v));
    if (fmax < 1e-12) break;
    const double scale = std::min(step_size, 0.01 / fmax);
    ChainState trial = s;
    for (std::size_t i = 0; i < s.x.size(); ++i) trial.x[i] += f[i] * scale;
    std::vector<Vec3> ft;
    double e_old = compute_forces(s, ft).total(), e_new;
    try {
      e_new = compute_forces(trial, ft).total();
    } catch (const Error&) {
      break;
    }
    if (e_new > e_old) break;
    s.x = std::move(trial.x);
  }
  for (auto& v : s.v) v = Vec3{};
}

bool apply_crankshaft(ChainState& s, const CrankshaftProposal& mv) {
  require(mv.j < s.x.size() && mv.i + 2 <= mv.j, "crankshaft pivots need j - i >= 2");
  if (mv.angle == 0.0) return true;
  const Vec3 axis = s.x[mv.j] - s.x[mv.i];
  if (norm(axis) < 1e-12) return false;
  const Vec3 u = normalized(axis);
  std::vector<Vec3> moved(s.x.begin() + static_cast<std::ptrdiff_t>(mv.i + 1),
                          s.x.begin() + static_cast<std::ptrdiff_t>(mv.j));
  for (auto& p : moved) p = s.x[mv.i] + rotate(p - s.x[mv.i], u, mv.angle);
  const double lim2 = s.params.sigma * s.params.sigma;
  for (std::size_t a = 0; a < moved.size(); ++a) {
    const std::size_t ia = mv.i + 1 + a;
    for (std::size_t k = 0; k < s.x.size(); ++k) {
      if (k > mv.i && k < mv.j) continue;
      if ((k > ia ? k - ia : ia - k) < 2) continue;
      if (norm2(moved[a] - s.x[k]) < lim2) return false;
    }
  }
  std::copy(moved.begin(), moved.end(), s.x.begin() + static_cast<std::ptrdiff_t>(mv.i + 1));
  return true;
}

bool crankshaft_move(ChainState& s, std::mt19937_64& rng, double max_angle) {
  require(s.x.size() >= 4, "crankshaft moves need at least 4 beads");
  const std::size_t n = s.x.size();
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::size_t i, j;
  do {
    i = pick(rng);
    j = pick(rng);
    if (i > j) std::swap(i, j);
  } while (j - i < 2);
  std::uniform_real_distribution<double> ang(-max_angle, max_angle);
  return apply_crankshaft(s, {i, j, ang(rng)});
}

double tangent_decay_length(const std::vector<std::vector<Vec3>>& snaps) {
  require(!snaps.empty() && snaps[0].size() >= 4, "need snapshots of at least 4 beads");
  const std::size_t nb = snaps[0].size() - 1;
  std::vector<double> corr(nb, 0.0);
  std::vector<std::size_t> cnt(nb, 0);
  double bsum = 0.0;
  std::size_t bcnt = 0;
  for (const auto& x : snaps) {
    std::vector<Vec3> t(nb);
    for (std::size_t k = 0; k < nb; ++k) {
      const Vec3 d = x[k + 1] - x[k];
      bsum += norm(d);
      ++bcnt;
      t[k] = normalized(d);
    }
    for (std::size_t a = 0; a < nb; ++a)
      for (std::size_t s = 1; a + s < nb; ++s) {
        corr[s] += dot(t[a], t[a + s]);
        ++cnt[s];
      }
  }
  const double b = bsum / static_cast<double>(bcnt);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t s = 1; s < nb; ++s) {
    if (cnt[s] == 0) break;
    const double c = corr[s] / static_cast<double>(cnt[s]);
    if (c < std::exp(-1.0)) break;
    const double xs = static_cast<double>(s) * b;
    sxy += xs * std::log(c);
    sxx += xs * xs;
  }
  if (sxx == 0.0 || sxy >= 0.0) fail(ErrorCode::calibration_failure, "tangent correlations do not decay");
  return -sxx / sxy;
}

double measure_persistence(const ChainParams& p, const CalibrationOptions& opt) {
  ChainState s = init_coil(opt.chain_length, opt.seed, p);
  DynamicsConfig eq{opt.dt, opt.equilibration_steps, derive_seed(opt.seed, 1)};
  run_langevin(s, eq);
  std::vector<std::vector<Vec3>> snaps;
  DynamicsConfig run{opt.dt, opt.sample_steps, derive_seed(opt.seed, 2)};
  run_langevin(s, run, [&](const ChainState& st, int step) {
    if ((step + 1) % opt.sample_every == 0) snaps.push_back(st.x);
  });
  return tangent_decay_length(snaps);
}

CalibrationResult calibrate_bending(double target_lp, const ChainParams& base, const CalibrationOptions& opt) {
  require(target_lp >= 0.0, "target persistence length must be non-negative");
  CalibrationResult res;
  if (target_lp == 0.0) return res;
  // analytic start: <cos theta> = coth K - 1/K = exp(-b / lp) at T = 1
  const double b = equilibrium_bond_length(base);
  const double target_cos = std::exp(-b / target_lp);
  double lo = 1e-6, hi = 1e4;
  for (int it = 0; it < 200; ++it) {
    const double mid = std::sqrt(lo * hi);
    const double c = 1.0 / std::tanh(mid) - 1.0 / mid;
    (c < target_cos ? lo : hi) = mid;
  }
  ChainParams p = base;
  p.k_bend = std::sqrt(lo * hi) * std::max(base.temperature, 1e-12);
  double prev_k = 0.0, prev_lp = 0.0;
  for (int it = 1; it <= opt.max_iterations; ++it) {
    const double lp = measure_persistence(p, opt);
    res = {p.k_bend, lp, it};
    if (std::abs(lp - target_lp) <= opt.tolerance * target_lp) return res;
    double next;
    if (it > 1 && std::abs(lp - prev_lp) > 1e-9) next = p.k_bend + (target_lp - lp) * (p.k_bend - prev_k) / (lp - prev_lp);
    else next = p.k_bend * target_lp / lp;  // lp is roughly linear in K
    prev_k = p.k_bend;
    prev_lp = lp;
    p.k_bend = std::clamp(next, 0.5 * p.k_bend, 2.0 * p.k_bend);
  }
  fail(ErrorCode::calibration_failure, "bending calibration did not converge (last lp " +
                                           std::to_string(res.measured_lp) + ")");
}

}  // namespace topsteer
