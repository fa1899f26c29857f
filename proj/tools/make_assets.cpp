// Regenerates the curve assets in a data directory:
//   make_assets <data_dir>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "topsteer/dynamics.hpp"
#include "topsteer/geometry.hpp"

using namespace topsteer;

namespace {

using Param = std::function<Vec3(double)>;

Vec3 trefoil(double t) {
  return {std::sin(t) + 2.0 * std::sin(2.0 * t), std::cos(t) - 2.0 * std::cos(2.0 * t), -std::sin(3.0 * t)};
}

Vec3 figure_eight(double t) {
  const double r = 2.0 + std::cos(2.0 * t);
  return {r * std::cos(3.0 * t), r * std::sin(3.0 * t), std::sin(4.0 * t)};
}

Vec3 planar(const Vec3& v) { return normalized(Vec3{v.x, v.y, 0.0}); }

// Closed parametric knot cut open at t0 (an outermost point), m + 1 samples.
std::vector<Vec3> open_core(const Param& f, double t0, int m, double gap) {
  std::vector<Vec3> core;
  for (int i = 0; i <= m; ++i) core.push_back(f(t0 + gap + (2.0 * std::numbers::pi - 2.0 * gap) * i / m));
  return core;
}

// Long knot along x: the start tail leaves the cut outwards, climbs above the
// core and runs back over it to x = -reach; the end tail runs out to +reach.
std::vector<Vec3> long_knot(const Param& f, double t0, int m, double reach) {
  const auto core = open_core(f, t0, m, 0.15);
  const Vec3 out = planar(f(t0));
  const double height = 4.0;
  std::vector<Vec3> c;
  for (double x = -reach; x < 5.0; x += 1.0) c.push_back({x, 0.0, height});
  for (int i = 5; i >= 1; --i) c.push_back(core.front() + out * (1.0 * i) + Vec3{0.0, 0.0, height * i / 6.0});
  c.insert(c.end(), core.begin(), core.end());
  const Vec3 tip = core.back() + out * reach;
  for (int i = 1; i <= static_cast<int>(reach); ++i) c.push_back(core.back() + (tip - core.back()) * (i / reach));
  return c;
}

std::vector<Vec3> shifted(std::vector<Vec3> v, const Vec3& d) {
  for (auto& p : v) p += d;
  return v;
}

// Trefoil core whose end folds back along itself (offset `delta` in the
// plane) to core index `back_to`, then leaves radially.
std::vector<Vec3> slipknot(int m, int back_to, double delta) {
  const double t0 = std::numbers::pi / 3.0;
  const auto core = open_core(trefoil, t0, m, 0.15);
  const Vec3 out = planar(trefoil(t0));
  std::vector<Vec3> c;
  for (int i = 8; i >= 1; --i) c.push_back(core.front() + out * (1.0 * i));
  c.insert(c.end(), core.begin(), core.end());
  for (int i = m; i >= back_to; --i) {
    const Vec3 tng = core[static_cast<std::size_t>(std::min(i + 1, m))] - core[static_cast<std::size_t>(std::max(i - 1, 0))];
    c.push_back(core[static_cast<std::size_t>(i)] + normalized(cross(tng, Vec3{0.0, 0.0, 1.0})) * delta);
  }
  const Vec3 last = c.back();
  const Vec3 r = planar(last);
  for (int i = 1; i <= 8; ++i) c.push_back(last + r * (1.0 * i));
  return c;
}

// Trefoil resampled at the chain's bond length with short radial tails,
// relaxed under the bead-spring potential.
std::vector<Vec3> deep_trefoil(double scale, int tail) {
  const ChainParams p;
  const double b = equilibrium_bond_length(p);
  const double t0 = std::numbers::pi / 3.0;
  std::vector<Vec3> core{trefoil(t0) * scale};
  Vec3 prev = core[0];
  double acc = 0.0;
  const int fine = 200000;
  for (int i = 1; i <= fine; ++i) {
    const Vec3 q = trefoil(t0 + 2.0 * std::numbers::pi * i / fine) * scale;
    acc += distance(q, prev);
    prev = q;
    if (acc >= b) {
      core.push_back(q);
      acc = 0.0;
    }
  }
  core.pop_back();
  const Vec3 out = planar(trefoil(t0));
  std::vector<Vec3> c;
  for (int i = tail; i >= 1; --i) c.push_back(core.front() + out * (b * i) + Vec3{0.0, 0.0, 0.5 * b * i / tail});
  c.insert(c.end(), core.begin(), core.end());
  for (int i = 1; i <= tail; ++i) c.push_back(core.back() + out * (b * i) - Vec3{0.0, 0.0, 0.5 * b * i / tail});
  ChainState s = init_from_curve(c, p);
  relax(s, 20000, 1e-3);
  return s.x;
}

std::vector<Vec3> equilibrated_chain(std::size_t n, std::uint64_t seed) {
  ChainState s = init_coil(n, seed);
  DynamicsConfig cfg;
  cfg.dt = 0.005;
  cfg.steps = 100000;
  cfg.seed = seed;
  run_langevin(s, cfg);
  return s.x;
}

void emit(const std::filesystem::path& dir, const std::string& name, const std::vector<Vec3>& v,
          const std::string& comment) {
  write_curve(dir / name, v, comment);
  std::printf("%-24s %zu vertices\n", name.c_str(), v.size());
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: make_assets <data_dir>\n");
    return 2;
  }
  const std::filesystem::path dir = argv[1];
  try {
    std::vector<Vec3> straight;
    for (int i = 0; i < 20; ++i) straight.push_back({1.0 * i, 0.0, 0.0});
    emit(dir, "straight.xyz", straight, "straight segment");

    const double reach = 20.0;
    emit(dir, "trefoil.xyz", long_knot(trefoil, std::numbers::pi / 3.0, 90, reach),
         "open trefoil, long-knot tails");
    emit(dir, "figure_eight.xyz", long_knot(figure_eight, 0.0, 120, reach), "open figure-eight, long-knot tails");

    auto granny = long_knot(trefoil, std::numbers::pi / 3.0, 90, reach);
    auto second = shifted(granny, Vec3{3.0 * reach, 0.0, 0.0});
    granny.insert(granny.end(), second.begin(), second.end());
    emit(dir, "granny.xyz", granny, "two open trefoils of equal handedness in series");

    emit(dir, "slipknot.xyz", slipknot(90, 60, 0.3), "trefoil slipknot: end folded back out of the knot");
    emit(dir, "deep_trefoil.xyz", deep_trefoil(0.9, 6), "38-bead relaxed trefoil, bond length 0.9609");
    emit(dir, "equilibrated_52.xyz", equilibrated_chain(52, 52), "52-bead chain after 1e5 Langevin steps");
  } catch (const std::exception& e) {
    std::fprintf(stderr, "make_assets: %s\n", e.what());
    return 1;
  }
  return 0;
}
