#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <tuple>
#include <vector>

#include "topsteer/diagram.hpp"
#include "topsteer/geometry.hpp"
#include "topsteer/knotoid.hpp"

#ifndef TOPSTEER_TEST_DATA_DIR
#define TOPSTEER_TEST_DATA_DIR "data"
#endif

namespace testsupport {

using namespace topsteer;

inline std::string data_path(const std::string& name) { return std::string(TOPSTEER_TEST_DATA_DIR) + "/" + name; }

inline Diagram flip_crossing(const Diagram& d, int x) {
  auto code = d.code();
  auto s = d.signs();
  for (auto& v : code)
    if (v.crossing == x) v.over = !v.over;
  s[static_cast<std::size_t>(x)] = -s[static_cast<std::size_t>(x)];
  return Diagram(code, s, d.closed());
}

/// Random open diagram grown from the trivial one by R1 / R2 insertions and
/// crossing changes; crossing changes make it non-trivial in general.
inline Diagram random_diagram(std::mt19937_64& rng, int target) {
  Diagram d = Diagram::empty_open();
  for (int guard = 0; d.crossings() < target && guard < 200; ++guard) {
    if (d.crossings() == 0 || rng() % 3 == 0) {
      if (d.crossings() + 1 > target) break;
      d = insert_r1(d, static_cast<int>(rng() % static_cast<std::uint64_t>(d.edge_count())), rng() % 2 == 0,
                    rng() % 2 ? 1 : -1);
    } else {
      if (d.crossings() + 2 > target) break;
      const auto fs = compute_faces(d);
      const auto& f = fs.faces[rng() % fs.faces.size()];
      if (f.size() < 2) continue;
      const int a = f[rng() % f.size()], b = f[rng() % f.size()];
      if (auto r = insert_r2(d, fs, a, b, rng() % 2 == 0)) d = *r;
    }
    if (d.crossings() > 0 && rng() % 2) d = flip_crossing(d, static_cast<int>(rng() % static_cast<std::uint64_t>(d.crossings())));
  }
  return d;
}

/// One random Reidemeister move that keeps the knotoid type: R1 or R2
/// insertion inside a face, or an R3 move when one exists.
inline Diagram random_move(const Diagram& d, std::mt19937_64& rng) {
  for (int attempt = 0; attempt < 50; ++attempt) {
    const int kind = static_cast<int>(rng() % 3);
    if (kind == 0)
      return insert_r1(d, static_cast<int>(rng() % static_cast<std::uint64_t>(d.edge_count())), rng() % 2 == 0,
                       rng() % 2 ? 1 : -1);
    const auto fs = compute_faces(d);
    if (kind == 1) {
      const auto& f = fs.faces[rng() % fs.faces.size()];
      if (f.size() < 2) continue;
      if (auto r = insert_r2(d, fs, f[rng() % f.size()], f[rng() % f.size()], rng() % 2 == 0)) return *r;
    } else {
      const auto tris = r3_candidates(d, fs);
      if (tris.empty()) continue;
      return apply_r3(d, tris[rng() % tris.size()]);
    }
  }
  return insert_r1(d, 0, true, 1);
}

inline std::vector<Vec3> random_walk(std::mt19937_64& rng, std::size_t n, double step = 1.0) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Vec3> v{{0.0, 0.0, 0.0}};
  while (v.size() < n) v.push_back(v.back() + normalized(Vec3{g(rng), g(rng), g(rng)}) * step);
  return v;
}

struct BruteCrossing {
  int over, under, sign;
  double t_over, t_under;
};

/// All-pairs transverse intersections of the projected segments.
inline std::vector<BruteCrossing> brute_force_crossings(const PlanarGeometry& g) {
  const std::size_t n = g.points.size();
  const std::size_t segs = g.closed ? n : n - 1;
  std::vector<BruteCrossing> out;
  for (std::size_t i = 0; i < segs; ++i)
    for (std::size_t j = i + 1; j < segs; ++j) {
      if (j == i + 1 || (g.closed && i == 0 && j == segs - 1)) continue;
      const Vec2 p = g.points[i], r = g.points[(i + 1) % n] - p;
      const Vec2 q = g.points[j], s = g.points[(j + 1) % n] - q;
      const double den = cross2(r, s);
      if (den == 0.0) continue;
      const double t = cross2(q - p, s) / den, u = cross2(q - p, r) / den;
      if (t < 0.0 || t > 1.0 || u < 0.0 || u > 1.0) continue;
      const double zi = g.depth[i] + t * (g.depth[(i + 1) % n] - g.depth[i]);
      const double zj = g.depth[j] + u * (g.depth[(j + 1) % n] - g.depth[j]);
      const bool i_over = zi > zj;
      const Vec2 od = i_over ? r : s, ud = i_over ? s : r;
      out.push_back({static_cast<int>(i_over ? i : j), static_cast<int>(i_over ? j : i), cross2(od, ud) > 0 ? 1 : -1,
                     i_over ? t : u, i_over ? u : t});
    }
  return out;
}

/// Arcs and crossings of a closed diagram: each crossing joins the over
/// arc, the incoming under arc and the outgoing under arc.
struct ArcPresentation {
  int arcs = 0;
  struct X {
    int over, in, out;
  };
  std::vector<X> crossings;
};

inline ArcPresentation arc_presentation(const Diagram& d) {
  ArcPresentation a;
  const auto& code = d.code();
  const int m = static_cast<int>(code.size());
  if (m == 0) {
    a.arcs = 1;
    return a;
  }
  // arc_at[pos]: arc carrying the strand into visit pos; a new arc starts
  // after every under-passage
  std::vector<int> arc_at(static_cast<std::size_t>(m));
  int first_under = 0;
  while (first_under < m && code[static_cast<std::size_t>(first_under)].over) ++first_under;
  int arc = 0;
  for (int k = 1; k <= m; ++k) {
    const int pos = (first_under + k) % m;
    arc_at[static_cast<std::size_t>(pos)] = arc;
    if (!code[static_cast<std::size_t>(pos)].over) arc = (arc + 1) % std::max(1, d.crossings());
  }
  a.arcs = d.crossings();
  a.crossings.resize(static_cast<std::size_t>(d.crossings()));
  for (int pos = 0; pos < m; ++pos) {
    const auto& v = code[static_cast<std::size_t>(pos)];
    auto& x = a.crossings[static_cast<std::size_t>(v.crossing)];
    if (v.over) {
      x.over = arc_at[static_cast<std::size_t>(pos)];
    } else {
      x.in = arc_at[static_cast<std::size_t>(pos)];
      x.out = arc_at[static_cast<std::size_t>((pos + 1) % m)];
    }
  }
  return a;
}

/// Number of Fox p-colourings (p prime) by exhaustive search over arc colours.
inline long fox_colourings(const Diagram& closed, int p) {
  const ArcPresentation a = arc_presentation(closed);
  if (a.crossings.empty()) return p;
  std::vector<int> col(static_cast<std::size_t>(a.arcs), 0);
  long count = 0;
  while (true) {
    bool ok = true;
    for (const auto& x : a.crossings)
      if (((2 * col[static_cast<std::size_t>(x.over)] - col[static_cast<std::size_t>(x.in)] -
            col[static_cast<std::size_t>(x.out)]) % p + p) % p != 0) {
        ok = false;
        break;
      }
    if (ok) ++count;
    std::size_t k = 0;
    while (k < col.size() && ++col[k] == p) col[k++] = 0;
    if (k == col.size()) break;
  }
  return count;
}

}  // namespace testsupport
