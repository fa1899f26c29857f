#include "topsteer/knot_id.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "topsteer/error.hpp"
#include "topsteer/knotoid.hpp"
#include "topsteer/parallel.hpp"
#include "topsteer/rng.hpp"

namespace topsteer {

const char* to_string(KnotFamily f) noexcept {
  switch (f) {
    case KnotFamily::unknot: return "unknot";
    case KnotFamily::torus: return "torus";
    case KnotFamily::twist: return "twist";
    case KnotFamily::composite: return "composite";
    case KnotFamily::other: return "other";
  }
  return "other";
}

KnotFamily classify_family(const std::string& name) {
  if (name == "0_1") return KnotFamily::unknot;
  if (name.find('#') != std::string::npos) return KnotFamily::composite;
  if (name == "3_1" || name == "5_1" || name == "7_1") return KnotFamily::torus;
  if (name == "4_1" || name == "5_2" || name == "6_1" || name == "7_2") return KnotFamily::twist;
  return KnotFamily::other;
}

namespace {

Laurent normalize_alexander(Laurent p) {
  if (p.is_zero()) return p;
  p = p.shifted(-p.low());
  if (p.eval(1) < 0) p = -p;
  return p;
}

}  // namespace

KnotInvariants knot_invariants(const Diagram& in) {
  require(in.closed(), "knot invariants need a closed diagram");
  const Diagram d = simplify(in);
  const int c = d.crossings();
  KnotInvariants inv;
  if (c == 0) return inv;
  if (c > kAlexanderCrossingBudget)
    fail(ErrorCode::complexity_limit, std::to_string(c) + " crossings exceed the Alexander budget");
  const auto& code = d.code();
  const int L = static_cast<int>(code.size());
  // arc k starts after the k-th under passage (mod c)
  std::vector<int> arc_at(L);
  int unders = 0;
  for (int p = 0; p < L; ++p) {
    arc_at[p] = unders % c;
    if (!code[p].over) ++unders;
  }
  const Laurent one = Laurent::constant(1), t = Laurent::monomial(1, 1);
  std::vector<std::vector<Laurent>> m(c, std::vector<Laurent>(c));
  for (int x = 0; x < c; ++x) {
    const auto [p, q] = d.positions(x);
    const int po = code[p].over ? p : q, pu = code[p].over ? q : p;
    const int over = arc_at[po], in = arc_at[pu], out = (arc_at[pu] + 1) % c;
    const Laurent a_in = d.sign(x) > 0 ? t : -one;
    const Laurent a_out = d.sign(x) > 0 ? -one : t;
    m[x][over] += one - t;
    m[x][in] += a_in;
    m[x][out] += a_out;
  }
  // drop last row and column, Bareiss on the (c-1) minor
  const int n = c - 1;
  Laurent det = one;
  if (n > 0) {
    Laurent prev = one;
    int sign = 1;
    bool singular = false;
    for (int k = 0; k < n && !singular; ++k) {
      int piv = k;
      while (piv < n && m[piv][k].is_zero()) ++piv;
      if (piv == n) {
        singular = true;
        break;
      }
      if (piv != k) {
        std::swap(m[piv], m[k]);
        sign = -sign;
      }
      for (int i = k + 1; i < n; ++i) {
        for (int j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]).exact_div(prev);
        m[i][k] = Laurent();
      }
      prev = m[k][k];
    }
    det = singular ? Laurent() : (sign > 0 ? m[n - 1][n - 1] : -m[n - 1][n - 1]);
  }
  inv.alexander = normalize_alexander(det);
  const std::int64_t v = inv.alexander.eval(-1);
  inv.determinant = v < 0 ? -v : v;
  return inv;
}

KnotTable::KnotTable(std::vector<KnotType> entries) : entries_(std::move(entries)) {
  for (std::size_t k = 0; k < entries_.size(); ++k)
    if (!index_.emplace(entries_[k].fingerprint, k).second)
      fail(ErrorCode::parse_error, "knot table fingerprint not unique: " + entries_[k].fingerprint);
}

KnotTable KnotTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io_error, "cannot open knot table: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.string());
}

KnotTable KnotTable::parse(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  bool header = false;
  std::vector<KnotType> rows;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != "name,determinant,fingerprint,family")
        fail(ErrorCode::parse_error, origin + ": unexpected knot table header");
      header = true;
      continue;
    }
    // fingerprint is quoted (contains commas)
    std::vector<std::string> f;
    std::string cur;
    bool quoted = false;
    for (char ch : line) {
      if (ch == '"') quoted = !quoted;
      else if (ch == ',' && !quoted) {
        f.push_back(cur);
        cur.clear();
      } else cur += ch;
    }
    f.push_back(cur);
    if (f.size() != 4) fail(ErrorCode::parse_error, origin + ":" + std::to_string(lineno) + ": wrong field count");
    KnotType k;
    k.name = f[0];
    try {
      k.determinant = std::stoll(f[1]);
    } catch (const std::logic_error&) {
      fail(ErrorCode::parse_error, origin + ":" + std::to_string(lineno) + ": bad determinant");
    }
    const Laurent poly = Laurent::parse(f[2]);
    k.fingerprint = poly.key();
    const std::int64_t det = std::llabs(poly.eval(-1));
    if (det != k.determinant || poly.eval(1) != 1)
      fail(ErrorCode::parse_error, origin + ":" + std::to_string(lineno) + ": determinant inconsistent with polynomial");
    k.family = classify_family(k.name);
    if (f[3] != to_string(k.family))
      fail(ErrorCode::parse_error, origin + ":" + std::to_string(lineno) + ": family does not match name");
    rows.push_back(std::move(k));
  }
  if (!header) fail(ErrorCode::parse_error, origin + ": empty knot table");
  return KnotTable(std::move(rows));
}

KnotType KnotTable::lookup(const KnotInvariants& inv) const {
  auto it = index_.find(inv.key());
  if (it != index_.end() && entries_[it->second].determinant == inv.determinant) return entries_[it->second];
  KnotType other;
  other.name = "other";
  other.family = KnotFamily::other;
  other.determinant = inv.determinant;
  other.fingerprint = inv.key();
  return other;
}

std::vector<Vec3> close_curve(const PolyCurve& c, const Direction& u, double radius_factor, int arc_segments) {
  const Vec3 centre = c.centroid();
  const double radius = std::max(radius_factor * c.diameter(), 1.0);
  const Vec3 dir = u.vec();
  auto hit = [&](const Vec3& p) {
    // p + s*dir on the sphere, s > 0
    const Vec3 w = p - centre;
    const double b = dot(w, dir), cc = norm2(w) - radius * radius;
    const double s = -b + std::sqrt(std::max(0.0, b * b - cc));
    return p + dir * s;
  };
  std::vector<Vec3> poly(c.vertices().begin(), c.vertices().end());
  const Vec3 q_end = hit(poly.back()), q_start = hit(poly.front());
  poly.push_back(q_end);
  // great arc from q_end to q_start about the centre
  const Vec3 a = normalized(q_end - centre), b = normalized(q_start - centre);
  const double omega = std::acos(std::clamp(dot(a, b), -1.0, 1.0));
  if (omega > 1e-9) {
    const double so = std::sin(omega);
    for (int k = 1; k < arc_segments; ++k) {
      const double f = static_cast<double>(k) / arc_segments;
      const Vec3 p = a * (std::sin((1 - f) * omega) / so) + b * (std::sin(f * omega) / so);
      poly.push_back(centre + p * radius);
    }
  }
  if (distance(q_start, poly.back()) > 1e-9) poly.push_back(q_start);
  return poly;
}

namespace {

// Moeller-Trumbore style test: does segment [p, q] meet the closed triangle (a, b, c)?
bool segment_hits_triangle(const Vec3& p, const Vec3& q, const Vec3& a, const Vec3& b, const Vec3& c) {
  constexpr double eps = 1e-12;
  const Vec3 dir = q - p, e1 = b - a, e2 = c - a;
  const Vec3 h = cross(dir, e2);
  const double det = dot(e1, h);
  const double scale = norm(dir) * norm(e1) * norm(e2) + eps;
  if (std::abs(det) <= 1e-12 * scale) {
    // coplanar or parallel: conservative when the segment lies in the plane
    const Vec3 n = cross(e1, e2);
    const double dp = dot(p - a, n), dq = dot(q - a, n);
    return std::abs(dp) <= 1e-12 * scale && std::abs(dq) <= 1e-12 * scale;
  }
  const double inv = 1.0 / det;
  const Vec3 s = p - a;
  const double u = dot(s, h) * inv;
  if (u < -eps || u > 1.0 + eps) return false;
  const Vec3 qv = cross(s, e1);
  const double v = dot(dir, qv) * inv;
  if (v < -eps || u + v > 1.0 + eps) return false;
  const double t = dot(e2, qv) * inv;
  return t >= -eps && t <= 1.0 + eps;
}

}  // namespace

std::vector<Vec3> reduce_closed_polygon(std::vector<Vec3> poly) {
  bool changed = true;
  while (changed && poly.size() > 3) {
    changed = false;
    for (std::size_t i = 0; i < poly.size() && poly.size() > 3;) {
      const std::size_t n = poly.size();
      const std::size_t ip = (i + n - 1) % n, in = (i + 1) % n;
      const Vec3 &a = poly[ip], &b = poly[i], &c = poly[in];
      Vec3 lo{std::min({a.x, b.x, c.x}), std::min({a.y, b.y, c.y}), std::min({a.z, b.z, c.z})};
      Vec3 hi{std::max({a.x, b.x, c.x}), std::max({a.y, b.y, c.y}), std::max({a.z, b.z, c.z})};
      bool blocked = false;
      for (std::size_t k = 0; k < n && !blocked; ++k) {
        const std::size_t k1 = (k + 1) % n;
        // skip the two edges of the triangle itself
        if (k == ip || k == i) continue;
        const Vec3 &p = poly[k], &q = poly[k1];
        if (std::max(p.x, q.x) < lo.x || std::min(p.x, q.x) > hi.x || std::max(p.y, q.y) < lo.y ||
            std::min(p.y, q.y) > hi.y || std::max(p.z, q.z) < lo.z || std::min(p.z, q.z) > hi.z)
          continue;
        if (k == in || k1 == ip) {
          // edges sharing a vertex with the triangle: only the far end matters
          const Vec3& far = (k == in) ? q : p;
          const Vec3& near = (k == in) ? p : q;
          const Vec3 probe = near + (far - near) * 1e-9;
          if (segment_hits_triangle(probe, far, a, b, c)) blocked = true;
          continue;
        }
        if (segment_hits_triangle(p, q, a, b, c)) blocked = true;
      }
      if (!blocked && distance(a, c) > 1e-9) {
        poly.erase(poly.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        if (i >= poly.size()) i = 0;
      } else {
        ++i;
      }
    }
  }
  return poly;
}

KnotType identify_closed(std::span<const Vec3> closed_poly, const KnotTable& table, std::uint64_t seed) {
  auto rng = make_stream({seed, 0x6b6e6f74ull});
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int attempt = 0; attempt < 8; ++attempt) {
    const Direction d(Vec3{normal(rng), normal(rng), normal(rng)});
    try {
      const Diagram diagram = extract_diagram(project(closed_poly, d, true));
      return table.lookup(knot_invariants(diagram));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::complexity_limit) {
        KnotType other;
        other.name = "other";
        return other;
      }
      if (e.code() != ErrorCode::degenerate_projection) throw;
    }
  }
  fail(ErrorCode::numerical_degeneracy, "closed polygon stayed degenerate under 8 projection directions");
}

KnotDistribution stochastic_closure(const PolyCurve& c, std::size_t n_closures, std::uint64_t seed,
                                    const KnotTable& table, int threads) {
  require(n_closures >= 1, "stochastic_closure needs n_closures >= 1");
  const auto dirs = sample_directions(n_closures, DirectionScheme::uniform_random(derive_seed(seed, 0x636c6full)));
  std::vector<std::string> names(n_closures);
  parallel_for(n_closures, threads, [&](std::size_t i) {
    auto poly = reduce_closed_polygon(close_curve(c, dirs[i]));
    names[i] = identify_closed(poly, table, derive_seed(seed, i)).name;
  });
  KnotDistribution dist;
  dist.n_closures = n_closures;
  for (const auto& n : names) ++dist.counts[n];
  std::size_t best = 0;
  for (const auto& [name, count] : dist.counts) {
    dist.fractions[name] = static_cast<double>(count) / static_cast<double>(n_closures);
    if (count > best) {
      best = count;
      dist.dominant = name;
    }
  }
  return dist;
}

}  // namespace topsteer
