#include "topsteer/knotoid.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <mutex>
#include <sstream>
#include <unordered_set>

#include "topsteer/error.hpp"

namespace topsteer {

namespace {

constexpr double kTol = 1e-9;

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a, ap = p - a;
  const double len2 = dot2(ab, ab);
  double t = len2 > 0.0 ? dot2(ap, ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const Vec2 q = a + ab * t;
  return std::hypot(p.x - q.x, p.y - q.y);
}

// Uniform bucket grid over segment bounding boxes.
class SegmentGrid {
 public:
  SegmentGrid(const std::vector<Vec2>& pts, int n_segments, bool closed) {
    const int n = static_cast<int>(pts.size());
    lo_ = hi_ = pts[0];
    double total = 0.0;
    for (const auto& p : pts) {
      lo_.x = std::min(lo_.x, p.x);
      lo_.y = std::min(lo_.y, p.y);
      hi_.x = std::max(hi_.x, p.x);
      hi_.y = std::max(hi_.y, p.y);
    }
    for (int s = 0; s < n_segments; ++s) {
      const Vec2 d = pts[(s + 1) % n] - pts[s];
      total += std::hypot(d.x, d.y);
    }
    (void)closed;
    cell_ = std::max(total / std::max(1, n_segments), 1e-6);
    const double w = hi_.x - lo_.x + 2 * kTol, h = hi_.y - lo_.y + 2 * kTol;
    const double limit = 4.0 * n_segments + 16.0;
    while ((w / cell_ + 1) * (h / cell_ + 1) > limit) cell_ *= 1.5;
    nx_ = static_cast<int>(w / cell_) + 1;
    ny_ = static_cast<int>(h / cell_) + 1;
    cells_.assign(static_cast<std::size_t>(nx_) * ny_, {});
    for (int s = 0; s < n_segments; ++s) {
      const Vec2 a = pts[s], b = pts[(s + 1) % n];
      for_cells(std::min(a.x, b.x), std::min(a.y, b.y), std::max(a.x, b.x), std::max(a.y, b.y),
                [&](std::vector<int>& cell) { cell.push_back(s); });
    }
  }

  template <class F>
  void for_cells(double x0, double y0, double x1, double y1, F&& f) {
    const int i0 = clampx(x0 - kTol), i1 = clampx(x1 + kTol);
    const int j0 = clampy(y0 - kTol), j1 = clampy(y1 + kTol);
    for (int i = i0; i <= i1; ++i)
      for (int j = j0; j <= j1; ++j) f(cells_[static_cast<std::size_t>(i) * ny_ + j]);
  }

  const std::vector<std::vector<int>>& cells() const { return cells_; }

 private:
  int clampx(double x) const { return std::clamp(static_cast<int>((x - lo_.x + kTol) / cell_), 0, nx_ - 1); }
  int clampy(double y) const { return std::clamp(static_cast<int>((y - lo_.y + kTol) / cell_), 0, ny_ - 1); }

  Vec2 lo_, hi_;
  double cell_ = 1.0;
  int nx_ = 1, ny_ = 1;
  std::vector<std::vector<int>> cells_;
};

[[noreturn]] void degenerate(const std::string& what) { fail(ErrorCode::degenerate_projection, what); }

}  // namespace

std::vector<CrossingRecord> find_crossings(const PlanarGeometry& g) {
  const int n = static_cast<int>(g.points.size());
  require(n >= 2 && g.depth.size() == g.points.size(), "projected geometry needs >= 2 vertices with depths");
  const bool closed = g.closed && n >= 3;
  const int m = closed ? n : n - 1;
  const auto& P = g.points;
  auto seg_a = [&](int s) { return P[s]; };
  auto seg_b = [&](int s) { return P[(s + 1) % n]; };
  auto adjacent = [&](int i, int j) {
    if (std::abs(i - j) <= 1) return true;
    return closed && ((i == 0 && j == m - 1) || (j == 0 && i == m - 1));
  };

  for (int s = 0; s < m; ++s) {
    const Vec2 d = seg_b(s) - seg_a(s);
    if (std::hypot(d.x, d.y) <= kTol) degenerate("zero-length projected segment");
  }

  SegmentGrid grid(P, m, closed);

  // vertices on non-incident segments (covers coincident vertices and overlaps)
  for (int v = 0; v < n; ++v) {
    const int in_seg = closed ? (v - 1 + m) % m : v - 1;
    const int out_seg = v < m ? v : -1;
    bool bad = false;
    grid.for_cells(P[v].x, P[v].y, P[v].x, P[v].y, [&](std::vector<int>& cell) {
      for (int s : cell) {
        if (bad || s == in_seg || s == out_seg) continue;
        if (point_segment_distance(P[v], seg_a(s), seg_b(s)) <= kTol) bad = true;
      }
    });
    if (bad) degenerate("vertex lies on a projected segment");
  }

  std::vector<std::pair<int, int>> pairs;
  for (const auto& cell : grid.cells())
    for (std::size_t a = 0; a < cell.size(); ++a)
      for (std::size_t b = a + 1; b < cell.size(); ++b) {
        int i = cell[a], j = cell[b];
        if (i > j) std::swap(i, j);
        if (!adjacent(i, j)) pairs.emplace_back(i, j);
      }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

  std::vector<CrossingRecord> out;
  struct OnSeg {
    double t;
    Vec2 at;
  };
  std::vector<std::vector<OnSeg>> per_seg(m);
  for (const auto& [i, j] : pairs) {
    const Vec2 p = seg_a(i), r = seg_b(i) - p;
    const Vec2 q = seg_a(j), s = seg_b(j) - q;
    const double denom = cross2(r, s);
    if (denom == 0.0) continue;  // parallel; overlaps were caught above
    const Vec2 qp = q - p;
    const double t = cross2(qp, s) / denom, u = cross2(qp, r) / denom;
    if (t < 0.0 || t > 1.0 || u < 0.0 || u > 1.0) continue;
    const double zi = g.depth[i] + t * (g.depth[(i + 1) % n] - g.depth[i]);
    const double zj = g.depth[j] + u * (g.depth[(j + 1) % n] - g.depth[j]);
    if (std::abs(zi - zj) <= kTol) degenerate("strands meet in space at a crossing");
    CrossingRecord c;
    const bool i_over = zi > zj;
    c.seg_over = i_over ? i : j;
    c.seg_under = i_over ? j : i;
    c.t_over = i_over ? t : u;
    c.t_under = i_over ? u : t;
    const Vec2 dover = i_over ? r : s, dunder = i_over ? s : r;
    c.sign = cross2(dover, dunder) > 0.0 ? 1 : -1;
    out.push_back(c);
    const Vec2 at = p + r * t;
    per_seg[i].push_back({t, at});
    per_seg[j].push_back({u, at});
  }
  for (auto& list : per_seg) {
    std::sort(list.begin(), list.end(), [](const OnSeg& a, const OnSeg& b) { return a.t < b.t; });
    for (std::size_t k = 1; k < list.size(); ++k)
      if (std::hypot(list[k].at.x - list[k - 1].at.x, list[k].at.y - list[k - 1].at.y) <= kTol)
        degenerate("triple point in projection");
  }
  return out;
}

Diagram diagram_from_crossings(const std::vector<CrossingRecord>& crossings, bool closed) {
  struct Passage {
    int seg;
    double t;
    int id;
    bool over;
  };
  std::vector<Passage> ps;
  ps.reserve(2 * crossings.size());
  std::vector<int> signs;
  signs.reserve(crossings.size());
  for (std::size_t k = 0; k < crossings.size(); ++k) {
    const auto& c = crossings[k];
    ps.push_back({c.seg_over, c.t_over, static_cast<int>(k), true});
    ps.push_back({c.seg_under, c.t_under, static_cast<int>(k), false});
    signs.push_back(c.sign);
  }
  std::sort(ps.begin(), ps.end(), [](const Passage& a, const Passage& b) {
    return a.seg != b.seg ? a.seg < b.seg : a.t < b.t;
  });
  std::vector<Visit> code;
  code.reserve(ps.size());
  for (const auto& p : ps) code.push_back({p.id, p.over});
  return Diagram(std::move(code), std::move(signs), closed);
}

namespace {

class RollbackDsu {
 public:
  explicit RollbackDsu(int n) : parent_(n), size_(n, 1), components_(n) {
    for (int i = 0; i < n; ++i) parent_[i] = i;
  }
  int find(int x) const {
    while (parent_[x] != x) x = parent_[x];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) {
      history_.push_back(-1);
      return;
    }
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    --components_;
    history_.push_back(b);
  }
  void undo() {
    const int b = history_.back();
    history_.pop_back();
    if (b < 0) return;
    const int a = parent_[b];
    size_[a] -= size_[b];
    parent_[b] = b;
    ++components_;
  }
  int components() const { return components_; }

 private:
  std::vector<int> parent_, size_;
  std::vector<int> history_;
  int components_;
};

struct Smoothing {
  std::array<int, 2> a1, a2, b1, b2;  // edge pairs joined by the A and B smoothings
};

std::vector<Smoothing> smoothings(const Diagram& d) {
  const int L = static_cast<int>(d.code().size());
  auto outgoing = [&](int p) { return d.closed() ? (p + 1) % L : p + 1; };
  std::vector<Smoothing> out;
  out.reserve(d.crossings());
  for (int x = 0; x < d.crossings(); ++x) {
    const auto [p, q] = d.positions(x);
    const int out1 = 2 * outgoing(p), in1 = 2 * p + 1;
    const int out2 = 2 * outgoing(q), in2 = 2 * q + 1;
    const std::array<int, 4> order = d.handedness(x) > 0 ? std::array<int, 4>{out1, out2, in1, in2}
                                                         : std::array<int, 4>{out1, in2, in1, out2};
    const int over_out = d.code()[p].over ? out1 : out2;
    int o = 0;
    while (order[o] != over_out) ++o;
    auto e = [&](int k) { return order[(o + k) % 4] >> 1; };
    out.push_back({{e(0), e(3)}, {e(1), e(2)}, {e(0), e(1)}, {e(2), e(3)}});
  }
  return out;
}

void state_sum(const std::vector<Smoothing>& sm, std::size_t k, int n_a, RollbackDsu& dsu,
               std::vector<std::vector<std::int64_t>>& counts) {
  if (k == sm.size()) {
    ++counts[n_a][dsu.components() - 1];
    return;
  }
  dsu.unite(sm[k].a1[0], sm[k].a1[1]);
  dsu.unite(sm[k].a2[0], sm[k].a2[1]);
  state_sum(sm, k + 1, n_a + 1, dsu, counts);
  dsu.undo();
  dsu.undo();
  dsu.unite(sm[k].b1[0], sm[k].b1[1]);
  dsu.unite(sm[k].b2[0], sm[k].b2[1]);
  state_sum(sm, k + 1, n_a, dsu, counts);
  dsu.undo();
  dsu.undo();
}

std::mutex g_bracket_mutex;
std::unordered_map<std::string, Laurent> g_bracket_cache;
constexpr std::size_t kBracketCacheLimit = 1u << 18;

}  // namespace

Laurent bracket_polynomial(const Diagram& in) {
  const Diagram d = simplify(in);
  const int c = d.crossings();
  if (c == 0) return Laurent::constant(1);
  if (c > kBracketCrossingBudget)
    fail(ErrorCode::complexity_limit, std::to_string(c) + " crossings exceed the bracket budget");
  const std::string key = d.key();
  {
    std::lock_guard<std::mutex> lock(g_bracket_mutex);
    if (auto it = g_bracket_cache.find(key); it != g_bracket_cache.end()) return it->second;
  }
  const auto sm = smoothings(d);
  const int E = d.edge_count();
  RollbackDsu dsu(E);
  std::vector<std::vector<std::int64_t>> counts(c + 1, std::vector<std::int64_t>(E, 0));
  state_sum(sm, 0, 0, dsu, counts);

  const Laurent loop = Laurent(-2, {-1, 0, 0, 0, -1});  // -A^2 - A^-2
  std::vector<Laurent> loop_pow{Laurent::constant(1)};
  Laurent result;
  for (int a = 0; a <= c; ++a) {
    for (int l = 0; l < E; ++l) {
      if (!counts[a][l]) continue;
      while (static_cast<int>(loop_pow.size()) <= l) loop_pow.push_back(loop_pow.back() * loop);
      result += loop_pow[l].shifted(2 * a - c) * Laurent::constant(counts[a][l]);
    }
  }
  const int w = d.writhe();
  result = result.shifted(-3 * w) * Laurent::constant(w % 2 == 0 ? 1 : -1);
  {
    std::lock_guard<std::mutex> lock(g_bracket_mutex);
    if (g_bracket_cache.size() >= kBracketCacheLimit) g_bracket_cache.clear();
    g_bracket_cache.emplace(key, result);
  }
  return result;
}

std::string bracket_fingerprint(const Diagram& d) { return bracket_polynomial(d).key(); }

KnotoidTable::KnotoidTable(std::vector<KnotoidType> entries) : entries_(std::move(entries)) {
  bool have_trivial = false;
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    const auto& e = entries_[k];
    if (!index_.emplace(e.fingerprint, k).second)
      fail(ErrorCode::parse_error, "knotoid table fingerprint not unique: " + e.fingerprint);
    if (e.unravelling < 0) fail(ErrorCode::parse_error, "negative unravelling number for " + e.name);
    max_u_ = std::max(max_u_, e.unravelling);
    if (e.name == "trivial") {
      if (e.unravelling != 0 || e.fingerprint != Laurent::constant(1).key())
        fail(ErrorCode::parse_error, "knotoid table trivial entry is inconsistent");
      trivial_ = k;
      have_trivial = true;
    }
  }
  if (!have_trivial) fail(ErrorCode::parse_error, "knotoid table lacks the trivial type");
}

KnotoidTable KnotoidTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io_error, "cannot open knotoid table: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.string());
}

KnotoidTable KnotoidTable::parse(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> header;
  std::vector<KnotoidType> rows;
  std::size_t lineno = 0;
  auto split = [](const std::string& s) {
    std::vector<std::string> f;
    std::stringstream ls(s);
    std::string tok;
    while (std::getline(ls, tok, ',')) f.push_back(tok);
    if (!s.empty() && s.back() == ',') f.emplace_back();
    return f;
  };
  // fingerprints contain commas; they are quoted in the file
  auto split_quoted = [&](const std::string& s) {
    std::vector<std::string> f;
    std::string cur;
    bool quoted = false;
    for (char ch : s) {
      if (ch == '"') quoted = !quoted;
      else if (ch == ',' && !quoted) {
        f.push_back(cur);
        cur.clear();
      } else cur += ch;
    }
    f.push_back(cur);
    return f;
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (header.empty()) {
      header = split(line);
      continue;
    }
    const auto f = split_quoted(line);
    if (f.size() != header.size())
      fail(ErrorCode::parse_error, origin + ":" + std::to_string(lineno) + ": wrong field count");
    KnotoidType t;
    for (std::size_t k = 0; k < header.size(); ++k) {
      if (header[k] == "name") t.name = f[k];
      else if (header[k] == "fingerprint") t.fingerprint = f[k];
      else if (header[k] == "unravelling_number") {
        try {
          t.unravelling = std::stoi(f[k]);
        } catch (const std::logic_error&) {
          fail(ErrorCode::parse_error, origin + ":" + std::to_string(lineno) + ": bad unravelling number");
        }
      } else if (header[k] == "source") t.source = f[k];
      else if (header[k] == "representative") t.representative = f[k];
    }
    rows.push_back(std::move(t));
  }
  for (const char* col : {"name", "fingerprint", "unravelling_number", "source"})
    if (std::find(header.begin(), header.end(), col) == header.end())
      fail(ErrorCode::parse_error, origin + ": missing column " + col);
  return KnotoidTable(std::move(rows));
}

const KnotoidType* KnotoidTable::find(const std::string& fp) const {
  auto it = index_.find(fp);
  return it == index_.end() ? nullptr : &entries_[it->second];
}

int unravel_bound(const Diagram& d) { return (simplify(d).crossings() + 2) / 3; }

KnotoidType classify(const Diagram& d, const KnotoidTable& table) {
  const Diagram s = simplify(d);
  if (s.crossings() == 0) return table.trivial();
  KnotoidType t;
  t.name = "unclassified";
  t.classified = false;
  t.unravelling = (s.crossings() + 2) / 3;
  try {
    t.fingerprint = bracket_fingerprint(s);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::complexity_limit) throw;
    return t;
  }
  if (const KnotoidType* hit = table.find(t.fingerprint)) return *hit;
  return t;
}

std::optional<int> brute_force_unravel(const Diagram& d, int max_depth, std::size_t max_states) {
  require(!d.closed(), "unravelling applies to open diagrams");
  struct Item {
    Diagram diagram;
    int dist;
  };
  std::unordered_map<std::string, int> dist;
  std::deque<Item> queue;
  Diagram start = simplify(d);
  dist[start.key()] = 0;
  queue.push_back({std::move(start), 0});
  while (!queue.empty()) {
    Item cur = std::move(queue.front());
    queue.pop_front();
    if (dist[cur.diagram.key()] < cur.dist) continue;
    if (cur.diagram.crossings() == 0) return cur.dist;
    if (dist.size() > max_states) return std::nullopt;
    auto relax = [&](Diagram next, int cost) {
      const int nd = cur.dist + cost;
      if (nd > max_depth) return;
      std::string k = next.key();
      auto it = dist.find(k);
      if (it != dist.end() && it->second <= nd) return;
      dist[k] = nd;
      if (cost == 0) queue.push_front({std::move(next), nd});
      else queue.push_back({std::move(next), nd});
    };
    const auto fs = compute_faces(cur.diagram);
    for (const auto& tri : r3_candidates(cur.diagram, fs)) relax(simplify(apply_r3(cur.diagram, tri)), 0);
    relax(simplify(forbidden_move(cur.diagram, false)), 1);
    relax(simplify(forbidden_move(cur.diagram, true)), 1);
  }
  return std::nullopt;
}

}  // namespace topsteer
