#include "topsteer/diagram.hpp"

#include <algorithm>
#include <sstream>

#include "topsteer/error.hpp"

namespace topsteer {

Diagram::Diagram(std::vector<Visit> code, std::vector<int> signs, bool closed) : closed_(closed) {
  const int c = static_cast<int>(signs.size());
  require(code.size() == 2 * signs.size(), "Gauss code length must be twice the crossing count");
  std::vector<int> over_count(c, 0), seen(c, 0);
  for (const Visit& v : code) {
    require(v.crossing >= 0 && v.crossing < c, "Gauss code label out of range");
    ++seen[v.crossing];
    over_count[v.crossing] += v.over ? 1 : 0;
  }
  for (int x = 0; x < c; ++x) {
    require(seen[x] == 2, "every crossing must appear exactly twice");
    require(over_count[x] == 1, "every crossing needs one over and one under passage");
    require(signs[x] == 1 || signs[x] == -1, "crossing signs must be +1 or -1");
  }
  std::vector<int> relabel(c, -1);
  int next = 0;
  for (const Visit& v : code)
    if (relabel[v.crossing] < 0) relabel[v.crossing] = next++;
  sign_.assign(c, 0);
  for (int x = 0; x < c; ++x) sign_[relabel[x]] = signs[x];
  code_.reserve(code.size());
  for (const Visit& v : code) code_.push_back({relabel[v.crossing], v.over});
  pos_.assign(c, {-1, -1});
  for (int p = 0; p < static_cast<int>(code_.size()); ++p) {
    auto& slot = pos_[code_[p].crossing];
    (slot[0] < 0 ? slot[0] : slot[1]) = p;
  }
}

int Diagram::writhe() const {
  int w = 0;
  for (int s : sign_) w += s;
  return w;
}

std::string Diagram::key() const {
  std::string out = closed_ ? "c:" : "o:";
  std::vector<char> started(sign_.size(), 0);
  for (std::size_t p = 0; p < code_.size(); ++p) {
    if (p) out += ',';
    const Visit& v = code_[p];
    out += v.over ? 'O' : 'U';
    out += std::to_string(v.crossing);
    if (!started[v.crossing]) {
      started[v.crossing] = 1;
      out += sign_[v.crossing] > 0 ? '+' : '-';
    }
  }
  return out;
}

Diagram Diagram::parse(const std::string& key) {
  if (key.size() < 2 || key[1] != ':' || (key[0] != 'o' && key[0] != 'c'))
    fail(ErrorCode::parse_error, "bad diagram key: " + key);
  const bool closed = key[0] == 'c';
  std::vector<Visit> code;
  std::vector<int> signs;
  std::string body = key.substr(2);
  if (!body.empty()) {
    std::stringstream ss(body);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (tok.size() < 2 || (tok[0] != 'O' && tok[0] != 'U')) fail(ErrorCode::parse_error, "bad token in " + key);
      Visit v;
      v.over = tok[0] == 'O';
      std::size_t end = 1;
      while (end < tok.size() && std::isdigit(static_cast<unsigned char>(tok[end]))) ++end;
      if (end == 1) fail(ErrorCode::parse_error, "bad token in " + key);
      v.crossing = std::stoi(tok.substr(1, end - 1));
      if (v.crossing >= static_cast<int>(signs.size())) signs.resize(v.crossing + 1, 0);
      if (end < tok.size()) {
        if (end + 1 != tok.size() || (tok[end] != '+' && tok[end] != '-'))
          fail(ErrorCode::parse_error, "bad token in " + key);
        signs[v.crossing] = tok[end] == '+' ? 1 : -1;
      }
      code.push_back(v);
    }
  }
  return Diagram(std::move(code), std::move(signs), closed);
}

std::array<int, 2> edge_ends(const Diagram& d, int e) {
  const int L = static_cast<int>(d.code().size());
  if (d.closed()) return {(e - 1 + L) % L, e};
  return {e - 1, e == L ? -1 : e};
}

namespace {

int outgoing_edge(const Diagram& d, int p) {
  const int L = static_cast<int>(d.code().size());
  return d.closed() ? (p + 1) % L : p + 1;
}

int insertion_index(const Diagram& d, int edge) {
  const int L = static_cast<int>(d.code().size());
  if (d.closed() && edge == 0) return L;
  return edge;
}

}  // namespace

FaceStructure compute_faces(const Diagram& d) {
  FaceStructure fs;
  const int E = d.edge_count();
  if (E == 0) return fs;
  const int n_darts = 2 * E;
  std::vector<int> rot(n_darts, -1);
  for (int x = 0; x < d.crossings(); ++x) {
    const auto [p, q] = d.positions(x);
    const int out1 = 2 * outgoing_edge(d, p), in1 = 2 * p + 1;
    const int out2 = 2 * outgoing_edge(d, q), in2 = 2 * q + 1;
    std::array<int, 4> order = d.handedness(x) > 0 ? std::array<int, 4>{out1, out2, in1, in2}
                                                   : std::array<int, 4>{out1, in2, in1, out2};
    for (int k = 0; k < 4; ++k) rot[order[k]] = order[(k + 1) % 4];
  }
  if (!d.closed()) {
    rot[0] = 0;
    rot[n_darts - 1] = n_darts - 1;
  }
  fs.face_of_dart.assign(n_darts, -1);
  for (int start = 0; start < n_darts; ++start) {
    if (fs.face_of_dart[start] >= 0) continue;
    const int id = static_cast<int>(fs.faces.size());
    fs.faces.emplace_back();
    int dart = start;
    while (fs.face_of_dart[dart] < 0) {
      fs.face_of_dart[dart] = id;
      fs.faces.back().push_back(dart);
      dart = rot[dart ^ 1];
    }
  }
  return fs;
}

bool is_planar(const Diagram& d) {
  const int c = d.crossings();
  if (d.closed() && c == 0) return true;
  const auto fs = compute_faces(d);
  const int V = d.closed() ? c : c + 2;
  const int E = d.edge_count();
  return V - E + static_cast<int>(fs.faces.size()) == 2;
}

Diagram remove_crossings(const Diagram& d, const std::vector<int>& crossings) {
  std::vector<char> drop(d.crossings(), 0);
  for (int x : crossings) drop[x] = 1;
  std::vector<int> new_label(d.crossings(), -1);
  std::vector<int> signs;
  for (int x = 0; x < d.crossings(); ++x) {
    if (drop[x]) continue;
    new_label[x] = static_cast<int>(signs.size());
    signs.push_back(d.sign(x));
  }
  std::vector<Visit> code;
  code.reserve(2 * signs.size());
  for (const Visit& v : d.code())
    if (!drop[v.crossing]) code.push_back({new_label[v.crossing], v.over});
  return Diagram(std::move(code), std::move(signs), d.closed());
}

std::vector<int> r1_candidates(const Diagram& d) {
  std::vector<int> out;
  const auto& code = d.code();
  const int L = static_cast<int>(code.size());
  for (int p = 0; p + 1 < L; ++p)
    if (code[p].crossing == code[p + 1].crossing) out.push_back(code[p].crossing);
  if (d.closed() && L >= 2 && code[L - 1].crossing == code[0].crossing) {
    if (std::find(out.begin(), out.end(), code[0].crossing) == out.end()) out.push_back(code[0].crossing);
  }
  return out;
}

std::vector<std::array<int, 2>> r2_candidates(const Diagram& d, const FaceStructure& fs) {
  std::vector<std::array<int, 2>> out;
  const auto& code = d.code();
  for (const auto& face : fs.faces) {
    if (face.size() != 2) continue;
    const int e1 = face[0] >> 1, e2 = face[1] >> 1;
    if (e1 == e2) continue;
    const auto a = edge_ends(d, e1), b = edge_ends(d, e2);
    if (a[0] < 0 || a[1] < 0 || b[0] < 0 || b[1] < 0) continue;
    const int x = code[a[0]].crossing, y = code[a[1]].crossing;
    if (x == y) continue;
    const int u = code[b[0]].crossing, v = code[b[1]].crossing;
    if (!((u == x && v == y) || (u == y && v == x))) continue;
    if (code[a[0]].over != code[a[1]].over) continue;
    out.push_back({std::min(x, y), std::max(x, y)});
  }
  return out;
}

std::vector<std::array<int, 3>> r3_candidates(const Diagram& d, const FaceStructure& fs) {
  std::vector<std::array<int, 3>> out;
  const auto& code = d.code();
  for (const auto& face : fs.faces) {
    if (face.size() != 3) continue;
    std::array<int, 3> edges{face[0] >> 1, face[1] >> 1, face[2] >> 1};
    if (edges[0] == edges[1] || edges[1] == edges[2] || edges[0] == edges[2]) continue;
    bool internal = true, has_top = false;
    std::array<int, 6> xs{};
    for (int k = 0; k < 3; ++k) {
      const auto ends = edge_ends(d, edges[k]);
      if (ends[0] < 0 || ends[1] < 0) {
        internal = false;
        break;
      }
      xs[2 * k] = code[ends[0]].crossing;
      xs[2 * k + 1] = code[ends[1]].crossing;
      if (xs[2 * k] == xs[2 * k + 1]) internal = false;
      if (code[ends[0]].over && code[ends[1]].over) has_top = true;
    }
    if (!internal || !has_top) continue;
    std::array<int, 6> ends{};
    for (int k = 0; k < 3; ++k) {
      const auto e = edge_ends(d, edges[k]);
      ends[2 * k] = e[0];
      ends[2 * k + 1] = e[1];
    }
    std::sort(ends.begin(), ends.end());
    if (std::adjacent_find(ends.begin(), ends.end()) != ends.end()) continue;
    std::array<int, 6> sorted = xs;
    std::sort(sorted.begin(), sorted.end());
    // three distinct crossings, each a corner of the triangle twice
    if (!(sorted[0] == sorted[1] && sorted[2] == sorted[3] && sorted[4] == sorted[5] && sorted[1] != sorted[2] &&
          sorted[3] != sorted[4]))
      continue;
    out.push_back(edges);
  }
  return out;
}

Diagram apply_r3(const Diagram& d, const std::array<int, 3>& edges) {
  std::vector<Visit> code = d.code();
  for (int e : edges) {
    const auto ends = edge_ends(d, e);
    std::swap(code[ends[0]], code[ends[1]]);
  }
  return Diagram(std::move(code), d.signs(), d.closed());
}

Diagram simplify(const Diagram& input) {
  Diagram cur = input;
  for (;;) {
    if (auto r1 = r1_candidates(cur); !r1.empty()) {
      cur = remove_crossings(cur, r1);
      continue;
    }
    if (cur.crossings() < 2) break;
    const auto fs = compute_faces(cur);
    if (auto r2 = r2_candidates(cur, fs); !r2.empty()) {
      cur = remove_crossings(cur, {r2[0][0], r2[0][1]});
      continue;
    }
    bool moved = false;
    for (const auto& tri : r3_candidates(cur, fs)) {
      Diagram next = apply_r3(cur, tri);
      if (!r1_candidates(next).empty() || !r2_candidates(next, compute_faces(next)).empty()) {
        cur = std::move(next);
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  return cur;
}

Diagram insert_r1(const Diagram& d, int edge, bool first_over, int handedness) {
  require(edge >= 0 && edge < std::max(1, d.edge_count()), "edge index out of range");
  require(handedness == 1 || handedness == -1, "handedness must be +1 or -1");
  std::vector<Visit> code = d.code();
  std::vector<int> signs = d.signs();
  const int x = d.crossings();
  const int at = (d.closed() && d.crossings() == 0) ? 0 : insertion_index(d, edge);
  code.insert(code.begin() + at, {Visit{x, first_over}, Visit{x, !first_over}});
  signs.push_back(handedness * (first_over ? 1 : -1));
  return Diagram(std::move(code), std::move(signs), d.closed());
}

std::optional<Diagram> insert_r2(const Diagram& d, const FaceStructure& fs, int d1, int d2, bool first_strand_over) {
  const int e1 = d1 >> 1, e2 = d2 >> 1;
  if (e1 == e2 || fs.face_of_dart.empty() || fs.face_of_dart[d1] != fs.face_of_dart[d2]) return std::nullopt;
  const int x = d.crossings(), y = x + 1;
  // A finger from the first strand enters the face and crosses the second
  // strand twice; the two passages meet the crossings in opposite orders.
  std::array<int, 2> seq1 = (d1 % 2 == 0) ? std::array<int, 2>{x, y} : std::array<int, 2>{y, x};
  struct Ins {
    int at;
    std::array<int, 2> seq;
    bool over;
  };
  const std::array<int, 2> preferred = (d2 % 2 == 0) ? std::array<int, 2>{y, x} : std::array<int, 2>{x, y};
  for (const auto& seq2 : {preferred, std::array<int, 2>{preferred[1], preferred[0]}}) {
    std::array<Ins, 2> ins{Ins{insertion_index(d, e1), seq1, first_strand_over},
                           Ins{insertion_index(d, e2), seq2, !first_strand_over}};
    if (ins[0].at < ins[1].at) std::swap(ins[0], ins[1]);
    std::vector<Visit> code = d.code();
    for (const auto& in : ins)
      code.insert(code.begin() + in.at, {Visit{in.seq[0], in.over}, Visit{in.seq[1], in.over}});
    int first_x = -1, first_y = -1;
    for (int p = 0; p < static_cast<int>(code.size()); ++p) {
      if (code[p].crossing == x && first_x < 0) first_x = p;
      if (code[p].crossing == y && first_y < 0) first_y = p;
    }
    for (int hx : {1, -1}) {
      for (int hy : {1, -1}) {
        std::vector<int> signs = d.signs();
        signs.push_back(hx * (code[first_x].over ? 1 : -1));
        signs.push_back(hy * (code[first_y].over ? 1 : -1));
        Diagram cand(code, std::move(signs), d.closed());
        if (!is_planar(cand)) continue;
        for (const auto& pair : r2_candidates(cand, compute_faces(cand))) {
          if (remove_crossings(cand, {pair[0], pair[1]}) == d) return cand;
        }
      }
    }
  }
  return std::nullopt;
}

Diagram forbidden_move(const Diagram& d, bool at_head) {
  require(!d.closed(), "forbidden moves apply to open diagrams");
  require(d.crossings() > 0, "no crossing adjacent to the endpoint");
  const int x = at_head ? d.code().back().crossing : d.code().front().crossing;
  return remove_crossings(d, {x});
}

}  // namespace topsteer
