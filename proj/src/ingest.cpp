#include "topsteer/ingest.hpp"

#include <zlib.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <tuple>

#include "topsteer/error.hpp"
#include "topsteer/geometry.hpp"

namespace topsteer {

void HelicalRegion::validate() const {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  for (double v : {theta_min, theta_max, phi_min, phi_max})
    require(std::isfinite(v), "helical region bounds must be finite");
  require(theta_min < theta_max && phi_min < phi_max, "helical region has zero area");
  require(theta_min >= 0.0 && theta_max <= std::numbers::pi, "helical region theta outside [0, pi]");
  require(phi_min >= 0.0 && phi_max <= two_pi, "helical region phi outside [0, 2pi]");
}

std::size_t AngleDataset::helical_count() const {
  return static_cast<std::size_t>(std::count_if(helical.begin(), helical.end(), [](std::uint8_t h) { return h != 0; }));
}

AngleExtraction angles_from_coordinates(std::span<const Vec3> points) {
  require(points.size() >= 4, "angles_from_coordinates needs at least 4 points");
  for (std::size_t i = 0; i + 1 < points.size(); ++i)
    require(norm2(points[i + 1] - points[i]) > 0.0, "angles_from_coordinates: consecutive points coincide");
  AngleExtraction out;
  std::vector<bool> collinear(points.size(), false);
  for (std::size_t i = 1; i + 1 < points.size(); ++i) {
    const Vec3 u = points[i - 1] - points[i], v = points[i + 1] - points[i];
    if (norm(cross(u, v)) <= 1e-12 * norm(u) * norm(v)) {
      collinear[i] = true;
      ++out.collinear_triples;
    }
  }
  for (std::size_t k = 3; k < points.size(); ++k) {
    if (collinear[k - 2] || collinear[k - 1]) {
      ++out.excluded_pairs;
      continue;
    }
    auto phi = dihedral_angle(points[k - 3], points[k - 2], points[k - 1], points[k]);
    if (!phi) {
      ++out.excluded_pairs;
      continue;
    }
    out.pairs.push_back({bend_angle(points[k - 2], points[k - 1], points[k]), *phi});
  }
  return out;
}

namespace {

std::string read_maybe_gz(const std::filesystem::path& path) {
  gzFile f = gzopen(path.string().c_str(), "rb");
  if (!f) fail(ErrorCode::io_error, "cannot open '" + path.string() + "'");
  std::string out;
  char buf[1 << 16];
  for (;;) {
    const int got = gzread(f, buf, sizeof buf);
    if (got < 0) {
      int err = 0;
      const std::string msg = gzerror(f, &err);
      gzclose(f);
      fail(ErrorCode::io_error, "read error in '" + path.string() + "': " + msg);
    }
    if (got == 0) break;
    out.append(buf, static_cast<std::size_t>(got));
  }
  gzclose(f);
  return out;
}

std::string trim_copy(std::string_view s) {
  const auto b = s.find_first_not_of(' ');
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(' ');
  return std::string(s.substr(b, e - b + 1));
}

bool parse_double(std::string_view s, double& out) {
  const std::string t = trim_copy(s);
  if (t.empty()) return false;
  const auto r = std::from_chars(t.data(), t.data() + t.size(), out);
  return r.ec == std::errc() && r.ptr == t.data() + t.size() && std::isfinite(out);
}

bool parse_int(std::string_view s, long& out) {
  const std::string t = trim_copy(s);
  if (t.empty()) return false;
  const auto r = std::from_chars(t.data(), t.data() + t.size(), out);
  return r.ec == std::errc() && r.ptr == t.data() + t.size();
}

struct Residue {
  long seq;
  char icode;
  Vec3 x;
};

}  // namespace

CalphaParse parse_calpha_text(const std::string& text, const std::string& origin) {
  CalphaParse out;
  std::map<char, std::vector<Residue>> chains;
  std::vector<char> chain_order;
  std::set<std::tuple<char, long, char>> seen;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind("ENDMDL", 0) == 0) break;
    if (line.rfind("ATOM  ", 0) != 0) continue;
    if (line.size() < 54) {
      ++out.malformed;
      continue;
    }
    if (line.compare(12, 4, " CA ") != 0) continue;
    const char altloc = line[16];
    const char chain = line[21];
    const char icode = line[26];
    long seq = 0;
    Vec3 x;
    if (!parse_int(std::string_view(line).substr(22, 4), seq) ||
        !parse_double(std::string_view(line).substr(30, 8), x.x) ||
        !parse_double(std::string_view(line).substr(38, 8), x.y) ||
        !parse_double(std::string_view(line).substr(46, 8), x.z)) {
      ++out.malformed;
      continue;
    }
    (void)altloc;  // the first record of a residue wins, whatever its altloc
    if (!seen.insert({chain, seq, icode}).second) continue;
    if (!chains.count(chain)) chain_order.push_back(chain);
    chains[chain].push_back({seq, icode, x});
  }
  if (seen.empty()) fail(ErrorCode::empty_input, "no CA atoms in '" + origin + "'");
  for (char c : chain_order) {
    auto& res = chains[c];
    std::stable_sort(res.begin(), res.end(), [](const Residue& a, const Residue& b) { return a.seq < b.seq; });
    std::size_t frag = 0;
    CalphaChain cur{std::string(1, c) + "/0", {}};
    for (std::size_t i = 0; i < res.size(); ++i) {
      if (i > 0) {
        const bool next_number = res[i].seq == res[i - 1].seq + 1 ||
                                 (res[i].seq == res[i - 1].seq && res[i].icode != res[i - 1].icode);
        if (!next_number || distance(res[i].x, res[i - 1].x) > kMaxCalphaGap) {
          out.chains.push_back(std::move(cur));
          cur = CalphaChain{std::string(1, c) + "/" + std::to_string(++frag), {}};
        }
      }
      cur.points.push_back(res[i].x);
    }
    out.chains.push_back(std::move(cur));
  }
  return out;
}

CalphaParse parse_calpha(const std::filesystem::path& path) {
  return parse_calpha_text(read_maybe_gz(path), path.string());
}

void partition_helical(AngleDataset& d, const HelicalRegion& r) {
  r.validate();
  d.helical.assign(d.pairs.size(), 0);
  std::size_t h = 0;
  for (std::size_t i = 0; i < d.pairs.size(); ++i)
    if (r.contains(d.pairs[i])) {
      d.helical[i] = 1;
      ++h;
    }
  if (h == 0 || h == d.pairs.size())
    fail(ErrorCode::degenerate_partition,
         h == 0 ? "helical region selects no pairs" : "helical region selects every pair");
}

namespace {

bool is_structure_file(const std::filesystem::path& p) {
  const std::string name = p.filename().string();
  for (const char* ext : {".pdb", ".ent", ".pdb.gz", ".ent.gz"}) {
    const std::string e(ext);
    if (name.size() > e.size() && name.compare(name.size() - e.size(), e.size(), e) == 0) return true;
  }
  return false;
}

std::string fmt(double v) {
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string short_fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

AngleDataset build_dataset(const std::filesystem::path& dir, const HelicalRegion& r, IngestReport* report) {
  r.validate();
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) fail(ErrorCode::io_error, "not a directory: '" + dir.string() + "'");
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir))
    if (e.is_regular_file() && is_structure_file(e.path())) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) fail(ErrorCode::empty_input, "no structure files under '" + dir.string() + "'");

  IngestReport rep;
  AngleDataset d;
  std::string used;
  for (const auto& f : files) {
    CalphaParse parsed;
    try {
      parsed = parse_calpha(f);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::empty_input) throw;
      continue;
    }
    ++rep.files;
    used += (used.empty() ? "" : " ") + f.filename().string();
    rep.malformed += parsed.malformed;
    for (const auto& ch : parsed.chains) {
      if (ch.points.size() < 4) continue;
      ++rep.chains;
      auto ex = angles_from_coordinates(ch.points);
      rep.excluded_pairs += ex.excluded_pairs;
      d.pairs.insert(d.pairs.end(), ex.pairs.begin(), ex.pairs.end());
    }
  }
  if (d.pairs.empty()) fail(ErrorCode::empty_input, "no angle pairs extracted from '" + dir.string() + "'");
  partition_helical(d, r);
  d.provenance = {
      "CA angle pairs (theta = bend at k-1, phi = dihedral k-3..k; 0 = cis)",
      "source: " + dir.filename().string() + ": " + used,
      "files=" + std::to_string(rep.files) + " fragments=" + std::to_string(rep.chains) +
          " pairs=" + std::to_string(d.size()) + " malformed_records=" + std::to_string(rep.malformed) +
          " excluded_pairs=" + std::to_string(rep.excluded_pairs),
      "fragment split: residue gap or CA-CA > " + short_fmt(kMaxCalphaGap) + " A; first model, first altloc",
      "helical region: theta [" + short_fmt(r.theta_min) + ", " + short_fmt(r.theta_max) + "] phi [" +
          short_fmt(r.phi_min) + ", " + short_fmt(r.phi_max) + "]",
  };
  if (report) *report = rep;
  return d;
}

std::string format_dataset(const AngleDataset& d) {
  require(d.helical.size() == d.pairs.size(), "dataset helical flags do not match pairs");
  std::string out;
  for (const auto& p : d.provenance) out += "# " + p + "\n";
  out += "theta_rad,phi_rad,helical\n";
  for (std::size_t i = 0; i < d.size(); ++i)
    out += fmt(d.pairs[i].theta) + "," + fmt(d.pairs[i].phi) + "," + (d.helical[i] ? "1" : "0") + "\n";
  return out;
}

void write_dataset(const std::filesystem::path& path, const AngleDataset& d) {
  const std::string text = format_dataset(d);
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::io_error, "cannot write '" + path.string() + "'");
  out << text;
  if (!out) fail(ErrorCode::io_error, "write failed for '" + path.string() + "'");
}

AngleDataset parse_dataset(const std::string& text, const std::string& origin) {
  AngleDataset d;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      d.provenance.push_back(trim_copy(std::string_view(line).substr(1)));
      continue;
    }
    const std::string where = origin + ":" + std::to_string(lineno);
    if (!header) {
      if (line != "theta_rad,phi_rad,helical") fail(ErrorCode::parse_error, where + ": bad dataset header");
      header = true;
      continue;
    }
    const auto c1 = line.find(','), c2 = line.find(',', c1 == std::string::npos ? 0 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) fail(ErrorCode::parse_error, where + ": expected 3 fields");
    AnglePair p;
    const std::string_view sv(line);
    const std::string flag = trim_copy(sv.substr(c2 + 1));
    if (!parse_double(sv.substr(0, c1), p.theta) || !parse_double(sv.substr(c1 + 1, c2 - c1 - 1), p.phi) ||
        (flag != "0" && flag != "1"))
      fail(ErrorCode::parse_error, where + ": malformed row");
    if (p.theta < 0.0 || p.theta > std::numbers::pi || p.phi < 0.0 || p.phi >= 2.0 * std::numbers::pi)
      fail(ErrorCode::parse_error, where + ": angle out of range");
    d.pairs.push_back(p);
    d.helical.push_back(flag == "1" ? 1 : 0);
  }
  if (!header) fail(ErrorCode::parse_error, origin + ": missing dataset header");
  if (d.pairs.empty()) fail(ErrorCode::empty_input, origin + ": dataset has no rows");
  return d;
}

AngleDataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io_error, "cannot open dataset '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_dataset(ss.str(), path.string());
}

}  // namespace topsteer
