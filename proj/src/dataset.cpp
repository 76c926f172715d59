#include "eplab/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace eplab {

namespace {

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw std::runtime_error("line " + std::to_string(line) + ": " + what);
}

std::int64_t parse_count(const std::string& s, int line) {
  std::int64_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) fail(line, "bad count '" + s + "'");
  if (v < 0) fail(line, "negative count");
  return v;
}

double parse_real(const std::string& s, int line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail(line, "bad number '" + s + "'");
  }
}

// Reads the header and returns column positions for the requested names.
std::vector<int> read_header(std::istream& is, const std::vector<std::string>& names, int& line) {
  std::string text;
  while (std::getline(is, text)) {
    ++line;
    if (!trim(text).empty()) break;
  }
  if (line == 0 || trim(text).empty()) throw std::runtime_error("missing CSV header");
  const auto cols = split_row(text);
  std::vector<int> pos;
  for (const auto& n : names) {
    const auto it = std::find(cols.begin(), cols.end(), n);
    if (it == cols.end()) fail(line, "missing column '" + n + "'");
    pos.push_back(static_cast<int>(it - cols.begin()));
  }
  return pos;
}

}  // namespace

std::string to_string(Projector p) {
  switch (p) {
    case Projector::H: return "H";
    case Projector::V: return "V";
    case Projector::D: return "D";
    case Projector::A: return "A";
    case Projector::R: return "R";
    case Projector::L: return "L";
  }
  return "?";
}

Projector parse_projector(const std::string& s) {
  const std::string u = upper(s);
  if (u == "H") return Projector::H;
  if (u == "V") return Projector::V;
  if (u == "D") return Projector::D;
  if (u == "A") return Projector::A;
  if (u == "R") return Projector::R;
  if (u == "L") return Projector::L;
  throw std::invalid_argument("unknown projector '" + s + "'");
}

Vec2 projector_vector(Projector p) {
  const double s = std::sqrt(0.5);
  Vec2 v;
  switch (p) {
    case Projector::H: v << 1.0, 0.0; break;
    case Projector::V: v << 0.0, 1.0; break;
    case Projector::D: v << s, s; break;
    case Projector::A: v << s, -s; break;
    case Projector::R: v << s, cplx(0.0, s); break;
    case Projector::L: v << s, cplx(0.0, -s); break;
  }
  return v;
}

std::string to_string(CoherenceTarget t) { return t == CoherenceTarget::C ? "C" : "D"; }

CoherenceTarget parse_coherence_target(const std::string& s) {
  const std::string u = upper(s);
  if (u == "C") return CoherenceTarget::C;
  if (u == "D") return CoherenceTarget::D;
  throw std::invalid_argument("unknown coherence target '" + s + "'");
}

void write_counts_csv(std::ostream& os, const CountDataset& d) {
  os << "setting_id,proj_a,proj_b,counts,time_s\n";
  for (const auto& r : d.records) {
    os << r.setting_id << ',';
    if (r.bunched)
      os << "BUNCHED,BUNCHED";
    else
      os << to_string(r.proj_a) << ',' << to_string(r.proj_b);
    os << ',' << r.counts << ',' << std::setprecision(12) << r.time_s << '\n';
  }
}

void write_visibility_csv(std::ostream& os, const CountDataset& d) {
  os << "target,phase_step,counts\n";
  for (const auto& s : d.visibility_scans)
    for (const auto& pt : s.pattern) os << to_string(s.target) << ',' << pt.phase_step << ',' << pt.counts << '\n';
}

void read_counts_csv(std::istream& is, CountDataset& d) {
  int line = 0;
  const auto pos = read_header(is, {"setting_id", "proj_a", "proj_b", "counts", "time_s"}, line);
  const int need = *std::max_element(pos.begin(), pos.end()) + 1;
  std::vector<CountRecord> out;
  std::string text;
  while (std::getline(is, text)) {
    ++line;
    if (trim(text).empty()) continue;
    const auto c = split_row(text);
    if (static_cast<int>(c.size()) < need) fail(line, "too few columns");
    CountRecord r;
    r.setting_id = c[pos[0]];
    const std::string a = upper(c[pos[1]]), b = upper(c[pos[2]]);
    if (a == "BUNCHED" || b == "BUNCHED") {
      if (a != b) fail(line, "BUNCHED must appear in both projector columns");
      r.bunched = true;
    } else {
      try {
        r.proj_a = parse_projector(a);
        r.proj_b = parse_projector(b);
      } catch (const std::invalid_argument& e) {
        fail(line, e.what());
      }
    }
    r.counts = parse_count(c[pos[3]], line);
    r.time_s = parse_real(c[pos[4]], line);
    if (!(r.time_s >= 0.0)) fail(line, "time_s must be non-negative");
    out.push_back(r);
  }
  d.records = std::move(out);
}

void read_visibility_csv(std::istream& is, CountDataset& d) {
  int line = 0;
  const auto pos = read_header(is, {"target", "phase_step", "counts"}, line);
  const int need = *std::max_element(pos.begin(), pos.end()) + 1;
  std::map<CoherenceTarget, VisibilityScan> scans;
  std::vector<CoherenceTarget> order;
  std::string text;
  while (std::getline(is, text)) {
    ++line;
    if (trim(text).empty()) continue;
    const auto c = split_row(text);
    if (static_cast<int>(c.size()) < need) fail(line, "too few columns");
    CoherenceTarget t;
    try {
      t = parse_coherence_target(c[pos[0]]);
    } catch (const std::invalid_argument& e) {
      fail(line, e.what());
    }
    const std::int64_t step = parse_count(c[pos[1]], line);
    if (!scans.count(t)) {
      order.push_back(t);
      scans[t].target = t;
    }
    scans[t].pattern.push_back({static_cast<int>(step), parse_count(c[pos[2]], line)});
  }
  d.visibility_scans.clear();
  for (const auto t : order) d.visibility_scans.push_back(scans[t]);
}

void save_dataset(const std::filesystem::path& dir, const CountDataset& d) {
  std::filesystem::create_directories(dir);
  std::ofstream c(dir / "counts.csv");
  write_counts_csv(c, d);
  std::ofstream v(dir / "visibility.csv");
  write_visibility_csv(v, d);
  if (!c || !v) throw std::runtime_error("cannot write dataset to " + dir.string());
}

CountDataset load_dataset(const std::filesystem::path& dir) {
  CountDataset d;
  std::ifstream c(dir / "counts.csv");
  if (!c) throw std::runtime_error("cannot open " + (dir / "counts.csv").string());
  try {
    read_counts_csv(c, d);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error("counts.csv " + std::string(e.what()));
  }
  std::ifstream v(dir / "visibility.csv");
  if (v) {
    try {
      read_visibility_csv(v, d);
    } catch (const std::runtime_error& e) {
      throw std::runtime_error("visibility.csv " + std::string(e.what()));
    }
  }
  return d;
}

}  // namespace eplab
