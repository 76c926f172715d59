#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "eplab/linalg.hpp"

namespace eplab {

/// Single-qubit polarisation projectors; H = |0>, V = |1>.
enum class Projector { H, V, D, A, R, L };

std::string to_string(Projector p);
/// Accepts H, V, D, A, R, L (case-insensitive).
Projector parse_projector(const std::string& s);
Vec2 projector_vector(Projector p);

/// One measurement setting. A bunched setting is the shutter-closed
/// configuration that records the vacuum-vacuum term.
struct CountRecord {
  std::string setting_id;
  bool bunched = false;
  Projector proj_a = Projector::H;
  Projector proj_b = Projector::H;
  std::int64_t counts = 0;
  double time_s = 1.0;
};

/// Coherence targets: C couples |00> and |01>, D couples |00> and |10>.
enum class CoherenceTarget { C, D };

std::string to_string(CoherenceTarget t);
CoherenceTarget parse_coherence_target(const std::string& s);

struct FringePoint {
  int phase_step = 0;
  std::int64_t counts = 0;
};

/// Interference fringe over one full period; phase_step k of n steps sits at
/// phase 2 pi k / n, n = largest index + 1.
struct VisibilityScan {
  CoherenceTarget target = CoherenceTarget::D;
  std::vector<FringePoint> pattern;
};

struct CountDataset {
  std::vector<CountRecord> records;
  std::vector<VisibilityScan> visibility_scans;
};

/// Columns setting_id,proj_a,proj_b,counts,time_s; the bunched setting uses
/// the token BUNCHED in both projector columns.
void write_counts_csv(std::ostream& os, const CountDataset& d);
/// Columns target,phase_step,counts.
void write_visibility_csv(std::ostream& os, const CountDataset& d);

/// Replace d.records / d.visibility_scans. Throw std::runtime_error with the
/// line number on malformed input.
void read_counts_csv(std::istream& is, CountDataset& d);
void read_visibility_csv(std::istream& is, CountDataset& d);

/// dir/counts.csv and dir/visibility.csv.
void save_dataset(const std::filesystem::path& dir, const CountDataset& d);
CountDataset load_dataset(const std::filesystem::path& dir);

}  // namespace eplab
