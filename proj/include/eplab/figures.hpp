#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "eplab/boundaries.hpp"
#include "eplab/tomo.hpp"

namespace eplab {

/// The build-time sigma_Z or rho_A samples placed in the requested plane.
/// Throws std::invalid_argument for other families.
BoundaryCurve tabulated_curve(Family f, Plane plane);

/// Number of samples in the build-time tables.
int tabulated_samples();

/// make_curve, except that Z and A come from the tables when n equals
/// tabulated_samples().
BoundaryCurve boundary_curve(Family f, Plane plane, int n);

/// All five families (P, D, Z, A, B) in one plane.
std::vector<BoundaryCurve> figure_curves(Plane plane, int samples);

/// reep,yellow_lower,yellow_upper,cyan_upper,cyan_lower on n points of [0, 1].
void write_region_table(std::ostream& os, int n);

/// name,reep,np for the characteristic points (N0 has no REEP; its column
/// holds the sigma_Z REEP at N0).
void write_points_csv(std::ostream& os, const CharacteristicPoints& p);

/// One synthetic experimental point of a Table I class.
struct ClassPoint {
  std::string state_class;  // "i", "ii", "iii"
  double p = 0.0;
  double w = 1.0;
  ReconstructionResult result;
  RegionVerdict verdict;  // within the bootstrap band
};

struct ClassSweep {
  std::vector<double> p_grid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  std::vector<double> w_grid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  double counts_per_setting = 1e5;
  int bootstrap = 0;  // resamples per point, 0 for none
  std::uint64_t seed = 1;
};

/// Simulates and reconstructs classes (i) and (ii) over p_grid (balanced
/// splitter) and class (iii) with p = 1 over w_grid.
std::vector<ClassPoint> class_points(const ClassSweep& s);

/// class,p,w,np,cp,reep,sd_np,sd_cp,sd_reep,purity_criterion,region
void write_class_points_csv(std::ostream& os, const std::vector<ClassPoint>& pts);

}  // namespace eplab
