#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "eplab/measures.hpp"

namespace eplab {

enum class Family { P, D, Z, A, B };
enum class Plane { cp_vs_np, cp_vs_reep, np_vs_reep };

std::string to_string(Family f);
std::string to_string(Plane p);
Family parse_family(const std::string& s);
/// Accepts "CP-vs-NP", "CP-vs-REEP", "NP-vs-REEP" (case-insensitive).
Plane parse_plane(const std::string& s);

/// One point of a boundary family. param_p / param_q_or_x / param_kappa
/// identify the state:
///   P, D, Z: input VOPS sigma(param_p, param_q_or_x) on a balanced lossless BS
///   A:       generalized_horodecki(param_p, param_q_or_x)
///   B:       rho_b(param_kappa, param_kappa)
struct CurveSample {
  double abscissa = 0.0;
  double ordinate = 0.0;
  double param_p = 0.0;
  double param_q_or_x = 0.0;
  double param_kappa = 0.0;
  double np_value = 0.0;
  double cp_value = 0.0;
  double reep_value = 0.0;
};

struct BoundaryCurve {
  Family family = Family::P;
  Plane plane = Plane::np_vs_reep;
  /// abscissa strictly increasing
  std::vector<CurveSample> samples;
};

/// n points in [lo, hi], cosine-spaced so they crowd toward both ends.
std::vector<double> cosine_grid(double lo, double hi, int n);

/// NP of the dephased curve as a function of p and its inverse.
double dephased_np(double p);
double dephased_p_of_np(double np);

BoundaryCurve curve_pure(const std::vector<double>& p_grid, Plane plane = Plane::np_vs_reep);
BoundaryCurve curve_dephased(const std::vector<double>& p_grid, Plane plane = Plane::np_vs_reep);

/// Coherence x = f(p, n) of sigma(p, x) whose balanced-BS output has
/// negativity n. Zero outside the bracket.
double sigma_z_coherence(double p, double n_bar);

struct SigmaZResult {
  double p_opt = 0.0;
  double x_opt = 0.0;
  double reep = 0.0;
};

/// Minimises REEP over the bracket p in [n, sqrt(2n(n+1)) - n] at fixed
/// NP = n. Throws std::domain_error for n outside (0, 1).
SigmaZResult sigma_z_optimize(double n_bar, double tol = 1e-9);

/// Branches q = (p +- sqrt(p^2 - n^2 - 2n(1-p))) / (2p); empty when
/// infeasible.
std::vector<double> rho_a_branches(double p, double n_bar);

struct RhoAResult {
  double p_opt = 0.0;
  double q_opt = 0.0;
  double ree = 0.0;
};

/// Maximises the REE of generalized_horodecki(p, q) at fixed negativity n.
/// Throws std::domain_error for n outside (0, 1).
RhoAResult rho_a_optimize(double n_bar, double tol = 1e-9);

/// n_bar grid -> sigma_z / rho_a samples. Grid points must lie in (0, 1).
BoundaryCurve curve_sigma_z(const std::vector<double>& n_grid, Plane plane = Plane::np_vs_reep);
BoundaryCurve curve_rho_a(const std::vector<double>& n_grid, Plane plane = Plane::np_vs_reep);
BoundaryCurve curve_b(const std::vector<double>& kappa_grid, Plane plane = Plane::np_vs_reep);

/// Default sampling of a family with n samples.
BoundaryCurve make_curve(Family f, Plane plane, int n);

struct CharacteristicPoints {
  double n0 = 0.0;
  double n1 = 0.0, e1 = 0.0;
  double n2 = 0.0, e2 = 0.0;
  double n3 = 0.0, e3 = 0.0;
};

/// Throws std::runtime_error when a bisection is not bracketed.
CharacteristicPoints characteristic_points();

enum class Region { yellow, cyan_upper, cyan_lower, unphysical };
std::string to_string(Region r);

struct RegionVerdict {
  Region region = Region::unphysical;
  /// Vertical (NP) distances to the curves bounding the reported region;
  /// the distance to the nearest curve for unphysical points.
  double margin_lower = 0.0;
  double margin_upper = 0.0;
};

/// Bounding curves of the (REEP, NP) plane, as NP at a given REEP.
class RegionModel {
 public:
  /// samples: number of points for the numerically optimised sigma_Z and
  /// rho_A families (at least 2).
  explicit RegionModel(int samples = 400);
  /// From precomputed NP-vs-REEP curves of the Z and A families.
  RegionModel(BoundaryCurve sigma_z, BoundaryCurve rho_a);

  double yellow_lower(double reep) const;
  double yellow_upper(double reep) const;
  double cyan_upper_bound(double reep) const;
  double cyan_lower_bound(double reep) const;

  RegionVerdict classify(double reep, double np) const;

  const BoundaryCurve& sigma_z() const { return z_; }
  const BoundaryCurve& rho_a() const { return a_; }

 private:
  BoundaryCurve z_;
  BoundaryCurve a_;
};

/// Shared RegionModel backed by 400-sample curves tabulated at build time.
const RegionModel& default_region_model();

RegionVerdict classify(double reep, double np);

/// Header: family,plane,param_p,param_q_or_x,param_kappa,abscissa,ordinate;
/// 9 significant digits.
void write_curve_csv(std::ostream& os, const BoundaryCurve& c, bool header = true);

}  // namespace eplab
