#include "eplab/boundaries.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <iomanip>
#include <limits>
#include <mutex>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <utility>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "eplab/parallel.hpp"

namespace eplab {

namespace {

constexpr int kScanPoints = 64;
constexpr int kBrentBits = 26;  // ~1.5e-8 relative, below the 1e-7 parameter target
constexpr double kBand = 1e-9;
constexpr double kMergeThreshold = 1e-3;
constexpr double kCurveGapLimit = 1e-6;

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

void place(CurveSample& s, Plane plane) {
  switch (plane) {
    case Plane::cp_vs_np:
      s.abscissa = s.np_value;
      s.ordinate = s.cp_value;
      break;
    case Plane::cp_vs_reep:
      s.abscissa = s.reep_value;
      s.ordinate = s.cp_value;
      break;
    case Plane::np_vs_reep:
      s.abscissa = s.reep_value;
      s.ordinate = s.np_value;
      break;
  }
}

BoundaryCurve finish(Family f, Plane plane, std::vector<CurveSample> samples) {
  for (auto& s : samples) place(s, plane);
  std::stable_sort(samples.begin(), samples.end(),
                   [](const CurveSample& a, const CurveSample& b) { return a.abscissa < b.abscissa; });
  BoundaryCurve c{f, plane, {}};
  for (const auto& s : samples)
    if (c.samples.empty() || s.abscissa > c.samples.back().abscissa) c.samples.push_back(s);
  return c;
}

void require_open_unit(double n, const char* what) {
  if (!(n > 0.0 && n < 1.0)) throw std::domain_error(std::string(what) + " must lie in (0, 1), got " + std::to_string(n));
}

// Arg-extremum of f on a uniform scan followed by Brent's method on the
// neighbouring cells. Returns (argmin, min).
template <typename F>
std::pair<double, double> scan_then_brent(F f, double lo, double hi) {
  if (hi - lo <= 1e-12) return {lo, f(lo)};
  std::vector<double> xs(kScanPoints), fs(kScanPoints);
  for (int i = 0; i < kScanPoints; ++i) {
    xs[i] = lo + (hi - lo) * i / (kScanPoints - 1);
    fs[i] = f(xs[i]);
  }
  const int k = static_cast<int>(std::min_element(fs.begin(), fs.end()) - fs.begin());
  const double a = xs[std::max(0, k - 1)], b = xs[std::min(kScanPoints - 1, k + 1)];
  auto [x, v] = boost::math::tools::brent_find_minima(f, a, b, kBrentBits);
  if (fs[k] < v) return {xs[k], fs[k]};
  return {x, v};
}

// Root of a monotone function on [lo, hi]; requires a sign change.
template <typename F>
double bisect_root(F f, double lo, double hi, const char* what) {
  const double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) throw std::runtime_error(std::string("bisection not bracketed: ") + what);
  auto r = boost::math::tools::bisect(f, lo, hi, boost::math::tools::eps_tolerance<double>(48));
  return 0.5 * (r.first + r.second);
}

// Piecewise-linear interpolation of ordinate against abscissa, clamped at
// the ends.
double interpolate(const BoundaryCurve& c, double x) {
  const auto& s = c.samples;
  if (s.empty()) return 0.0;
  if (x <= s.front().abscissa) return s.front().ordinate;
  if (x >= s.back().abscissa) return s.back().ordinate;
  const auto it = std::upper_bound(s.begin(), s.end(), x,
                                   [](double v, const CurveSample& cs) { return v < cs.abscissa; });
  const auto& b = *it;
  const auto& a = *(it - 1);
  const double t = (x - a.abscissa) / (b.abscissa - a.abscissa);
  return a.ordinate + t * (b.ordinate - a.ordinate);
}

double pure_np_of_reep(double e) {
  if (e <= 0.0) return 0.0;
  if (e >= 1.0) return 1.0;
  return bisect_root([e](double n) { return ree_closed_pure(n) - e; }, 0.0, 1.0, "pure curve inversion");
}

double dephased_np_of_reep(double e) {
  if (e <= 0.0) return 0.0;
  if (e >= 1.0) return 1.0;
  const double p = bisect_root([e](double q) { return ree_closed_horodecki(q) - e; }, 0.0, 1.0, "dephased curve inversion");
  return dephased_np(p);
}

// rho_B(k, k): N = 2 lambda - 1 with REE = 1 - h(lambda), lambda in [1/2, 1].
double bell_np_of_reep(double e) {
  if (e <= 0.0) return 0.0;
  if (e >= 1.0) return 1.0;
  const double lam = bisect_root([e](double l) { return 1.0 - binary_entropy(l) - e; }, 0.5, 1.0, "Bell curve inversion");
  return 2.0 * lam - 1.0;
}

// Boundary optimisation runs at tol 1e-9. Nearly pure states with tiny
// entanglement cannot always be certified that tightly; their best value is
// used as long as the certified gap stays below kCurveGapLimit.
double curve_ree(const TwoQubitState& rho, double tol) {
  try {
    return relative_entropy_of_entanglement(rho, tol);
  } catch (const ReeConvergenceError& e) {
    if (e.gap() <= kCurveGapLimit) return e.best_value();
    throw;
  }
}

double reep_of_vops(double p, double x, double tol) {
  return curve_ree(bs_transform(make_vops_with_coherence(p, x), BsSetting::balanced()), tol);
}

double ree_generalized_horodecki(double p, double q, double tol) {
  return curve_ree(generalized_horodecki(p, q), tol);
}

double rho_a_lower_p(double n) { return std::sqrt(2.0 * n * (n + 1.0)) - n; }

CurveSample sample_from_state(const TwoQubitState& rho, double tol) {
  CurveSample s;
  s.np_value = negativity(rho);
  s.cp_value = concurrence(rho);
  s.reep_value = curve_ree(rho, tol);
  return s;
}

}  // namespace

std::string to_string(Family f) {
  switch (f) {
    case Family::P: return "P";
    case Family::D: return "D";
    case Family::Z: return "Z";
    case Family::A: return "A";
    case Family::B: return "B";
  }
  return "?";
}

std::string to_string(Plane p) {
  switch (p) {
    case Plane::cp_vs_np: return "CP-vs-NP";
    case Plane::cp_vs_reep: return "CP-vs-REEP";
    case Plane::np_vs_reep: return "NP-vs-REEP";
  }
  return "?";
}

Family parse_family(const std::string& s) {
  const std::string u = lower(s);
  if (u == "p") return Family::P;
  if (u == "d") return Family::D;
  if (u == "z") return Family::Z;
  if (u == "a") return Family::A;
  if (u == "b") return Family::B;
  throw std::invalid_argument("unknown family '" + s + "' (expected P, D, Z, A or B)");
}

Plane parse_plane(const std::string& s) {
  const std::string u = lower(s);
  if (u == "cp-vs-np") return Plane::cp_vs_np;
  if (u == "cp-vs-reep") return Plane::cp_vs_reep;
  if (u == "np-vs-reep") return Plane::np_vs_reep;
  throw std::invalid_argument("unknown plane '" + s + "' (expected CP-vs-NP, CP-vs-REEP or NP-vs-REEP)");
}

std::string to_string(Region r) {
  switch (r) {
    case Region::yellow: return "yellow";
    case Region::cyan_upper: return "cyan-upper";
    case Region::cyan_lower: return "cyan-lower";
    case Region::unphysical: return "unphysical";
  }
  return "?";
}

std::vector<double> cosine_grid(double lo, double hi, int n) {
  if (n < 2) throw std::invalid_argument("grid needs at least 2 points");
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) {
    const double t = 0.5 * (1.0 - std::cos(std::numbers::pi * i / (n - 1)));
    g[i] = lo + (hi - lo) * t;
  }
  g.front() = lo;
  g.back() = hi;
  return g;
}

double dephased_np(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("p must lie in [0, 1]");
  return std::sqrt((1.0 - p) * (1.0 - p) + p * p) - (1.0 - p);
}

double dephased_p_of_np(double np) {
  if (!(np >= 0.0 && np <= 1.0)) throw std::domain_error("NP must lie in [0, 1]");
  return std::min(1.0, rho_a_lower_p(np));
}

BoundaryCurve curve_pure(const std::vector<double>& p_grid, Plane plane) {
  std::vector<CurveSample> out;
  out.reserve(p_grid.size());
  for (double p : p_grid) {
    CurveSample s;
    s.param_p = p;
    s.param_q_or_x = make_vops(p, 1.0).x_max();
    s.np_value = p;
    s.cp_value = p;
    s.reep_value = ree_closed_pure(p);
    out.push_back(s);
  }
  return finish(Family::P, plane, std::move(out));
}

BoundaryCurve curve_dephased(const std::vector<double>& p_grid, Plane plane) {
  std::vector<CurveSample> out;
  out.reserve(p_grid.size());
  for (double p : p_grid) {
    CurveSample s;
    s.param_p = p;
    s.np_value = dephased_np(p);
    s.cp_value = p;
    s.reep_value = ree_closed_horodecki(p);
    out.push_back(s);
  }
  return finish(Family::D, plane, std::move(out));
}

double sigma_z_coherence(double p, double n_bar) {
  const double inner = (1.0 + p / n_bar) * (2.0 * n_bar * (n_bar + 1.0) - (n_bar + p) * (n_bar + p));
  if (!(inner > 0.0)) return 0.0;
  const double x = 0.5 * std::sqrt(inner);
  return std::min(x, std::sqrt(std::max(0.0, p * (1.0 - p))));
}

SigmaZResult sigma_z_optimize(double n_bar, double tol) {
  require_open_unit(n_bar, "target NP");
  const double lo = n_bar, hi = rho_a_lower_p(n_bar);
  if (!(hi >= lo)) throw std::domain_error("empty sigma_Z bracket");
  auto f = [&](double p) { return reep_of_vops(p, sigma_z_coherence(p, n_bar), tol); };
  const auto [p, v] = scan_then_brent(f, lo, hi);
  SigmaZResult r{p, sigma_z_coherence(p, n_bar), v};
  const double np = negativity(bs_transform(make_vops_with_coherence(r.p_opt, r.x_opt), BsSetting::balanced()));
  if (std::abs(np - n_bar) > 1e-4)
    throw std::runtime_error("sigma_Z negativity mismatch: target " + std::to_string(n_bar) + ", got " + std::to_string(np));
  return r;
}

std::vector<double> rho_a_branches(double p, double n_bar) {
  std::vector<double> out;
  if (!(p > 0.0)) return out;
  const double disc = p * p - n_bar * n_bar - 2.0 * n_bar * (1.0 - p);
  if (disc < -1e-14) return out;
  const double root = std::sqrt(std::max(0.0, disc));
  for (double q : {(p - root) / (2.0 * p), (p + root) / (2.0 * p)})
    if (q >= 0.0 && q <= 1.0) out.push_back(q);
  return out;
}

RhoAResult rho_a_optimize(double n_bar, double tol) {
  require_open_unit(n_bar, "target negativity");
  const double lo = std::min(1.0, rho_a_lower_p(n_bar));
  auto branch_q = [&](double p) {
    const auto b = rho_a_branches(p, n_bar);
    if (b.empty()) throw std::domain_error("no feasible rho_A branch");
    return b.front();
  };
  // The two branches are exchanged by swapping the qubits, so their REE
  // agrees; the scan follows the lower one and both are compared at the end.
  auto neg_ree = [&](double p) { return -ree_generalized_horodecki(p, branch_q(p), tol); };
  const auto [p, v] = scan_then_brent(neg_ree, lo, 1.0);
  RhoAResult best{p, branch_q(p), -v};
  for (double q : rho_a_branches(p, n_bar)) {
    const double r = ree_generalized_horodecki(p, q, tol);
    if (r > best.ree) best = {p, q, r};
  }
  const double n = negativity(generalized_horodecki(best.p_opt, best.q_opt));
  if (std::abs(n - n_bar) > 1e-4)
    throw std::runtime_error("rho_A negativity mismatch: target " + std::to_string(n_bar) + ", got " + std::to_string(n));
  return best;
}

BoundaryCurve curve_sigma_z(const std::vector<double>& n_grid, Plane plane) {
  std::vector<CurveSample> out(n_grid.size());
  parallel_for(n_grid.size(), [&](std::size_t i) {
    const SigmaZResult r = sigma_z_optimize(n_grid[i]);
    CurveSample s =
        sample_from_state(bs_transform(make_vops_with_coherence(r.p_opt, r.x_opt), BsSetting::balanced()), 1e-9);
    s.reep_value = r.reep;
    s.param_p = r.p_opt;
    s.param_q_or_x = r.x_opt;
    out[i] = s;
  });
  return finish(Family::Z, plane, std::move(out));
}

BoundaryCurve curve_rho_a(const std::vector<double>& n_grid, Plane plane) {
  std::vector<CurveSample> out(n_grid.size());
  parallel_for(n_grid.size(), [&](std::size_t i) {
    const RhoAResult r = rho_a_optimize(n_grid[i]);
    CurveSample s = sample_from_state(generalized_horodecki(r.p_opt, r.q_opt), 1e-9);
    s.reep_value = r.ree;
    s.param_p = r.p_opt;
    s.param_q_or_x = r.q_opt;
    out[i] = s;
  });
  return finish(Family::A, plane, std::move(out));
}

BoundaryCurve curve_b(const std::vector<double>& kappa_grid, Plane plane) {
  std::vector<CurveSample> out(kappa_grid.size());
  parallel_for(kappa_grid.size(), [&](std::size_t i) {
    const double k = kappa_grid[i];
    const TwoQubitState rho = rho_b(k, k);
    CurveSample s;
    s.np_value = negativity(rho);
    s.cp_value = concurrence(rho);
    ReeOptions opts;
    opts.tol = 1e-9;
    s.reep_value = ree_numeric(rho, opts).ree_value;
    s.param_p = 1.0;
    s.param_q_or_x = 0.5;
    s.param_kappa = k;
    out[i] = s;
  });
  return finish(Family::B, plane, std::move(out));
}

BoundaryCurve make_curve(Family f, Plane plane, int n) {
  if (n < 3) throw std::invalid_argument("a curve needs at least 3 samples");
  switch (f) {
    case Family::P: return curve_pure(cosine_grid(0.0, 1.0, n), plane);
    case Family::D: return curve_dephased(cosine_grid(0.0, 1.0, n), plane);
    case Family::B: return curve_b(cosine_grid(0.0, 1.0, n), plane);
    case Family::Z:
    case Family::A: {
      // Interior targets from the optimisers plus the exact end points
      // (vacuum and singlet).
      std::vector<double> g = cosine_grid(0.0, 1.0, n);
      std::vector<double> interior(g.begin() + 1, g.end() - 1);
      BoundaryCurve c = f == Family::Z ? curve_sigma_z(interior, plane) : curve_rho_a(interior, plane);
      std::vector<CurveSample> all = c.samples;
      CurveSample zero, one;
      one.np_value = one.cp_value = one.reep_value = 1.0;
      one.param_p = 1.0;
      one.param_q_or_x = f == Family::A ? 0.5 : 0.0;
      all.push_back(zero);
      all.push_back(one);
      return finish(f, plane, std::move(all));
    }
  }
  throw std::invalid_argument("unknown family");
}

CharacteristicPoints characteristic_points() {
  CharacteristicPoints cp;
  auto reep_d = [](double n) { return ree_closed_horodecki(dephased_p_of_np(n)); };
  auto reep_z = [](double n) { return sigma_z_optimize(n).reep; };

  cp.n1 = bisect_root([&](double n) { return ree_closed_pure(n) - reep_d(n); }, 0.2, 0.6, "N1");
  cp.e1 = ree_closed_pure(cp.n1);

  // rho_A reaches the pure curve once REE no longer rises toward p = 1,
  // i.e. where its one-sided slope at p = 1 changes sign.
  auto slope_at_one = [](double n) {
    constexpr double h = 1e-3;
    auto r = [n](double p) {
      const auto b = rho_a_branches(p, n);
      if (b.empty()) throw std::domain_error("no feasible rho_A branch");
      return ree_generalized_horodecki(p, b.front(), 1e-9);
    };
    return (3.0 * r(1.0) - 4.0 * r(1.0 - h) + r(1.0 - 2.0 * h)) / (2.0 * h);
  };
  cp.n2 = bisect_root(slope_at_one, 0.3, 0.8, "N2");
  cp.e2 = ree_closed_pure(cp.n2);

  // sigma_Z becomes sigma_D once the REEP minimum sits on the upper bracket
  // end (x = 0): the slope there turns non-positive.
  auto slope_at_bracket_end = [](double n) {
    const double hi = rho_a_lower_p(n);
    const double h = 1e-3 * (hi - n);
    auto r = [n](double p) { return reep_of_vops(p, sigma_z_coherence(p, n), 1e-9); };
    return (3.0 * r(hi) - 4.0 * r(hi - h) + r(hi - 2.0 * h)) / (2.0 * h);
  };
  cp.n3 = bisect_root(slope_at_bracket_end, cp.n1, 0.95, "N3");
  cp.e3 = reep_d(cp.n3);

  cp.n0 = bisect_root([&](double n) { return ree_closed_pure(n) - reep_z(n) - kMergeThreshold; }, 0.02, cp.n1, "N0");
  return cp;
}

RegionModel::RegionModel(int samples)
    : z_(make_curve(Family::Z, Plane::np_vs_reep, std::max(3, samples))),
      a_(make_curve(Family::A, Plane::np_vs_reep, std::max(3, samples))) {}

RegionModel::RegionModel(BoundaryCurve sigma_z, BoundaryCurve rho_a) : z_(std::move(sigma_z)), a_(std::move(rho_a)) {
  if (z_.family != Family::Z || a_.family != Family::A || z_.plane != Plane::np_vs_reep || a_.plane != Plane::np_vs_reep)
    throw std::invalid_argument("RegionModel needs NP-vs-REEP curves of the Z and A families");
  if (z_.samples.size() < 2 || a_.samples.size() < 2) throw std::invalid_argument("RegionModel curves need samples");
}

double RegionModel::yellow_lower(double reep) const {
  return std::min(pure_np_of_reep(reep), dephased_np_of_reep(reep));
}

double RegionModel::yellow_upper(double reep) const { return std::max(interpolate(z_, reep), yellow_lower(reep)); }

double RegionModel::cyan_upper_bound(double reep) const { return std::max(bell_np_of_reep(reep), yellow_upper(reep)); }

double RegionModel::cyan_lower_bound(double reep) const { return std::min(interpolate(a_, reep), yellow_lower(reep)); }

RegionVerdict RegionModel::classify(double reep, double np) const {
  RegionVerdict v;
  if (!(reep >= -kBand && reep <= 1.0 + kBand && np >= -kBand && np <= 1.0 + kBand)) return v;
  reep = std::clamp(reep, 0.0, 1.0);
  const double lo = yellow_lower(reep), hi = yellow_upper(reep);
  if (np >= lo - kBand && np <= hi + kBand) {
    v.region = Region::yellow;
    v.margin_lower = std::max(0.0, np - lo);
    v.margin_upper = std::max(0.0, hi - np);
    return v;
  }
  if (np > hi) {
    const double top = cyan_upper_bound(reep);
    if (np <= top + kBand) {
      v.region = Region::cyan_upper;
      v.margin_lower = np - hi;
      v.margin_upper = std::max(0.0, top - np);
    } else {
      v.margin_lower = v.margin_upper = np - top;
    }
    return v;
  }
  const double bottom = cyan_lower_bound(reep);
  if (np >= bottom - kBand) {
    v.region = Region::cyan_lower;
    v.margin_lower = std::max(0.0, np - bottom);
    v.margin_upper = lo - np;
  } else {
    v.margin_lower = v.margin_upper = bottom - np;
  }
  return v;
}

void write_curve_csv(std::ostream& os, const BoundaryCurve& c, bool header) {
  if (header) os << "family,plane,param_p,param_q_or_x,param_kappa,abscissa,ordinate\n";
  const auto old_flags = os.flags();
  const auto old_prec = os.precision();
  os << std::setprecision(9) << std::defaultfloat;
  // + 0.0 turns -0 into 0
  for (const auto& s : c.samples)
    os << to_string(c.family) << ',' << to_string(c.plane) << ',' << s.param_p + 0.0 << ',' << s.param_q_or_x + 0.0
       << ',' << s.param_kappa + 0.0 << ',' << s.abscissa + 0.0 << ',' << s.ordinate + 0.0 << '\n';
  os.flags(old_flags);
  os.precision(old_prec);
}

}  // namespace eplab
