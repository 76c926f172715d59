#include "eplab/figures.hpp"

#include <iomanip>
#include <ostream>
#include <random>

#include "eplab/expsim.hpp"
#include "eplab/parallel.hpp"

namespace eplab {

BoundaryCurve boundary_curve(Family f, Plane plane, int n) {
  if ((f == Family::Z || f == Family::A) && n == tabulated_samples()) return tabulated_curve(f, plane);
  return make_curve(f, plane, n);
}

std::vector<BoundaryCurve> figure_curves(Plane plane, int samples) {
  std::vector<BoundaryCurve> out;
  for (const Family f : {Family::P, Family::D, Family::Z, Family::A, Family::B})
    out.push_back(boundary_curve(f, plane, samples));
  return out;
}

void write_region_table(std::ostream& os, int n) {
  if (n < 2) throw std::invalid_argument("region table needs at least 2 points");
  const RegionModel& m = default_region_model();
  os << "reep,yellow_lower,yellow_upper,cyan_upper,cyan_lower\n" << std::setprecision(9);
  for (int i = 0; i < n; ++i) {
    const double x = static_cast<double>(i) / (n - 1);
    os << x << ',' << m.yellow_lower(x) << ',' << m.yellow_upper(x) << ',' << m.cyan_upper_bound(x) << ','
       << m.cyan_lower_bound(x) << '\n';
  }
}

void write_points_csv(std::ostream& os, const CharacteristicPoints& p) {
  os << "name,reep,np\n" << std::setprecision(9);
  os << "N0," << sigma_z_optimize(p.n0).reep << ',' << p.n0 << '\n';
  os << "P1," << p.e1 << ',' << p.n1 << '\n';
  os << "P2," << p.e2 << ',' << p.n2 << '\n';
  os << "P3," << p.e3 << ',' << p.n3 << '\n';
}

std::vector<ClassPoint> class_points(const ClassSweep& s) {
  std::vector<ClassPoint> pts;
  std::vector<SetupConfig> cfg;
  for (const char* cls : {"i", "ii"})
    for (double p : s.p_grid) {
      SetupConfig c;
      c.p = p;
      c.dephasing = std::string(cls) == "i" ? 1.0 : 0.0;
      pts.push_back({cls, p, 1.0, {}, {}});
      cfg.push_back(c);
    }
  for (double w : s.w_grid) {
    SetupConfig c;
    c.w = w;
    pts.push_back({"iii", 1.0, w, {}, {}});
    cfg.push_back(c);
  }
  // Seeds per point from the sweep seed, independent of scheduling.
  std::seed_seq seq{static_cast<std::uint32_t>(s.seed), static_cast<std::uint32_t>(s.seed >> 32)};
  std::vector<std::uint32_t> raw(2 * cfg.size());
  seq.generate(raw.begin(), raw.end());
  for (std::size_t i = 0; i < cfg.size(); ++i) {
    cfg[i].counts_per_setting = s.counts_per_setting;
    cfg[i].seed = (std::uint64_t{raw[2 * i]} << 32) | raw[2 * i + 1];
  }
  parallel_for(pts.size(), [&](std::size_t i) {
    const SetupConfig& c = cfg[i];
    CountDataset d;
    if (pts[i].state_class == "iii") {
      const ClassIIIPair pair = class_iii_pair(c);
      d = incoherent_merge(pair.plus, pair.minus);
    } else {
      d = simulate(c, forward_state(c));
    }
    ReconstructionResult r = reconstruct(d);
    if (s.bootstrap > 0) r.uncertainties = bootstrap_uncertainties(d, s.bootstrap, c.seed);
    pts[i].verdict = classify_with_band(r.potentials.reep_value, r.potentials.np_value, classification_band(r.uncertainties));
    pts[i].result = std::move(r);
  });
  return pts;
}

void write_class_points_csv(std::ostream& os, const std::vector<ClassPoint>& pts) {
  os << "class,p,w,np,cp,reep,sd_np,sd_cp,sd_reep,purity_criterion,region\n" << std::setprecision(9);
  for (const auto& pt : pts) {
    const auto& r = pt.result;
    os << pt.state_class << ',' << pt.p << ',' << pt.w << ',' << r.potentials.np_value << ',' << r.potentials.cp_value
       << ',' << r.potentials.reep_value << ',' << r.uncertainties.negativity << ',' << r.uncertainties.concurrence << ','
       << r.uncertainties.ree << ',' << r.purity_criterion << ',' << to_string(pt.verdict.region) << '\n';
  }
}

}  // namespace eplab
