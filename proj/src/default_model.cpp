#include "eplab/boundaries.hpp"

#include <algorithm>
#include <stdexcept>

#include "eplab/figures.hpp"

namespace eplab {

namespace {

struct Row {
  double abscissa, ordinate, p, q_or_x, kappa, np, cp, reep;
};

#include "region_tables.inc"

BoundaryCurve from_rows(Family f, const Row* rows, std::size_t n) {
  BoundaryCurve c{f, Plane::np_vs_reep, {}};
  c.samples.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Row& r = rows[i];
    c.samples.push_back({r.abscissa, r.ordinate, r.p, r.q_or_x, r.kappa, r.np, r.cp, r.reep});
  }
  return c;
}

}  // namespace

const RegionModel& default_region_model() {
  static const RegionModel model(from_rows(Family::Z, kSigmaZRows, std::size(kSigmaZRows)),
                                 from_rows(Family::A, kRhoARows, std::size(kRhoARows)));
  return model;
}

RegionVerdict classify(double reep, double np) { return default_region_model().classify(reep, np); }

int tabulated_samples() { return EPLAB_REGION_SAMPLES; }

BoundaryCurve tabulated_curve(Family f, Plane plane) {
  if (f != Family::Z && f != Family::A) throw std::invalid_argument("only the Z and A families are tabulated");
  BoundaryCurve rows = f == Family::Z ? from_rows(f, kSigmaZRows, std::size(kSigmaZRows))
                                      : from_rows(f, kRhoARows, std::size(kRhoARows));
  for (auto& s : rows.samples) {
    switch (plane) {
      case Plane::cp_vs_np: s.abscissa = s.np_value; s.ordinate = s.cp_value; break;
      case Plane::cp_vs_reep: s.abscissa = s.reep_value; s.ordinate = s.cp_value; break;
      case Plane::np_vs_reep: s.abscissa = s.reep_value; s.ordinate = s.np_value; break;
    }
  }
  std::stable_sort(rows.samples.begin(), rows.samples.end(),
                   [](const CurveSample& a, const CurveSample& b) { return a.abscissa < b.abscissa; });
  BoundaryCurve out{f, plane, {}};
  for (const auto& s : rows.samples)
    if (out.samples.empty() || s.abscissa > out.samples.back().abscissa) out.samples.push_back(s);
  return out;
}

}  // namespace eplab
