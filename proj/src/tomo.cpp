#include "eplab/tomo.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>

#include "eplab/parallel.hpp"
#include "json_util.hpp"

namespace eplab {

namespace {

using Mat2c = Eigen::Matrix2cd;

constexpr int kMinSettings = 16;
constexpr int kFitMinSteps = 8;
constexpr double kReeGapLimit = 1e-6;
// Below this the coherence ratios are dominated by counting noise.
constexpr double kCriterionWarnDiagonal = 1e-3;

// Single-excitation part of a product projector, as the 2-vector
// (<01|ab>, <10|ab>).
Vec2 block_vector(Projector pa, Projector pb) {
  const Vec2 a = projector_vector(pa), b = projector_vector(pb);
  Vec2 w;
  w << a(0) * b(1), a(1) * b(0);
  return w;
}

Mat2c psd_power(const Mat2c& m, double power) {
  Eigen::SelfAdjointEigenSolver<Mat2c> es(m);
  Eigen::Vector2cd d;
  for (int i = 0; i < 2; ++i) d(i) = std::pow(std::max(es.eigenvalues()(i), 0.0), power);
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
}

const VisibilityScan& find_scan(const CountDataset& d, CoherenceTarget t) {
  for (const auto& s : d.visibility_scans)
    if (s.target == t) return s;
  throw TomographyError("missing visibility scan for target " + to_string(t));
}

double robust_ree(const TwoQubitState& rho, double tol) {
  try {
    return relative_entropy_of_entanglement(rho, tol);
  } catch (const ReeConvergenceError& e) {
    if (e.gap() <= kReeGapLimit) return e.best_value();
    throw;
  }
}

// Euclidean projection onto the probability simplex.
Eigen::VectorXd project_simplex(const Eigen::VectorXd& v) {
  std::vector<double> u(v.data(), v.data() + v.size());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cum = 0.0, theta = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    cum += u[k];
    const double t = (cum - 1.0) / static_cast<double>(k + 1);
    if (u[k] - t > 0.0) theta = t;
  }
  return (v.array() - theta).max(0.0).matrix();
}

double stddev(const std::vector<double>& x) {
  if (x.size() < 2) return 0.0;
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

}  // namespace

double estimate_m_a(const CountDataset& d) {
  double counts = 0.0, time = 0.0;
  bool found = false;
  for (const auto& r : d.records) {
    if (!r.bunched) continue;
    found = true;
    counts += static_cast<double>(r.counts);
    time += r.time_s;
  }
  if (!found) throw TomographyError("dataset has no bunched setting");
  if (!(time > 0.0)) throw TomographyError("bunched setting has zero acquisition time");
  return 4.0 * counts / time;
}

Mat2c estimate_m_b(const CountDataset& d, const MlOptions& opts) {
  std::vector<Mat2c> pis;
  std::vector<double> f;
  Eigen::MatrixXd span(0, 4);
  for (const auto& r : d.records) {
    if (r.bunched || !(r.time_s > 0.0)) continue;
    const Vec2 w = block_vector(r.proj_a, r.proj_b);
    // HH and VV never see the single-excitation block.
    if (w.squaredNorm() < 1e-12) continue;
    pis.push_back(r.time_s * w * w.adjoint());
    f.push_back(static_cast<double>(r.counts));
    span.conservativeResize(span.rows() + 1, 4);
    span.row(span.rows() - 1) << pis.back()(0, 0).real(), pis.back()(1, 1).real(), pis.back()(0, 1).real(),
        pis.back()(0, 1).imag();
  }
  if (static_cast<int>(pis.size()) < kMinSettings)
    throw TomographyError("need at least " + std::to_string(kMinSettings) + " product settings, got " +
                          std::to_string(pis.size()));
  Eigen::FullPivLU<Eigen::MatrixXd> lu(span);
  lu.setThreshold(1e-9);
  if (lu.rank() < 4) throw TomographyError("product settings are not informationally complete on the block");

  double total = 0.0;
  for (double v : f) total += v;
  if (total == 0.0) return Mat2c::Zero();

  // Change of variables that makes the POVM sum to the identity.
  Mat2c g = Mat2c::Zero();
  for (const auto& p : pis) g += p;
  const Mat2c g_inv_half = psd_power(g, -0.5);
  for (auto& p : pis) p = g_inv_half * p * g_inv_half;

  Mat2c sigma = 0.5 * Mat2c::Identity();
  double log_l = -std::numeric_limits<double>::infinity();
  for (int it = 0; it < opts.max_iterations; ++it) {
    Mat2c r = Mat2c::Zero();
    double next = 0.0;
    for (std::size_t i = 0; i < pis.size(); ++i) {
      if (f[i] == 0.0) continue;
      const double p = std::max((pis[i] * sigma).trace().real(), 1e-300);
      r += (f[i] / p) * pis[i];
      next += f[i] * std::log(p);
    }
    sigma = r * sigma * r;
    sigma = 0.5 * (sigma + sigma.adjoint()).eval();
    const double tr = sigma.trace().real();
    if (!std::isfinite(tr) || !(tr > 0.0)) throw TomographyError("maximum-likelihood iteration diverged");
    sigma /= tr;
    if (std::abs(next - log_l) < opts.tol) break;
    log_l = next;
  }
  const Mat2c x = total * g_inv_half * sigma * g_inv_half;
  return 2.0 * x;
}

double fit_visibility(const VisibilityScan& scan) {
  const auto& pts = scan.pattern;
  if (pts.empty()) throw TomographyError("empty visibility scan");
  int n = 0;
  for (const auto& p : pts) {
    if (p.phase_step < 0) throw TomographyError("negative phase step");
    n = std::max(n, p.phase_step + 1);
  }
  double v;
  if (static_cast<int>(pts.size()) >= kFitMinSteps) {
    Eigen::MatrixXd a(pts.size(), 3);
    Eigen::VectorXd y(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double phi = 2.0 * std::numbers::pi * pts[i].phase_step / n;
      a.row(i) << 1.0, std::cos(phi), std::sin(phi);
      y(i) = static_cast<double>(pts[i].counts);
    }
    const Eigen::Vector3d c = a.colPivHouseholderQr().solve(y);
    if (!(c(0) > 0.0)) throw TomographyError("visibility scan has no counts");
    v = std::hypot(c(1), c(2)) / c(0);
  } else {
    const auto [lo, hi] = std::minmax_element(pts.begin(), pts.end(),
                                              [](const FringePoint& a, const FringePoint& b) { return a.counts < b.counts; });
    const double sum = static_cast<double>(hi->counts + lo->counts);
    if (sum == 0.0) throw TomographyError("visibility scan has no counts");
    v = static_cast<double>(hi->counts - lo->counts) / sum;
  }
  return std::clamp(v, 0.0, 1.0);
}

CoherenceEstimate coherence_from_visibility(const VisibilityScan& scan, double rho_11, double rho_jj) {
  const double v = fit_visibility(scan);
  return {v, 0.5 * v * (rho_11 + rho_jj)};
}

BlockEstimates estimate_blocks(const CountDataset& d, const MlOptions& opts) {
  BlockEstimates b;
  b.m_a = estimate_m_a(d);
  b.m_b = estimate_m_b(d, opts);
  b.m_c = coherence_from_visibility(find_scan(d, CoherenceTarget::C), b.m_a, b.m_b(0, 0).real()).magnitude;
  b.m_d = coherence_from_visibility(find_scan(d, CoherenceTarget::D), b.m_a, b.m_b(1, 1).real()).magnitude;
  return b;
}

double purity_criterion(const Mat4& rho, bool* warning) {
  const double r11 = rho(0, 0).real(), r22 = rho(1, 1).real(), r33 = rho(2, 2).real();
  const double smallest = std::min({r11, r22, r33});
  if (warning) *warning = !(smallest >= kCriterionWarnDiagonal);
  if (!(smallest > 1e-14)) return 0.0;
  const double a = std::abs(rho(0, 1)) / std::sqrt(r11 * r22);
  const double b = std::abs(rho(0, 2)) / std::sqrt(r11 * r33);
  return std::sqrt(a) * std::sqrt(b);
}

Mat4 project_physical(const Mat4& m) {
  const Eigen::Matrix3cd block = m.topLeftCorner<3, 3>();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> es(0.5 * (block + block.adjoint()));
  const Eigen::VectorXd lam = project_simplex(es.eigenvalues());
  const Eigen::Matrix3cd p = es.eigenvectors() * lam.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
  Mat4 out = Mat4::Zero();
  out.topLeftCorner<3, 3>() = 0.5 * (p + p.adjoint());
  return out;
}

ReconstructionResult assemble_and_project(const BlockEstimates& b, double ree_tol) {
  Mat4 m = Mat4::Zero();
  m(0, 0) = b.m_a;
  for (int i = 0; i < 2; ++i) m(1 + i, 1 + i) = b.m_b(i, i).real();
  m(1, 2) = m(2, 1) = std::abs(b.m_b(0, 1));
  m(0, 1) = m(1, 0) = std::abs(b.m_c);
  m(0, 2) = m(2, 0) = std::abs(b.m_d);
  const double tr = m.trace().real();
  if (!(tr > 0.0)) throw TomographyError("reconstructed matrix has zero trace");
  m /= tr;

  ReconstructionResult out{TwoQubitState::from_matrix(project_physical(m)), {}, {}, 0.0, false, false};
  out.potentials = {negativity(out.rho), concurrence(out.rho), robust_ree(out.rho, ree_tol)};
  out.purity_criterion = purity_criterion(out.rho.matrix(), &out.criterion_warning);
  out.class_i_flag = out.purity_criterion > 0.5;
  return out;
}

ReconstructionResult reconstruct(const CountDataset& d, double ree_tol) {
  return assemble_and_project(estimate_blocks(d), ree_tol);
}

MeasureUncertainties bootstrap_uncertainties(const CountDataset& d, int n_resamples, std::uint64_t seed,
                                             double ree_tol) {
  if (n_resamples < 100) throw std::invalid_argument("bootstrap needs at least 100 resamples");
  const std::size_t n = static_cast<std::size_t>(n_resamples);
  std::vector<double> neg(n), con(n), ree(n);
  parallel_for(n, [&](std::size_t i) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(i)};
    std::uint32_t raw[2];
    seq.generate(raw, raw + 2);
    std::mt19937_64 rng((std::uint64_t{raw[0]} << 32) | raw[1]);
    auto draw = [&](std::int64_t mean) -> std::int64_t {
      if (mean <= 0) return 0;
      std::poisson_distribution<std::int64_t> pd(static_cast<double>(mean));
      return pd(rng);
    };
    CountDataset r = d;
    for (auto& rec : r.records) rec.counts = draw(rec.counts);
    for (auto& scan : r.visibility_scans)
      for (auto& pt : scan.pattern) pt.counts = draw(pt.counts);
    const ReconstructionResult res = reconstruct(r, ree_tol);
    neg[i] = res.potentials.np_value;
    con[i] = res.potentials.cp_value;
    ree[i] = res.potentials.reep_value;
  });
  return {stddev(neg), stddev(con), stddev(ree)};
}

CountDataset incoherent_merge(const CountDataset& plus, const CountDataset& minus) {
  if (plus.records.empty() || minus.records.empty()) throw std::invalid_argument("cannot merge an empty dataset");
  if (plus.records.size() != minus.records.size())
    throw std::invalid_argument("datasets have different numbers of settings");
  CountDataset out = plus;
  for (std::size_t i = 0; i < out.records.size(); ++i) {
    auto& a = out.records[i];
    const auto& b = minus.records[i];
    const bool same = a.setting_id == b.setting_id && a.bunched == b.bunched &&
                      (a.bunched || (a.proj_a == b.proj_a && a.proj_b == b.proj_b));
    if (!same) throw std::invalid_argument("setting mismatch at '" + a.setting_id + "' / '" + b.setting_id + "'");
    a.counts += b.counts;
    a.time_s += b.time_s;
  }
  if (plus.visibility_scans.size() != minus.visibility_scans.size())
    throw std::invalid_argument("datasets have different visibility scans");
  for (auto& scan : out.visibility_scans) {
    const auto it = std::find_if(minus.visibility_scans.begin(), minus.visibility_scans.end(),
                                 [&](const VisibilityScan& s) { return s.target == scan.target; });
    if (it == minus.visibility_scans.end())
      throw std::invalid_argument("visibility scan " + to_string(scan.target) + " missing from second dataset");
    std::map<int, std::int64_t> other;
    for (const auto& pt : it->pattern) other[pt.phase_step] += pt.counts;
    if (other.size() != scan.pattern.size())
      throw std::invalid_argument("visibility scan " + to_string(scan.target) + " has different phase steps");
    for (auto& pt : scan.pattern) {
      const auto o = other.find(pt.phase_step);
      if (o == other.end())
        throw std::invalid_argument("visibility scan " + to_string(scan.target) + " has different phase steps");
      pt.counts += o->second;
    }
  }
  return out;
}

Mat4 remove_local_phases(const Mat4& rho) {
  const double c = std::abs(rho(0, 1)), d = std::abs(rho(0, 2)), e = std::abs(rho(1, 2));
  constexpr double kTiny = 1e-12;
  // Phases on |01> and |10>; the |11> phase is their sum.
  double a = 0.0, b = 0.0;
  if (c > kTiny && d > kTiny) {
    a = std::arg(rho(0, 1));
    b = std::arg(rho(0, 2));
  } else if (c > kTiny) {
    a = std::arg(rho(0, 1));
    if (e > kTiny) b = a + std::arg(rho(1, 2));
  } else if (d > kTiny) {
    b = std::arg(rho(0, 2));
    if (e > kTiny) a = b - std::arg(rho(1, 2));
  } else if (e > kTiny) {
    b = std::arg(rho(1, 2));
  }
  Vec4 ph;
  ph << 1.0, std::polar(1.0, a), std::polar(1.0, b), std::polar(1.0, a + b);
  return ph.asDiagonal() * rho * ph.conjugate().asDiagonal();
}

RegionVerdict classify_with_band(double reep, double np, double band) {
  const RegionModel& m = default_region_model();
  RegionVerdict v = m.classify(reep, np);
  const bool near = (v.region == Region::cyan_upper && v.margin_lower <= band) ||
                    (v.region == Region::cyan_lower && v.margin_upper <= band);
  if (!near) return v;
  const double x = std::clamp(reep, 0.0, 1.0);
  v.region = Region::yellow;
  v.margin_lower = std::max(0.0, np - m.yellow_lower(x));
  v.margin_upper = std::max(0.0, m.yellow_upper(x) - np);
  return v;
}

double classification_band(const MeasureUncertainties& u) { return 2.0 * std::hypot(u.negativity, u.ree); }

std::string reconstruction_to_json(const ReconstructionResult& r) {
  auto verdict_json = [](const RegionVerdict& v) {
    return nlohmann::json{{"region", to_string(v.region)}, {"margin_lower", v.margin_lower}, {"margin_upper", v.margin_upper}};
  };
  const double band = classification_band(r.uncertainties);
  nlohmann::json j;
  j["rho"] = json_util::state(r.rho);
  j["potentials"] = json_util::potentials(r.potentials);
  j["uncertainties"] = {{"np", r.uncertainties.negativity},
                        {"cp", r.uncertainties.concurrence},
                        {"reep", r.uncertainties.ree}};
  j["purity_criterion"] = r.purity_criterion;
  j["class_i_flag"] = r.class_i_flag;
  j["criterion_warning"] = r.criterion_warning;
  j["region_point"] = verdict_json(classify(r.potentials.reep_value, r.potentials.np_value));
  j["region"] = verdict_json(classify_with_band(r.potentials.reep_value, r.potentials.np_value, band));
  j["region"]["band"] = band;
  return j.dump(2);
}

}  // namespace eplab
