#include "eplab/expsim.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "eplab/parallel.hpp"
#include "json_util.hpp"

namespace eplab {

namespace {

double deg_to_rad(double d) { return d * std::numbers::pi / 180.0; }

void require(bool ok, const std::string& what) {
  if (!ok) throw std::domain_error(what);
}

Mat4 single_excitation_projector() {
  Mat4 p = Mat4::Zero();
  p(basis_index(0, 1), basis_index(0, 1)) = 1.0;
  p(basis_index(1, 0), basis_index(1, 0)) = 1.0;
  return p;
}

}  // namespace

TwoQubitState setup_output(const VopsState& s, double r, double w) {
  require(r >= -1.0 && r <= 1.0, "reflection amplitude must lie in [-1, 1]");
  const TwoQubitState out = bs_transform(s, BsSetting(std::abs(r), w));
  if (r >= 0.0) return out;
  const Mat4 z = kron(Mat2::Identity(), pauli_z());
  return TwoQubitState::from_matrix(hermitian_part(z * out.matrix() * z));
}

SyntheticTruth make_truth(const TwoQubitState& rho, double ree_tol) {
  const MeasureTriple m = measures(rho, ree_tol);
  return {rho, {m.negativity, m.concurrence, m.ree}};
}

SyntheticTruth forward_state(const SetupConfig& c) {
  require(c.counts_per_setting >= 0.0, "counts_per_setting must be non-negative");
  const VopsState s = make_vops(c.p, c.dephasing, c.phi);
  return make_truth(setup_output(s, std::sin(2.0 * deg_to_rad(c.theta_h)), c.w));
}

std::vector<SyntheticTruth> forward_states(const std::vector<SetupConfig>& configs) {
  std::vector<SyntheticTruth> out(configs.size());
  parallel_for(configs.size(), [&](std::size_t i) { out[i] = forward_state(configs[i]); });
  return out;
}

std::vector<SettingSpec> default_settings(double time_s) {
  std::vector<SettingSpec> out;
  out.push_back({"bunched", true, Projector::H, Projector::H, time_s});
  const Projector all[] = {Projector::H, Projector::V, Projector::D, Projector::A, Projector::R, Projector::L};
  for (const Projector a : all)
    for (const Projector b : all) out.push_back({to_string(a) + to_string(b), false, a, b, time_s});
  return out;
}

RatePlan expected_rates(const SyntheticTruth& t, const std::vector<SettingSpec>& settings, double counts_per_setting,
                        double interferometer_phase, double fringe_time_s) {
  require(counts_per_setting >= 0.0, "counts_per_setting must be non-negative");
  const Mat4& rho = t.rho_true.matrix();
  const Mat4 p = single_excitation_projector();
  const Mat4 block = p * rho * p;
  RatePlan plan;
  plan.settings = settings;
  for (const auto& s : settings) {
    require(s.time_s >= 0.0, "acquisition time must be non-negative");
    double prob;
    if (s.bunched) {
      prob = 0.25 * rho(0, 0).real();
    } else {
      const Vec4 v = kron(projector_vector(s.proj_a), projector_vector(s.proj_b));
      prob = 0.5 * (v.adjoint() * block * v)(0, 0).real();
    }
    plan.expected_counts.push_back(std::max(0.0, counts_per_setting * s.time_s * prob));
  }
  require(fringe_time_s >= 0.0, "acquisition time must be non-negative");
  const double n = 0.25 * counts_per_setting * fringe_time_s;
  for (const CoherenceTarget target : {CoherenceTarget::C, CoherenceTarget::D}) {
    const int j = target == CoherenceTarget::C ? basis_index(0, 1) : basis_index(1, 0);
    const cplx c = rho(0, j);
    FringePlan f{target, {}};
    for (int k = 0; k < kFringeSteps; ++k) {
      const double ph = 2.0 * std::numbers::pi * k / kFringeSteps + std::arg(c) + interferometer_phase;
      const double v = rho(0, 0).real() + rho(j, j).real() + 2.0 * std::abs(c) * std::cos(ph);
      f.expected_counts.push_back(std::max(0.0, n * v));
    }
    plan.fringes.push_back(std::move(f));
  }
  return plan;
}

CountDataset sample_dataset(const RatePlan& plan, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto draw = [&](double mean) -> std::int64_t {
    if (!(mean > 0.0)) return 0;
    std::poisson_distribution<std::int64_t> pd(mean);
    return pd(rng);
  };
  CountDataset d;
  for (std::size_t i = 0; i < plan.settings.size(); ++i) {
    const auto& s = plan.settings[i];
    d.records.push_back({s.id, s.bunched, s.proj_a, s.proj_b, draw(plan.expected_counts[i]), s.time_s});
  }
  for (const auto& f : plan.fringes) {
    VisibilityScan scan{f.target, {}};
    for (std::size_t k = 0; k < f.expected_counts.size(); ++k)
      scan.pattern.push_back({static_cast<int>(k), draw(f.expected_counts[k])});
    d.visibility_scans.push_back(std::move(scan));
  }
  return d;
}

CountDataset simulate(const SetupConfig& c, const SyntheticTruth& t, double time_s) {
  return sample_dataset(
      expected_rates(t, default_settings(time_s), c.counts_per_setting, c.interferometer_phase, time_s), c.seed);
}

ClassIIIPair class_iii_pair(const SetupConfig& c) {
  require(c.w >= 0.0 && c.w <= 1.0, "w must lie in [0, 1]");
  const VopsState s = make_vops(c.p, c.dephasing, c.phi);
  const double r = std::abs(std::sin(2.0 * deg_to_rad(c.theta_h)));
  const double a = 0.5 * (1.0 + c.w * c.w);
  const TwoQubitState plus = setup_output(s, r, 1.0);
  const TwoQubitState minus = setup_output(s, -r, 1.0);
  ClassIIIPair out;
  out.weight_plus = a;
  out.truth = make_truth(TwoQubitState::from_matrix(hermitian_part(a * plus.matrix() + (1.0 - a) * minus.matrix())));
  auto run = [&](const TwoQubitState& rho, double time, std::uint64_t seed) {
    const RatePlan plan =
        expected_rates(SyntheticTruth{rho, {}}, default_settings(time), c.counts_per_setting, c.interferometer_phase, time);
    return sample_dataset(plan, seed);
  };
  // Independent streams for the two runs.
  std::seed_seq seq{c.seed, std::uint64_t{0x3}};
  std::uint64_t seeds[2];
  std::uint32_t raw[4];
  seq.generate(raw, raw + 4);
  seeds[0] = (std::uint64_t{raw[0]} << 32) | raw[1];
  seeds[1] = (std::uint64_t{raw[2]} << 32) | raw[3];
  out.plus = run(plus, a, seeds[0]);
  out.minus = run(minus, 1.0 - a, seeds[1]);
  return out;
}

std::string truth_to_json(const SyntheticTruth& t) {
  nlohmann::json j{{"rho_true", json_util::state(t.rho_true)}, {"potentials_true", json_util::potentials(t.potentials_true)}};
  return j.dump(2);
}

}  // namespace eplab
