#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eplab/dataset.hpp"
#include "eplab/measures.hpp"
#include "eplab/states.hpp"

namespace eplab {

/// Experimental configuration. The wave-plate angle theta_h sets the
/// reflection amplitude r = sin(2 theta_h); negative angles give negative r.
/// theta_v only records the vacuum-side plate (balanced in every class).
struct SetupConfig {
  double p = 1.0;
  double dephasing = 1.0;
  double phi = 0.0;
  double theta_h = 22.5;  // degrees
  double theta_v = 22.5;  // degrees
  double w = 1.0;
  double counts_per_setting = 1e5;
  /// Offset of the unstable coherence interferometer, radians.
  double interferometer_phase = 0.0;
  std::uint64_t seed = 1;
};

struct SyntheticTruth {
  TwoQubitState rho_true;
  PotentialTriple potentials_true;
};

/// Eq.-(2)-type output for a signed reflection amplitude r in [-1, 1].
/// r < 0 equals (I x Z) rho(|r|) (I x Z).
TwoQubitState setup_output(const VopsState& s, double r, double w);

SyntheticTruth make_truth(const TwoQubitState& rho, double ree_tol = 1e-8);

/// Throws std::domain_error for invalid parameters.
SyntheticTruth forward_state(const SetupConfig& c);
std::vector<SyntheticTruth> forward_states(const std::vector<SetupConfig>& configs);

/// One tomography setting (bunched, or a product projector on the
/// single-excitation block) and its acquisition time.
struct SettingSpec {
  std::string id;
  bool bunched = false;
  Projector proj_a = Projector::H;
  Projector proj_b = Projector::H;
  double time_s = 1.0;
};

/// The bunched setting followed by all 36 products of H, V, D, A, R, L.
std::vector<SettingSpec> default_settings(double time_s = 1.0);

struct FringePlan {
  CoherenceTarget target = CoherenceTarget::D;
  std::vector<double> expected_counts;  // per phase step
};

/// Expected counts per setting and per fringe step.
struct RatePlan {
  std::vector<SettingSpec> settings;
  std::vector<double> expected_counts;
  std::vector<FringePlan> fringes;
};

constexpr int kFringeSteps = 16;

/// Born-rule counts with the detection losses the reconstruction corrects
/// for: the bunched setting records 1/4 of N rho_11 t, a product setting
/// 1/2 of N <ab|P rho P|ab> t with P the single-excitation projector.
/// Fringes: N t/4 (rho_11 + rho_jj + 2|rho_1j| cos(2 pi k/16 + arg rho_1j + offset)).
/// Fringe counts scale with fringe_time_s like the settings do with time_s.
RatePlan expected_rates(const SyntheticTruth& t, const std::vector<SettingSpec>& settings, double counts_per_setting,
                        double interferometer_phase = 0.0, double fringe_time_s = 1.0);

/// Independent Poisson draws for every setting and fringe step.
CountDataset sample_dataset(const RatePlan& plan, std::uint64_t seed);

/// expected_rates + sample_dataset with default settings.
CountDataset simulate(const SetupConfig& c, const SyntheticTruth& t, double time_s = 1.0);

/// Class (iii): the same single-photon input measured with theta_h = +22.5
/// and -22.5 degrees, each with a coherent interaction. The acquisition time
/// is split (1 + w^2)/2 : (1 - w^2)/2 so that summing the counts gives the
/// mixture with output coherence w.
struct ClassIIIPair {
  CountDataset plus;
  CountDataset minus;
  SyntheticTruth truth;  // analytic mixture
  double weight_plus = 0.5;
};
ClassIIIPair class_iii_pair(const SetupConfig& c);

/// Sidecar JSON with the true matrix and potentials.
std::string truth_to_json(const SyntheticTruth& t);

}  // namespace eplab
