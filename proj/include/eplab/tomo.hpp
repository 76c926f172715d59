#pragma once

#include <cstdint>
#include <string>

#include "eplab/boundaries.hpp"
#include "eplab/dataset.hpp"
#include "eplab/measures.hpp"

namespace eplab {

/// Thrown for datasets the reconstruction cannot use (missing bunched
/// setting, too few or non-informationally-complete settings, empty scans).
class TomographyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unnormalised block estimates of the output matrix, all in the same units
/// (detected rate with the loss corrections applied). Index order of the
/// single-excitation block: |01>, |10>.
struct BlockEstimates {
  double m_a = 0.0;
  Eigen::Matrix2cd m_b = Eigen::Matrix2cd::Zero();
  double m_c = 0.0;  // |<00|rho|01>|
  double m_d = 0.0;  // |<00|rho|10>|
};

/// 4 x (bunched counts / time), summed over all bunched records.
double estimate_m_a(const CountDataset& d);

struct MlOptions {
  double tol = 1e-10;  // log-likelihood change
  int max_iterations = 10000;
};

/// Maximum-likelihood single-excitation block from the product settings,
/// scaled by the factor 2 loss correction. HH and VV are ignored. Needs at
/// least 16 settings with positive time whose projectors span the 2x2
/// Hermitian matrices.
Eigen::Matrix2cd estimate_m_b(const CountDataset& d, const MlOptions& opts = {});

/// Fringe visibility: least-squares fit of a + b cos phi + c sin phi and
/// v = sqrt(b^2 + c^2) / a for 8 or more phase steps, (max - min)/(max + min)
/// otherwise. Clamped to [0, 1].
double fit_visibility(const VisibilityScan& scan);

struct CoherenceEstimate {
  double visibility = 0.0;
  double magnitude = 0.0;
};

/// |rho_1j| = v (rho_11 + rho_jj) / 2.
CoherenceEstimate coherence_from_visibility(const VisibilityScan& scan, double rho_11, double rho_jj);

BlockEstimates estimate_blocks(const CountDataset& d, const MlOptions& opts = {});

struct MeasureUncertainties {
  double negativity = 0.0;
  double concurrence = 0.0;
  double ree = 0.0;
};

struct ReconstructionResult {
  TwoQubitState rho;
  /// Negativity, concurrence and REE of the reconstructed output state.
  PotentialTriple potentials;
  MeasureUncertainties uncertainties;  // zero unless bootstrapped
  double purity_criterion = 0.0;
  bool class_i_flag = false;
  /// Set when a diagonal needed by the purity criterion is below 1e-3.
  bool criterion_warning = false;
};

/// Purity criterion sqrt(|rho_12|/sqrt(rho_11 rho_22)) sqrt(|rho_13|/sqrt(rho_11 rho_33))
/// (1-based indices of the vacuum, |01> and |10> entries). Returns 0 when one
/// of the diagonals is zero; warning is set whenever one is below 1e-3.
double purity_criterion(const Mat4& rho, bool* warning = nullptr);

/// Nearest unit-trace PSD matrix in Frobenius norm with the |11> row and
/// column held at zero.
Mat4 project_physical(const Mat4& m);

/// Assembles the block matrix with non-negative real coherences, normalises
/// by its trace and projects to a physical state.
ReconstructionResult assemble_and_project(const BlockEstimates& b, double ree_tol = 1e-8);

ReconstructionResult reconstruct(const CountDataset& d, double ree_tol = 1e-8);

/// Poisson resampling of every count (settings and fringes) with full
/// reconstruction per resample. Resample i draws from seed_seq{seed, i}, so
/// the output does not depend on the thread count.
MeasureUncertainties bootstrap_uncertainties(const CountDataset& d, int n_resamples, std::uint64_t seed,
                                             double ree_tol = 1e-8);

/// Sums counts and acquisition times setting by setting and fringe counts
/// step by step. Throws std::invalid_argument on mismatched settings or an
/// empty dataset.
CountDataset incoherent_merge(const CountDataset& plus, const CountDataset& minus);

/// Local diagonal phase rotation making <00|rho|01> and <00|rho|10> real and
/// non-negative (falling back to <01|rho|10> when one of them vanishes). The
/// reconstruction only sees magnitudes, so compare against truth in this gauge.
Mat4 remove_local_phases(const Mat4& rho);

/// Region of (REE, N) with a tolerance for statistical error: a point outside
/// the yellow region by no more than band is reported yellow. Unphysical
/// points are never moved.
RegionVerdict classify_with_band(double reep, double np, double band);

/// Two bootstrap standard deviations, sqrt(sd_N^2 + sd_REE^2); 0 when no
/// uncertainties were computed.
double classification_band(const MeasureUncertainties& u);

/// JSON report: matrix, potentials, uncertainties, criterion, the point
/// verdict of (REEP, NP) = (REE, N) and the verdict within the bootstrap band.
std::string reconstruction_to_json(const ReconstructionResult& r);

}  // namespace eplab
