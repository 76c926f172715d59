#pragma once

#include "eplab/linalg.hpp"

namespace eplab {

/// Vacuum/one-photon superposition sigma(p, x) = [[1-p, x], [x*, p]] with
/// x = D * sqrt(p(1-p)) * exp(i phi).
struct VopsState {
  double p = 0.0;
  cplx x{0.0, 0.0};
  double dephasing = 1.0;
  double phase = 0.0;

  double x_max() const;
  Mat2 matrix() const;
};

/// Throws std::domain_error for p or D outside [0, 1]. At p in {0, 1} the
/// coherence is forced to zero.
VopsState make_vops(double p, double dephasing, double phase = 0.0);

/// The VOPS state with an explicit coherence x, |x| <= x_max (+1e-12).
VopsState make_vops_with_coherence(double p, cplx x);

/// Beam-splitter interaction: real amplitudes r, t = sqrt(1 - r^2) and the
/// output coherence w = sqrt(1 - kappa).
class BsSetting {
 public:
  BsSetting() = default;
  BsSetting(double r, double w);

  static BsSetting balanced(double w = 1.0);
  /// Reflectivity R = r^2.
  static BsSetting from_reflectivity(double reflectivity, double w = 1.0);

  double r() const { return r_; }
  double t() const { return t_; }
  double w() const { return w_; }
  double kappa() const { return 1.0 - w_ * w_; }

 private:
  double r_ = 0.70710678118654752;
  double t_ = 0.70710678118654752;
  double w_ = 1.0;
};

/// 4x4 density matrix in the |00>,|01>,|10>,|11> basis.
class TwoQubitState {
 public:
  TwoQubitState();

  /// Validates (Hermitian, unit trace, PSD within tol) and stores the exact
  /// Hermitian part.
  static TwoQubitState from_matrix(const Mat4& m, double tol = 1e-10);
  static TwoQubitState pure(const Vec4& psi);

  const Mat4& matrix() const { return m_; }
  cplx operator()(int i, int j) const { return m_(i, j); }

  bool single_excitation() const;

 private:
  explicit TwoQubitState(const Mat4& m) : m_(m) {}
  Mat4 m_;
};

/// Output of a VOPS state mixed with the vacuum on the beam splitter.
TwoQubitState bs_transform(const VopsState& s, const BsSetting& b);

/// sqrt(1-p)|00> + sqrt(p/2)(|10> - |01>).
TwoQubitState psi_out(double p);

/// sqrt(q)|01> - sqrt(1-q)|10>.
TwoQubitState psi_q(double q);

/// q such that psi_q(q) has the entanglement of psi_out(p).
double q_of_p(double p);

/// p |Psi-><Psi-| + (1-p)|00><00| with |Psi-> = (|10> - |01>)/sqrt(2).
TwoQubitState horodecki_state(double p);

/// p |Psi_q><Psi_q| + (1-p)|00><00|.
TwoQubitState generalized_horodecki(double p, double q);

/// psi_q after phase damping on both qubits, written in the Bell basis
/// beta1 = Psi-, beta2 = Psi+:
///   (1/2 - y) b1 b1' + (1/2 + y) b2 b2' + (q - 1/2)(b1 b2' + b2 b1')
/// with y = sqrt(q(1-q)(1-k1)(1-k2)).
TwoQubitState rho_pdc(double q, double kappa1, double kappa2);

/// rho_pdc at q = 1/2: lambda_- on Psi-, lambda_+ on Psi+.
TwoQubitState rho_b(double kappa1, double kappa2);

Vec4 bell_psi_minus();
Vec4 bell_psi_plus();

}  // namespace eplab
