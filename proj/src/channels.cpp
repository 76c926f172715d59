#include "eplab/channels.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace eplab {

namespace {

void require_coefficient(double c) {
  if (!(c >= 0.0 && c <= 1.0))
    throw std::domain_error("damping coefficient must lie in [0, 1], got " + std::to_string(c));
}

}  // namespace

double KrausPair::completeness_defect() const {
  const Mat2 s = e0.adjoint() * e0 + e1.adjoint() * e1 - Mat2::Identity();
  return s.cwiseAbs().maxCoeff();
}

KrausPair amplitude_damping(double gamma) {
  require_coefficient(gamma);
  KrausPair k{ChannelKind::amplitude_damping, gamma, Mat2::Zero(), Mat2::Zero()};
  k.e0(0, 0) = 1.0;
  k.e0(1, 1) = std::sqrt(1.0 - gamma);
  k.e1(0, 1) = std::sqrt(gamma);
  return k;
}

KrausPair phase_damping(double kappa) {
  require_coefficient(kappa);
  KrausPair k{ChannelKind::phase_damping, kappa, Mat2::Zero(), Mat2::Zero()};
  k.e0(0, 0) = 1.0;
  k.e0(1, 1) = std::sqrt(1.0 - kappa);
  k.e1(1, 1) = std::sqrt(kappa);
  return k;
}

TwoQubitState apply_kraus(const TwoQubitState& rho, int qubit_index, const KrausPair& k) {
  if (qubit_index != 1 && qubit_index != 2)
    throw std::invalid_argument("qubit index must be 1 or 2, got " + std::to_string(qubit_index));
  const Mat2 id = Mat2::Identity();
  const Mat4 a0 = qubit_index == 1 ? kron(k.e0, id) : kron(id, k.e0);
  const Mat4 a1 = qubit_index == 1 ? kron(k.e1, id) : kron(id, k.e1);
  const Mat4& m = rho.matrix();
  const Mat4 out = a0 * m * a0.adjoint() + a1 * m * a1.adjoint();
  return TwoQubitState::from_matrix(hermitian_part(out));
}

}  // namespace eplab
