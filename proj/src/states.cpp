#include "eplab/states.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace eplab {

namespace {

void require_unit_interval(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0))
    throw std::domain_error(std::string(name) + " must lie in [0, 1], got " + std::to_string(v));
}

}  // namespace

double VopsState::x_max() const { return std::sqrt(std::max(0.0, p * (1.0 - p))); }

Mat2 VopsState::matrix() const {
  Mat2 m;
  m << 1.0 - p, x, std::conj(x), p;
  return m;
}

VopsState make_vops(double p, double dephasing, double phase) {
  require_unit_interval(p, "p");
  require_unit_interval(dephasing, "D");
  VopsState s;
  s.p = p;
  s.dephasing = dephasing;
  s.phase = phase;
  s.x = std::polar(dephasing * s.x_max(), phase);
  if (p == 0.0 || p == 1.0) s.x = 0.0;
  return s;
}

VopsState make_vops_with_coherence(double p, cplx x) {
  require_unit_interval(p, "p");
  VopsState s;
  s.p = p;
  const double xm = s.x_max();
  if (std::abs(x) > xm + 1e-12) throw std::domain_error("|x| exceeds sqrt(p(1-p))");
  s.x = x;
  s.phase = std::arg(x);
  s.dephasing = xm > 0.0 ? std::min(1.0, std::abs(x) / xm) : 0.0;
  if (p == 0.0 || p == 1.0) s.x = 0.0;
  return s;
}

BsSetting::BsSetting(double r, double w) : r_(r), t_(std::sqrt(std::max(0.0, 1.0 - r * r))), w_(w) {
  require_unit_interval(r, "r");
  require_unit_interval(w, "w");
}

BsSetting BsSetting::balanced(double w) { return BsSetting(std::sqrt(0.5), w); }

BsSetting BsSetting::from_reflectivity(double reflectivity, double w) {
  require_unit_interval(reflectivity, "reflectivity");
  return BsSetting(std::sqrt(reflectivity), w);
}

TwoQubitState::TwoQubitState() : m_(Mat4::Zero()) { m_(0, 0) = 1.0; }

TwoQubitState TwoQubitState::from_matrix(const Mat4& m, double tol) {
  validate_density_matrix(m, tol);
  return TwoQubitState(hermitian_part(m));
}

TwoQubitState TwoQubitState::pure(const Vec4& psi) {
  const double n = psi.norm();
  if (n == 0.0) throw std::domain_error("zero state vector");
  return TwoQubitState(hermitian_part(projector(Vec4(psi / n))));
}

bool TwoQubitState::single_excitation() const {
  for (int i = 0; i < 4; ++i)
    if (std::abs(m_(3, i)) > 1e-12 || std::abs(m_(i, 3)) > 1e-12) return false;
  return true;
}

TwoQubitState bs_transform(const VopsState& s, const BsSetting& b) {
  const double p = s.p;
  const cplx x = s.x;
  const double r = b.r(), t = b.t(), w = b.w();
  Mat4 m = Mat4::Zero();
  m(0, 0) = 1.0 - p;
  m(0, 1) = -w * r * x;
  m(0, 2) = w * t * x;
  m(1, 0) = -w * r * std::conj(x);
  m(1, 1) = p * r * r;
  m(1, 2) = -p * w * w * r * t;
  m(2, 0) = w * t * std::conj(x);
  m(2, 1) = -p * w * w * r * t;
  m(2, 2) = p * t * t;
  return TwoQubitState::from_matrix(m);
}

TwoQubitState psi_out(double p) {
  require_unit_interval(p, "p");
  Vec4 v = Vec4::Zero();
  v(basis_index(0, 0)) = std::sqrt(1.0 - p);
  v(basis_index(1, 0)) = std::sqrt(0.5 * p);
  v(basis_index(0, 1)) = -std::sqrt(0.5 * p);
  return TwoQubitState::pure(v);
}

TwoQubitState psi_q(double q) {
  require_unit_interval(q, "q");
  Vec4 v = Vec4::Zero();
  v(basis_index(0, 1)) = std::sqrt(q);
  v(basis_index(1, 0)) = -std::sqrt(1.0 - q);
  return TwoQubitState::pure(v);
}

double q_of_p(double p) {
  require_unit_interval(p, "p");
  return 0.5 * (1.0 - std::sqrt(1.0 - p * p));
}

Vec4 bell_psi_minus() {
  Vec4 v = Vec4::Zero();
  v(basis_index(1, 0)) = std::sqrt(0.5);
  v(basis_index(0, 1)) = -std::sqrt(0.5);
  return v;
}

Vec4 bell_psi_plus() {
  Vec4 v = Vec4::Zero();
  v(basis_index(1, 0)) = std::sqrt(0.5);
  v(basis_index(0, 1)) = std::sqrt(0.5);
  return v;
}

TwoQubitState horodecki_state(double p) { return generalized_horodecki(p, 0.5); }

TwoQubitState generalized_horodecki(double p, double q) {
  require_unit_interval(p, "p");
  require_unit_interval(q, "q");
  Mat4 m = p * psi_q(q).matrix();
  m(0, 0) += 1.0 - p;
  return TwoQubitState::from_matrix(m);
}

TwoQubitState rho_pdc(double q, double kappa1, double kappa2) {
  require_unit_interval(q, "q");
  require_unit_interval(kappa1, "kappa1");
  require_unit_interval(kappa2, "kappa2");
  const double y = std::sqrt(q * (1.0 - q) * (1.0 - kappa1) * (1.0 - kappa2));
  const Vec4 b1 = bell_psi_minus();
  const Vec4 b2 = bell_psi_plus();
  const Mat4 m = (0.5 - y) * b1 * b1.adjoint() + (0.5 + y) * b2 * b2.adjoint() +
                 (q - 0.5) * (b1 * b2.adjoint() + b2 * b1.adjoint());
  return TwoQubitState::from_matrix(m);
}

TwoQubitState rho_b(double kappa1, double kappa2) { return rho_pdc(0.5, kappa1, kappa2); }

}  // namespace eplab
