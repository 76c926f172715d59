#include "eplab/measures.hpp"

#include <algorithm>
#include <cmath>

namespace eplab {

double negativity(const TwoQubitState& rho) {
  const double lmin = eigvalsh(partial_transpose(rho.matrix()))(0);
  return std::clamp(-2.0 * lmin, 0.0, 1.0);
}

double concurrence(const TwoQubitState& rho) {
  // lambda_i are the singular values of sqrt(rho) (Y x Y) sqrt(rho)*. The
  // square root drops eigenvalues at round-off level so rank-deficient inputs
  // do not pick up sqrt(1e-17)-sized spurious terms.
  const Mat4 yy = kron(pauli_y(), pauli_y());
  const HermitianSpectrum es = eigh(rho.matrix());
  const double cut = 1e-14 * std::max(1.0, es.values(3));
  const Mat4 s = es.apply([cut](double x) { return x > cut ? std::sqrt(x) : 0.0; });
  const Eigen::Vector4d lam = Eigen::JacobiSVD<Mat4>(s * yy * s.conjugate()).singularValues();
  // descending order from the SVD
  const double c = lam(0) - lam(1) - lam(2) - lam(3);
  return std::clamp(c, 0.0, 1.0);
}

double ree_closed_pure(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("p must lie in [0, 1]");
  return binary_entropy(0.5 * (1.0 + std::sqrt(1.0 - p * p)));
}

double ree_closed_horodecki(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("p must lie in [0, 1]");
  const double a = p - 2.0 == 0.0 ? 0.0 : (p - 2.0) * std::log2(1.0 - 0.5 * p);
  const double b = p < 1.0 ? (1.0 - p) * std::log2(1.0 - p) : 0.0;
  return std::max(0.0, a + b);
}

double ree_closed_bell_diagonal(double lambda_max) {
  if (!(lambda_max >= 0.0 && lambda_max <= 1.0)) throw std::domain_error("Bell weight must lie in [0, 1]");
  return lambda_max <= 0.5 ? 0.0 : 1.0 - binary_entropy(lambda_max);
}

namespace {

bool is_pure(const Mat4& m, double tol) { return std::abs((m * m).trace().real() - 1.0) <= tol; }

// Only the 2x2 block on |01>,|10> and the |00> population are populated,
// and the block is p/2 [[1, c], [c*, 1]] with |c| = 1.
bool is_horodecki(const Mat4& m, double tol, double* p) {
  for (int i = 0; i < 4; ++i) {
    if (std::abs(m(3, i)) > tol) return false;
    if (i != 0 && std::abs(m(0, i)) > tol) return false;
  }
  const double a = m(1, 1).real(), b = m(2, 2).real();
  if (std::abs(a - b) > tol) return false;
  if (std::abs(std::abs(m(1, 2)) - a) > tol) return false;
  *p = a + b;
  return true;
}

// Bell-diagonal up to local phases: rho00 = rho33, rho11 = rho22, coherences
// only between |00>,|11> and between |01>,|10>.
bool is_bell_diagonal(const Mat4& m, double tol, double* lambda_max) {
  if (std::abs(m(0, 0) - m(3, 3)) > tol || std::abs(m(1, 1) - m(2, 2)) > tol) return false;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      if (i == j || i + j == 3) continue;
      if (std::abs(m(i, j)) > tol) return false;
    }
  *lambda_max = std::max(m(0, 0).real() + std::abs(m(0, 3)), m(1, 1).real() + std::abs(m(1, 2)));
  return true;
}

}  // namespace

ClosedFormFamily detect_closed_form(const TwoQubitState& rho, double tol) {
  const Mat4& m = rho.matrix();
  double dummy = 0.0;
  if (is_pure(m, tol)) return ClosedFormFamily::pure;
  if (is_horodecki(m, tol, &dummy)) return ClosedFormFamily::horodecki;
  if (is_bell_diagonal(m, tol, &dummy)) return ClosedFormFamily::bell_diagonal;
  return ClosedFormFamily::none;
}

std::optional<double> ree_closed_form(const TwoQubitState& rho, double tol) {
  const Mat4& m = rho.matrix();
  double v = 0.0;
  if (is_pure(m, tol)) {
    // entropy of entanglement of the pure state
    Mat2 red = Mat2::Zero();
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int k = 0; k < 2; ++k) red(a, b) += m(basis_index(a, k), basis_index(b, k));
    const Eigen::Vector2d ev = eigvalsh(red);
    return binary_entropy(std::clamp(ev(1), 0.0, 1.0));
  }
  if (is_horodecki(m, tol, &v)) return ree_closed_horodecki(std::clamp(v, 0.0, 1.0));
  if (is_bell_diagonal(m, tol, &v)) return ree_closed_bell_diagonal(std::clamp(v, 0.0, 1.0));
  return std::nullopt;
}

double relative_entropy_of_entanglement(const TwoQubitState& rho, double tol) {
  if (const auto c = ree_closed_form(rho)) return *c;
  ReeOptions opts;
  opts.tol = tol;
  return ree_numeric(rho, opts).ree_value;
}

MeasureTriple measures(const TwoQubitState& rho, double tol) {
  return {negativity(rho), concurrence(rho), relative_entropy_of_entanglement(rho, tol)};
}

PotentialTriple potentials(const VopsState& s, const BsSetting& b, double tol) {
  const MeasureTriple m = measures(bs_transform(s, b), tol);
  return {m.negativity, m.concurrence, std::min(1.0, m.ree)};
}

}  // namespace eplab
