#include "eplab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace eplab {

HermitianSpectrum eigh(const Mat4& m) {
  Eigen::SelfAdjointEigenSolver<Mat4> solver(hermitian_part(m));
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Eigen::Vector4d eigvalsh(const Mat4& m) {
  Eigen::SelfAdjointEigenSolver<Mat4> solver(hermitian_part(m), Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

Eigen::Vector2d eigvalsh(const Mat2& m) {
  const double a = m(0, 0).real();
  const double d = m(1, 1).real();
  const double mean = 0.5 * (a + d);
  const double rad = std::hypot(0.5 * (a - d), std::abs(m(0, 1)));
  return {mean - rad, mean + rad};
}

std::pair<double, Vec2> min_eigenpair(const Mat2& m) {
  const double a = m(0, 0).real();
  const double d = m(1, 1).real();
  const cplx b = 0.5 * (m(0, 1) + std::conj(m(1, 0)));
  const double half = 0.5 * (a - d);
  const double rad = std::hypot(half, std::abs(b));
  const double lo = 0.5 * (a + d) - rad;
  Vec2 v;
  if (rad == 0.0) {
    v << 1.0, 0.0;
    return {lo, v};
  }
  // (m - lo) v = 0; pick the better-conditioned of the two row equations.
  if (half >= 0.0) {
    // row 0: (a - lo) v0 + b v1 = 0, a - lo = half + rad
    v << -b, cplx(half + rad, 0.0);
  } else {
    v << cplx(rad - half, 0.0), -std::conj(b);
  }
  const double n = v.norm();
  if (n == 0.0) {
    v << 0.0, 1.0;
    return {lo, v};
  }
  return {lo, v / n};
}

Mat4 hermitian_part(const Mat4& m) { return 0.5 * (m + m.adjoint()); }

double hermiticity_defect(const Mat4& m) { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

Mat4 partial_transpose(const Mat4& m) {
  Mat4 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          out(basis_index(i, j), basis_index(k, l)) = m(basis_index(i, l), basis_index(k, j));
  return out;
}

Mat4 kron(const Mat2& a, const Mat2& b) {
  Mat4 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) out(basis_index(i, k), basis_index(j, l)) = a(i, j) * b(k, l);
  return out;
}

Vec4 kron(const Vec2& a, const Vec2& b) {
  Vec4 out;
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) out(basis_index(i, k)) = a(i) * b(k);
  return out;
}

Mat4 projector(const Vec4& v) { return v * v.adjoint(); }
Mat2 projector(const Vec2& v) { return v * v.adjoint(); }

Mat2 pauli_x() {
  Mat2 m;
  m << 0, 1, 1, 0;
  return m;
}

Mat2 pauli_y() {
  Mat2 m;
  m << 0, cplx(0, -1), cplx(0, 1), 0;
  return m;
}

Mat2 pauli_z() {
  Mat2 m;
  m << 1, 0, 0, -1;
  return m;
}

double xlog2x(double x) { return x <= 0.0 ? 0.0 : x * std::log2(x); }

double binary_entropy(double x) { return -xlog2x(x) - xlog2x(1.0 - x); }

double von_neumann_entropy(const Mat4& rho) {
  const Eigen::Vector4d w = eigvalsh(rho);
  double s = 0.0;
  for (int i = 0; i < 4; ++i) s -= xlog2x(w(i));
  return s;
}

Mat4 psd_sqrt(const Mat4& m) {
  return eigh(m).apply([](double x) { return std::sqrt(std::max(x, 0.0)); });
}

double fidelity(const Mat4& a, const Mat4& b) {
  const Mat4 sa = psd_sqrt(a);
  const Eigen::Vector4d w = eigvalsh(Mat4(sa * b * sa));
  double tr = 0.0;
  for (int i = 0; i < 4; ++i) tr += std::sqrt(std::max(w(i), 0.0));
  return tr * tr;
}

double trace_distance(const Mat4& a, const Mat4& b) {
  const Eigen::Vector4d w = eigvalsh(Mat4(a - b));
  return 0.5 * w.cwiseAbs().sum();
}

void validate_density_matrix(const Mat4& m, double tol) {
  if (!m.allFinite()) throw std::domain_error("density matrix has non-finite entries");
  const double herm = hermiticity_defect(m);
  if (herm > tol) throw std::domain_error("matrix is not Hermitian (defect " + std::to_string(herm) + ")");
  const double tr = m.trace().real();
  if (std::abs(tr - 1.0) > tol) throw std::domain_error("trace is " + std::to_string(tr) + ", expected 1");
  const double lo = eigvalsh(m)(0);
  if (lo < -tol) throw std::domain_error("matrix has negative eigenvalue " + std::to_string(lo));
}

bool is_density_matrix(const Mat4& m, double tol) {
  try {
    validate_density_matrix(m, tol);
    return true;
  } catch (const std::domain_error&) {
    return false;
  }
}

}  // namespace eplab
