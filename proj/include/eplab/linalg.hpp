#pragma once

#include <complex>
#include <random>
#include <utility>

#include <Eigen/Dense>

namespace eplab {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using Vec2 = Eigen::Vector2cd;
using Vec4 = Eigen::Vector4cd;

// Two-qubit basis index convention: |ab> -> 2*a + b, qubit 1 is the left factor.
constexpr int basis_index(int a, int b) { return 2 * a + b; }

/// Spectral decomposition of a Hermitian 4x4 matrix, eigenvalues ascending.
struct HermitianSpectrum {
  Eigen::Vector4d values;
  Mat4 vectors;

  /// U f(D) U^dagger for a scalar function applied to the eigenvalues.
  template <typename F>
  Mat4 apply(F&& f) const {
    Eigen::Vector4cd fv;
    for (int i = 0; i < 4; ++i) fv(i) = f(values(i));
    return vectors * fv.asDiagonal() * vectors.adjoint();
  }
};

HermitianSpectrum eigh(const Mat4& m);
Eigen::Vector4d eigvalsh(const Mat4& m);
Eigen::Vector2d eigvalsh(const Mat2& m);

/// Smallest eigenpair of a 2x2 Hermitian matrix (closed form).
std::pair<double, Vec2> min_eigenpair(const Mat2& m);

Mat4 hermitian_part(const Mat4& m);
double hermiticity_defect(const Mat4& m);

/// Partial transpose on the second qubit.
Mat4 partial_transpose(const Mat4& m);

Mat4 kron(const Mat2& a, const Mat2& b);
Vec4 kron(const Vec2& a, const Vec2& b);

Mat4 projector(const Vec4& v);
Mat2 projector(const Vec2& v);

Mat2 pauli_x();
Mat2 pauli_y();
Mat2 pauli_z();

/// x log2 x with the 0 log 0 = 0 convention.
double xlog2x(double x);

/// Binary (Shannon) entropy in bits.
double binary_entropy(double x);

/// von Neumann entropy in bits; eigenvalues below zero are dropped.
double von_neumann_entropy(const Mat4& rho);

/// Principal square root of a PSD matrix; small negative eigenvalues clipped.
Mat4 psd_sqrt(const Mat4& m);

/// Uhlmann fidelity (Tr sqrt(sqrt(a) b sqrt(a)))^2.
double fidelity(const Mat4& a, const Mat4& b);

double trace_distance(const Mat4& a, const Mat4& b);

/// Throws std::domain_error when m is not Hermitian, unit-trace and PSD
/// within tol.
void validate_density_matrix(const Mat4& m, double tol = 1e-10);
bool is_density_matrix(const Mat4& m, double tol = 1e-10);

/// Haar-random unitary via QR of a complex Ginibre matrix.
template <typename Rng>
Mat2 random_unitary2(Rng& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Mat2 z;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) z(i, j) = cplx(nd(rng), nd(rng));
  Eigen::HouseholderQR<Mat2> qr(z);
  Mat2 q = qr.householderQ();
  Mat2 r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < 2; ++j) {
    const cplx d = r(j, j);
    const double ad = std::abs(d);
    if (ad > 0) q.col(j) *= d / ad;
  }
  return q;
}

}  // namespace eplab
