#include <cmath>
#include <random>

#include "doctest.h"
#include "eplab/channels.hpp"
#include "eplab/measures.hpp"
#include "eplab/states.hpp"
#include "test_util.hpp"

using namespace eplab;
using testutil::max_abs;

namespace {
const double kS = std::sqrt(0.5);
}

TEST_CASE("make_vops examples") {
  const VopsState a = make_vops(1.0, 1.0, 0.0);
  CHECK(std::abs(a.x) == 0.0);
  CHECK(std::abs(a.matrix()(0, 0)) == doctest::Approx(0.0));
  CHECK(a.matrix()(1, 1).real() == doctest::Approx(1.0));

  const VopsState b = make_vops(0.5, 1.0, 0.0);
  CHECK(b.x.real() == doctest::Approx(0.5));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(b.matrix()(i, j).real() == doctest::Approx(0.5));

  const VopsState c = make_vops(0.5, 0.0, 0.0);
  CHECK(std::abs(c.x) == 0.0);
  CHECK(c.matrix()(0, 0).real() == doctest::Approx(0.5));
  CHECK(c.matrix()(1, 1).real() == doctest::Approx(0.5));

  const VopsState d = make_vops(0.3, 0.6, 1.2);
  CHECK(std::abs(d.x) == doctest::Approx(0.6 * std::sqrt(0.21)));
  CHECK(std::arg(d.x) == doctest::Approx(1.2));
}

TEST_CASE("make_vops rejects out-of-range parameters") {
  CHECK_THROWS_AS(make_vops(-0.1, 1.0), std::domain_error);
  CHECK_THROWS_AS(make_vops(1.1, 1.0), std::domain_error);
  CHECK_THROWS_AS(make_vops(0.5, 1.5), std::domain_error);
  CHECK_THROWS_AS(make_vops(0.5, -0.5), std::domain_error);
}

TEST_CASE("degenerate p forces zero coherence") {
  CHECK(std::abs(make_vops(0.0, 1.0, 0.3).x) == 0.0);
  CHECK(std::abs(make_vops(1.0, 1.0, 0.3).x) == 0.0);
}

TEST_CASE("BsSetting invariants") {
  for (double r : {0.0, 0.3, 0.70710678118654752, 1.0}) {
    const BsSetting b(r, 0.6);
    CHECK(std::abs(b.r() * b.r() + b.t() * b.t() - 1.0) < 1e-12);
    CHECK(b.kappa() == doctest::Approx(1.0 - 0.36));
  }
  CHECK_THROWS(BsSetting(1.2, 1.0));
  CHECK_THROWS(BsSetting(0.5, -0.1));
}

TEST_CASE("bs_transform examples") {
  SUBCASE("singlet") {
    const Mat4 m = bs_transform(make_vops(1.0, 1.0), BsSetting::balanced()).matrix();
    CHECK(std::abs(m(1, 1) - 0.5) < 1e-12);
    CHECK(std::abs(m(2, 2) - 0.5) < 1e-12);
    CHECK(std::abs(m(1, 2) + 0.5) < 1e-12);
    CHECK(std::abs(m(0, 0)) < 1e-12);
  }
  SUBCASE("vacuum in, vacuum out") {
    const Mat4 m = bs_transform(make_vops(0.0, 1.0), BsSetting(0.3, 0.4)).matrix();
    Mat4 want = Mat4::Zero();
    want(0, 0) = 1.0;
    CHECK(max_abs(m - want) < 1e-12);
  }
  SUBCASE("w = 0.8") {
    const Mat4 m = bs_transform(make_vops(1.0, 1.0), BsSetting::balanced(0.8)).matrix();
    CHECK(std::abs(m(1, 1) - 0.5) < 1e-12);
    CHECK(std::abs(m(2, 2) - 0.5) < 1e-12);
    CHECK(std::abs(m(1, 2) + 0.32) < 1e-12);
  }
  SUBCASE("entrywise against the explicit matrix") {
    const double p = 0.6, r = 0.6, t = 0.8, w = 0.7;
    const VopsState s = make_vops(p, 0.9, 0.5);
    const cplx x = s.x;
    Mat4 want = Mat4::Zero();
    want(0, 0) = 1 - p;
    want(1, 1) = p * r * r;
    want(2, 2) = p * t * t;
    want(0, 1) = -w * r * x;
    want(0, 2) = w * t * x;
    want(1, 2) = -p * w * w * r * t;
    want(1, 0) = std::conj(want(0, 1));
    want(2, 0) = std::conj(want(0, 2));
    want(2, 1) = std::conj(want(1, 2));
    CHECK(max_abs(bs_transform(s, BsSetting(r, w)).matrix() - want) < 1e-12);
  }
}

TEST_CASE("bs_transform never populates |11>") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const TwoQubitState rho = bs_transform(make_vops(u(rng), u(rng), 6.28 * u(rng)), BsSetting(u(rng), u(rng)));
    CHECK(rho.single_excitation());
    CHECK(is_density_matrix(rho.matrix()));
  }
}

TEST_CASE("Kraus completeness on a 0.1 grid") {
  for (int i = 0; i <= 10; ++i) {
    const double c = 0.1 * i;
    CHECK(amplitude_damping(c).completeness_defect() < 1e-12);
    CHECK(phase_damping(c).completeness_defect() < 1e-12);
  }
}

TEST_CASE("apply_kraus examples") {
  std::mt19937_64 rng(5);
  SUBCASE("zero coefficient is the identity") {
    for (int i = 0; i < 20; ++i) {
      const TwoQubitState rho = testutil::random_state(rng);
      for (int q : {1, 2}) {
        CHECK(max_abs(apply_kraus(rho, q, phase_damping(0.0)).matrix() - rho.matrix()) < 1e-12);
        CHECK(max_abs(apply_kraus(rho, q, amplitude_damping(0.0)).matrix() - rho.matrix()) < 1e-12);
      }
    }
  }
  SUBCASE("full amplitude damping on both qubits gives vacuum") {
    const TwoQubitState rho = testutil::random_state(rng);
    const Mat4 out = apply_kraus(apply_kraus(rho, 1, amplitude_damping(1.0)), 2, amplitude_damping(1.0)).matrix();
    Mat4 want = Mat4::Zero();
    want(0, 0) = 1.0;
    CHECK(max_abs(out - want) < 1e-12);
  }
  SUBCASE("trace preserved") {
    for (int i = 0; i < 20; ++i) {
      const TwoQubitState rho = testutil::random_state(rng);
      const double g = 0.05 * i;
      CHECK(std::abs(apply_kraus(rho, 1, amplitude_damping(g)).matrix().trace().real() - 1.0) < 1e-12);
      CHECK(std::abs(apply_kraus(rho, 2, phase_damping(g)).matrix().trace().real() - 1.0) < 1e-12);
    }
  }
  SUBCASE("psi_q(1/2) under phase damping 0.5 on both qubits") {
    const TwoQubitState out = apply_kraus(apply_kraus(psi_q(0.5), 1, phase_damping(0.5)), 2, phase_damping(0.5));
    // Explicit Kraus-sum oracle result: lambda on the Bell pair (0.75, 0.25).
    const Vec4 m = bell_psi_minus(), pl = bell_psi_plus();
    const double on_minus = (m.adjoint() * out.matrix() * m)(0, 0).real();
    const double on_plus = (pl.adjoint() * out.matrix() * pl)(0, 0).real();
    CHECK(std::max(on_minus, on_plus) == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(std::min(on_minus, on_plus) == doctest::Approx(0.25).epsilon(1e-12));
    // rho_b weights Psi+ instead; a local Z maps one onto the other.
    const Mat4 z = kron(Mat2::Identity(), pauli_z());
    CHECK(max_abs(out.matrix() - z * rho_b(0.5, 0.5).matrix() * z) < 1e-12);
  }
  CHECK_THROWS_AS(apply_kraus(psi_q(0.5), 3, phase_damping(0.1)), std::invalid_argument);
  CHECK_THROWS_AS(apply_kraus(psi_q(0.5), 0, phase_damping(0.1)), std::invalid_argument);
}

TEST_CASE("psi_out") {
  Mat4 singlet = Mat4::Zero();
  singlet(1, 1) = singlet(2, 2) = 0.5;
  singlet(1, 2) = singlet(2, 1) = -0.5;
  CHECK(max_abs(psi_out(1.0).matrix() - singlet) < 1e-12);
  CHECK(std::abs(psi_out(0.0).matrix()(0, 0) - 1.0) < 1e-12);
  const Mat4 h = psi_out(0.5).matrix();
  // Amplitudes (sqrt(0.5), -0.5, 0.5).
  CHECK(h(0, 0).real() == doctest::Approx(0.5));
  CHECK(h(1, 1).real() == doctest::Approx(0.25));
  CHECK(h(0, 1).real() == doctest::Approx(-kS * 0.5));
  CHECK(h(0, 2).real() == doctest::Approx(kS * 0.5));
  for (double p : {0.0, 0.2, 0.5, 0.9, 1.0}) {
    const Mat4 want = bs_transform(make_vops(p, 1.0), BsSetting::balanced()).matrix();
    CHECK(max_abs(psi_out(p).matrix() - want) < 1e-12);
  }
}

TEST_CASE("psi_q and q_of_p") {
  const Mat4 b = psi_q(0.5).matrix();
  CHECK(std::abs(b(1, 2).real() + 0.5) < 1e-12);
  const Mat4 z = psi_q(0.0).matrix();
  CHECK(std::abs(z(2, 2).real() - 1.0) < 1e-12);
  CHECK(q_of_p(0.6) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(concurrence(psi_q(q_of_p(0.6))) == doctest::Approx(0.6).epsilon(1e-10));
}

TEST_CASE("horodecki_state") {
  CHECK(max_abs(horodecki_state(1.0).matrix() - psi_out(1.0).matrix()) < 1e-12);
  CHECK(std::abs(horodecki_state(0.0).matrix()(0, 0) - 1.0) < 1e-12);
  const Mat4 h = horodecki_state(0.5).matrix();
  CHECK(h(0, 0).real() == doctest::Approx(0.5));
  CHECK(h(1, 1).real() == doctest::Approx(0.25));
  CHECK(h(2, 2).real() == doctest::Approx(0.25));
  CHECK(h(1, 2).real() == doctest::Approx(-0.25));
  for (int i = 0; i <= 20; ++i) {
    const double p = 0.05 * i;
    CHECK(max_abs(bs_transform(make_vops(p, 0.0), BsSetting::balanced()).matrix() - horodecki_state(p).matrix()) <
          1e-12);
  }
}

TEST_CASE("generalized_horodecki") {
  CHECK(max_abs(generalized_horodecki(1.0, 0.5).matrix() - psi_q(0.5).matrix()) < 1e-12);
  const Mat4 g = generalized_horodecki(0.5, 0.3).matrix();
  CHECK(g(0, 0).real() == doctest::Approx(0.5));
  CHECK(g(1, 1).real() == doctest::Approx(0.15));
  CHECK(g(2, 2).real() == doctest::Approx(0.35));
  CHECK(std::abs(g(3, 3)) < 1e-12);
  // Same measures as the dephased input on a splitter with reflectivity q.
  for (double q : {0.2, 0.3, 0.7}) {
    const TwoQubitState a = generalized_horodecki(0.6, q);
    const TwoQubitState b = bs_transform(make_vops(0.6, 0.0), BsSetting::from_reflectivity(q));
    for (int i = 0; i < 4; ++i) CHECK(std::abs(a.matrix()(i, i) - b.matrix()(i, i)) < 1e-12);
    CHECK(std::abs(std::abs(a.matrix()(1, 2)) - std::abs(b.matrix()(1, 2))) < 1e-12);
  }
}

TEST_CASE("rho_pdc and rho_b") {
  // (1/2, 0, 0): y = 1/2, all weight on Psi+.
  const Vec4 pl = bell_psi_plus(), mi = bell_psi_minus();
  const Mat4 a = rho_pdc(0.5, 0.0, 0.0).matrix();
  CHECK((pl.adjoint() * a * pl)(0, 0).real() == doctest::Approx(1.0));
  const Mat4 b = rho_pdc(0.3, 1.0, 1.0).matrix();
  CHECK((pl.adjoint() * b * pl)(0, 0).real() == doctest::Approx(0.5));
  CHECK((mi.adjoint() * b * mi)(0, 0).real() == doctest::Approx(0.5));
  // (0.25, 0.5, 0.5): y = sqrt(0.25 * 0.75 * 0.25) against the Kraus sum.
  const double y = std::sqrt(0.25 * 0.75 * 0.25);
  CHECK(y == doctest::Approx(0.216506).epsilon(1e-6));
  const Mat4 c = rho_pdc(0.25, 0.5, 0.5).matrix();
  CHECK((pl.adjoint() * c * pl)(0, 0).real() == doctest::Approx(0.5 + y));
  CHECK((mi.adjoint() * c * mi)(0, 0).real() == doctest::Approx(0.5 - y));
  const Mat4 kraus =
      apply_kraus(apply_kraus(psi_q(0.25), 1, phase_damping(0.5)), 2, phase_damping(0.5)).matrix();
  // Same state up to the Psi+/Psi- labelling convention: compare spectra and measures.
  const auto ev_a = eigvalsh(c), ev_b = eigvalsh(kraus);
  CHECK((ev_a - ev_b).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(max_abs(rho_pdc(0.5, 0.3, 0.6).matrix() - rho_b(0.3, 0.6).matrix()) < 1e-12);

  const Mat4 d = rho_b(0.0, 0.0).matrix();
  CHECK((pl.adjoint() * d * pl)(0, 0).real() == doctest::Approx(1.0));
  const Mat4 e = rho_b(1.0, 0.3).matrix();
  CHECK((pl.adjoint() * e * pl)(0, 0).real() == doctest::Approx(0.5));
  const Mat4 f = rho_b(0.5, 0.5).matrix();
  CHECK((pl.adjoint() * f * pl)(0, 0).real() == doctest::Approx(0.75));
  CHECK((mi.adjoint() * f * mi)(0, 0).real() == doctest::Approx(0.25));
}

TEST_CASE("lossy balanced singlet has the measures of rho_b") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const double w = u(rng);
    const double kappa = 1.0 - w * w;
    const MeasureTriple a = measures(bs_transform(make_vops(1.0, 1.0), BsSetting::balanced(w)), 1e-8);
    const MeasureTriple b = measures(rho_b(kappa, kappa), 1e-8);
    CHECK(std::abs(a.negativity - b.negativity) < 1e-9);
    CHECK(std::abs(a.concurrence - b.concurrence) < 1e-9);
    CHECK(std::abs(a.ree - b.ree) < 1e-6);
  }
}

TEST_CASE("density-matrix validation") {
  Mat4 m = Mat4::Zero();
  m(0, 0) = 1.1;
  m(1, 1) = -0.1;
  CHECK_THROWS_AS(TwoQubitState::from_matrix(m), std::domain_error);
  Mat4 h = Mat4::Zero();
  h(0, 0) = 1.0;
  h(0, 1) = 0.1;
  CHECK_THROWS_AS(TwoQubitState::from_matrix(h), std::domain_error);
  Mat4 t = Mat4::Identity() * 0.3;
  CHECK_THROWS_AS(TwoQubitState::from_matrix(t), std::domain_error);
}
