#include <cmath>
#include <random>

#include "caratheodory.hpp"
#include "doctest.h"
#include "eplab/measures.hpp"
#include "eplab/states.hpp"
#include "test_util.hpp"

using namespace eplab;
using testutil::max_abs;

TEST_CASE("negativity examples") {
  CHECK(negativity(psi_out(1.0)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(negativity(TwoQubitState()) == doctest::Approx(0.0));
  CHECK(negativity(horodecki_state(0.5)) == doctest::Approx(std::sqrt(0.5) - 0.5).epsilon(1e-12));
  CHECK(negativity(horodecki_state(0.5)) == doctest::Approx(0.207107).epsilon(1e-6));
}

TEST_CASE("concurrence examples") {
  CHECK(concurrence(psi_out(1.0)) == doctest::Approx(1.0).epsilon(1e-12));
  for (double p : {0.2, 0.5, 0.9}) CHECK(concurrence(horodecki_state(p)) == doctest::Approx(p).epsilon(1e-10));
  CHECK(concurrence(psi_q(0.1)) == doctest::Approx(0.6).epsilon(1e-10));
}

TEST_CASE("closed forms") {
  CHECK(ree_closed_pure(1.0) == doctest::Approx(1.0));
  CHECK(ree_closed_pure(0.0) == doctest::Approx(0.0));
  CHECK(ree_closed_pure(0.5) == doctest::Approx(0.35458).epsilon(1e-5));
  CHECK(binary_entropy(0.5 * (1.0 + std::sqrt(0.75))) == doctest::Approx(ree_closed_pure(0.5)));
  CHECK(ree_closed_horodecki(0.0) == doctest::Approx(0.0));
  CHECK(ree_closed_horodecki(1.0) == doctest::Approx(1.0));
  CHECK(ree_closed_horodecki(0.5) == doctest::Approx(0.122556).epsilon(1e-6));
  CHECK(ree_closed_bell_diagonal(0.75) == doctest::Approx(1.0 - binary_entropy(0.75)));
  CHECK(ree_closed_bell_diagonal(0.4) == 0.0);
}

TEST_CASE("closed-form family detection") {
  CHECK(detect_closed_form(psi_out(0.4)) == ClosedFormFamily::pure);
  CHECK(detect_closed_form(horodecki_state(0.4)) == ClosedFormFamily::horodecki);
  CHECK(detect_closed_form(rho_b(0.3, 0.3)) == ClosedFormFamily::bell_diagonal);
  CHECK(detect_closed_form(generalized_horodecki(0.8, 0.3)) == ClosedFormFamily::none);
}

TEST_CASE("ree_numeric examples") {
  std::mt19937_64 rng(8);
  SUBCASE("separable inputs give zero") {
    for (int i = 0; i < 10; ++i) {
      const TwoQubitState rho = testutil::random_state(rng);
      if (negativity(rho) > 0.0) continue;
      CHECK(ree_numeric(rho).ree_value <= 1e-6);
      ReeOptions o;
      o.ppt_shortcut = false;
      CHECK(ree_numeric(rho, o).ree_value <= 1e-6);
    }
  }
  CHECK(ree_numeric(psi_out(1.0)).ree_value == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(ree_numeric(horodecki_state(0.5)).ree_value == doctest::Approx(0.122556).epsilon(1e-5));
}

TEST_CASE("ree_numeric solution invariants") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 10; ++i) {
    const TwoQubitState rho = testutil::random_state(rng, 2);
    const ReeSolution s = ree_numeric(rho, {1e-8});
    CHECK(s.ree_value >= 0.0);
    CHECK(s.gap_bound <= 1e-8);
    // Entangled inputs get a certified positive value.
    if (negativity(rho) > 0.0) CHECK(s.ree_value - s.gap_bound > 0.0);
    const auto pt = eigvalsh(partial_transpose(s.closest_separable.matrix()));
    CHECK(pt.minCoeff() >= -1e-9);
    CHECK(std::abs(relative_entropy(rho.matrix(), s.closest_separable.matrix()) - s.ree_value) < 1e-7);
    if (!s.decomposition.empty()) {
      Mat4 sum = Mat4::Zero();
      for (const auto& a : s.decomposition) sum += a.weight * projector(a.vector());
      CHECK(max_abs(sum - s.closest_separable.matrix()) < 1e-9);
    }
  }
}

TEST_CASE("ree_numeric against the Caratheodory oracle") {
  // Frozen values from the oracle (8 LBFGS starts, 4 product atoms).
  CHECK(ree_numeric(bs_transform(make_vops(0.7, 0.6, 0.4), BsSetting(0.6, 0.8)), {1e-9}).ree_value ==
        doctest::Approx(0.1224369030).epsilon(1e-8));
  CHECK(ree_numeric(bs_transform(make_vops(0.4, 1.0), BsSetting(0.8, 0.9)), {1e-9}).ree_value ==
        doctest::Approx(0.1223501081).epsilon(1e-8));
  CHECK(ree_numeric(rho_pdc(0.25, 0.5, 0.5), {1e-9}).ree_value == doctest::Approx(0.1552205615).epsilon(1e-8));
  CHECK(ree_numeric(generalized_horodecki(0.8, 0.3), {1e-9}).ree_value ==
        doctest::Approx(0.3756946412).epsilon(1e-8));

  // Live comparison on random entangled states.
  std::mt19937_64 rng(99);
  int compared = 0;
  for (int i = 0; i < 40 && compared < 5; ++i) {
    const TwoQubitState rho = testutil::random_state(rng, 2);
    if (negativity(rho) < 0.05) continue;
    ++compared;
    const double want = oracle::ree(rho.matrix());
    CHECK(ree_numeric(rho, {1e-9}).ree_value == doctest::Approx(want).epsilon(1e-6));
  }
  CHECK(compared == 5);
}

TEST_CASE("ree on rho_b matches the Bell-diagonal value") {
  for (double k1 : {0.0, 0.3, 0.6})
    for (double k2 : {0.1, 0.5, 0.9}) {
      const double lp = 0.5 * (1.0 + std::sqrt((1 - k1) * (1 - k2)));
      ReeOptions o;
      o.tol = 1e-8;
      CHECK(std::abs(ree_numeric(rho_b(k1, k2), o).ree_value - (1.0 - binary_entropy(lp))) < 1e-4);
    }
}

TEST_CASE("potentials examples") {
  const PotentialTriple a = potentials(make_vops(1.0, 1.0), BsSetting::balanced());
  CHECK(a.np_value == doctest::Approx(1.0));
  CHECK(a.cp_value == doctest::Approx(1.0));
  CHECK(a.reep_value == doctest::Approx(1.0));
  const PotentialTriple b = potentials(make_vops(0.5, 0.0), BsSetting::balanced());
  CHECK(b.np_value == doctest::Approx(0.207107).epsilon(1e-6));
  CHECK(b.cp_value == doctest::Approx(0.5));
  CHECK(b.reep_value == doctest::Approx(0.122556).epsilon(1e-6));
  const PotentialTriple c = potentials(make_vops(0.5, 1.0), BsSetting::balanced());
  CHECK(c.np_value == doctest::Approx(0.5));
  CHECK(c.cp_value == doctest::Approx(0.5));
  CHECK(c.reep_value == doctest::Approx(0.35458).epsilon(1e-5));
}

TEST_CASE("partial transpose is an involution") {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 50; ++i) {
    const Mat4 m = testutil::random_state(rng).matrix();
    CHECK(partial_transpose(partial_transpose(m)) == m);
  }
}

TEST_CASE("local-unitary invariance of N and C") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 100; ++i) {
    const TwoQubitState rho = testutil::random_state(rng, 1 + i % 4);
    const TwoQubitState r2 = testutil::random_local_rotation(rng, rho);
    CHECK(std::abs(negativity(rho) - negativity(r2)) < 1e-9);
    CHECK(std::abs(concurrence(rho) - concurrence(r2)) < 1e-9);
  }
}

TEST_CASE("0 <= N <= C <= 1 and N = C on pure states") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 500; ++i) {
    const TwoQubitState rho = testutil::random_state(rng, 1 + i % 4);
    const double n = negativity(rho), c = concurrence(rho);
    CHECK(n >= -1e-9);
    CHECK(n <= c + 1e-9);
    CHECK(c <= 1.0 + 1e-9);
    const TwoQubitState psi = testutil::random_pure(rng);
    CHECK(std::abs(negativity(psi) - concurrence(psi)) < 1e-8);
  }
}

TEST_CASE("measures do not depend on the VOPS phase") {
  for (double p : {0.3, 0.7})
    for (double d : {0.4, 1.0}) {
      const MeasureTriple a = measures(bs_transform(make_vops(p, d, 0.0), BsSetting(0.6, 0.9)), 1e-9);
      for (double phi : {0.7, 2.0, 4.5}) {
        const MeasureTriple b = measures(bs_transform(make_vops(p, d, phi), BsSetting(0.6, 0.9)), 1e-9);
        CHECK(std::abs(a.negativity - b.negativity) < 1e-10);
        CHECK(std::abs(a.concurrence - b.concurrence) < 1e-10);
        CHECK(std::abs(a.ree - b.ree) < 1e-8);
      }
    }
}

TEST_CASE("minimize_over_product_states finds the smallest product expectation") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 10; ++i) {
    const Mat4 g = testutil::random_state(rng).matrix() - 0.3 * Mat4::Identity();
    const ProductMinimum m = minimize_over_product_states(g);
    const Vec4 v = kron(m.a, m.b);
    CHECK(std::abs((v.adjoint() * g * v)(0, 0).real() - m.value) < 1e-10);
    // Not beaten by a random product scan.
    for (int j = 0; j < 200; ++j) {
      const Vec2 u = random_unitary2(rng).col(0), v = random_unitary2(rng).col(0);
      const Vec4 w = kron(u, v);
      CHECK((w.adjoint() * g * w)(0, 0).real() >= m.value - 1e-10);
    }
  }
}
