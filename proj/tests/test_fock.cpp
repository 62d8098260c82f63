#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "carlab/fock.hpp"
#include "test_util.hpp"

using namespace carlab;
namespace tu = carlab::testutil;

TEST_CASE("mode system capacity") {
  CHECK(ModeSystem(1).dim() == 2);
  CHECK(ModeSystem(10).dim() == 1024);
  CHECK_THROWS_AS(ModeSystem(0), SizeError);
  CHECK_THROWS_AS(ModeSystem(13), SizeError);
  CHECK_THROWS_AS(ModeSystem(5, 4), SizeError);
}

TEST_CASE("single mode CAR") {
  ModeSystem sys(1);
  auto a = mode_annihilator(sys, 0);
  FockOperator one = FockOperator::identity(sys);
  CHECK(operator_norm(anticommutator(a, a.adjoint()) - one) == doctest::Approx(0.0));
}

TEST_CASE("exact CAR for all mode pairs, N=3") {
  ModeSystem sys(3);
  auto a = mode_annihilators(sys);
  double worst = 0.0;
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) {
      worst = std::max(worst, operator_norm(anticommutator(a[j], a[k])));
      Matrix expv = (j == k) ? Matrix(Matrix::Identity(sys.dim(), sys.dim()))
                             : Matrix(Matrix::Zero(sys.dim(), sys.dim()));
      worst = std::max(worst,
                       operator_norm(Matrix(anticommutator(a[j], a[k].adjoint()).matrix() - expv)));
    }
  }
  CHECK(worst < 1e-14);
}

TEST_CASE("a1 a2 + a2 a1 = 0 exactly, N=2") {
  ModeSystem sys(2);
  auto a = mode_annihilators(sys);
  Matrix s = a[0].matrix() * a[1].matrix() + a[1].matrix() * a[0].matrix();
  CHECK(s.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("smeared annihilator basics") {
  ModeSystem sys(3);
  Vector e1 = Vector::Zero(3);
  e1(0) = 1.0;

  SUBCASE("basis vector reproduces the mode operator") {
    CHECK(operator_norm(smeared_annihilator(sys, e1) - mode_annihilator(sys, 0)) == 0.0);
  }
  SUBCASE("antilinearity: a(i e1) = -i a1") {
    Vector f = Complex(0, 1) * e1;
    FockOperator lhs = smeared_annihilator(sys, f);
    FockOperator rhs = Complex(0, -1) * mode_annihilator(sys, 0);
    CHECK(operator_norm(lhs - rhs) == 0.0);
  }
  SUBCASE("length mismatch rejected") {
    CHECK_THROWS_AS(smeared_annihilator(sys, Vector::Zero(2)), ShapeError);
  }
}

TEST_CASE("smeared CAR suite: 100 random trials") {
  auto g = tu::rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    ModeSystem sys(2 + static_cast<int>(trial % 5));  // N in 2..6
    Vector f = tu::random_unit_vector(g, sys.n_modes());
    Vector h = tu::random_unit_vector(g, sys.n_modes());
    FockOperator af = smeared_annihilator(sys, f);
    FockOperator ah = smeared_annihilator(sys, h);
    CHECK(operator_norm(anticommutator(af, ah)) < 1e-12);
    Complex ip = f.dot(h);  // Eigen dot conjugates the left argument: <f|h>
    Matrix dev = anticommutator(af, ah.adjoint()).matrix() -
                 ip * Matrix::Identity(sys.dim(), sys.dim());
    CHECK(operator_norm(dev) < 1e-12);
  }
}

TEST_CASE("u0 unitary") {
  ModeSystem sys(4);
  auto g = tu::rng(5);
  Vector f0 = tu::random_unit_vector(g, 4);
  FockOperator u0 = u0_unitary(sys, f0);

  SUBCASE("involution U0^2 = 1") {
    Matrix dev = (u0 * u0).matrix() - Matrix::Identity(sys.dim(), sys.dim());
    CHECK(operator_norm(dev) < 1e-12);
  }
  SUBCASE("self-adjoint exactly") {
    CHECK((u0.matrix() - u0.matrix().adjoint()).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("odd parity: anticommutes with parity operator") {
    FockOperator p = parity_operator(sys);
    CHECK(operator_norm(anticommutator(p, u0)) < 1e-12);
    CHECK(u0.parity() == Parity::Odd);
  }
  SUBCASE("unit norm") { CHECK(operator_norm(u0) == doctest::Approx(1.0).epsilon(1e-12)); }
  SUBCASE("non-unit f0 rejected with norm in message") {
    try {
      u0_unitary(sys, 2.0 * f0);
      FAIL("expected DomainError");
    } catch (const DomainError& e) {
      CHECK(std::string(e.what()).find("2.0") != std::string::npos);
    }
  }
}

TEST_CASE("normalized trace is tracial and vanishes on odd operators") {
  ModeSystem sys(4);
  auto g = tu::rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    FockOperator a = tu::random_operator(g, sys);
    FockOperator b = tu::random_operator(g, sys);
    CHECK(std::abs(normalized_trace(a * b) - normalized_trace(b * a)) < 1e-12);
    CHECK(std::abs(normalized_trace(odd_part(a))) < 1e-13);
  }
}

TEST_CASE("tracial two-point function") {
  // tr^(a*(f) a(g)) = <g|f>/2, from the CAR and trace invariance.
  ModeSystem sys(4);
  auto g = tu::rng(3);
  Vector f = tu::random_vector(g, 4);
  Vector h = tu::random_vector(g, 4);
  Complex lhs = normalized_trace(smeared_creator(sys, f) * smeared_annihilator(sys, h));
  Complex rhs = h.dot(f) / 2.0;
  CHECK(std::abs(lhs - rhs) < 1e-12);
}

TEST_CASE("parity classification") {
  ModeSystem sys(3);
  auto a = mode_annihilators(sys);
  CHECK(parity_of(a[0]) == Parity::Odd);
  CHECK(parity_of(a[0] * a[1]) == Parity::Even);
  CHECK((a[0] + a[0] * a[1] * a[2].adjoint()).parity() == Parity::Odd);
  FockOperator mixed = a[0] + a[0] * a[1];
  CHECK(mixed.parity() == Parity::Mixed);
  CHECK(even_part(mixed).parity() == Parity::Even);
  CHECK(odd_part(mixed).parity() == Parity::Odd);
  CHECK(operator_norm(even_part(mixed) + odd_part(mixed) - mixed) == 0.0);
}

TEST_CASE("parity operator properties") {
  ModeSystem sys(3);
  FockOperator p = parity_operator(sys);
  CHECK(operator_norm(p * p - FockOperator::identity(sys)) == 0.0);
  for (const auto& a : mode_annihilators(sys)) {
    CHECK(operator_norm(p * a * p + a) == 0.0);
  }
}

TEST_CASE("operator norm of small known matrices") {
  ModeSystem sys(1);
  Matrix m(2, 2);
  m << 0, 3, 0, 0;
  CHECK(operator_norm(m) == doctest::Approx(3.0));
  CHECK(operator_norm(u0_unitary(sys, Vector::Ones(1))) == doctest::Approx(1.0));
}
