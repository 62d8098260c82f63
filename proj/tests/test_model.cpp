#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "carlab/model.hpp"
#include "test_util.hpp"

using namespace carlab;
namespace tu = carlab::testutil;

namespace {

Complex packet(double x, const PhasePoint& pt) {
  const double amp = std::pow(M_PI, -0.25) * std::exp(-0.5 * (x - pt.q) * (x - pt.q));
  return amp * std::exp(Complex(0, pt.p * x));
}

// Simpson quadrature of an arbitrary integrand over [-L, L].
template <typename F>
Complex simpson(F f, double l, int intervals) {
  const double h = 2 * l / intervals;
  Complex acc = f(-l) + f(l);
  for (int i = 1; i < intervals; ++i) {
    acc += f(-l + h * i) * ((i % 2) ? 4.0 : 2.0);
  }
  return acc * (h / 3.0);
}

Complex overlap_quadrature(const PhasePoint& a, const PhasePoint& b) {
  return simpson([&](double x) { return std::conj(packet(x, a)) * packet(x, b); }, 14.0, 16000);
}

// <a| P^2/(2m) |b> by quadrature in the momentum representation, where the
// packet with label (p,q) is pi^{-1/4} e^{i(p-k)q} e^{-(k-p)^2/2}.
Complex kinetic_quadrature(const PhasePoint& a, const PhasePoint& b, double mass) {
  auto tilde = [](double k, const PhasePoint& pt) {
    return std::pow(M_PI, -0.25) * std::exp(-0.5 * (k - pt.p) * (k - pt.p)) *
           std::exp(Complex(0, (pt.p - k) * pt.q));
  };
  return simpson(
      [&](double k) {
        return std::conj(tilde(k, a)) * tilde(k, b) * k * k / (2.0 * mass);
      },
      14.0, 16000);
}

}  // namespace

TEST_CASE("coherent overlap closed form") {
  PhasePoint o{0, 0};
  SUBCASE("normalization") { CHECK(std::abs(coherent_overlap(o, o) - 1.0) < 1e-14); }
  SUBCASE("conjugate under swap") {
    PhasePoint a{0.7, -1.3}, b{-0.4, 2.1};
    CHECK(std::abs(coherent_overlap(a, b) - std::conj(coherent_overlap(b, a))) < 1e-14);
  }
  SUBCASE("matches quadrature at (0,0) vs (0,2)") {
    PhasePoint b{0, 2};
    CHECK(std::abs(coherent_overlap(o, b) - overlap_quadrature(o, b)) < 1e-10);
  }
  SUBCASE("matches quadrature at generic points") {
    PhasePoint a{1.1, -0.6}, b{-0.8, 1.9};
    CHECK(std::abs(coherent_overlap(a, b) - overlap_quadrature(a, b)) < 1e-10);
    CHECK(std::abs(coherent_overlap(a, b)) <= 1.0);
  }
}

TEST_CASE("coherent kinetic element") {
  SUBCASE("single point at the origin matches quadrature") {
    PhasePoint o{0, 0};
    Complex k = coherent_kinetic_element(o, o, 1.0);
    CHECK(std::abs(k - Complex(0.25, 0)) < 1e-12);  // (p^2 + 1/2)/(2m)
    CHECK(std::abs(k - kinetic_quadrature(o, o, 1.0)) < 1e-10);
  }
  SUBCASE("generic pair matches quadrature") {
    PhasePoint a{0.9, 0.4}, b{-0.5, -1.2};
    CHECK(std::abs(coherent_kinetic_element(a, b, 1.0) - kinetic_quadrature(a, b, 1.0)) < 1e-10);
  }
}

TEST_CASE("basis construction") {
  SUBCASE("widely separated points give identity transform") {
    PhaseSpaceGrid grid({{0, -10}, {0, 0}, {0, 10}}, 1.0);
    ModeBasis basis = build_basis(grid);
    Matrix dev = basis.inv_sqrt_overlap - Matrix::Identity(3, 3);
    CHECK(dev.cwiseAbs().maxCoeff() < 1e-10);
  }
  SUBCASE("duplicate points rejected") {
    CHECK_THROWS_AS(PhaseSpaceGrid({{0, 0}, {0, 0}}, 1.0), DomainError);
  }
  SUBCASE("near-duplicate points fail conditioning") {
    CHECK_THROWS_AS(build_basis(PhaseSpaceGrid({{0, 0}, {0, 1e-8}}, 1.0)), ConditioningError);
  }
  SUBCASE("transformed overlap matrix is the identity") {
    PhaseSpaceGrid grid = PhaseSpaceGrid::rectangular(2, 3, 2.0, 2.0);
    ModeBasis basis = build_basis(grid);
    const int n = grid.size();
    Matrix s(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        s(i, j) = coherent_overlap(grid.points()[i], grid.points()[j]);
    Matrix dev = basis.inv_sqrt_overlap.adjoint() * s * basis.inv_sqrt_overlap -
                 Matrix::Identity(n, n);
    CHECK(dev.cwiseAbs().maxCoeff() < 1e-10);
    // expansion columns really expand the packets: S^{1/2} S^{-1/2} = 1
    Matrix roundtrip = basis.expansion * basis.inv_sqrt_overlap - Matrix::Identity(n, n);
    CHECK(roundtrip.cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("kinetic matrix") {
  PhaseSpaceGrid grid = PhaseSpaceGrid::rectangular(2, 2, 2.0, 2.0);
  ModeBasis basis = build_basis(grid);
  Matrix h = kinetic_matrix(grid, basis);
  SUBCASE("Hermitian exactly after symmetrization") {
    CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("doubling the mass halves every entry") {
    PhaseSpaceGrid heavy(grid.points(), 2.0);
    Matrix h2 = kinetic_matrix(heavy, build_basis(heavy));
    CHECK((h - 2.0 * h2).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("interaction terms") {
  PhaseSpaceGrid grid = PhaseSpaceGrid::rectangular(2, 2, 2.0, 2.0);
  ModeBasis basis = build_basis(grid);
  CutoffSpec cut{1.0, 1.0, 1.0};
  InteractionTerms terms = interaction_terms(grid, basis, cut);

  SUBCASE("pair coefficients vanish for far-separated momenta") {
    PhaseSpaceGrid far({{0, 0}, {8.0, 0}}, 1.0);  // dp = 8 w_width
    InteractionTerms ft = interaction_terms(far, build_basis(far), cut);
    for (const auto& p : ft.pairs) CHECK(std::abs(p.coeff) < 1e-8);
  }
  SUBCASE("assembled V matches direct summation over smeared operators") {
    const ModeSystem& sys = basis.sys;
    Matrix v = quartic_matrix(sys, terms.quartic);
    Matrix direct = Matrix::Zero(sys.dim(), sys.dim());
    for (const auto& pt : terms.pairs) {
      Matrix ai = smeared_annihilator(sys, basis.expansion.col(pt.i)).matrix();
      Matrix aj = smeared_annihilator(sys, basis.expansion.col(pt.j)).matrix();
      direct += pt.coeff * (ai.adjoint() * aj.adjoint() * aj * ai);
    }
    CHECK(operator_norm(Matrix(v - direct)) < 1e-10);
  }
  SUBCASE("diagonal i=j contribution is identically zero by antisymmetry") {
    const ModeSystem& sys = basis.sys;
    Matrix ai = smeared_annihilator(sys, basis.expansion.col(0)).matrix();
    Matrix diag = ai.adjoint() * ai.adjoint() * ai * ai;
    CHECK(operator_norm(diag) < 1e-13);
  }
  SUBCASE("momentum cutoff monotonicity") {
    CutoffSpec narrow{0.5, 1.0, 1.0};
    InteractionTerms nt = interaction_terms(grid, basis, narrow);
    REQUIRE(nt.pairs.size() == terms.pairs.size());
    for (std::size_t k = 0; k < nt.pairs.size(); ++k) {
      CHECK(std::abs(nt.pairs[k].coeff) <= std::abs(terms.pairs[k].coeff) + 1e-15);
    }
  }
}

TEST_CASE("assemble hamiltonian") {
  PhaseSpaceGrid grid = PhaseSpaceGrid::rectangular(2, 2, 2.0, 2.0);
  ModeBasis basis = build_basis(grid);
  CutoffSpec cut{1.0, 1.0, 1.0};
  HamiltonianTerms terms = make_hamiltonian_terms(grid, basis, cut);
  const ModeSystem& sys = basis.sys;
  FockOperator h = assemble_hamiltonian(sys, terms, 1.0);

  SUBCASE("Hermitian and even") {
    CHECK(operator_norm(h - h.adjoint()) < 1e-10);
    CHECK(h.parity() == Parity::Even);
  }
  SUBCASE("commutes with the number operator") {
    CHECK(operator_norm(commutator(h, number_operator(sys))) < 1e-10);
  }
  SUBCASE("lambda = 0 leaves only the quasifree lift") {
    FockOperator k = assemble_hamiltonian(sys, terms, 0.0);
    Matrix lift = quadratic_matrix(sys, terms.kinetic);
    CHECK(operator_norm(Matrix(k.matrix() - lift)) < 1e-12);
  }
  SUBCASE("interaction is odd in lambda") {
    FockOperator hp = assemble_hamiltonian(sys, terms, 0.75);
    FockOperator hm = assemble_hamiltonian(sys, terms, -0.75);
    FockOperator k = assemble_hamiltonian(sys, terms, 0.0);
    Matrix vsum = hp.matrix() + hm.matrix() - 2.0 * k.matrix();
    CHECK(operator_norm(vsum) < 1e-12);
  }
}

TEST_CASE("gauge transformation") {
  ModeSystem sys(3);
  auto g = tu::rng(21);
  FockOperator a1 = mode_annihilator(sys, 0);

  SUBCASE("alpha = 0 is the identity map") {
    FockOperator x = tu::random_operator(g, sys);
    CHECK(operator_norm(gauge_transform(x, 0.0) - x) == 0.0);
  }
  SUBCASE("a_1 picks up the phase e^{i alpha}") {
    const double alpha = 0.83;
    FockOperator lhs = gauge_transform(a1, alpha);
    FockOperator rhs = std::exp(Complex(0, alpha)) * a1;
    CHECK(operator_norm(lhs - rhs) < 1e-12);
  }
  SUBCASE("assembled H is gauge invariant") {
    PhaseSpaceGrid grid = PhaseSpaceGrid::rectangular(2, 2, 2.0, 2.0);
    ModeBasis basis = build_basis(grid);
    HamiltonianTerms terms = make_hamiltonian_terms(grid, basis, CutoffSpec{1.0, 1.0, 1.0});
    FockOperator h = assemble_hamiltonian(basis.sys, terms, 1.3);
    CHECK(operator_norm(gauge_transform(h, 0.71) - h) < 1e-10);
  }
}
