#pragma once

// One-particle structure over a phase-space grid of unit-width Gaussian
// wave packets and the many-body Hamiltonian H = K + lambda*V built on it.
//
// Packet with label (p,q):  psi_{p,q}(x) = pi^{-1/4} exp(-(x-q)^2/2 + i p x).
// The packets are not orthogonal; the CAR modes are obtained by symmetric
// (inverse square root of the overlap matrix) orthonormalization, which is
// basis-order independent and preserves grid symmetries.

#include <array>
#include <vector>

#include "carlab/fock.hpp"

namespace carlab {

struct PhasePoint {
  double p = 0.0;  // momentum label
  double q = 0.0;  // position label
};

class PhaseSpaceGrid {
 public:
  PhaseSpaceGrid(std::vector<PhasePoint> points, double mass);

  // np x nq lattice with spacings (dp, dq), centered at the origin.
  static PhaseSpaceGrid rectangular(int np, int nq, double dp = 2.0, double dq = 2.0,
                                    double mass = 1.0);

  const std::vector<PhasePoint>& points() const noexcept { return points_; }
  int size() const noexcept { return static_cast<int>(points_.size()); }
  double mass() const noexcept { return mass_; }

 private:
  std::vector<PhasePoint> points_;
  double mass_;
};

// Gaussian cutoffs w (momentum) and v (position), both equal to 1 at 0:
// w(dp) = exp(-dp^2 / (2 w_width^2)), v(dq) = exp(-dq^2 / (2 v_width^2)).
// Large w_width approaches a plain contact-type pair interaction.
struct CutoffSpec {
  double w_width = 1.0;
  double v_width = 1.0;
  double coupling = 0.0;  // lambda

  double w(double dp) const;
  double v(double dq) const;
  void validate() const;
};

// <p1,q1|p2,q2> for the unit-width packets above; |result| <= 1.
Complex coherent_overlap(const PhasePoint& a, const PhasePoint& b);

// <p1,q1| P^2/(2m) |p2,q2>.
Complex coherent_kinetic_element(const PhasePoint& a, const PhasePoint& b, double mass);

// Orthonormal mode basis for a grid.  expansion.col(i) gives the coefficients
// of packet i in the orthonormal modes, so a_{p_i q_i} = a(expansion.col(i)).
struct ModeBasis {
  ModeSystem sys;
  Matrix inv_sqrt_overlap;  // S^{-1/2}, the orthonormalization transform
  Matrix expansion;         // S^{+1/2}
  double condition_number;  // of the overlap matrix S
};

ModeBasis build_basis(const PhaseSpaceGrid& grid, double cond_bound = 1e8);

// Matrix of P^2/(2m) compressed to the grid span, in the orthonormal basis.
Matrix kinetic_matrix(const PhaseSpaceGrid& grid, const ModeBasis& basis);

// One quartic monomial a*_{m0} a*_{m1} a_{m2} a_{m3} with its coefficient.
struct QuarticTerm {
  std::array<int, 4> modes;
  Complex coeff;
};

// Grid-level pair term: w(p_i-p_j) v(q_i-q_j) attached to
// a*_{phi_i} a*_{phi_j} a_{phi_j} a_{phi_i}.
struct PairTerm {
  int i = 0;
  int j = 0;
  double coeff = 0.0;
};

struct InteractionTerms {
  std::vector<PairTerm> pairs;      // ordered pairs i != j
  std::vector<QuarticTerm> quartic; // mode expansion of the pair terms
};

InteractionTerms interaction_terms(const PhaseSpaceGrid& grid, const ModeBasis& basis,
                                   const CutoffSpec& cutoff);

// Everything assemble_hamiltonian (and the doubled assembly) needs.
struct HamiltonianTerms {
  Matrix kinetic;                   // N x N Hermitian one-particle matrix
  InteractionTerms interaction;
  Matrix expansion;                 // packet -> mode expansion (from ModeBasis)
};

HamiltonianTerms make_hamiltonian_terms(const PhaseSpaceGrid& grid, const ModeBasis& basis,
                                        const CutoffSpec& cutoff);

// H = sum h_jk a*_j a_k + lambda * sum quartic terms.  Hermitian, even,
// commutes with the total number operator.
FockOperator assemble_hamiltonian(const ModeSystem& sys, const HamiltonianTerms& terms,
                                  double lambda);

// Dense matrices of the quadratic/quartic pieces (assembly kernels).
Matrix quadratic_matrix(const ModeSystem& sys, const Matrix& h);
Matrix quartic_matrix(const ModeSystem& sys, const std::vector<QuarticTerm>& terms);

// Gauge transformation: a(f) -> e^{i alpha} a(f); leaves number-conserving
// operators fixed.  Realized as conjugation by the gauge unitary with the
// sign chosen to produce that phase under the antilinear smearing convention.
FockOperator gauge_transform(const FockOperator& a, double alpha);

}  // namespace carlab
