#pragma once

// Crossed-product presentation of the full algebra over its even part.
// A pair (e1, e2) of even operators stands for the element e1 + e2 * U0,
// with the twisted product
//   (A1, A2)(B1, B2) = (A1 B1 + A2 alpha0(B2), A1 B2 + A2 alpha0(B1)),
// alpha0 = conjugation by U0.  The flattening X = e1 + e2 U0 is exactly
// multiplicative for this product (right multiplication by U0; the left
// placement is not a homomorphism).
//
// The cocycle V_t = tau_t(U0) U0 is even and unitary, satisfies
// V_t* = alpha0(V_t) and V_t alpha0(V_t) = 1 for every Hamiltonian, and
// controls how the dynamics moves the odd generator.

#include "carlab/dynamics.hpp"
#include "carlab/fock.hpp"

namespace carlab {

class CrossedPair {
 public:
  // Components must be even; parity checked at tolerance kParityTol.
  CrossedPair(FockOperator e1, FockOperator e2);

  const FockOperator& e1() const noexcept { return e1_; }
  const FockOperator& e2() const noexcept { return e2_; }

  static CrossedPair unit(const ModeSystem& sys);

 private:
  FockOperator e1_;
  FockOperator e2_;
};

// Twisted product per the rule above; u0 supplies alpha0.
CrossedPair cp_mul(const CrossedPair& x, const CrossedPair& y, const FockOperator& u0);

// e1 + e2 * U0.
FockOperator cp_flatten(const CrossedPair& x, const FockOperator& u0);

// Split X into (even part, odd part * U0); inverse of cp_flatten.
CrossedPair cp_lift(const FockOperator& x, const FockOperator& u0);

// alpha0(A) = U0 A U0 on even A; involutive.  Odd input rejected.
FockOperator alpha0(const FockOperator& a_even, const FockOperator& u0);

// V_t = tau_t(U0) U0; even, unitary, V_0 = 1.
FockOperator compute_Vt(const Propagator& p, const FockOperator& u0, double t);

// Symmetrized cocycle S_t = V_t + V_t* = {tau_t(U0), U0}.  The anticommutator
// of two self-adjoint odd field operators is a scalar whenever both stay
// LINEAR in creation/annihilation operators, which is exactly the
// number-conserving quasifree case; interacting dynamics push tau_t(U0) out
// of the linear span and S_t acquires an operator part.  This is the
// finite-size scalar-vs-operator contrast the diagnostics track.
FockOperator cocycle_symmetrized(const Propagator& p, const FockOperator& u0, double t);

struct ScalarDistance {
  Complex c;  // normalized trace of X
  double d;   // operator-norm distance ||X - c*1||
};

ScalarDistance scalar_distance(const FockOperator& x);

// || tau_t(U0 A U0) - V_t alpha0(tau_t A) V_t* ||; an exact identity for
// every Hamiltonian, so the return should be < 1e-10.
double conjugation_identity_check(const Propagator& p, const FockOperator& u0,
                                  const FockOperator& a_even, double t);

}  // namespace carlab
