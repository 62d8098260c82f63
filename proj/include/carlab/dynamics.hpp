#pragma once

// Heisenberg evolution tau_t A = e^{iHt} A e^{-iHt} from dense spectral data,
// the quasifree one-particle fast path, and an adaptive Lanczos propagator
// for vectors on spaces too large for dense matrices.

#include <functional>

#include "carlab/fock.hpp"

namespace carlab {

// Matrix-free self-adjoint action: out = H * in (out is preallocated).
using LinearMap = std::function<void(const Vector&, Vector&)>;

class Propagator {
 public:
  // Spectral decomposition of a Hermitian H; eigenvalues ascending.
  static Propagator diagonalize(const FockOperator& h);
  static Propagator diagonalize(const Matrix& h);

  const RealVector& eigenvalues() const noexcept { return evals_; }
  const Matrix& eigenvectors() const noexcept { return evecs_; }
  std::int64_t dim() const noexcept { return evals_.size(); }

  // e^{iHt}
  Matrix unitary(double t) const;

  // tau_t A = e^{iHt} A e^{-iHt}
  FockOperator evolve(const FockOperator& a, double t) const;

  // e^{zH} psi for complex z (dense spectral application).
  Vector apply_exp(const Vector& psi, Complex z) const;

  // e^{zH} as a dense matrix.
  Matrix exp_matrix(Complex z) const;

 private:
  Propagator(RealVector evals, Matrix evecs)
      : evals_(std::move(evals)), evecs_(std::move(evecs)) {}

  RealVector evals_;
  Matrix evecs_;
};

inline FockOperator evolve_operator(const Propagator& p, const FockOperator& a, double t) {
  return p.evolve(a, t);
}

// e^{iht} f for the one-particle Hamiltonian h.  Under the antilinear
// smearing convention the lifted identity is tau_t a(f) = a(e^{iht} f)
// with this sign exactly (checked against evolve_operator in the tests).
Vector quasifree_evolve(const Matrix& h, const Vector& f, double t);

struct KrylovOptions {
  double tol = 1e-9;       // total error budget for one propagation
  int max_subspace = 40;   // Lanczos basis size per substep
  int max_substeps = 100000;
  double breakdown = 1e-13;  // happy-breakdown threshold (relative)
};

// e^{z H} psi for a self-adjoint matrix-free action, z = -it (real time)
// or a negative real number (imaginary time); adaptive substeps sized by a
// residual estimate.
Vector krylov_apply_exp(const LinearMap& h, std::int64_t dim, const Vector& psi, Complex z,
                        const KrylovOptions& opt = {});

// e^{-iHt} psi.
inline Vector krylov_evolve_vector(const LinearMap& h, std::int64_t dim, const Vector& psi,
                                   double t, const KrylovOptions& opt = {}) {
  return krylov_apply_exp(h, dim, psi, Complex(0, -t), opt);
}

}  // namespace carlab
