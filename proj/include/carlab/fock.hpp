#pragma once

// Finite-mode representation of the fermionic CAR algebra on the 2^N
// antisymmetric Fock space, realized by Jordan-Wigner matrices.
//
// Smearing convention: a(f) is ANTILINEAR in f and a*(f) is linear,
//   a(f) = sum_k conj(f_k) a_k,   a*(f) = sum_k f_k a*_k,
// so that {a(f), a*(g)} = <f|g> with the physics inner product
// <f|g> = sum_k conj(f_k) g_k.  Equivalently {a(g), a*(f)} = <g|f>.

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "carlab/errors.hpp"

namespace carlab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

inline constexpr double kAlgebraTol = 1e-12;  // algebraic identity tolerance
inline constexpr double kParityTol = 1e-12;   // parity classification tolerance
inline constexpr int kDefaultModeCap = 12;

enum class Parity { Even, Odd, Mixed };

const char* to_string(Parity p);

// A fixed number of fermionic modes; dim = 2^N.  Basis index bit k is the
// occupation of mode k; the canonical basis vector with occupied set S is
// the ordered product of creators a*_{s1}...a*_{sk} (ascending) on vacuum.
class ModeSystem {
 public:
  explicit ModeSystem(int n_modes, int hard_cap = kDefaultModeCap);

  int n_modes() const noexcept { return n_modes_; }
  std::int64_t dim() const noexcept { return std::int64_t{1} << n_modes_; }

  friend bool operator==(const ModeSystem& a, const ModeSystem& b) {
    return a.n_modes_ == b.n_modes_;
  }

 private:
  int n_modes_;
};

// Dense operator on the Fock space with a cached parity tag.  Immutable after
// construction: all arithmetic returns new values, safe for concurrent reads.
class FockOperator {
 public:
  explicit FockOperator(Matrix m, double parity_tol = kParityTol);
  FockOperator(Matrix m, Parity known_parity);  // trusted tag, no scan

  static FockOperator identity(const ModeSystem& sys);
  static FockOperator zero(const ModeSystem& sys);

  const Matrix& matrix() const noexcept { return mat_; }
  Parity parity() const noexcept { return parity_; }
  std::int64_t dim() const noexcept { return mat_.rows(); }

  FockOperator adjoint() const;

  friend FockOperator operator*(const FockOperator& a, const FockOperator& b);
  friend FockOperator operator+(const FockOperator& a, const FockOperator& b);
  friend FockOperator operator-(const FockOperator& a, const FockOperator& b);
  friend FockOperator operator*(const Complex& c, const FockOperator& a);
  friend FockOperator operator*(double c, const FockOperator& a);
  FockOperator operator-() const;

 private:
  Matrix mat_;
  Parity parity_;
};

FockOperator commutator(const FockOperator& a, const FockOperator& b);
FockOperator anticommutator(const FockOperator& a, const FockOperator& b);

// Jordan-Wigner annihilators a_1..a_N with exact CAR:
// {a_j,a_k} = 0, {a_j,a*_k} = delta_jk.
std::vector<FockOperator> mode_annihilators(const ModeSystem& sys);
FockOperator mode_annihilator(const ModeSystem& sys, int k);

// a(f) = sum_k conj(f_k) a_k (antilinear; see file header).
FockOperator smeared_annihilator(const ModeSystem& sys, const Vector& f);
// a*(f) = sum_k f_k a*_k (linear).
FockOperator smeared_creator(const ModeSystem& sys, const Vector& f);

// U_0 = a(f0) + a*(f0); requires ||f0|| = 1.  Self-adjoint, unitary, odd.
FockOperator u0_unitary(const ModeSystem& sys, const Vector& f0);

// Largest singular value.
double operator_norm(const FockOperator& a);
double operator_norm(const Matrix& a);

// trace / 2^N: the tracial state.
Complex normalized_trace(const FockOperator& a);
Complex normalized_trace(const Matrix& a);

// P with P^2 = 1 and P a_k P = -a_k; diagonal (-1)^{occupation count}.
FockOperator parity_operator(const ModeSystem& sys);

Parity parity_of(const Matrix& a, double tol = kParityTol);
inline Parity parity_of(const FockOperator& a, double tol = kParityTol) {
  return parity_of(a.matrix(), tol);
}

// N^ = sum_k a*_k a_k, diagonal popcount.
FockOperator number_operator(const ModeSystem& sys);

// Even/odd decomposition: A = even_part(A) + odd_part(A).
FockOperator even_part(const FockOperator& a);
FockOperator odd_part(const FockOperator& a);

}  // namespace carlab
