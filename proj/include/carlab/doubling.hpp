#pragma once

// GNS representation of the tracial state as the vacuum of a doubled
// 2N-mode algebra.  Modes 0..N-1 carry A_k, modes N..2N-1 carry B_k, and
// the physical operators are the Bogoliubov combinations
//   a(f) = (A(f) + B*(fbar))/sqrt(2),   b(f) = (A(f) - B*(fbar))/sqrt(2),
// for which <Omega| embed(X) |Omega> reproduces the normalized trace.
// The even b-algebra commutes with the full a-algebra and generates the
// commutant together with W b(f), b*(g) W.
//
// The doubled Hamiltonian acts as the direct dynamics on the a-side and
// with opposite sign on the commutant side, annihilates the vacuum, and is
// odd under the modular conjugation J.

#include <optional>

#include "carlab/dynamics.hpp"
#include "carlab/fock.hpp"
#include "carlab/model.hpp"
#include "carlab/timeseries.hpp"

namespace carlab {

// sum_mu alpha_mu c_mu + beta_mu c†_mu on an M-mode Jordan-Wigner space.
class FieldOp {
 public:
  FieldOp(Vector alpha, Vector beta);

  static FieldOp annihilator(int modes, int mu);
  static FieldOp creator(int modes, int mu);

  const Vector& alpha() const noexcept { return alpha_; }
  const Vector& beta() const noexcept { return beta_; }
  int modes() const noexcept { return static_cast<int>(alpha_.size()); }
  std::int64_t dim() const noexcept { return std::int64_t{1} << modes(); }

  FieldOp adjoint() const;
  friend FieldOp operator+(const FieldOp& x, const FieldOp& y);

  void apply(const Vector& in, Vector& out) const;
  Vector apply(const Vector& in) const;
  Matrix to_dense() const;

 private:
  Vector alpha_, beta_;
};

// The doubled mode system with its distinguished vectors and operators.
class DoubledRep {
 public:
  explicit DoubledRep(int n_direct_modes, int hard_cap = kDefaultModeCap);

  int n() const noexcept { return n_; }                 // direct modes
  int doubled_modes() const noexcept { return 2 * n_; }
  std::int64_t dim() const noexcept { return std::int64_t{1} << (2 * n_); }

  Vector vacuum() const;

  // Bogoliubov pair (f of length N; fbar handled internally).
  FieldOp embed_a(const Vector& f) const;       // a(f), antilinear in f
  FieldOp embed_a_dag(const Vector& f) const;   // a*(f)
  FieldOp embed_b(const Vector& f) const;       // b(f)
  FieldOp embed_b_dag(const Vector& f) const;   // b*(f)

  // Auxiliary modes.
  FieldOp big_a(const Vector& f) const;         // A(f)
  FieldOp big_a_dag(const Vector& f) const;
  FieldOp big_b(const Vector& f) const;
  FieldOp big_b_dag(const Vector& f) const;

  // U0-type generator a(f) + a*(f) as a single field operator.
  FieldOp embed_field(const Vector& f) const;

  void apply_W(const Vector& in, Vector& out) const;   // (-1)^{total number}
  Vector apply_W(const Vector& in) const;
  void apply_Ntot(const Vector& in, Vector& out) const;  // total number operator

 private:
  int n_;
};

// Modular conjugation of the tracial vacuum: antiunitary involution with
// J Omega = Omega, J embed(X) J in the commutant, and J(X Omega) = X* Omega.
// On the occupation basis it conjugates coordinates and exchanges the A and
// B occupations with the sign (-1)^{k(k-1)/2 + p q} (k total, p = A-count,
// q = B-count); the closed form is verified against its defining relations
// at construction and against a brute-force constraint solve in the tests.
class ModularConjugation {
 public:
  explicit ModularConjugation(int n_direct_modes);

  void apply(const Vector& in, Vector& out) const;
  Vector apply(const Vector& in) const;
  int n() const noexcept { return n_; }
  std::int64_t dim() const noexcept { return std::int64_t{1} << (2 * n_); }

  // Unitary part U with J = U * (coordinate conjugation).
  Matrix unitary_part_dense() const;

 private:
  int n_;
};

// Builds J and verifies J|Omega> = |Omega>, J^2 = 1, J a*(f) J = W b(f) and
// the commutant property on sampled vectors; throws AssemblyError if the
// constraint system is violated (a sign-convention bug).
ModularConjugation build_modular_J(const DoubledRep& rep);

// Sum of scaled products of field operators; factors act right-to-left.
class DoubledOperator {
 public:
  DoubledOperator() = default;

  DoubledOperator& add(Complex coeff, std::vector<FieldOp> factors);
  DoubledOperator& add_scalar(Complex coeff);

  void apply(const Vector& in, Vector& out) const;
  Vector apply(const Vector& in) const;
  DoubledOperator adjoint() const;
  Matrix to_dense(std::int64_t dim) const;

 private:
  struct Term {
    Complex coeff;
    std::vector<FieldOp> factors;
  };
  std::vector<Term> terms_;
};

// a*(f)a(g) + b*(f)b(g) - <g|f>; annihilates the vacuum and restricts to
// a*(f)a(g) on the a-algebra.  Equals A*(f)A(g) - B*(gbar)B(fbar).
DoubledOperator doubled_quadratic(const DoubledRep& rep, const Vector& f, const Vector& g);

// a*(f)a*(g)a(g)a(f) - b*(f)b*(g)b(g)b(f) + commutant-side quadratic
// counterterm + scalar, the combination that annihilates the vacuum while
// restricting to the plain pair interaction on the a-algebra.
DoubledOperator doubled_quartic(const DoubledRep& rep, const Vector& f, const Vector& g);

// The commutant counterterm of doubled_quartic on its own (diagnostics).
DoubledOperator doubled_quartic_counterterm(const DoubledRep& rep, const Vector& f,
                                            const Vector& g);

// Matrix-free doubled Hamiltonian: fused quadratic kernel + quartic pairs.
class DoubledHamiltonian {
 public:
  void apply(const Vector& in, Vector& out) const;
  Vector apply(const Vector& in) const;
  LinearMap map() const;
  Matrix to_dense() const;

  std::int64_t dim() const noexcept { return dim_; }
  double lambda() const noexcept { return lambda_; }
  double vacuum_residual() const noexcept { return vacuum_residual_; }

  struct Renormalization {
    double quadratic = 0.0;  // subtracted <g|f>-type scalars: tr(h)
    double quartic = 0.0;    // subtracted pair-counterterm scalars
  };
  const Renormalization& renormalization() const noexcept { return renorm_; }

  friend DoubledHamiltonian assemble_doubled_H(const DoubledRep& rep,
                                               const HamiltonianTerms& terms, double lambda);

 private:
  struct QuarticPair {
    double coeff;                 // lambda * w v pair coefficient
    std::vector<FieldOp> a_ops;   // a*(fi) a*(fj) a(fj) a(fi), left to right
    std::vector<FieldOp> b_ops;
  };

  int modes_ = 0;  // 2N
  std::int64_t dim_ = 0;
  double lambda_ = 0.0;
  Matrix normal_;   // sum normal(mu,nu) c†_mu c_nu
  Matrix create_;   // sum create(mu,nu) c†_mu c†_nu
  Matrix annih_;    // sum annih(mu,nu) c_mu c_nu
  Complex scalar_ = 0.0;
  std::vector<QuarticPair> pairs_;
  Renormalization renorm_;
  double vacuum_residual_ = 0.0;
};

// H^ = sum h_jk (a*_j a_k + b*_j b_k - delta_jk) + lambda * pair quartics;
// annihilates the vacuum (AssemblyError above 1e-9) and implements the
// direct dynamics on the embedded a-algebra.
DoubledHamiltonian assemble_doubled_H(const DoubledRep& rep, const HamiltonianTerms& terms,
                                      double lambda);

// Identification of the doubled space with direct-space matrices under the
// trace inner product: basis_matrix(m) is the direct operator M_m with
// embed(M_m)|Omega> = e_m.  vector_from_direct(Z) returns embed(Z)|Omega>
// for an arbitrary dense direct-space operator Z.
class DirectBridge {
 public:
  explicit DirectBridge(const DoubledRep& rep, int hard_cap = 5);

  Vector vector_from_direct(const Matrix& z) const;   // embed(Z)|Omega>
  Matrix direct_from_vector(const Vector& v) const;   // inverse map
  const Matrix& basis_matrix(std::int64_t m) const { return basis_[m]; }

 private:
  int n_;
  std::vector<Matrix> basis_;
};

struct UuPrimeSeries {
  TimeSeriesRecord s;  // s(t) = ||(A+B) e^{-iHt} (A*+B*)|Omega>|| / 2
  TimeSeriesRecord u;  // u(t) = <...>/4, equals s(t)^2; both normalized to 1 at t=0
};

// Strong-convergence diagnostic of the gauge-broken number flow (unit f).
UuPrimeSeries uu_prime_diagnostics(const DoubledRep& rep, const DoubledHamiltonian& hd,
                                   const Vector& f, const std::vector<double>& times,
                                   const KrylovOptions& opt = {});

// n(t) = <psi_t| N_tot |psi_t> / <psi_t|psi_t>, psi_t = e^{-iHt}(A*+B*)(f)|Omega>.
TimeSeriesRecord number_growth(const DoubledRep& rep, const DoubledHamiltonian& hd,
                               const Vector& f, const std::vector<double>& times,
                               const KrylovOptions& opt = {});

// Distances ||(V^_t V^_t -+ 1) probe|| with V^_t the cocycle computed through
// e^{iH^t} in the embedded algebra.  One record per probe and sign; the
// record labeled dist_plus1 measures distance to +1 (zero at t = 0).
std::vector<TimeSeriesRecord> strong_VtVt_test(const DoubledRep& rep,
                                               const DoubledHamiltonian& hd, const Vector& f0,
                                               const std::vector<double>& times,
                                               const std::vector<Vector>& probes,
                                               const KrylovOptions& opt = {});

// Default commutant probe family {Omega, W b*(e_k) Omega, W b*(e_j) W b*(e_k) Omega}.
std::vector<Vector> commutant_probes(const DoubledRep& rep, int max_probes = 4);

// Purification of the Gibbs state of the direct Hamiltonian at inverse
// temperature beta; beta = 0 reproduces the tracial vacuum.
struct GibbsRep {
  DoubledRep rep;
  Vector omega;          // |Omega_beta>
  double beta;
  Matrix direct_h;       // dense direct-space H
  double lambda;
};

GibbsRep gibbs_doubling(const ModeSystem& sys, const HamiltonianTerms& terms, double lambda,
                        double beta);

}  // namespace carlab
