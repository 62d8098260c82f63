#include "carlab/fock.hpp"

#include <bit>
#include <cmath>

namespace carlab {

namespace {

int popcount(std::int64_t x) { return std::popcount(static_cast<std::uint64_t>(x)); }

// Jordan-Wigner sign for removing/adding mode k at basis index n:
// (-1)^{number of occupied modes below k}.
double jw_sign(std::int64_t n, int k) {
  const std::int64_t below = n & ((std::int64_t{1} << k) - 1);
  return (popcount(below) & 1) ? -1.0 : 1.0;
}

}  // namespace

const char* to_string(Parity p) {
  switch (p) {
    case Parity::Even: return "even";
    case Parity::Odd: return "odd";
    default: return "mixed";
  }
}

ModeSystem::ModeSystem(int n_modes, int hard_cap) : n_modes_(n_modes) {
  if (n_modes < 1) {
    throw SizeError("ModeSystem: need at least one mode, got " + std::to_string(n_modes));
  }
  if (n_modes > hard_cap) {
    throw SizeError("ModeSystem: " + std::to_string(n_modes) +
                    " modes exceed the hard cap of " + std::to_string(hard_cap) +
                    " (dim would be 2^" + std::to_string(n_modes) + ")");
  }
}

Parity parity_of(const Matrix& a, double tol) {
  const std::int64_t d = a.rows();
  if (d != a.cols()) throw ShapeError("parity_of: matrix not square");
  double scale = a.cwiseAbs().maxCoeff();
  const double eff = tol * std::max(1.0, scale);
  double max_same = 0.0;   // entries between equal-parity sectors
  double max_cross = 0.0;  // entries between opposite-parity sectors
  for (std::int64_t j = 0; j < d; ++j) {
    const int pj = popcount(j) & 1;
    for (std::int64_t i = 0; i < d; ++i) {
      const double m = std::abs(a(i, j));
      if ((popcount(i) & 1) == pj) {
        if (m > max_same) max_same = m;
      } else {
        if (m > max_cross) max_cross = m;
      }
    }
  }
  const bool even_ok = max_cross <= eff;
  const bool odd_ok = max_same <= eff;
  if (even_ok && !odd_ok) return Parity::Even;
  if (odd_ok && !even_ok) return Parity::Odd;
  if (even_ok && odd_ok) return Parity::Even;  // zero operator
  return Parity::Mixed;
}

FockOperator::FockOperator(Matrix m, double parity_tol)
    : mat_(std::move(m)), parity_(parity_of(mat_, parity_tol)) {
  if (!mat_.allFinite()) throw DomainError("FockOperator: non-finite entries");
}

FockOperator::FockOperator(Matrix m, Parity known_parity)
    : mat_(std::move(m)), parity_(known_parity) {}

FockOperator FockOperator::identity(const ModeSystem& sys) {
  return FockOperator(Matrix::Identity(sys.dim(), sys.dim()), Parity::Even);
}

FockOperator FockOperator::zero(const ModeSystem& sys) {
  return FockOperator(Matrix::Zero(sys.dim(), sys.dim()), Parity::Even);
}

FockOperator FockOperator::adjoint() const {
  return FockOperator(mat_.adjoint(), parity_);
}

namespace {
Parity product_parity(Parity a, Parity b) {
  if (a == Parity::Mixed || b == Parity::Mixed) return Parity::Mixed;
  return (a == b) ? Parity::Even : Parity::Odd;
}
Parity sum_parity(Parity a, Parity b, const Matrix& m) {
  if (a == b && a != Parity::Mixed) return a;
  return parity_of(m);
}
}  // namespace

FockOperator operator*(const FockOperator& a, const FockOperator& b) {
  return FockOperator(a.mat_ * b.mat_, product_parity(a.parity_, b.parity_));
}

FockOperator operator+(const FockOperator& a, const FockOperator& b) {
  Matrix m = a.mat_ + b.mat_;
  Parity p = sum_parity(a.parity_, b.parity_, m);
  return FockOperator(std::move(m), p);
}

FockOperator operator-(const FockOperator& a, const FockOperator& b) {
  Matrix m = a.mat_ - b.mat_;
  Parity p = sum_parity(a.parity_, b.parity_, m);
  return FockOperator(std::move(m), p);
}

FockOperator operator*(const Complex& c, const FockOperator& a) {
  return FockOperator(c * a.mat_, a.parity_);
}

FockOperator operator*(double c, const FockOperator& a) {
  return FockOperator(c * a.mat_, a.parity_);
}

FockOperator FockOperator::operator-() const {
  return FockOperator(-mat_, parity_);
}

FockOperator commutator(const FockOperator& a, const FockOperator& b) {
  return FockOperator(a.matrix() * b.matrix() - b.matrix() * a.matrix());
}

FockOperator anticommutator(const FockOperator& a, const FockOperator& b) {
  return FockOperator(a.matrix() * b.matrix() + b.matrix() * a.matrix());
}

FockOperator mode_annihilator(const ModeSystem& sys, int k) {
  if (k < 0 || k >= sys.n_modes()) {
    throw ShapeError("mode_annihilator: mode index " + std::to_string(k) +
                     " out of range for N=" + std::to_string(sys.n_modes()));
  }
  const std::int64_t d = sys.dim();
  Matrix m = Matrix::Zero(d, d);
  const std::int64_t bit = std::int64_t{1} << k;
  for (std::int64_t n = 0; n < d; ++n) {
    if (n & bit) m(n ^ bit, n) = jw_sign(n, k);
  }
  return FockOperator(std::move(m), Parity::Odd);
}

std::vector<FockOperator> mode_annihilators(const ModeSystem& sys) {
  std::vector<FockOperator> ops;
  ops.reserve(sys.n_modes());
  for (int k = 0; k < sys.n_modes(); ++k) ops.push_back(mode_annihilator(sys, k));
  return ops;
}

FockOperator smeared_annihilator(const ModeSystem& sys, const Vector& f) {
  if (f.size() != sys.n_modes()) {
    throw ShapeError("smeared_annihilator: vector length " + std::to_string(f.size()) +
                     " does not match N=" + std::to_string(sys.n_modes()));
  }
  if (!f.allFinite()) throw DomainError("smeared_annihilator: non-finite smearing vector");
  const std::int64_t d = sys.dim();
  Matrix m = Matrix::Zero(d, d);
  for (int k = 0; k < sys.n_modes(); ++k) {
    const Complex c = std::conj(f(k));
    if (c == Complex(0, 0)) continue;
    const std::int64_t bit = std::int64_t{1} << k;
    for (std::int64_t n = 0; n < d; ++n) {
      if (n & bit) m(n ^ bit, n) += c * jw_sign(n, k);
    }
  }
  return FockOperator(std::move(m), Parity::Odd);
}

FockOperator smeared_creator(const ModeSystem& sys, const Vector& f) {
  return smeared_annihilator(sys, f).adjoint();
}

FockOperator u0_unitary(const ModeSystem& sys, const Vector& f0) {
  const double nrm = f0.norm();
  if (std::abs(nrm - 1.0) > kAlgebraTol) {
    throw DomainError("u0_unitary: f0 must have unit norm, got ||f0|| = " +
                      std::to_string(nrm));
  }
  FockOperator a = smeared_annihilator(sys, f0);
  return FockOperator(a.matrix() + a.matrix().adjoint(), Parity::Odd);
}

double operator_norm(const Matrix& a) {
  if (a.rows() == 0) return 0.0;
  if (!a.allFinite()) throw DomainError("operator_norm: non-finite entries");
  // sqrt of the top eigenvalue of the Gram matrix; adequate for sigma_max.
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.adjoint() * a, Eigen::EigenvaluesOnly);
  const double top = es.eigenvalues().maxCoeff();
  return std::sqrt(std::max(0.0, top));
}

double operator_norm(const FockOperator& a) { return operator_norm(a.matrix()); }

Complex normalized_trace(const Matrix& a) {
  return a.trace() / static_cast<double>(a.rows());
}

Complex normalized_trace(const FockOperator& a) { return normalized_trace(a.matrix()); }

FockOperator parity_operator(const ModeSystem& sys) {
  const std::int64_t d = sys.dim();
  Matrix m = Matrix::Zero(d, d);
  for (std::int64_t n = 0; n < d; ++n) m(n, n) = (popcount(n) & 1) ? -1.0 : 1.0;
  return FockOperator(std::move(m), Parity::Even);
}

FockOperator number_operator(const ModeSystem& sys) {
  const std::int64_t d = sys.dim();
  Matrix m = Matrix::Zero(d, d);
  for (std::int64_t n = 0; n < d; ++n) m(n, n) = static_cast<double>(popcount(n));
  return FockOperator(std::move(m), Parity::Even);
}

FockOperator even_part(const FockOperator& a) {
  const std::int64_t d = a.dim();
  Matrix m = a.matrix();
  for (std::int64_t j = 0; j < d; ++j) {
    const int pj = popcount(j) & 1;
    for (std::int64_t i = 0; i < d; ++i) {
      if ((popcount(i) & 1) != pj) m(i, j) = Complex(0, 0);
    }
  }
  return FockOperator(std::move(m), Parity::Even);
}

FockOperator odd_part(const FockOperator& a) {
  const std::int64_t d = a.dim();
  Matrix m = a.matrix();
  for (std::int64_t j = 0; j < d; ++j) {
    const int pj = popcount(j) & 1;
    for (std::int64_t i = 0; i < d; ++i) {
      if ((popcount(i) & 1) == pj) m(i, j) = Complex(0, 0);
    }
  }
  return FockOperator(std::move(m), Parity::Odd);
}

}  // namespace carlab
