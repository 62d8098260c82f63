#include "carlab/dynamics.hpp"

#include <cmath>

namespace carlab {

Propagator Propagator::diagonalize(const Matrix& h) {
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  const double herm = (h - h.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-10 * scale) {
    throw DomainError("Propagator: input is not Hermitian, deviation " + std::to_string(herm));
  }
  Matrix sym = (h + Matrix(h.adjoint())) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  if (es.info() != Eigen::Success) {
    throw ConvergenceError("Propagator: eigensolver failed");
  }
  return Propagator(es.eigenvalues(), es.eigenvectors());
}

Propagator Propagator::diagonalize(const FockOperator& h) { return diagonalize(h.matrix()); }

Matrix Propagator::unitary(double t) const {
  Vector phase(evals_.size());
  for (Eigen::Index i = 0; i < evals_.size(); ++i) {
    phase(i) = std::exp(Complex(0, evals_(i) * t));
  }
  return evecs_ * phase.asDiagonal() * evecs_.adjoint();
}

FockOperator Propagator::evolve(const FockOperator& a, double t) const {
  if (a.dim() != dim()) throw ShapeError("Propagator::evolve: dimension mismatch");
  if (t == 0.0) return a;
  Matrix u = unitary(t);
  return FockOperator(u * a.matrix() * u.adjoint(), a.parity());
}

Vector Propagator::apply_exp(const Vector& psi, Complex z) const {
  if (psi.size() != dim()) throw ShapeError("Propagator::apply_exp: dimension mismatch");
  Vector coeff = evecs_.adjoint() * psi;
  for (Eigen::Index i = 0; i < coeff.size(); ++i) {
    coeff(i) *= std::exp(z * evals_(i));
  }
  return evecs_ * coeff;
}

Matrix Propagator::exp_matrix(Complex z) const {
  Vector phase(evals_.size());
  for (Eigen::Index i = 0; i < evals_.size(); ++i) {
    phase(i) = std::exp(z * evals_(i));
  }
  return evecs_ * phase.asDiagonal() * evecs_.adjoint();
}

Vector quasifree_evolve(const Matrix& h, const Vector& f, double t) {
  if (h.rows() != h.cols() || h.rows() != f.size()) {
    throw ShapeError("quasifree_evolve: shape mismatch");
  }
  if (t == 0.0) return f;
  return Propagator::diagonalize(h).apply_exp(f, Complex(0, t));
}

namespace {

struct LanczosData {
  Matrix basis;        // dim x (m+1) orthonormal vectors (one extra)
  RealVector alpha;    // m diagonal entries
  RealVector beta;     // m-1 subdiagonal + trailing residual norm beta(m-1)
  int m = 0;           // number of basis vectors actually built
  bool invariant = false;  // happy breakdown: span is H-invariant
};

// Lanczos with full reorthogonalization (small m, accuracy first).
LanczosData lanczos(const LinearMap& h, const Vector& v0, int max_m, double breakdown) {
  const auto dim = v0.size();
  LanczosData out;
  out.basis.resize(dim, max_m + 1);
  out.alpha.resize(max_m);
  out.beta.resize(max_m);
  out.basis.col(0) = v0;
  Vector w(dim);
  double scale = 0.0;
  for (int j = 0; j < max_m; ++j) {
    h(out.basis.col(j), w);
    const double a = std::real(out.basis.col(j).dot(w));
    out.alpha(j) = a;
    w -= a * out.basis.col(j);
    if (j > 0) w -= out.beta(j - 1) * out.basis.col(j - 1);
    // full reorthogonalization pass
    for (int k = 0; k <= j; ++k) {
      w -= out.basis.col(k).dot(w) * out.basis.col(k);
    }
    const double b = w.norm();
    scale = std::max({scale, std::abs(a), b});
    out.m = j + 1;
    out.beta(j) = b;
    if (b <= breakdown * std::max(1.0, scale)) {
      out.invariant = true;
      return out;
    }
    out.basis.col(j + 1) = w / b;
  }
  return out;
}

}  // namespace

Vector krylov_apply_exp(const LinearMap& h, std::int64_t dim, const Vector& psi, Complex z,
                        const KrylovOptions& opt) {
  if (psi.size() != dim) throw ShapeError("krylov_apply_exp: dimension mismatch");
  const double total = std::abs(z);
  if (total == 0.0) return psi;
  const double psi_norm = psi.norm();
  if (psi_norm == 0.0) return psi;
  const Complex dir = z / total;

  Vector current = psi / psi_norm;
  double current_scale = psi_norm;  // running amplitude (can shrink in imaginary time)
  double done = 0.0;
  int substeps = 0;

  while (done < total) {
    if (++substeps > opt.max_substeps) {
      throw ConvergenceError("krylov_apply_exp: exceeded max substeps");
    }
    LanczosData ld = lanczos(h, current, opt.max_subspace, opt.breakdown);
    const int m = ld.m;

    // Tridiagonal eigensolve; exp acts on the first unit vector.
    RealMatrix tmat = RealMatrix::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      tmat(i, i) = ld.alpha(i);
      if (i + 1 < m) tmat(i, i + 1) = tmat(i + 1, i) = ld.beta(i);
    }
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(tmat);
    const RealVector& ev = es.eigenvalues();
    const RealMatrix& q = es.eigenvectors();

    auto small_exp = [&](double step) -> Vector {
      Vector c(m);
      for (int i = 0; i < m; ++i) {
        Complex acc(0, 0);
        for (int k = 0; k < m; ++k) {
          acc += q(i, k) * std::exp(dir * step * ev(k)) * q(0, k);
        }
        c(i) = acc;
      }
      return c;
    };

    double step = total - done;
    Vector coeff;
    if (ld.invariant) {
      coeff = small_exp(step);  // exact within the invariant subspace
    } else {
      const double budget = opt.tol * std::max(step / total, 1e-3);
      for (;;) {
        coeff = small_exp(step);
        // residual estimate: weight leaking through the last basis vector
        const double res = ld.beta(m - 1) * std::abs(coeff(m - 1)) * step;
        if (res <= budget || step <= total * 1e-12) break;
        step *= 0.5;
      }
      if (step <= total * 1e-12) {
        throw ConvergenceError("krylov_apply_exp: step size underflow (tol too tight?)");
      }
    }

    current = ld.basis.leftCols(ld.m) * coeff;
    const double nrm = current.norm();
    if (nrm == 0.0) return Vector::Zero(dim);
    current_scale *= nrm;
    current /= nrm;
    done += step;
  }
  return current_scale * current;
}

}  // namespace carlab
