#include "carlab/model.hpp"

#include <bit>
#include <cmath>
#include <limits>

namespace carlab {

namespace {
int popcount(std::int64_t x) { return std::popcount(static_cast<std::uint64_t>(x)); }
double jw_sign(std::int64_t n, int k) {
  const std::int64_t below = n & ((std::int64_t{1} << k) - 1);
  return (popcount(below) & 1) ? -1.0 : 1.0;
}
}  // namespace

PhaseSpaceGrid::PhaseSpaceGrid(std::vector<PhasePoint> points, double mass)
    : points_(std::move(points)), mass_(mass) {
  if (points_.empty()) throw DomainError("PhaseSpaceGrid: empty grid");
  if (!(mass_ > 0.0)) throw DomainError("PhaseSpaceGrid: mass must be positive");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    for (std::size_t j = i + 1; j < points_.size(); ++j) {
      if (points_[i].p == points_[j].p && points_[i].q == points_[j].q) {
        throw DomainError("PhaseSpaceGrid: duplicate point at index " + std::to_string(j));
      }
    }
  }
}

PhaseSpaceGrid PhaseSpaceGrid::rectangular(int np, int nq, double dp, double dq, double mass) {
  if (np < 1 || nq < 1) throw DomainError("PhaseSpaceGrid: grid extents must be positive");
  std::vector<PhasePoint> pts;
  pts.reserve(static_cast<std::size_t>(np) * nq);
  const double p0 = -0.5 * dp * (np - 1);
  const double q0 = -0.5 * dq * (nq - 1);
  for (int a = 0; a < np; ++a) {
    for (int b = 0; b < nq; ++b) {
      pts.push_back({p0 + dp * a, q0 + dq * b});
    }
  }
  return PhaseSpaceGrid(std::move(pts), mass);
}

double CutoffSpec::w(double dp) const { return std::exp(-dp * dp / (2.0 * w_width * w_width)); }
double CutoffSpec::v(double dq) const { return std::exp(-dq * dq / (2.0 * v_width * v_width)); }

void CutoffSpec::validate() const {
  if (!(w_width > 0.0) || !(v_width > 0.0)) {
    throw DomainError("CutoffSpec: widths must be strictly positive");
  }
}

Complex coherent_overlap(const PhasePoint& a, const PhasePoint& b) {
  const double dq = a.q - b.q;
  const double dp = a.p - b.p;
  const double re = -0.25 * (dq * dq + dp * dp);
  const double im = 0.5 * (b.p - a.p) * (a.q + b.q);
  return std::exp(Complex(re, im));
}

Complex coherent_kinetic_element(const PhasePoint& a, const PhasePoint& b, double mass) {
  if (!(mass > 0.0)) throw DomainError("coherent_kinetic_element: mass must be positive");
  // In the momentum representation both packets are Gaussians centered at
  // their p labels; the second-moment integral reduces to
  // overlap * ((beta/2)^2 + 1/2) with beta = (p_a + p_b) + i (q_a - q_b).
  const Complex beta(a.p + b.p, a.q - b.q);
  return coherent_overlap(a, b) * ((beta * beta * 0.25) + 0.5) / (2.0 * mass);
}

ModeBasis build_basis(const PhaseSpaceGrid& grid, double cond_bound) {
  const int n = grid.size();
  Matrix s(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) s(i, j) = coherent_overlap(grid.points()[i], grid.points()[j]);
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(s);
  const RealVector ev = es.eigenvalues();
  const double lo = ev.minCoeff();
  const double hi = ev.maxCoeff();
  const double cond = (lo > 0.0) ? hi / lo : std::numeric_limits<double>::infinity();
  if (!(cond < cond_bound)) {
    throw ConditioningError(
        "build_basis: overlap matrix condition number " + std::to_string(cond) +
        " exceeds bound " + std::to_string(cond_bound) + " (grid too dense)");
  }
  Matrix inv_sqrt = es.eigenvectors() * ev.cwiseSqrt().cwiseInverse().asDiagonal() *
                    es.eigenvectors().adjoint();
  Matrix sqrt_s =
      es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
  return ModeBasis{ModeSystem(n), std::move(inv_sqrt), std::move(sqrt_s), cond};
}

Matrix kinetic_matrix(const PhaseSpaceGrid& grid, const ModeBasis& basis) {
  const int n = grid.size();
  if (basis.sys.n_modes() != n) throw ShapeError("kinetic_matrix: basis/grid size mismatch");
  Matrix k(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      k(i, j) = coherent_kinetic_element(grid.points()[i], grid.points()[j], grid.mass());
    }
  }
  Matrix h = basis.inv_sqrt_overlap * k * basis.inv_sqrt_overlap;
  Matrix ha = h.adjoint();
  return (h + ha) / 2.0;  // kill roundoff asymmetry
}

InteractionTerms interaction_terms(const PhaseSpaceGrid& grid, const ModeBasis& basis,
                                   const CutoffSpec& cutoff) {
  cutoff.validate();
  const int n = grid.size();
  if (basis.sys.n_modes() != n) throw ShapeError("interaction_terms: basis/grid size mismatch");
  InteractionTerms out;

  // W_{abcd} a*_a a*_b a_c a_d accumulated over ordered grid pairs (i, j),
  // i != j; the i = j term vanishes identically by antisymmetry.
  std::vector<Complex> w(static_cast<std::size_t>(n) * n * n * n, Complex(0, 0));
  auto at = [&](int a, int b, int c, int d) -> Complex& {
    return w[((static_cast<std::size_t>(a) * n + b) * n + c) * n + d];
  };

  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const auto& pi = grid.points()[i];
      const auto& pj = grid.points()[j];
      const double c = cutoff.w(pi.p - pj.p) * cutoff.v(pi.q - pj.q);
      out.pairs.push_back({i, j, c});
      // a*_{phi_i} a*_{phi_j} a_{phi_j} a_{phi_i} expanded in modes:
      // phi_i = expansion.col(i); creators linear, annihilators antilinear.
      const Vector fi = basis.expansion.col(i);
      const Vector fj = basis.expansion.col(j);
      for (int a = 0; a < n; ++a) {
        const Complex ca = c * fi(a);
        if (ca == Complex(0, 0)) continue;
        for (int b = 0; b < n; ++b) {
          const Complex cab = ca * fj(b);
          for (int cc = 0; cc < n; ++cc) {
            const Complex cabc = cab * std::conj(fj(cc));
            for (int d = 0; d < n; ++d) {
              at(a, b, cc, d) += cabc * std::conj(fi(d));
            }
          }
        }
      }
    }
  }

  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) {
        for (int d = 0; d < n; ++d) {
          const Complex v = at(a, b, c, d);
          if (v != Complex(0, 0)) out.quartic.push_back({{a, b, c, d}, v});
        }
      }
    }
  }
  return out;
}

HamiltonianTerms make_hamiltonian_terms(const PhaseSpaceGrid& grid, const ModeBasis& basis,
                                        const CutoffSpec& cutoff) {
  HamiltonianTerms t{kinetic_matrix(grid, basis), interaction_terms(grid, basis, cutoff),
                     basis.expansion};
  const double herm = (t.kinetic - t.kinetic.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-12) {
    throw AssemblyError("make_hamiltonian_terms: kinetic matrix not Hermitian, deviation " +
                        std::to_string(herm));
  }
  return t;
}

Matrix quadratic_matrix(const ModeSystem& sys, const Matrix& h) {
  if (h.rows() != sys.n_modes() || h.cols() != sys.n_modes()) {
    throw ShapeError("quadratic_matrix: one-particle matrix has wrong shape");
  }
  const std::int64_t d = sys.dim();
  Matrix m = Matrix::Zero(d, d);
  for (int j = 0; j < sys.n_modes(); ++j) {
    const std::int64_t bj = std::int64_t{1} << j;
    for (int k = 0; k < sys.n_modes(); ++k) {
      const Complex c = h(j, k);
      if (c == Complex(0, 0)) continue;
      const std::int64_t bk = std::int64_t{1} << k;
      for (std::int64_t nn = 0; nn < d; ++nn) {
        // a*_j a_k |nn>
        if (!(nn & bk)) continue;
        const std::int64_t mid = nn ^ bk;
        if (mid & bj) continue;
        const double sgn = jw_sign(nn, k) * jw_sign(mid, j);
        m(mid | bj, nn) += c * sgn;
      }
    }
  }
  return m;
}

Matrix quartic_matrix(const ModeSystem& sys, const std::vector<QuarticTerm>& terms) {
  const std::int64_t d = sys.dim();
  Matrix m = Matrix::Zero(d, d);
  for (const auto& t : terms) {
    const int a = t.modes[0], b = t.modes[1], c = t.modes[2], e = t.modes[3];
    const std::int64_t ba = std::int64_t{1} << a, bb = std::int64_t{1} << b,
                       bc = std::int64_t{1} << c, be = std::int64_t{1} << e;
    for (std::int64_t nn = 0; nn < d; ++nn) {
      // a*_a a*_b a_c a_e applied right to left
      if (!(nn & be)) continue;
      const std::int64_t s1 = nn ^ be;
      double sgn = jw_sign(nn, e);
      if (!(s1 & bc)) continue;
      const std::int64_t s2 = s1 ^ bc;
      sgn *= jw_sign(s1, c);
      if (s2 & bb) continue;
      const std::int64_t s3 = s2 | bb;
      sgn *= jw_sign(s2, b);
      if (s3 & ba) continue;
      sgn *= jw_sign(s3, a);
      m(s3 | ba, nn) += t.coeff * sgn;
    }
  }
  return m;
}

FockOperator assemble_hamiltonian(const ModeSystem& sys, const HamiltonianTerms& terms,
                                  double lambda) {
  Matrix h = quadratic_matrix(sys, terms.kinetic);
  if (lambda != 0.0) h += lambda * quartic_matrix(sys, terms.interaction.quartic);
  const double herm = operator_norm(Matrix(h - h.adjoint()));
  if (herm > 1e-10) {
    throw AssemblyError("assemble_hamiltonian: non-Hermitian assembly, deviation " +
                        std::to_string(herm));
  }
  Matrix ha = h.adjoint();
  h = (h + ha) / 2.0;
  return FockOperator(std::move(h), Parity::Even);
}

FockOperator gauge_transform(const FockOperator& a, double alpha) {
  const std::int64_t d = a.dim();
  // nu_alpha(A) = G A G* with G = diag(e^{-i alpha n}); under the antilinear
  // smearing convention this sends a(f) to e^{i alpha} a(f).
  Vector g(d);
  for (std::int64_t n = 0; n < d; ++n) {
    g(n) = std::exp(Complex(0, -alpha * popcount(n)));
  }
  Matrix m = g.asDiagonal() * a.matrix() * g.conjugate().asDiagonal();
  return FockOperator(std::move(m), a.parity());
}

}  // namespace carlab
