#include "carlab/doubling.hpp"

#include <bit>
#include <cmath>
#include <random>

namespace carlab {

namespace {

int popcount(std::int64_t x) { return std::popcount(static_cast<std::uint64_t>(x)); }

double jw_sign(std::int64_t n, int k) {
  const std::int64_t below = n & ((std::int64_t{1} << k) - 1);
  return (popcount(below) & 1) ? -1.0 : 1.0;
}

constexpr double kInvSqrt2 = 0.70710678118654752440;

}  // namespace

// ---------------------------------------------------------------------------
// FieldOp

FieldOp::FieldOp(Vector alpha, Vector beta) : alpha_(std::move(alpha)), beta_(std::move(beta)) {
  if (alpha_.size() != beta_.size()) throw ShapeError("FieldOp: component size mismatch");
}

FieldOp FieldOp::annihilator(int modes, int mu) {
  Vector a = Vector::Zero(modes), b = Vector::Zero(modes);
  a(mu) = 1.0;
  return FieldOp(std::move(a), std::move(b));
}

FieldOp FieldOp::creator(int modes, int mu) {
  Vector a = Vector::Zero(modes), b = Vector::Zero(modes);
  b(mu) = 1.0;
  return FieldOp(std::move(a), std::move(b));
}

FieldOp FieldOp::adjoint() const { return FieldOp(beta_.conjugate(), alpha_.conjugate()); }

FieldOp operator+(const FieldOp& x, const FieldOp& y) {
  if (x.modes() != y.modes()) throw ShapeError("FieldOp: mode count mismatch");
  return FieldOp(x.alpha_ + y.alpha_, x.beta_ + y.beta_);
}

void FieldOp::apply(const Vector& in, Vector& out) const {
  const std::int64_t d = dim();
  if (in.size() != d) throw ShapeError("FieldOp::apply: dimension mismatch");
  out.setZero(d);
  for (int mu = 0; mu < modes(); ++mu) {
    const std::int64_t bit = std::int64_t{1} << mu;
    const Complex ca = alpha_(mu);
    if (ca != Complex(0, 0)) {
      for (std::int64_t n = 0; n < d; ++n) {
        if (n & bit) out(n ^ bit) += ca * jw_sign(n, mu) * in(n);
      }
    }
    const Complex cb = beta_(mu);
    if (cb != Complex(0, 0)) {
      for (std::int64_t n = 0; n < d; ++n) {
        if (!(n & bit)) out(n | bit) += cb * jw_sign(n, mu) * in(n);
      }
    }
  }
}

Vector FieldOp::apply(const Vector& in) const {
  Vector out;
  apply(in, out);
  return out;
}

Matrix FieldOp::to_dense() const {
  const std::int64_t d = dim();
  Matrix m(d, d);
  Vector col;
  for (std::int64_t j = 0; j < d; ++j) {
    apply(Vector::Unit(d, j), col);
    m.col(j) = col;
  }
  return m;
}

// ---------------------------------------------------------------------------
// DoubledRep

DoubledRep::DoubledRep(int n_direct_modes, int hard_cap) : n_(n_direct_modes) {
  if (n_ < 1) throw SizeError("DoubledRep: need at least one mode");
  if (2 * n_ > 2 * hard_cap || n_ > hard_cap) {
    throw SizeError("DoubledRep: " + std::to_string(n_) + " direct modes exceed the cap of " +
                    std::to_string(hard_cap) + " (doubled dim 4^N)");
  }
}

Vector DoubledRep::vacuum() const { return Vector::Unit(dim(), 0); }

FieldOp DoubledRep::embed_a(const Vector& f) const {
  if (f.size() != n_) throw ShapeError("embed_a: smearing vector length mismatch");
  Vector a = Vector::Zero(2 * n_), b = Vector::Zero(2 * n_);
  for (int k = 0; k < n_; ++k) {
    a(k) = kInvSqrt2 * std::conj(f(k));        // A(f) part
    b(n_ + k) = kInvSqrt2 * std::conj(f(k));   // B*(fbar) part
  }
  return FieldOp(std::move(a), std::move(b));
}

FieldOp DoubledRep::embed_a_dag(const Vector& f) const { return embed_a(f).adjoint(); }

FieldOp DoubledRep::embed_b(const Vector& f) const {
  if (f.size() != n_) throw ShapeError("embed_b: smearing vector length mismatch");
  Vector a = Vector::Zero(2 * n_), b = Vector::Zero(2 * n_);
  for (int k = 0; k < n_; ++k) {
    a(k) = kInvSqrt2 * std::conj(f(k));
    b(n_ + k) = -kInvSqrt2 * std::conj(f(k));
  }
  return FieldOp(std::move(a), std::move(b));
}

FieldOp DoubledRep::embed_b_dag(const Vector& f) const { return embed_b(f).adjoint(); }

FieldOp DoubledRep::big_a(const Vector& f) const {
  if (f.size() != n_) throw ShapeError("big_a: smearing vector length mismatch");
  Vector a = Vector::Zero(2 * n_), b = Vector::Zero(2 * n_);
  for (int k = 0; k < n_; ++k) a(k) = std::conj(f(k));
  return FieldOp(std::move(a), std::move(b));
}

FieldOp DoubledRep::big_a_dag(const Vector& f) const { return big_a(f).adjoint(); }

FieldOp DoubledRep::big_b(const Vector& f) const {
  if (f.size() != n_) throw ShapeError("big_b: smearing vector length mismatch");
  Vector a = Vector::Zero(2 * n_), b = Vector::Zero(2 * n_);
  for (int k = 0; k < n_; ++k) a(n_ + k) = std::conj(f(k));
  return FieldOp(std::move(a), std::move(b));
}

FieldOp DoubledRep::big_b_dag(const Vector& f) const { return big_b(f).adjoint(); }

FieldOp DoubledRep::embed_field(const Vector& f) const {
  return embed_a(f) + embed_a(f).adjoint();
}

void DoubledRep::apply_W(const Vector& in, Vector& out) const {
  const std::int64_t d = dim();
  if (in.size() != d) throw ShapeError("apply_W: dimension mismatch");
  out.resize(d);
  for (std::int64_t m = 0; m < d; ++m) {
    out(m) = (popcount(m) & 1) ? -in(m) : in(m);
  }
}

Vector DoubledRep::apply_W(const Vector& in) const {
  Vector out;
  apply_W(in, out);
  return out;
}

void DoubledRep::apply_Ntot(const Vector& in, Vector& out) const {
  const std::int64_t d = dim();
  if (in.size() != d) throw ShapeError("apply_Ntot: dimension mismatch");
  out.resize(d);
  for (std::int64_t m = 0; m < d; ++m) out(m) = static_cast<double>(popcount(m)) * in(m);
}

// ---------------------------------------------------------------------------
// Modular conjugation

ModularConjugation::ModularConjugation(int n_direct_modes) : n_(n_direct_modes) {
  if (n_ < 1) throw SizeError("ModularConjugation: need at least one mode");
}

void ModularConjugation::apply(const Vector& in, Vector& out) const {
  const std::int64_t d = dim();
  if (in.size() != d) throw ShapeError("ModularConjugation::apply: dimension mismatch");
  out.resize(d);
  const std::int64_t mask = (std::int64_t{1} << n_) - 1;
  for (std::int64_t m = 0; m < d; ++m) {
    const std::int64_t abits = m & mask;
    const std::int64_t bbits = m >> n_;
    const int p = popcount(abits);
    const int q = popcount(bbits);
    const int k = p + q;
    const int exp = (k * (k - 1)) / 2 + p * q;
    const double sign = (exp & 1) ? -1.0 : 1.0;
    out((abits << n_) | bbits) = sign * std::conj(in(m));
  }
}

Vector ModularConjugation::apply(const Vector& in) const {
  Vector out;
  apply(in, out);
  return out;
}

Matrix ModularConjugation::unitary_part_dense() const {
  const std::int64_t d = dim();
  Matrix u = Matrix::Zero(d, d);
  Vector col;
  for (std::int64_t m = 0; m < d; ++m) {
    apply(Vector::Unit(d, m), col);  // basis vectors are real: J e_m = U e_m
    u.col(m) = col;
  }
  return u;
}

ModularConjugation build_modular_J(const DoubledRep& rep) {
  ModularConjugation j(rep.n());
  // Verify the defining constraints on sampled vectors; a violation means a
  // sign-convention bug somewhere in the representation.
  std::mt19937_64 g(0x6d6f646a);
  std::normal_distribution<double> dist(0.0, 1.0);
  auto random_vec = [&](std::int64_t d) {
    Vector v(d);
    for (std::int64_t i = 0; i < d; ++i) v(i) = Complex(dist(g), dist(g));
    return Vector(v / v.norm());
  };
  const std::int64_t d = rep.dim();
  const Vector omega = rep.vacuum();
  double worst = (j.apply(omega) - omega).norm();
  for (int rep_i = 0; rep_i < 3; ++rep_i) {
    Vector v = random_vec(d);
    worst = std::max(worst, (j.apply(j.apply(v)) - v).norm());
    for (int k = 0; k < rep.n(); ++k) {
      Vector ek = Vector::Zero(rep.n());
      ek(k) = 1.0;
      // J a*(e_k) J = W b(e_k)
      Vector lhs = j.apply(rep.embed_a_dag(ek).apply(j.apply(v)));
      Vector rhs = rep.apply_W(rep.embed_b(ek).apply(v));
      worst = std::max(worst, (lhs - rhs).norm());
      // Tomita: the image commutes with the embedded generators
      const FieldOp al = rep.embed_a(ek);
      Vector c1 = al.apply(rhs) - rep.apply_W(rep.embed_b(ek).apply(al.apply(v)));
      worst = std::max(worst, c1.norm());
    }
  }
  if (worst > 1e-10) {
    throw AssemblyError(
        "build_modular_J: constraint system inconsistent (deviation " + std::to_string(worst) +
        "); sign conventions of the doubled representation are broken");
  }
  return j;
}

// ---------------------------------------------------------------------------
// DoubledOperator

DoubledOperator& DoubledOperator::add(Complex coeff, std::vector<FieldOp> factors) {
  terms_.push_back({coeff, std::move(factors)});
  return *this;
}

DoubledOperator& DoubledOperator::add_scalar(Complex coeff) {
  terms_.push_back({coeff, {}});
  return *this;
}

void DoubledOperator::apply(const Vector& in, Vector& out) const {
  out.setZero(in.size());
  Vector w, w2;
  for (const auto& term : terms_) {
    w = in;
    for (auto it = term.factors.rbegin(); it != term.factors.rend(); ++it) {
      it->apply(w, w2);
      w.swap(w2);
    }
    out += term.coeff * w;
  }
}

Vector DoubledOperator::apply(const Vector& in) const {
  Vector out;
  apply(in, out);
  return out;
}

DoubledOperator DoubledOperator::adjoint() const {
  DoubledOperator out;
  for (const auto& term : terms_) {
    std::vector<FieldOp> rev;
    rev.reserve(term.factors.size());
    for (auto it = term.factors.rbegin(); it != term.factors.rend(); ++it) {
      rev.push_back(it->adjoint());
    }
    out.add(std::conj(term.coeff), std::move(rev));
  }
  return out;
}

Matrix DoubledOperator::to_dense(std::int64_t dim) const {
  Matrix m(dim, dim);
  Vector col;
  for (std::int64_t jcol = 0; jcol < dim; ++jcol) {
    apply(Vector::Unit(dim, jcol), col);
    m.col(jcol) = col;
  }
  return m;
}

DoubledOperator doubled_quadratic(const DoubledRep& rep, const Vector& f, const Vector& g) {
  DoubledOperator op;
  op.add(1.0, {rep.embed_a_dag(f), rep.embed_a(g)});
  op.add(1.0, {rep.embed_b_dag(f), rep.embed_b(g)});
  op.add_scalar(-g.dot(f));  // <g|f>
  return op;
}

DoubledOperator doubled_quartic_counterterm(const DoubledRep& rep, const Vector& f,
                                            const Vector& g) {
  // Commutant-side compensation: the plain a-minus-b quartic leaves a
  // two-particle component on the vacuum; these b-quadratics cancel it
  // without touching commutators with the embedded a-algebra.
  const double nf = f.squaredNorm();
  const double ng = g.squaredNorm();
  const Complex fg = f.dot(g);  // <f|g>
  DoubledOperator op;
  op.add(ng, {rep.embed_b_dag(f), rep.embed_b(f)});
  op.add(-fg, {rep.embed_b_dag(f), rep.embed_b(g)});
  op.add(-std::conj(fg), {rep.embed_b_dag(g), rep.embed_b(f)});
  op.add(nf, {rep.embed_b_dag(g), rep.embed_b(g)});
  op.add_scalar(-(nf * ng - std::norm(fg)));
  return op;
}

DoubledOperator doubled_quartic(const DoubledRep& rep, const Vector& f, const Vector& g) {
  DoubledOperator op;
  op.add(1.0, {rep.embed_a_dag(f), rep.embed_a_dag(g), rep.embed_a(g), rep.embed_a(f)});
  op.add(-1.0, {rep.embed_b_dag(f), rep.embed_b_dag(g), rep.embed_b(g), rep.embed_b(f)});
  const double nf = f.squaredNorm();
  const double ng = g.squaredNorm();
  const Complex fg = f.dot(g);
  op.add(ng, {rep.embed_b_dag(f), rep.embed_b(f)});
  op.add(-fg, {rep.embed_b_dag(f), rep.embed_b(g)});
  op.add(-std::conj(fg), {rep.embed_b_dag(g), rep.embed_b(f)});
  op.add(nf, {rep.embed_b_dag(g), rep.embed_b(g)});
  op.add_scalar(-(nf * ng - std::norm(fg)));
  return op;
}

// ---------------------------------------------------------------------------
// DoubledHamiltonian

void DoubledHamiltonian::apply(const Vector& in, Vector& out) const {
  if (in.size() != dim_) throw ShapeError("DoubledHamiltonian::apply: dimension mismatch");
  out = scalar_ * in;
  const int mm = modes_;
  // normal part: sum normal(mu,nu) c†_mu c_nu
  for (int mu = 0; mu < mm; ++mu) {
    const std::int64_t bmu = std::int64_t{1} << mu;
    for (int nu = 0; nu < mm; ++nu) {
      const Complex t = normal_(mu, nu);
      if (t == Complex(0, 0)) continue;
      const std::int64_t bnu = std::int64_t{1} << nu;
      if (mu == nu) {
        for (std::int64_t n = 0; n < dim_; ++n) {
          if (n & bnu) out(n) += t * in(n);
        }
      } else {
        for (std::int64_t n = 0; n < dim_; ++n) {
          if (!(n & bnu)) continue;
          const std::int64_t mid = n ^ bnu;
          if (mid & bmu) continue;
          out(mid | bmu) += t * jw_sign(n, nu) * jw_sign(mid, mu) * in(n);
        }
      }
    }
  }
  // pair creation: sum create(mu,nu) c†_mu c†_nu
  for (int mu = 0; mu < mm; ++mu) {
    const std::int64_t bmu = std::int64_t{1} << mu;
    for (int nu = 0; nu < mm; ++nu) {
      const Complex t = create_(mu, nu);
      if (t == Complex(0, 0) || mu == nu) continue;
      const std::int64_t bnu = std::int64_t{1} << nu;
      for (std::int64_t n = 0; n < dim_; ++n) {
        if (n & bnu) continue;
        const std::int64_t mid = n | bnu;
        if (mid & bmu) continue;
        out(mid | bmu) += t * jw_sign(n, nu) * jw_sign(mid, mu) * in(n);
      }
    }
  }
  // pair annihilation: sum annih(mu,nu) c_mu c_nu
  for (int mu = 0; mu < mm; ++mu) {
    const std::int64_t bmu = std::int64_t{1} << mu;
    for (int nu = 0; nu < mm; ++nu) {
      const Complex t = annih_(mu, nu);
      if (t == Complex(0, 0) || mu == nu) continue;
      const std::int64_t bnu = std::int64_t{1} << nu;
      for (std::int64_t n = 0; n < dim_; ++n) {
        if (!(n & bnu)) continue;
        const std::int64_t mid = n ^ bnu;
        if (!(mid & bmu)) continue;
        out(mid ^ bmu) += t * jw_sign(n, nu) * jw_sign(mid, mu) * in(n);
      }
    }
  }
  // quartic pair terms
  Vector w, w2;
  for (const auto& pr : pairs_) {
    w = in;
    for (auto it = pr.a_ops.rbegin(); it != pr.a_ops.rend(); ++it) {
      it->apply(w, w2);
      w.swap(w2);
    }
    out += pr.coeff * w;
    w = in;
    for (auto it = pr.b_ops.rbegin(); it != pr.b_ops.rend(); ++it) {
      it->apply(w, w2);
      w.swap(w2);
    }
    out -= pr.coeff * w;
  }
}

Vector DoubledHamiltonian::apply(const Vector& in) const {
  Vector out;
  apply(in, out);
  return out;
}

LinearMap DoubledHamiltonian::map() const {
  return [this](const Vector& in, Vector& out) { this->apply(in, out); };
}

Matrix DoubledHamiltonian::to_dense() const {
  Matrix m(dim_, dim_);
  Vector col;
  for (std::int64_t j = 0; j < dim_; ++j) {
    apply(Vector::Unit(dim_, j), col);
    m.col(j) = col;
  }
  return m;
}

DoubledHamiltonian assemble_doubled_H(const DoubledRep& rep, const HamiltonianTerms& terms,
                                      double lambda) {
  const int n = rep.n();
  if (terms.kinetic.rows() != n) {
    throw ShapeError("assemble_doubled_H: kinetic matrix does not match the representation");
  }
  DoubledHamiltonian hd;
  hd.modes_ = 2 * n;
  hd.dim_ = rep.dim();
  hd.lambda_ = lambda;
  hd.normal_ = Matrix::Zero(2 * n, 2 * n);
  hd.create_ = Matrix::Zero(2 * n, 2 * n);
  hd.annih_ = Matrix::Zero(2 * n, 2 * n);

  // Quadratic block: sum h_jk (a*_j a_k + b*_j b_k - delta_jk)
  //                = sum h_jk (A†_j A_k - B†_k B_j).
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      const Complex h = terms.kinetic(j, k);
      hd.normal_(j, k) += h;
      hd.normal_(n + k, n + j) -= h;
    }
  }
  hd.renorm_.quadratic = terms.kinetic.trace().real();

  // Quartic pairs with their commutant counterterms.
  if (lambda != 0.0) {
    auto fold_bb = [&](Complex gamma, const Vector& u, const Vector& v) {
      // gamma * b*(u) b(v) into normal/create/annih/scalar components.
      for (int k = 0; k < n; ++k) {
        const Complex uk = u(k);
        if (uk == Complex(0, 0)) continue;
        for (int l = 0; l < n; ++l) {
          const Complex t = 0.5 * gamma * uk * std::conj(v(l));
          hd.normal_(k, l) += t;
          hd.create_(k, n + l) -= t;
          hd.annih_(n + k, l) -= t;
          hd.normal_(n + l, n + k) -= t;
        }
      }
      hd.scalar_ += 0.5 * gamma * v.dot(u);  // <v|u>
    };

    for (const auto& pt : terms.interaction.pairs) {
      const double coeff = lambda * pt.coeff;
      const Vector fi = terms.expansion.col(pt.i);
      const Vector fj = terms.expansion.col(pt.j);
      DoubledHamiltonian::QuarticPair qp;
      qp.coeff = coeff;
      qp.a_ops = {rep.embed_a_dag(fi), rep.embed_a_dag(fj), rep.embed_a(fj), rep.embed_a(fi)};
      qp.b_ops = {rep.embed_b_dag(fi), rep.embed_b_dag(fj), rep.embed_b(fj), rep.embed_b(fi)};
      hd.pairs_.push_back(std::move(qp));

      const double nf = fi.squaredNorm();
      const double ng = fj.squaredNorm();
      const Complex fg = fi.dot(fj);
      fold_bb(coeff * ng, fi, fi);
      fold_bb(-coeff * fg, fi, fj);
      fold_bb(-coeff * std::conj(fg), fj, fi);
      fold_bb(coeff * nf, fj, fj);
      const double cnum = coeff * (nf * ng - std::norm(fg));
      hd.scalar_ -= cnum;
      hd.renorm_.quartic += cnum;
    }
  }

  Vector res = hd.apply(rep.vacuum());
  hd.vacuum_residual_ = res.norm();
  if (hd.vacuum_residual_ > 1e-9) {
    throw AssemblyError("assemble_doubled_H: vacuum residual " +
                        std::to_string(hd.vacuum_residual_) + " exceeds 1e-9");
  }
  return hd;
}

// ---------------------------------------------------------------------------
// DirectBridge

DirectBridge::DirectBridge(const DoubledRep& rep, int hard_cap) : n_(rep.n()) {
  if (n_ > hard_cap) {
    throw SizeError("DirectBridge: dense bridge limited to N <= " + std::to_string(hard_cap));
  }
  const std::int64_t ddim = std::int64_t{1} << n_;   // direct dimension
  const std::int64_t fdim = rep.dim();               // doubled dimension
  ModeSystem direct(n_);
  std::vector<Matrix> ann, cre;
  for (int k = 0; k < n_; ++k) {
    ann.push_back(mode_annihilator(direct, k).matrix());
    cre.push_back(ann.back().adjoint());
  }
  Matrix par = parity_operator(direct).matrix();

  // In the trace-GNS picture the doubled basis vector with A-occupation S
  // and B-occupation T corresponds to the direct-space matrix
  //   M = A*_{s1}...A*_{sp} B*_{t1}...B*_{tq} (1)
  // with  A*_k(M) = (a†_k M + P M P a†_k)/sqrt(2),
  //       B*_k(M) = (a_k M - P M a_k P)/sqrt(2),
  // factors applied right to left.
  basis_.resize(fdim);
  const std::int64_t mask = ddim - 1;
  for (std::int64_t m = 0; m < fdim; ++m) {
    const std::int64_t abits = m & mask;
    const std::int64_t bbits = m >> n_;
    Matrix mat = Matrix::Identity(ddim, ddim);
    for (int t = n_ - 1; t >= 0; --t) {
      if (bbits & (std::int64_t{1} << t)) {
        mat = kInvSqrt2 * (ann[t] * mat - par * mat * ann[t] * par);
      }
    }
    for (int s = n_ - 1; s >= 0; --s) {
      if (abits & (std::int64_t{1} << s)) {
        mat = kInvSqrt2 * (cre[s] * mat + par * mat * par * cre[s]);
      }
    }
    basis_[m] = std::move(mat);
  }
}

Vector DirectBridge::vector_from_direct(const Matrix& z) const {
  const std::int64_t ddim = std::int64_t{1} << n_;
  if (z.rows() != ddim || z.cols() != ddim) {
    throw ShapeError("DirectBridge::vector_from_direct: operator has wrong shape");
  }
  const std::int64_t fdim = static_cast<std::int64_t>(basis_.size());
  Vector v(fdim);
  for (std::int64_t m = 0; m < fdim; ++m) {
    v(m) = (basis_[m].adjoint() * z).trace() / static_cast<double>(ddim);
  }
  return v;
}

Matrix DirectBridge::direct_from_vector(const Vector& v) const {
  const std::int64_t ddim = std::int64_t{1} << n_;
  if (v.size() != static_cast<std::int64_t>(basis_.size())) {
    throw ShapeError("DirectBridge::direct_from_vector: vector has wrong length");
  }
  Matrix z = Matrix::Zero(ddim, ddim);
  for (std::int64_t m = 0; m < static_cast<std::int64_t>(basis_.size()); ++m) {
    if (v(m) != Complex(0, 0)) z += v(m) * basis_[m];
  }
  return z;
}

// ---------------------------------------------------------------------------
// Diagnostics

namespace {

void require_sorted(const std::vector<double>& times) {
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    if (!(times[i] < times[i + 1])) {
      throw DomainError("time grid must be strictly increasing");
    }
  }
  if (!times.empty() && times.front() < 0.0) {
    throw DomainError("time grid must start at t >= 0");
  }
}

}  // namespace

UuPrimeSeries uu_prime_diagnostics(const DoubledRep& rep, const DoubledHamiltonian& hd,
                                   const Vector& f, const std::vector<double>& times,
                                   const KrylovOptions& opt) {
  require_sorted(times);
  if (std::abs(f.norm() - 1.0) > kAlgebraTol) {
    throw DomainError("uu_prime_diagnostics: f must be a unit vector");
  }
  const FieldOp create = rep.big_a_dag(f) + rep.big_b_dag(f);  // A*(f) + B*(f)
  const FieldOp annih = create.adjoint();

  UuPrimeSeries out;
  out.s.quantity = "uu_strong_norm";
  out.u.quantity = "uu_matrix_element";

  Vector phi = create.apply(rep.vacuum());
  double t_prev = 0.0;
  Vector chi;
  for (double t : times) {
    if (t > t_prev) phi = krylov_evolve_vector(hd.map(), hd.dim(), phi, t - t_prev, opt);
    t_prev = t;
    annih.apply(phi, chi);
    // Normalized so both values are 1 at t = 0 for unit f.
    const double s = 0.5 * chi.norm();
    out.s.push(t, s);
    out.u.push(t, 0.25 * chi.squaredNorm());
  }
  return out;
}

TimeSeriesRecord number_growth(const DoubledRep& rep, const DoubledHamiltonian& hd,
                               const Vector& f, const std::vector<double>& times,
                               const KrylovOptions& opt) {
  require_sorted(times);
  if (std::abs(f.norm() - 1.0) > kAlgebraTol) {
    throw DomainError("number_growth: f must be a unit vector");
  }
  const FieldOp create = rep.big_a_dag(f) + rep.big_b_dag(f);
  TimeSeriesRecord rec;
  rec.quantity = "number_growth";

  Vector psi = create.apply(rep.vacuum());
  double t_prev = 0.0;
  Vector nn;
  for (double t : times) {
    if (t > t_prev) psi = krylov_evolve_vector(hd.map(), hd.dim(), psi, t - t_prev, opt);
    t_prev = t;
    rep.apply_Ntot(psi, nn);
    const double val = std::real(psi.dot(nn)) / psi.squaredNorm();
    rec.push(t, val);
  }
  return rec;
}

std::vector<Vector> commutant_probes(const DoubledRep& rep, int max_probes) {
  std::vector<Vector> probes;
  probes.push_back(rep.vacuum());
  auto basis_vec = [&](int k) {
    Vector e = Vector::Zero(rep.n());
    e(k) = 1.0;
    return e;
  };
  for (int k = 0; k < rep.n() && static_cast<int>(probes.size()) < max_probes; ++k) {
    Vector v = rep.apply_W(rep.embed_b_dag(basis_vec(k)).apply(rep.vacuum()));
    probes.push_back(v / v.norm());
  }
  if (rep.n() >= 2 && static_cast<int>(probes.size()) < max_probes + 1) {
    Vector v = rep.embed_b_dag(basis_vec(1)).apply(rep.vacuum());
    v = rep.apply_W(v);
    v = rep.embed_b_dag(basis_vec(0)).apply(v);
    v = rep.apply_W(v);
    probes.push_back(v / v.norm());
  }
  return probes;
}

std::vector<TimeSeriesRecord> strong_VtVt_test(const DoubledRep& rep,
                                               const DoubledHamiltonian& hd, const Vector& f0,
                                               const std::vector<double>& times,
                                               const std::vector<Vector>& probes,
                                               const KrylovOptions& opt) {
  require_sorted(times);
  const FieldOp u0 = rep.embed_field(f0);
  auto apply_vt = [&](const Vector& v, double t) {
    Vector w = u0.apply(v);
    if (t != 0.0) w = krylov_evolve_vector(hd.map(), hd.dim(), w, t, opt);
    w = u0.apply(w);
    if (t != 0.0) w = krylov_evolve_vector(hd.map(), hd.dim(), w, -t, opt);
    return w;
  };

  std::vector<TimeSeriesRecord> out;
  for (std::size_t pi = 0; pi < probes.size(); ++pi) {
    TimeSeriesRecord plus1, minus1;
    plus1.quantity = "VtVt_dist_plus1";
    minus1.quantity = "VtVt_dist_minus1";
    plus1.metadata["probe"] = std::to_string(pi);
    minus1.metadata["probe"] = std::to_string(pi);
    for (double t : times) {
      Vector vv = apply_vt(apply_vt(probes[pi], t), t);
      plus1.push(t, (vv - probes[pi]).norm());
      minus1.push(t, (vv + probes[pi]).norm());
    }
    out.push_back(std::move(plus1));
    out.push_back(std::move(minus1));
  }
  return out;
}

GibbsRep gibbs_doubling(const ModeSystem& sys, const HamiltonianTerms& terms, double lambda,
                        double beta) {
  if (beta < 0.0) throw DomainError("gibbs_doubling: beta must be nonnegative");
  FockOperator h = assemble_hamiltonian(sys, terms, lambda);
  Propagator p = Propagator::diagonalize(h);
  DoubledRep rep(sys.n_modes());
  DirectBridge bridge(rep);
  Vector omega = bridge.vector_from_direct(p.exp_matrix(Complex(-beta / 2.0, 0.0)));
  omega /= omega.norm();
  return GibbsRep{rep, std::move(omega), beta, h.matrix(), lambda};
}

}  // namespace carlab
