#include "carlab/crossed.hpp"

namespace carlab {

namespace {
void require_even(const FockOperator& a, const char* who) {
  if (a.parity() != Parity::Even) {
    throw DomainError(std::string(who) + ": operator is not even (parity = " +
                      to_string(a.parity()) + ")");
  }
}
}  // namespace

CrossedPair::CrossedPair(FockOperator e1, FockOperator e2)
    : e1_(std::move(e1)), e2_(std::move(e2)) {
  require_even(e1_, "CrossedPair");
  require_even(e2_, "CrossedPair");
  if (e1_.dim() != e2_.dim()) throw ShapeError("CrossedPair: component dimension mismatch");
}

CrossedPair CrossedPair::unit(const ModeSystem& sys) {
  return CrossedPair(FockOperator::identity(sys), FockOperator::zero(sys));
}

FockOperator alpha0(const FockOperator& a_even, const FockOperator& u0) {
  require_even(a_even, "alpha0");
  return u0 * a_even * u0;
}

CrossedPair cp_mul(const CrossedPair& x, const CrossedPair& y, const FockOperator& u0) {
  FockOperator p1 = x.e1() * y.e1() + x.e2() * alpha0(y.e2(), u0);
  FockOperator p2 = x.e1() * y.e2() + x.e2() * alpha0(y.e1(), u0);
  return CrossedPair(std::move(p1), std::move(p2));
}

FockOperator cp_flatten(const CrossedPair& x, const FockOperator& u0) {
  return x.e1() + x.e2() * u0;
}

CrossedPair cp_lift(const FockOperator& x, const FockOperator& u0) {
  FockOperator even = even_part(x);
  FockOperator odd = odd_part(x);
  // odd * U0 is even and (odd * U0) * U0 = odd restores the flattening.
  return CrossedPair(std::move(even), odd * u0);
}

FockOperator compute_Vt(const Propagator& p, const FockOperator& u0, double t) {
  return p.evolve(u0, t) * u0;
}

FockOperator cocycle_symmetrized(const Propagator& p, const FockOperator& u0, double t) {
  FockOperator ut = p.evolve(u0, t);
  return anticommutator(ut, u0);
}

ScalarDistance scalar_distance(const FockOperator& x) {
  const Complex c = normalized_trace(x);
  Matrix dev = x.matrix();
  dev.diagonal().array() -= c;
  return {c, operator_norm(dev)};
}

double conjugation_identity_check(const Propagator& p, const FockOperator& u0,
                                  const FockOperator& a_even, double t) {
  require_even(a_even, "conjugation_identity_check");
  FockOperator vt = compute_Vt(p, u0, t);
  FockOperator lhs = p.evolve(u0 * a_even * u0, t);
  FockOperator rhs = vt * alpha0(p.evolve(a_even, t), u0) * vt.adjoint();
  return operator_norm(lhs - rhs);
}

}  // namespace carlab
