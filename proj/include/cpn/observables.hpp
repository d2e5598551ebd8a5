#pragma once

// Observables in both representations. Quantum forms take amplitude vectors;
// classical forms take chart points and never rebuild the state vector.
// Two-qubit quantities assume (a,b,c,d) <-> (|00>,|01>,|10>,|11>).

#include "cpn/chart.hpp"
#include "cpn/core.hpp"

namespace cpn {

inline constexpr double kDefaultSeparabilityEps = 1e-8;

namespace detail {

inline void require_two_qubits(Index n, const char* where) {
  if (n != 4) {
    throw DimensionError(std::string(where) + ": requires N = 4, got N = " +
                         std::to_string(n));
  }
}

}  // namespace detail

/// |a^i|^2. Sums to ‖psi‖^2.
template <typename Real>
RVector<Real> populations_quantum(const CVector<Real>& psi) {
  return psi.cwiseAbs2();
}

/// |x^i|^2 / 𝒩 at coordinate slots, 1/𝒩 at the pivot.
template <typename Real>
RVector<Real> populations_classical(const ChartPoint<Real>& p) {
  const Real nn = normalization(p);
  RVector<Real> out(p.dimension());
  for (Index k = 0; k < p.dimension(); ++k) {
    out(k) = k == p.pivot() ? Real(1) / nn : std::norm(p.coords()(p.slot(k))) / nn;
  }
  return out;
}

/// z = |a|^2 + |b|^2 - |c|^2 - |d|^2.
template <typename Real>
Real quaternionic_z_quantum(const CVector<Real>& psi) {
  detail::require_two_qubits(psi.size(), "quaternionic_z_quantum");
  return std::norm(psi(0)) + std::norm(psi(1)) - std::norm(psi(2)) - std::norm(psi(3));
}

/// Slots {0,1} count positive, {2,3} negative. At pivot 3 this is
/// (|x0|^2 + |x1|^2 - |x2|^2 - 1) / 𝒩.
template <typename Real>
Real quaternionic_z_classical(const ChartPoint<Real>& p) {
  detail::require_two_qubits(p.dimension(), "quaternionic_z_classical");
  const RVector<Real> pop = populations_classical(p);
  return pop(0) + pop(1) - pop(2) - pop(3);
}

/// C = 2 |ad - bc|.
template <typename Real>
Real concurrence_quantum(const CVector<Real>& psi) {
  detail::require_two_qubits(psi.size(), "concurrence_quantum");
  return Real(2) * std::abs(psi(0) * psi(3) - psi(1) * psi(2));
}

/// 2 |u0 u3 - u1 u2| / 𝒩 on the homogeneous representative; at pivot 3 this
/// is 2 |x0 - x1 x2| / 𝒩.
template <typename Real>
Real concurrence_classical(const ChartPoint<Real>& p) {
  detail::require_two_qubits(p.dimension(), "concurrence_classical");
  const CVector<Real> u = homogeneous(p);
  return Real(2) * std::abs(u(0) * u(3) - u(1) * u(2)) / normalization(p);
}

/// Numerical witness that the ray lies on the Segre variety CP^1 x CP^1 in
/// CP^3, i.e. the two qubits are in a product state.
template <typename Real>
bool is_separable(const ChartPoint<Real>& p, Real eps = Real(kDefaultSeparabilityEps)) {
  if (!(eps > Real(0))) throw ValidationError("is_separable: eps must be positive");
  return concurrence_classical(p) < eps;
}

/// <psi|H|psi>. Not divided by ‖psi‖^2.
template <typename Real>
Real energy(const HermitianOperator<Real>& h, const CVector<Real>& psi) {
  detail::require_same_dimension(h.dimension(), psi.size(), "energy");
  return psi.dot(h.matrix() * psi).real();
}

/// D / 𝒩 on the chart.
template <typename Real>
Real energy(const HermitianOperator<Real>& h, const ChartPoint<Real>& p) {
  detail::require_same_dimension(h.dimension(), p.dimension(), "energy");
  const CVector<Real> u = homogeneous(p);
  return u.dot(h.matrix() * u).real() / normalization(p);
}

}  // namespace cpn
