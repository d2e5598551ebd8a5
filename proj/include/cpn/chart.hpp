#pragma once

// Affine charts of CP^{N-1}.
//
// A ray [a^0 : ... : a^{N-1}] with a^p != 0 is represented in chart p by the
// N-1 inhomogeneous coordinates x = (a^k / a^p)_{k != p}, listed in ascending
// k. The homogeneous representative u has u_p = 1 and u_k = x for k != p, and
// |psi> = u / sqrt(𝒩) with 𝒩 = 1 + |x|^2.
//
// Matrix convention for the Kähler forms: entry (j,k) pairs the holomorphic
// index j with the antiholomorphic index k,
//   metric(j,k)     = 2 d^2 K / d xbar^j d x^k = 2 (delta_jk / 𝒩 - x^j xbar^k / 𝒩^2)
//   symplectic(j,k) = (i/2) metric(j,k)
//   inverse(j,k)    = -i 𝒩 (delta_jk + x^j xbar^k)
// so that symplectic * inverse = I as plain matrices.

#include "cpn/core.hpp"

#include <cstddef>

namespace cpn {

inline constexpr double kDefaultPivotFloor = 1e-12;

template <typename Real>
using HermitianForm = CMatrix<Real>;

template <typename Real = double>
class ChartPoint {
 public:
  ChartPoint(Index pivot, CVector<Real> coords) : pivot_(pivot), coords_(std::move(coords)) {
    if (coords_.size() < 1) {
      throw DimensionError("ChartPoint: needs at least one coordinate");
    }
    if (pivot_ < 0 || pivot_ > coords_.size()) {
      throw DimensionError("ChartPoint: pivot " + std::to_string(pivot_) +
                           " outside [0, " + std::to_string(coords_.size()) + "]");
    }
    if (!detail::all_finite(coords_)) {
      throw ValidationError("ChartPoint: non-finite coordinate");
    }
  }

  /// N, the dimension of the Hilbert space (coords has N-1 entries).
  Index dimension() const noexcept { return coords_.size() + 1; }
  Index pivot() const noexcept { return pivot_; }
  const CVector<Real>& coords() const noexcept { return coords_; }

  /// Basis index of coordinate slot j.
  Index basis_index(Index j) const noexcept { return j < pivot_ ? j : j + 1; }
  /// Coordinate slot of basis index k != pivot.
  Index slot(Index k) const noexcept { return k < pivot_ ? k : k - 1; }

 private:
  Index pivot_;
  CVector<Real> coords_;
};

/// Homogeneous vector u with u_pivot = 1.
template <typename Real>
CVector<Real> homogeneous(const ChartPoint<Real>& p) {
  const Index n = p.dimension();
  CVector<Real> u(n);
  const Index piv = p.pivot();
  u.head(piv) = p.coords().head(piv);
  u(piv) = Complex<Real>(1);
  u.tail(n - piv - 1) = p.coords().tail(n - piv - 1);
  return u;
}

/// Index of the largest-modulus amplitude; ties go to the lowest index.
template <typename Derived>
Index select_pivot(const Eigen::MatrixBase<Derived>& amplitudes) {
  Index best = 0;
  auto best_mod = std::norm(amplitudes(0));
  for (Index i = 1; i < amplitudes.size(); ++i) {
    const auto m = std::norm(amplitudes(i));
    if (m > best_mod) {
      best = i;
      best_mod = m;
    }
  }
  return best;
}

template <typename Real>
Index select_pivot(const StateVector<Real>& psi) {
  return select_pivot(psi.amplitudes());
}

/// x^k = a^k / a^pivot for k != pivot. Accepts any nonzero vector, since the
/// result only depends on the ray.
template <typename Real>
ChartPoint<Real> to_chart(const CVector<Real>& amplitudes, Index pivot,
                          Real floor = Real(kDefaultPivotFloor)) {
  const Index n = amplitudes.size();
  if (n < 2) throw DimensionError("to_chart: dimension must be at least 2");
  if (pivot < 0 || pivot >= n) throw DimensionError("to_chart: pivot out of range");
  const Complex<Real> divisor = amplitudes(pivot);
  if (!(std::abs(divisor) >= floor)) {
    throw ZeroPivotError("to_chart: |psi[" + std::to_string(pivot) + "]| = " +
                         std::to_string(static_cast<double>(std::abs(divisor))) +
                         " is below the floor");
  }
  CVector<Real> coords(n - 1);
  coords.head(pivot) = amplitudes.head(pivot) / divisor;
  coords.tail(n - pivot - 1) = amplitudes.tail(n - pivot - 1) / divisor;
  return ChartPoint<Real>(pivot, std::move(coords));
}

template <typename Real>
ChartPoint<Real> to_chart(const StateVector<Real>& psi, Index pivot,
                          Real floor = Real(kDefaultPivotFloor)) {
  return to_chart<Real>(psi.amplitudes(), pivot, floor);
}

/// 𝒩 = 1 + sum |x^i|^2.
template <typename Real>
Real normalization(const ChartPoint<Real>& p) {
  return Real(1) + p.coords().squaredNorm();
}

/// K = log 𝒩.
template <typename Real>
Real kahler_potential(const ChartPoint<Real>& p) {
  using std::log;
  return log(normalization(p));
}

/// Unit state u / sqrt(𝒩); the pivot amplitude is real and positive.
template <typename Real>
StateVector<Real> from_chart(const ChartPoint<Real>& p) {
  using std::sqrt;
  return StateVector<Real>(homogeneous(p) / sqrt(normalization(p)));
}

template <typename Real>
HermitianForm<Real> fubini_study_metric(const ChartPoint<Real>& p) {
  const Real nn = normalization(p);
  const auto& x = p.coords();
  const Index m = x.size();
  HermitianForm<Real> g = CMatrix<Real>::Identity(m, m) / nn;
  g.noalias() -= (x * x.adjoint()) / (nn * nn);
  return Real(2) * g;
}

template <typename Real>
HermitianForm<Real> symplectic_form(const ChartPoint<Real>& p) {
  return Complex<Real>(0, Real(0.5)) * fubini_study_metric(p);
}

template <typename Real>
CMatrix<Real> symplectic_inverse(const ChartPoint<Real>& p) {
  const Real nn = normalization(p);
  const auto& x = p.coords();
  const Index m = x.size();
  CMatrix<Real> w = CMatrix<Real>::Identity(m, m);
  w.noalias() += x * x.adjoint();
  return Complex<Real>(0, -nn) * w;
}

/// The same ray expressed in the chart of new_pivot.
template <typename Real>
ChartPoint<Real> transition(const ChartPoint<Real>& p, Index new_pivot,
                            Real floor = Real(kDefaultPivotFloor)) {
  if (new_pivot == p.pivot()) return p;
  if (new_pivot < 0 || new_pivot >= p.dimension()) {
    throw DimensionError("transition: pivot out of range");
  }
  const Complex<Real> divisor = p.coords()(p.slot(new_pivot));
  if (!(std::abs(divisor) >= floor)) {
    throw ZeroPivotError("transition: coordinate for pivot " + std::to_string(new_pivot) +
                         " is below the floor");
  }
  return to_chart<Real>(homogeneous(p), new_pivot, floor);
}

}  // namespace cpn
