#pragma once

// Shared value types for the CP^{N-1} classicalization library: complex dense
// aliases templated on the real scalar, the error hierarchy, and the two
// validated wrappers (HermitianOperator, StateVector) plus TimeGrid.

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace cpn {

template <typename Real>
using Complex = std::complex<Real>;
template <typename Real>
using CMatrix = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using CVector = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using Index = Eigen::Index;

// ---------------------------------------------------------------- errors

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A chart divisor (pivot amplitude or target coordinate) was below the floor.
class ZeroPivotError : public Error {
 public:
  using Error::Error;
};

/// Non-finite value produced by an integrator; carries the failing step.
class NumericError : public Error {
 public:
  NumericError(const std::string& what, std::size_t step)
      : Error(what + " (step " + std::to_string(step) + ")"), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

namespace detail {

inline void require_same_dimension(Index a, Index b, const char* where) {
  if (a != b) {
    throw DimensionError(std::string(where) + ": dimension mismatch (" +
                         std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      const auto& z = m(i, j);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    }
  }
  return true;
}

}  // namespace detail

// ------------------------------------------------------------- operators

/// Largest entrywise |H - H^dagger|.
template <typename Real>
Real hermiticity_defect(const CMatrix<Real>& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<Real>::infinity();
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

/// Square complex matrix with entries(j,k) == conj(entries(k,j)).
template <typename Real = double>
class HermitianOperator {
 public:
  static constexpr double kDefaultTolerance = 1e-12;

  /// Validates shape and Hermiticity; the stored matrix is the exact
  /// Hermitian part (M + M^dagger)/2 of the input.
  explicit HermitianOperator(const CMatrix<Real>& m,
                             Real tolerance = Real(kDefaultTolerance)) {
    if (m.rows() != m.cols()) {
      throw DimensionError("HermitianOperator: matrix is not square");
    }
    if (m.rows() < 2) {
      throw DimensionError("HermitianOperator: dimension must be at least 2");
    }
    if (!detail::all_finite(m)) {
      throw ValidationError("HermitianOperator: non-finite entry");
    }
    const Real defect = hermiticity_defect<Real>(m);
    if (!(defect <= tolerance)) {
      throw ValidationError("HermitianOperator: not Hermitian (max |H - H^dagger| = " +
                            std::to_string(static_cast<double>(defect)) + ")");
    }
    matrix_ = (m + m.adjoint()) * Real(0.5);
  }

  static HermitianOperator zero(Index n) {
    return HermitianOperator(CMatrix<Real>::Zero(n, n));
  }
  static HermitianOperator identity(Index n) {
    return HermitianOperator(CMatrix<Real>::Identity(n, n));
  }

  Index dimension() const noexcept { return matrix_.rows(); }
  const CMatrix<Real>& matrix() const noexcept { return matrix_; }
  Complex<Real> operator()(Index j, Index k) const { return matrix_(j, k); }

  template <typename Other>
  HermitianOperator<Other> cast() const {
    return HermitianOperator<Other>(matrix_.template cast<Complex<Other>>());
  }

 private:
  CMatrix<Real> matrix_;
};

template <typename Real>
HermitianOperator<Real> operator+(const HermitianOperator<Real>& a,
                                  const HermitianOperator<Real>& b) {
  detail::require_same_dimension(a.dimension(), b.dimension(), "operator+");
  return HermitianOperator<Real>(a.matrix() + b.matrix());
}

template <typename Real>
HermitianOperator<Real> operator*(Real s, const HermitianOperator<Real>& h) {
  return HermitianOperator<Real>(h.matrix() * s);
}

// ---------------------------------------------------------------- states

/// Unit-norm amplitude vector |psi> = sum_i a^i |phi_i>.
template <typename Real = double>
class StateVector {
 public:
  static constexpr double kNormTolerance = 1e-10;

  explicit StateVector(CVector<Real> amplitudes,
                       Real tolerance = Real(kNormTolerance))
      : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() < 2) {
      throw DimensionError("StateVector: dimension must be at least 2");
    }
    if (!detail::all_finite(amplitudes_)) {
      throw ValidationError("StateVector: non-finite amplitude");
    }
    const Real drift = std::abs(amplitudes_.norm() - Real(1));
    if (!(drift <= tolerance)) {
      throw ValidationError("StateVector: amplitudes are not unit norm (|norm - 1| = " +
                            std::to_string(static_cast<double>(drift)) + ")");
    }
  }

  /// Rescales any nonzero vector to unit norm.
  static StateVector normalized(const CVector<Real>& v) {
    const Real n = v.norm();
    if (!(n > Real(0))) throw ValidationError("StateVector: zero vector");
    return StateVector(v / n);
  }

  /// Canonical basis vector |phi_index>.
  static StateVector basis(Index n, Index index) {
    CVector<Real> v = CVector<Real>::Zero(n);
    v(index) = Real(1);
    return StateVector(std::move(v));
  }

  Index dimension() const noexcept { return amplitudes_.size(); }
  const CVector<Real>& amplitudes() const noexcept { return amplitudes_; }
  Complex<Real> operator[](Index i) const { return amplitudes_(i); }

 private:
  CVector<Real> amplitudes_;
};

/// 1 - |<a|b>|, the phase-invariant distance between two rays.
template <typename Real>
Real fidelity_gap(const CVector<Real>& a, const CVector<Real>& b) {
  return Real(1) - std::abs(a.dot(b));
}

// ------------------------------------------------------------------ time

/// Fixed-step time discretization shared by the quantum and classical
/// integrators. Samples are taken at step 0, every output_stride steps, and
/// at the final step.
struct TimeGrid {
  double t_end = 1.0;
  double dt = 1e-3;
  std::size_t output_stride = 1;

  TimeGrid() = default;
  TimeGrid(double t_end_, double dt_, std::size_t stride = 1)
      : t_end(t_end_), dt(dt_), output_stride(stride) {
    validate();
  }

  void validate() const {
    if (!(std::isfinite(t_end) && t_end > 0.0)) {
      throw ValidationError("TimeGrid: t_end must be finite and > 0");
    }
    if (!(std::isfinite(dt) && dt > 0.0)) {
      throw ValidationError("TimeGrid: dt must be finite and > 0");
    }
    if (dt > t_end) throw ValidationError("TimeGrid: dt must not exceed t_end");
    if (output_stride == 0) {
      throw ValidationError("TimeGrid: output_stride must be positive");
    }
  }

  /// floor(t_end/dt), with ratios within 1e-9 of an integer rounded to it.
  std::size_t steps() const {
    const double ratio = t_end / dt;
    const double nearest = std::round(ratio);
    if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, nearest)) {
      return static_cast<std::size_t>(nearest);
    }
    return static_cast<std::size_t>(std::floor(ratio));
  }

  bool is_sample(std::size_t step) const {
    return step % output_stride == 0 || step == steps();
  }

  double time_at(std::size_t step) const { return static_cast<double>(step) * dt; }
};

}  // namespace cpn
