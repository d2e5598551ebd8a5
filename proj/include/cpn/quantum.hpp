#pragma once

// Reference Schrödinger evolution (hbar = 1): the spectral propagator
// V exp(-i Lambda t) V^dagger, and fixed-step classical RK4 on -i H psi.

#include "cpn/core.hpp"

#include <Eigen/Eigenvalues>

#include <cstddef>
#include <vector>

namespace cpn {

/// -i H psi.
template <typename Real>
CVector<Real> schrodinger_rhs(const HermitianOperator<Real>& h, const CVector<Real>& psi) {
  detail::require_same_dimension(h.dimension(), psi.size(), "schrodinger_rhs");
  return Complex<Real>(0, -1) * (h.matrix() * psi);
}

template <typename Real>
CVector<Real> schrodinger_rhs(const HermitianOperator<Real>& h, const StateVector<Real>& psi) {
  return schrodinger_rhs(h, psi.amplitudes());
}

/// Eigendecomposition of H, reused to evaluate exp(-i H t) at many times.
template <typename Real = double>
class SpectralPropagator {
 public:
  explicit SpectralPropagator(const HermitianOperator<Real>& h) {
    Eigen::SelfAdjointEigenSolver<CMatrix<Real>> solver(h.matrix());
    if (solver.info() != Eigen::Success) {
      throw Error("SpectralPropagator: eigendecomposition failed");
    }
    eigenvalues_ = solver.eigenvalues();
    eigenvectors_ = solver.eigenvectors();
  }

  Index dimension() const noexcept { return eigenvalues_.size(); }
  const RVector<Real>& eigenvalues() const noexcept { return eigenvalues_; }
  const CMatrix<Real>& eigenvectors() const noexcept { return eigenvectors_; }

  CVector<Real> apply(const CVector<Real>& psi0, Real t) const {
    detail::require_same_dimension(dimension(), psi0.size(), "SpectralPropagator::apply");
    CVector<Real> coeffs = eigenvectors_.adjoint() * psi0;
    for (Index k = 0; k < coeffs.size(); ++k) {
      coeffs(k) *= std::polar(Real(1), -eigenvalues_(k) * t);
    }
    return eigenvectors_ * coeffs;
  }

 private:
  RVector<Real> eigenvalues_;
  CMatrix<Real> eigenvectors_;
};

template <typename Real>
StateVector<Real> evolve_exact(const HermitianOperator<Real>& h, const StateVector<Real>& psi0,
                               Real t) {
  SpectralPropagator<Real> prop(h);
  return StateVector<Real>(prop.apply(psi0.amplitudes(), t));
}

/// Time-ordered samples of amplitude vectors. Amplitudes are kept raw (not
/// renormalized); norm_drift[i] = |‖psi(t_i)‖ - 1|.
template <typename Real = double>
struct QuantumTrajectory {
  std::vector<double> times;
  std::vector<std::size_t> steps;
  std::vector<CVector<Real>> states;
  std::vector<Real> norm_drift;

  std::size_t size() const noexcept { return times.size(); }

  void record(std::size_t step, double t, CVector<Real> psi) {
    steps.push_back(step);
    times.push_back(t);
    norm_drift.push_back(std::abs(psi.norm() - Real(1)));
    states.push_back(std::move(psi));
  }

  Real max_norm_drift() const {
    Real m = 0;
    for (Real d : norm_drift) m = std::max(m, d);
    return m;
  }
};

/// Spectral propagator sampled on the grid's output times.
template <typename Real>
QuantumTrajectory<Real> evolve_exact(const HermitianOperator<Real>& h,
                                     const StateVector<Real>& psi0, const TimeGrid& grid) {
  grid.validate();
  detail::require_same_dimension(h.dimension(), psi0.dimension(), "evolve_exact");
  SpectralPropagator<Real> prop(h);
  QuantumTrajectory<Real> traj;
  const std::size_t n = grid.steps();
  for (std::size_t k = 0; k <= n; ++k) {
    if (!grid.is_sample(k)) continue;
    const double t = grid.time_at(k);
    traj.record(k, t, prop.apply(psi0.amplitudes(), Real(t)));
  }
  return traj;
}

/// Classical RK4 on schrodinger_rhs. No renormalization between steps.
template <typename Real>
QuantumTrajectory<Real> evolve_rk4(const HermitianOperator<Real>& h,
                                   const StateVector<Real>& psi0, const TimeGrid& grid) {
  grid.validate();
  detail::require_same_dimension(h.dimension(), psi0.dimension(), "evolve_rk4");
  const Real dt = Real(grid.dt);
  const Real half = dt / Real(2);
  const std::size_t n = grid.steps();

  QuantumTrajectory<Real> traj;
  CVector<Real> psi = psi0.amplitudes();
  traj.record(0, 0.0, psi);
  for (std::size_t k = 1; k <= n; ++k) {
    const CVector<Real> k1 = schrodinger_rhs(h, psi);
    const CVector<Real> k2 = schrodinger_rhs<Real>(h, psi + half * k1);
    const CVector<Real> k3 = schrodinger_rhs<Real>(h, psi + half * k2);
    const CVector<Real> k4 = schrodinger_rhs<Real>(h, psi + dt * k3);
    psi += (dt / Real(6)) * (k1 + Real(2) * k2 + Real(2) * k3 + k4);
    if (!detail::all_finite(psi)) {
      throw NumericError("evolve_rk4: non-finite amplitude", k);
    }
    if (grid.is_sample(k)) traj.record(k, grid.time_at(k), psi);
  }
  return traj;
}

}  // namespace cpn
