#pragma once

// Classical Hamiltonian flow on a chart of CP^{N-1}.
//
//   H0(x)          = D / 𝒩,  D = u^dagger H u
//   dH0/dxbar^k    = ((H u)_k 𝒩 - D x^k) / 𝒩^2
//   dx^j/dt        = sum_k -i 𝒩 (delta_jk + x^j xbar^k) dH0/dxbar^k
//
// The integrator is fixed-step RK4 inside one chart. Between steps it moves
// to the chart of the largest homogeneous component whenever the implied
// pivot amplitude 1/sqrt(𝒩) falls below FlowSettings::switch_threshold.

#include "cpn/chart.hpp"
#include "cpn/core.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace cpn {

enum class FlowMethod { rk4 };

struct FlowSettings {
  double switch_threshold = 0.2;
  double pivot_floor = kDefaultPivotFloor;
  FlowMethod method = FlowMethod::rk4;

  void validate() const {
    if (!(std::isfinite(switch_threshold) && switch_threshold > 0.0 &&
          switch_threshold < 1.0)) {
      throw ValidationError("FlowSettings: switch_threshold must lie in (0, 1)");
    }
    if (!(std::isfinite(pivot_floor) && pivot_floor > 0.0)) {
      throw ValidationError("FlowSettings: pivot_floor must be positive");
    }
  }
};

namespace detail {

template <typename Real>
void check_flow_dims(const HermitianOperator<Real>& h, const ChartPoint<Real>& p,
                     const char* where) {
  require_same_dimension(h.dimension(), p.dimension(), where);
}

/// D = u^dagger H u with the imaginary part checked against Hermiticity.
template <typename Real>
Real real_numerator(const CVector<Real>& u, const CVector<Real>& hu) {
  const Complex<Real> d = u.dot(hu);
  using std::abs;
  using std::isfinite;
  // Overflow is left for the integrator's finiteness check to report.
  if (!isfinite(d.real()) || !isfinite(d.imag())) return std::numeric_limits<Real>::quiet_NaN();
  const Real scale = std::max(Real(1), abs(d));
  if (!(abs(d.imag()) <= Real(1e-10) * scale)) {
    throw Error("classical_hamiltonian: imaginary part " +
                std::to_string(static_cast<double>(d.imag())) +
                " indicates a non-Hermitian operator");
  }
  return d.real();
}

}  // namespace detail

/// H0 = <psi|H|psi> evaluated on the chart.
template <typename Real>
Real classical_hamiltonian(const HermitianOperator<Real>& h, const ChartPoint<Real>& p) {
  detail::check_flow_dims(h, p, "classical_hamiltonian");
  const CVector<Real> u = homogeneous(p);
  const CVector<Real> hu = h.matrix() * u;
  return detail::real_numerator<Real>(u, hu) / normalization(p);
}

/// Wirtinger gradient dH0/dxbar^k, one entry per coordinate slot.
template <typename Real>
CVector<Real> grad_conj(const HermitianOperator<Real>& h, const ChartPoint<Real>& p) {
  detail::check_flow_dims(h, p, "grad_conj");
  const CVector<Real> u = homogeneous(p);
  const CVector<Real> hu = h.matrix() * u;
  const Real d = detail::real_numerator<Real>(u, hu);
  const Real nn = normalization(p);
  const auto& x = p.coords();
  CVector<Real> g(x.size());
  for (Index k = 0; k < x.size(); ++k) {
    g(k) = (hu(p.basis_index(k)) * nn - d * x(k)) / (nn * nn);
  }
  return g;
}

/// symplectic_inverse(p) * grad_conj(H, p), evaluated without forming the matrix.
template <typename Real>
CVector<Real> hamilton_rhs(const HermitianOperator<Real>& h, const ChartPoint<Real>& p) {
  const CVector<Real> g = grad_conj(h, p);
  const auto& x = p.coords();
  const Complex<Real> xg = x.dot(g);
  return Complex<Real>(0, -normalization(p)) * (g + x * xg);
}

template <typename Real = double>
struct ClassicalTrajectory {
  std::vector<double> times;
  std::vector<std::size_t> steps;
  std::vector<ChartPoint<Real>> points;
  std::vector<Real> energy;
  /// Chart switches performed up to and including each sample.
  std::vector<std::size_t> switches_cumulative;
  std::vector<double> switch_times;

  std::size_t size() const noexcept { return times.size(); }
  std::size_t switch_count() const noexcept { return switch_times.size(); }

  Real max_energy_drift() const {
    Real m = 0;
    for (Real e : energy) m = std::max(m, std::abs(e - energy.front()));
    return m;
  }
};

/// RK4 on `rhs(H, point)` with chart switching. `rhs` defaults to
/// hamilton_rhs; any callable with the same signature may be substituted.
template <typename Real, typename Rhs>
ClassicalTrajectory<Real> integrate_classical(const HermitianOperator<Real>& h,
                                              const ChartPoint<Real>& point0,
                                              const TimeGrid& grid,
                                              const FlowSettings& settings, Rhs&& rhs) {
  grid.validate();
  settings.validate();
  detail::check_flow_dims(h, point0, "integrate_classical");

  const Real dt = Real(grid.dt);
  const Real half = dt / Real(2);
  const Real max_norm = Real(1) / Real(settings.switch_threshold * settings.switch_threshold);
  const Real floor = Real(settings.pivot_floor);
  const std::size_t n = grid.steps();

  ClassicalTrajectory<Real> traj;
  ChartPoint<Real> point = point0;

  auto maybe_switch = [&](double t) {
    if (!(normalization(point) > max_norm)) return;
    const Index best = select_pivot(homogeneous(point));
    // Unit rays always have a component >= 1/sqrt(N), far above the floor.
    if (best == point.pivot()) return;
    point = transition(point, best, floor);
    traj.switch_times.push_back(t);
  };
  auto record = [&](std::size_t k) {
    traj.steps.push_back(k);
    traj.times.push_back(grid.time_at(k));
    traj.points.push_back(point);
    traj.energy.push_back(classical_hamiltonian(h, point));
    traj.switches_cumulative.push_back(traj.switch_count());
  };
  auto stage = [&](const CVector<Real>& x, std::size_t k) {
    if (!detail::all_finite(x)) {
      throw NumericError("integrate_classical: non-finite coordinate", k);
    }
    return ChartPoint<Real>(point.pivot(), x);
  };

  maybe_switch(0.0);
  record(0);
  for (std::size_t k = 1; k <= n; ++k) {
    const CVector<Real>& x = point.coords();
    const CVector<Real> k1 = rhs(h, point);
    const CVector<Real> k2 = rhs(h, stage(x + half * k1, k));
    const CVector<Real> k3 = rhs(h, stage(x + half * k2, k));
    const CVector<Real> k4 = rhs(h, stage(x + dt * k3, k));
    point = stage(x + (dt / Real(6)) * (k1 + Real(2) * k2 + Real(2) * k3 + k4), k);
    maybe_switch(grid.time_at(k));
    if (grid.is_sample(k)) record(k);
  }
  return traj;
}

template <typename Real>
ClassicalTrajectory<Real> integrate_classical(const HermitianOperator<Real>& h,
                                              const ChartPoint<Real>& point0,
                                              const TimeGrid& grid,
                                              const FlowSettings& settings = {}) {
  return integrate_classical(
      h, point0, grid, settings,
      [](const HermitianOperator<Real>& op, const ChartPoint<Real>& p) {
        return hamilton_rhs(op, p);
      });
}

}  // namespace cpn
