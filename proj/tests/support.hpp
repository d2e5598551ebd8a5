#pragma once

// Test-only helpers: seeded random generators and oracles that do not share a
// code path with the library routines they check.

#include "cpn/chart.hpp"
#include "cpn/core.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <random>

namespace cpn::test {

using cd = std::complex<double>;
using Rng = std::mt19937_64;

inline CMatrix<double> random_hermitian_matrix(Rng& rng, Index n, double bound = 2.0) {
  std::uniform_real_distribution<double> u(-bound, bound);
  CMatrix<double> m(n, n);
  for (Index i = 0; i < n; ++i) {
    m(i, i) = u(rng);
    for (Index j = i + 1; j < n; ++j) {
      m(i, j) = cd(u(rng), u(rng));
      m(j, i) = std::conj(m(i, j));
    }
  }
  return m;
}

inline HermitianOperator<double> random_hermitian(Rng& rng, Index n, double bound = 2.0) {
  return HermitianOperator<double>(random_hermitian_matrix(rng, n, bound));
}

/// Haar-like random unit vector (normalized complex Gaussian).
inline CVector<double> random_unit(Rng& rng, Index n) {
  std::normal_distribution<double> g;
  CVector<double> v(n);
  for (Index i = 0; i < n; ++i) v(i) = cd(g(rng), g(rng));
  return v.normalized();
}

inline StateVector<double> random_state(Rng& rng, Index n) {
  return StateVector<double>(random_unit(rng, n));
}

/// Coordinates drawn uniformly from the disc of the given radius, per slot.
inline ChartPoint<double> random_point(Rng& rng, Index n, double radius = 1.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<Index> piv(0, n - 1);
  CVector<double> x(n - 1);
  for (Index i = 0; i < n - 1; ++i) {
    x(i) = std::polar(radius * std::sqrt(u(rng)), 2.0 * M_PI * u(rng));
  }
  return ChartPoint<double>(piv(rng), x);
}

inline double max_abs(const CMatrix<double>& m) { return m.cwiseAbs().maxCoeff(); }

// ------------------------------------------------------------- oracles

/// Real scalar function of the chart coordinates, evaluated in long double.
using ChartScalar = std::function<long double(const ChartPoint<long double>&)>;

inline ChartPoint<long double> widen(const ChartPoint<double>& p) {
  return ChartPoint<long double>(p.pivot(), p.coords().cast<std::complex<long double>>());
}

/// Central-difference Wirtinger derivative d f / d xbar^k
/// = (d/dp_k + i d/dq_k) f / 2, with x = p + i q.
inline CVector<double> fd_grad_conj(const ChartScalar& f, const ChartPoint<double>& p0,
                                    long double h = 1e-5L) {
  const ChartPoint<long double> p = widen(p0);
  const Index m = p.coords().size();
  CVector<double> out(m);
  auto shifted = [&](Index k, std::complex<long double> delta) {
    CVector<long double> x = p.coords();
    x(k) += delta;
    return f(ChartPoint<long double>(p.pivot(), x));
  };
  for (Index k = 0; k < m; ++k) {
    const long double dp = (shifted(k, {h, 0}) - shifted(k, {-h, 0})) / (2 * h);
    const long double dq = (shifted(k, {0, h}) - shifted(k, {0, -h})) / (2 * h);
    out(k) = cd(double(dp / 2), double(dq / 2));
  }
  return out;
}

/// Central-difference Hessian entry (j,k) = d^2 f / d xbar^j d x^k
/// = (f_pp + f_qq + i (f_qp - f_pq)) / 4, with f_ab = d^2 f / d a_j d b_k.
inline CMatrix<double> fd_mixed_hessian(const ChartScalar& f, const ChartPoint<double>& p0,
                                        long double h = 1e-5L) {
  const ChartPoint<long double> p = widen(p0);
  const Index m = p.coords().size();
  using cl = std::complex<long double>;
  auto eval = [&](Index j, cl dj, Index k, cl dk) {
    CVector<long double> x = p.coords();
    x(j) += dj;
    x(k) += dk;
    return f(ChartPoint<long double>(p.pivot(), x));
  };
  auto second = [&](Index j, cl ej, Index k, cl ek) {
    return (eval(j, h * ej, k, h * ek) - eval(j, h * ej, k, -h * ek) -
            eval(j, -h * ej, k, h * ek) + eval(j, -h * ej, k, -h * ek)) /
           (4 * h * h);
  };
  const cl re(1, 0);
  const cl im(0, 1);
  CMatrix<double> out(m, m);
  for (Index j = 0; j < m; ++j) {
    for (Index k = 0; k < m; ++k) {
      const long double pp = second(j, re, k, re);
      const long double qq = second(j, im, k, im);
      const long double qp = second(j, im, k, re);
      const long double pq = second(j, re, k, im);
      out(j, k) = cd(double((pp + qq) / 4), double((qp - pq) / 4));
    }
  }
  return out;
}

/// dx/dt of the chart coordinates of psi(t) under -i H psi, by the quotient
/// rule on x^k = a^k / a^p.
inline CVector<double> chart_velocity_from_schrodinger(const CMatrix<double>& h,
                                                       const CVector<double>& psi, Index pivot) {
  const CVector<double> dpsi = cd(0, -1) * (h * psi);
  const Index n = psi.size();
  CVector<double> out(n - 1);
  Index slot = 0;
  for (Index k = 0; k < n; ++k) {
    if (k == pivot) continue;
    out(slot++) = (dpsi(k) * psi(pivot) - psi(k) * dpsi(pivot)) / (psi(pivot) * psi(pivot));
  }
  return out;
}

// ----------------------------------------- two-qubit hand-expanded forms

/// Hand-expanded two-qubit expressions at pivot 3, written term by term in
/// the coordinates (x0, x1, x2) rather than through matrices.
struct TwoQubitClosedForm {
  double c1, c2, c3, c4, c5;

  cd numerator(cd x0, cd x1, cd x2) const {
    const cd i(0, 1);
    const cd b0 = x0, b1 = x1, b2 = x2;
    const cd z0 = std::conj(x0), z1 = std::conj(x1), z2 = std::conj(x2);
    return c1 * (std::norm(b0) + std::norm(b1) - std::norm(b2) - 1.0) +
           c2 * (b2 * z0 + z1 + z2 * b0 + b1) + i * c3 * (-b2 * z0 - z1 + z2 * b0 + b1) +
           c4 * (-z0 + b2 * z1 + b1 * z2 - b0) + i * c5 * (-z0 + b2 * z1 - b1 * z2 + b0);
  }

  std::array<cd, 3> grad_conj(cd x0, cd x1, cd x2) const {
    const cd i(0, 1);
    const double nn = 1.0 + std::norm(x0) + std::norm(x1) + std::norm(x2);
    const cd d = numerator(x0, x1, x2);
    return {
        ((c1 * x0 + c2 * x2 - i * c3 * x2 - c4 - i * c5) * nn - d * x0) / (nn * nn),
        ((c1 * x1 + c2 - i * c3 + c4 * x2 + i * c5 * x2) * nn - d * x1) / (nn * nn),
        ((-c1 * x2 + c2 * x0 + i * c3 * x0 + c4 * x1 - i * c5 * x1) * nn - d * x2) / (nn * nn),
    };
  }

  std::array<cd, 3> velocity(cd x0, cd x1, cd x2) const {
    const cd i(0, 1);
    const double nn = 1.0 + std::norm(x0) + std::norm(x1) + std::norm(x2);
    const auto g = grad_conj(x0, x1, x2);
    const cd z0 = std::conj(x0), z1 = std::conj(x1), z2 = std::conj(x2);
    return {
        -i * nn * ((1.0 + x0 * z0) * g[0] + x0 * z1 * g[1] + x0 * z2 * g[2]),
        -i * nn * (x1 * z0 * g[0] + (1.0 + x1 * z1) * g[1] + x1 * z2 * g[2]),
        -i * nn * (x2 * z0 * g[0] + x2 * z1 * g[1] + (1.0 + x2 * z2) * g[2]),
    };
  }

  /// Right-hand sides of i d/dt (a,b,c,d), returned as d/dt (a,b,c,d).
  std::array<cd, 4> schrodinger(cd a, cd b, cd c, cd d) const {
    const cd i(0, 1);
    const cd ia = c1 * a + (c2 - i * c3) * c + (-c4 - i * c5) * d;
    const cd ib = c1 * b + (c2 - i * c3) * d + (c4 + i * c5) * c;
    const cd ic = -c1 * c + (c2 + i * c3) * a + (c4 - i * c5) * b;
    const cd id = -c1 * d + (c2 + i * c3) * b + (-c4 + i * c5) * a;
    return {-i * ia, -i * ib, -i * ic, -i * id};
  }
};

}  // namespace cpn::test
