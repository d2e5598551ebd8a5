#include "cpn/pauli.hpp"
#include "cpn/quantum.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace cpn;
using cpn::test::cd;

namespace {

double max_deviation(const QuantumTrajectory<double>& a, const QuantumTrajectory<double>& b) {
  REQUIRE(a.size() == b.size());
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, (a.states[i] - b.states[i]).cwiseAbs().maxCoeff());
  }
  return m;
}

}  // namespace

TEST_CASE("schrodinger_rhs") {
  test::Rng rng(1);
  const auto psi = test::random_state(rng, 4);
  CHECK(schrodinger_rhs(HermitianOperator<double>::zero(4), psi).isZero(0.0));
  CHECK(schrodinger_rhs(HermitianOperator<double>::identity(4), psi)
            .isApprox(cd(0, -1) * psi.amplitudes()));

  const TwoQubitCouplings c{0.7, -1.3, 0.4, 2.1, -0.9};
  const auto rhs = schrodinger_rhs(build_two_qubit_hamiltonian<double>(c), psi);
  const cd a = psi[0], cc = psi[2], d = psi[3];
  const cd expected = cd(0, -1) * (c.c1 * a + cd(c.c2, -c.c3) * cc + cd(-c.c4, -c.c5) * d);
  CHECK(std::abs(rhs(0) - expected) < 1e-14);

  CHECK_THROWS_AS(schrodinger_rhs(HermitianOperator<double>::zero(3), psi), DimensionError);
}

TEST_CASE("evolve_exact") {
  test::Rng rng(2);
  SUBCASE("t = 0 is the identity") {
    const auto h = test::random_hermitian(rng, 5);
    const auto psi = test::random_state(rng, 5);
    CHECK((evolve_exact(h, psi, 0.0).amplitudes() - psi.amplitudes()).norm() < 1e-14);
  }
  SUBCASE("diag(1,-1) for t = pi gives a global phase of -1") {
    CMatrix<double> m = CMatrix<double>::Zero(2, 2);
    m(0, 0) = 1;
    m(1, 1) = -1;
    const auto out = evolve_exact(HermitianOperator<double>(m), StateVector<double>::basis(2, 0), M_PI);
    CHECK(std::abs(out[0] - cd(-1, 0)) < 1e-14);
    CHECK(std::abs(out[1]) < 1e-14);
  }
  SUBCASE("diagonal two-qubit model keeps populations fixed") {
    const auto h = build_two_qubit_hamiltonian<double>({1, 0, 0, 0, 0});
    CVector<double> v = CVector<double>::Constant(4, cd(0.5, 0));
    const StateVector<double> psi(v);
    const TimeGrid grid(10.0, 1e-3, 500);
    const auto exact = evolve_exact(h, psi, grid);
    const auto rk = evolve_rk4(h, psi, grid);
    for (std::size_t i = 0; i < exact.size(); ++i) {
      CHECK(std::abs(std::norm(exact.states[i](0)) - 0.25) < 1e-12);
      CHECK(std::abs(std::norm(rk.states[i](0)) - 0.25) < 1e-10);
    }
  }
  SUBCASE("unitarity: norms and inner products are preserved") {
    for (int trial = 0; trial < 50; ++trial) {
      const auto h = test::random_hermitian(rng, 6);
      const auto phi = test::random_state(rng, 6);
      const auto psi = test::random_state(rng, 6);
      const double t = 7.3 * (trial + 1) / 50.0;
      const auto phi_t = evolve_exact(h, phi, t);
      const auto psi_t = evolve_exact(h, psi, t);
      CHECK(std::abs(psi_t.amplitudes().norm() - 1.0) < 1e-10);
      CHECK(std::abs(phi_t.amplitudes().dot(psi_t.amplitudes()) -
                     phi.amplitudes().dot(psi.amplitudes())) < 1e-10);
    }
  }
  SUBCASE("energy is constant") {
    const auto h = test::random_hermitian(rng, 4);
    const auto psi = test::random_state(rng, 4);
    const auto traj = evolve_exact(h, psi, TimeGrid(20.0, 1e-2, 100));
    const double e0 = psi.amplitudes().dot(h.matrix() * psi.amplitudes()).real();
    for (const auto& s : traj.states) {
      CHECK(std::abs(s.dot(h.matrix() * s).real() - e0) < 1e-10);
    }
  }
}

TEST_CASE("evolve_rk4") {
  test::Rng rng(3);
  SUBCASE("H = 0 gives a constant trajectory") {
    const auto psi = test::random_state(rng, 3);
    const auto traj = evolve_rk4(HermitianOperator<double>::zero(3), psi, TimeGrid(1.0, 0.1));
    CHECK(traj.size() == 11);
    for (const auto& s : traj.states) CHECK(s == psi.amplitudes());
  }
  SUBCASE("agrees with the spectral propagator on random 4x4 Hamiltonians") {
    for (int trial = 0; trial < 5; ++trial) {
      const auto h = test::random_hermitian(rng, 4);
      const auto psi = test::random_state(rng, 4);
      const TimeGrid grid(10.0, 1e-3, 100);
      const auto rk = evolve_rk4(h, psi, grid);
      CHECK(max_deviation(rk, evolve_exact(h, psi, grid)) < 1e-7);
      CHECK(rk.max_norm_drift() < 1e-8);
      const auto expect = [&](const CVector<double>& s) { return s.dot(h.matrix() * s).real(); };
      double drift = 0;
      for (const auto& s : rk.states) {
        drift = std::max(drift, std::abs(expect(s) - expect(rk.states.front())));
      }
      CHECK(drift < 1e-8);
    }
  }
  SUBCASE("fourth-order convergence") {
    const auto h = test::random_hermitian(rng, 4);
    const auto psi = test::random_state(rng, 4);
    std::vector<double> err;
    for (double dt : {4e-3, 2e-3, 1e-3}) {
      const TimeGrid grid(10.0, dt, static_cast<std::size_t>(std::lround(0.5 / dt)));
      err.push_back(max_deviation(evolve_rk4(h, psi, grid), evolve_exact(h, psi, grid)));
    }
    const double r1 = err[0] / err[1];
    const double r2 = err[1] / err[2];
    MESSAGE("RK4 error ratios under halving: " << r1 << ", " << r2);
    CHECK(r1 == doctest::Approx(16.0).epsilon(0.2));
    CHECK(r2 == doctest::Approx(16.0).epsilon(0.2));
  }
  SUBCASE("non-finite amplitudes abort with the step index") {
    CMatrix<double> m = CMatrix<double>::Zero(2, 2);
    m(0, 0) = 1e300;
    m(1, 1) = -1e300;
    try {
      evolve_rk4(HermitianOperator<double>(m), StateVector<double>::basis(2, 0), TimeGrid(1.0, 0.5));
      FAIL("expected NumericError");
    } catch (const NumericError& e) {
      CHECK(e.step() == 1);
    }
  }
}

TEST_CASE("TimeGrid") {
  CHECK(TimeGrid(10.0, 1e-3).steps() == 10000);
  CHECK(TimeGrid(10.0, 2e-4).steps() == 50000);
  CHECK(TimeGrid(1.0, 0.3).steps() == 3);
  const TimeGrid g(1.0, 0.3, 2);
  CHECK(g.is_sample(0));
  CHECK_FALSE(g.is_sample(1));
  CHECK(g.is_sample(2));
  CHECK(g.is_sample(3));
  CHECK_THROWS_AS(TimeGrid(0.0, 0.1), ValidationError);
  CHECK_THROWS_AS(TimeGrid(1.0, 2.0), ValidationError);
  CHECK_THROWS_AS(TimeGrid(1.0, 0.1, 0), ValidationError);
  CHECK_THROWS_AS(TimeGrid(1.0, -0.1), ValidationError);
}

TEST_CASE("StateVector validation") {
  CVector<double> v(4);
  v << 1, 1, 0, 0;
  CHECK_THROWS_AS(StateVector<double>{v}, ValidationError);
  CHECK(std::abs(StateVector<double>::normalized(v)[0] - cd(M_SQRT1_2, 0)) < 1e-15);
  CHECK_THROWS_AS(StateVector<double>::normalized(CVector<double>::Zero(3)), ValidationError);
}

TEST_CASE("long double instantiation") {
  test::Rng rng(4);
  const auto h = test::random_hermitian(rng, 3).cast<long double>();
  const StateVector<long double> psi(test::random_unit(rng, 3).cast<std::complex<long double>>());
  const auto out = evolve_exact(h, psi, 2.5L);
  CHECK(std::abs(double(out.amplitudes().norm()) - 1.0) < 1e-15);
}
