#include <doctest.h>

#include <cmath>
#include <random>

#include "cmqb/evolve.hpp"
#include "cmqb/observables.hpp"
#include "cmqb/state.hpp"

using namespace cmqb;

TEST_CASE("bitstring indexing (qubit 0 = MSB)") {
  CHECK(bitstring_to_index("1100") == 12);
  CHECK(bitstring_to_index("0011") == 3);
  CHECK_THROWS(bitstring_to_index("10x1"));
}

TEST_CASE("initial state: coherent nuclear Gaussian x occupation ket") {
  const double omega = 0.0467, mass = 1836.0, r0 = 0.1;
  const VibronicState st = prepare_initial_state(r0, "1100", 20, omega, mass);
  CHECK(st.norm() == doctest::Approx(1.0));
  CHECK(st.top_level_population() < 1e-12);

  // occupations exactly the bitstring
  const Eigen::VectorXd fon = occupation_numbers(st);
  CHECK(fon(0) == doctest::Approx(1.0));
  CHECK(fon(1) == doctest::Approx(1.0));
  CHECK(fon(2) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(fon(3) == doctest::Approx(0.0).epsilon(1e-12));

  // <R> = r0 via the position quadrature
  const double r_scale = 1.0 / std::sqrt(2.0 * mass * omega);
  const Eigen::MatrixXcd q = boson_position_raw(20).cast<cplx>();
  const cplx r_mean =
      expectation(st, r_scale * q, QubitOperator(4) /*empty = 0*/);
  (void)r_mean;  // empty operator gives 0; use identity instead
  QubitOperator id(4);
  id.add(PauliString(4), 1.0);
  CHECK(expectation(st, r_scale * q, id).real() == doctest::Approx(r0));

  // Poisson Fock statistics with mean alpha^2
  const double alpha = r0 * std::sqrt(mass * omega / 2.0);
  const int q_idx = bitstring_to_index("1100");
  CHECK(std::norm(st.amp(0, q_idx)) ==
        doctest::Approx(std::exp(-alpha * alpha)).epsilon(1e-10));

  // truncation guard
  CHECK_THROWS(prepare_initial_state(3.0, "1100", 4, omega, mass));
}

TEST_CASE("nuclear wavefunction: analytic Gaussian density and norm") {
  const double omega = 0.0467, mass = 1836.0, r0 = 0.1;
  const VibronicState st = prepare_initial_state(r0, "1100", 24, omega, mass);
  SpatialGrid rg{-0.6, 0.8, 281};
  const DensityGrid rho = nuclear_density_from_state(st, rg);
  CHECK(rho.integral() == doctest::Approx(1.0).epsilon(1e-6));
  // ground coherent state: rho(R) = sqrt(M w / pi) exp(-M w (R - r0)^2)
  const double a = mass * omega;
  double dev = 0.0;
  for (int m = 0; m < rg.n; ++m) {
    const double R = rg.point(m);
    const double ref = std::sqrt(a / M_PI) * std::exp(-a * (R - r0) * (R - r0));
    dev = std::max(dev, std::abs(rho.values(0, m) - ref));
  }
  CHECK(dev < 1e-6);
}

TEST_CASE("harmonic eigenfunctions: orthonormal on a fine grid") {
  SpatialGrid g{-30.0, 30.0, 1201};
  const Eigen::MatrixXd chi = harmonic_eigenfunctions(8, 1.0, g.points());
  const double dx = g.spacing();
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b <= a; ++b) {
      const double ip = chi.row(a).dot(chi.row(b)) * dx;
      CHECK(ip == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-8));
    }
}

TEST_CASE("spectral propagator: unitary, composes, conserves energy") {
  // small random Hermitian H
  Eigen::MatrixXcd h(6, 6);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) h(i, j) = cplx(u(rng), u(rng));
  h = (0.5 * (h + h.adjoint())).eval();
  SpectralPropagator prop(h);
  Eigen::VectorXcd v(6);
  for (int i = 0; i < 6; ++i) v(i) = cplx(u(rng), u(rng));
  v.normalize();
  const Eigen::VectorXcd v1 = prop.apply(v, 0.7);
  CHECK(v1.norm() == doctest::Approx(1.0));
  const Eigen::VectorXcd v2 = prop.apply(v1, 0.3);
  const Eigen::VectorXcd v3 = prop.apply(v, 1.0);
  CHECK((v2 - v3).cwiseAbs().maxCoeff() < 1e-12);
  const cplx e0 = v.dot(h * v), e1 = v3.dot(h * v3);
  CHECK(std::abs(e0 - e1) < 1e-12);
  CHECK_THROWS(SpectralPropagator(h + Eigen::MatrixXcd::Constant(6, 6, cplx(0, 1))));
}

TEST_CASE("exact_evolve validates inputs") {
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Identity(4, 4);
  VibronicState st;
  st.amplitudes = Eigen::VectorXcd::Zero(4);
  st.amplitudes(0) = 1.0;
  st.n_fock = 2;
  st.n_qubits = 1;
  CHECK_THROWS(exact_evolve(h, st, {2.0, 1.0}));  // non-increasing times
  Eigen::MatrixXcd wrong = Eigen::MatrixXcd::Identity(6, 6);
  CHECK_THROWS(exact_evolve(wrong, st, {1.0}));
}

TEST_CASE("fidelity: normalized inputs, |<a|b>|^2") {
  VibronicState a, b;
  a.amplitudes = Eigen::VectorXcd::Zero(4);
  a.amplitudes(0) = 1.0;
  b = a;
  b.amplitudes(0) = cplx(0, 1);  // global phase
  CHECK(fidelity(a, b) == doctest::Approx(1.0));
  b.amplitudes(0) = std::sqrt(0.5);
  b.amplitudes(1) = std::sqrt(0.5);
  CHECK(fidelity(a, b) == doctest::Approx(0.5));
  b.amplitudes *= 2.0;
  CHECK_THROWS(fidelity(a, b));
}

TEST_CASE("uniform output times stop at t_final") {
  const auto t = uniform_times(10.0, 3.0);
  REQUIRE(t.size() == 3);
  CHECK(t.back() == doctest::Approx(9.0));
}
