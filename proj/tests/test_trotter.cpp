#include <doctest.h>

#include <cmath>

#include "cmqb/trotter.hpp"

using namespace cmqb;

namespace {

CMQBTerm make_term(const std::string& pauli, double v0, double v1) {
  CMQBTerm t;
  t.pauli = PauliString::parse(pauli);
  t.V0 = v0;
  t.V1 = v1;
  t.group = model_term_group(t.pauli);
  return t;
}

// Small synthetic two-qubit coupled spec for fast end-to-end checks.
CMQBHamiltonianSpec tiny_spec() {
  CMQBHamiltonianSpec spec;
  spec.omega = 0.3;
  spec.mass = 1.0;
  spec.n_qubits = 2;
  spec.terms.push_back(make_term("II", 0.1, 0.25));
  spec.terms.push_back(make_term("ZI", -0.2, 0.15));
  spec.terms.push_back(make_term("XY", 0.05, 0.1));
  spec.terms.push_back(make_term("ZZ", 0.07, 0.0));
  return spec;
}

}  // namespace

TEST_CASE("compiled per-term sequences equal the exact term exponential") {
  const double dt = 0.7;
  const int n_fock = 6;
  for (const auto& t :
       {make_term("IIII", 0.3, 0.2), make_term("ZIII", -0.4, 0.1),
        make_term("XZXI", 0.05, -0.02), make_term("ZYZY", 0.02, 0.03),
        make_term("XXYY", 0.01, 0.005), make_term("ZZII", 0.1, 0.0)}) {
    const Eigen::MatrixXcd u = sequence_matrix(compile_term(t, dt), n_fock, 4);
    const Eigen::MatrixXcd ref =
        detail::hermitian_exponential(term_matrix(t, n_fock), dt);
    CHECK_MESSAGE((u - ref).cwiseAbs().maxCoeff() < 1e-12, t.pauli.str());
  }
}

TEST_CASE("worked example: exp(-i theta dt (b+b^dag) Y2 Z3 Y4) compiles") {
  // term (V0 + V1(b+b^dag)) I Y Z Y on qubits (2,3,4) in 1-based labels
  const CMQBTerm t = make_term("IYZY", 0.0, 0.13);
  const auto seq = compile_term(t, 0.9);
  // pivot is qubit index 1 (0-based); fan-out reaches qubits 2 and 3
  int cnots = 0, sdds = 0;
  for (const auto& g : seq) {
    cnots += (g.kind == Gate::Kind::CNOT);
    sdds += (g.kind == Gate::Kind::SpinDependentDisplacement);
  }
  CHECK(cnots == 4);  // 2 (weight - 1) around the pulse
  CHECK(sdds == 1);
  const Eigen::MatrixXcd u = sequence_matrix(seq, 8, 4);
  const Eigen::MatrixXcd ref =
      detail::hermitian_exponential(term_matrix(t, 8), 0.9);
  CHECK((u - ref).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("compile paths: boson-only, rotation shortcut, CNOT invariant") {
  // identity string -> single boson pulse
  auto seq_id = compile_term(make_term("IIII", 0.2, 0.1), 1.0);
  REQUIRE(seq_id.size() == 1);
  CHECK(seq_id[0].kind == Gate::Kind::SpinDependentDisplacement);
  CHECK(seq_id[0].q0 == -1);
  // V1 = 0 -> pure Pauli rotation, no entangling gates
  auto seq_rot = compile_term(make_term("ZZII", 0.2, 0.0), 1.0);
  REQUIRE(seq_rot.size() == 1);
  CHECK(seq_rot[0].kind == Gate::Kind::PauliRotation);
  CHECK(seq_rot[0].angle == doctest::Approx(0.2));
  // coupled strings use exactly 2(w-1) CNOTs
  for (const char* s : {"ZIII", "XZXI", "ZYZY", "XXYY"}) {
    const PauliString p = PauliString::parse(s);
    int cnots = 0;
    for (const auto& g : compile_term(make_term(s, 0.1, 0.1), 1.0))
      cnots += (g.kind == Gate::Kind::CNOT);
    CHECK(cnots == 2 * (p.weight() - 1));
  }
}

TEST_CASE("gate matrices are unitary") {
  const int n_fock = 5, nq = 2;
  std::vector<Gate> gates = {
      Gate::hadamard(1), Gate::phase(0), Gate::phase_dagger(1),
      Gate::cnot(0, 1),  Gate::rotation(PauliString::parse("XY"), 0.4),
      Gate::sdd(1, 0.2, 0.3, 0.8), Gate::free_evolution(0.5)};
  for (const auto& g : gates) {
    const Eigen::MatrixXcd u = gate_matrix(g, n_fock, nq);
    const Eigen::MatrixXcd d =
        u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols());
    CHECK(d.cwiseAbs().maxCoeff() < 1e-12);
  }
  CHECK_THROWS(Gate::cnot(1, 1));
}

TEST_CASE("trotterize: step counting, rounding, order validation") {
  const auto spec = tiny_spec();
  CHECK(trotterize(spec, 10.0, 1.0).n_steps == 10);
  CHECK(trotterize(spec, 10.4, 1.0).n_steps == 10);
  CHECK(trotterize(spec, 0.2, 1.0).n_steps == 1);
  CHECK_THROWS(trotterize(spec, 10.0, -1.0));
  CHECK_THROWS(trotterize(spec, 10.0, 1.0, 3));
  const auto s2 = trotterize(spec, 4.0, 1.0, 2);
  CHECK(s2.order == 2);
  CHECK(s2.step_gates.size() > trotterize(spec, 4.0, 1.0, 1).step_gates.size());
}

TEST_CASE("Trotter error scaling on the synthetic spec") {
  const auto spec = tiny_spec();
  const int n_fock = 8;
  const Eigen::MatrixXcd h = symbolic_matrix(spec, n_fock);
  VibronicState psi0;
  psi0.n_fock = n_fock;
  psi0.n_qubits = 2;
  psi0.omega = spec.omega;
  psi0.mass = spec.mass;
  psi0.amplitudes = Eigen::VectorXcd::Zero(n_fock * 4);
  psi0.amplitudes(1) = std::sqrt(0.5);
  psi0.amplitudes(6) = std::sqrt(0.5);

  const double t = 4.0;
  auto infidelity = [&](double dt, int order) {
    const auto sched = trotterize(spec, t, dt, order);
    const auto prop = propagate_schedule(psi0, sched);
    const auto ex = exact_evolve(h, psi0, {sched.total_time()});
    return 1.0 - fidelity(ex.states[0], prop.states.back());
  };
  // halving dt cuts the infidelity by ~2^2 (order 1) / ~2^4 (order 2)
  const double i1a = infidelity(0.5, 1), i1b = infidelity(0.25, 1);
  CHECK(i1a / i1b > 3.0);
  const double i2a = infidelity(0.5, 2), i2b = infidelity(0.25, 2);
  CHECK(i2a / i2b > 10.0);
  CHECK(i2a < i1a);
}

TEST_CASE("order-2 step is palindromic up to S/S-dagger mirroring") {
  const auto sched = trotterize(tiny_spec(), 2.0, 1.0, 2);
  const auto& g = sched.step_gates;
  const std::size_t n = g.size();
  auto mirror = [](Gate::Kind k) {
    if (k == Gate::Kind::Phase) return Gate::Kind::PhaseDagger;
    if (k == Gate::Kind::PhaseDagger) return Gate::Kind::Phase;
    return k;
  };
  for (std::size_t i = 0; i < n; ++i)
    CHECK(g[i].kind == mirror(g[n - 1 - i].kind));
}

TEST_CASE("schedule text dump is deterministic and 1-based") {
  const auto sched = trotterize(tiny_spec(), 2.0, 1.0, 1);
  const std::string a = schedule_text(sched);
  const std::string b = schedule_text(trotterize(tiny_spec(), 2.0, 1.0, 1));
  CHECK(a == b);
  CHECK(a.find("FREE mode=1") != std::string::npos);
  CHECK(a.find("SDD mode=1 pivot=0") != std::string::npos);  // boson-only pulse
  CHECK(a.find("SDD mode=1 pivot=1") != std::string::npos);  // ZI pivot, 1-based
  CHECK(a.find("CNOT 1 2") != std::string::npos);            // XY fan-out
}

TEST_CASE("propagate_schedule records every step boundary") {
  const auto spec = tiny_spec();
  const auto sched = trotterize(spec, 3.0, 1.0, 1);
  VibronicState psi0;
  psi0.n_fock = 4;
  psi0.n_qubits = 2;
  psi0.omega = spec.omega;
  psi0.mass = spec.mass;
  psi0.amplitudes = Eigen::VectorXcd::Zero(16);
  psi0.amplitudes(0) = 1.0;
  const auto res = propagate_schedule(psi0, sched);
  REQUIRE(res.times.size() == 4);
  CHECK(res.times[0] == 0.0);
  CHECK(res.times[3] == doctest::Approx(3.0));
  for (const auto& st : res.states) CHECK(st.norm() == doctest::Approx(1.0));
}
