#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cmqb/evolve.hpp"
#include "cmqb/hamiltonian.hpp"
#include "cmqb/state.hpp"

namespace cmqb {

// Digital gates plus the analog pulses of the digital-analog decomposition.
// Qubit indices are 0-based internally; dumps print them 1-based.
struct Gate {
  enum class Kind {
    Hadamard,
    Phase,
    PhaseDagger,
    CNOT,
    PauliRotation,
    SpinDependentDisplacement,
    FreeEvolution
  };
  Kind kind;
  int q0 = -1;       // target qubit / CNOT control / SDD pivot (-1 = none)
  int q1 = -1;       // CNOT target
  PauliString pauli; // PauliRotation generator
  double angle = 0;  // PauliRotation: exp(-i angle P); FreeEvolution: omega dt
  double V0 = 0, V1 = 0, dt = 0;  // SDD pulse parameters
  int mode = 1;

  static Gate hadamard(int q) { return {Kind::Hadamard, q}; }
  static Gate phase(int q) { return {Kind::Phase, q}; }
  static Gate phase_dagger(int q) { return {Kind::PhaseDagger, q}; }
  static Gate cnot(int c, int t) {
    if (c == t) throw std::invalid_argument("CNOT: control == target");
    return {Kind::CNOT, c, t};
  }
  static Gate rotation(const PauliString& p, double angle) {
    Gate g{Kind::PauliRotation};
    g.pauli = p;
    g.angle = angle;
    return g;
  }
  static Gate sdd(int pivot, double v0, double v1, double dt) {
    Gate g{Kind::SpinDependentDisplacement};
    g.q0 = pivot;
    g.V0 = v0;
    g.V1 = v1;
    g.dt = dt;
    return g;
  }
  static Gate free_evolution(double omega_dt) {
    Gate g{Kind::FreeEvolution};
    g.angle = omega_dt;
    return g;
  }
};

namespace detail {

inline Eigen::MatrixXcd lift_qubit_matrix(const Eigen::MatrixXcd& qm,
                                          int n_fock) {
  const long qdim = qm.rows();
  Eigen::MatrixXcd out =
      Eigen::MatrixXcd::Zero(qdim * n_fock, qdim * n_fock);
  for (int v = 0; v < n_fock; ++v)
    out.block(v * qdim, v * qdim, qdim, qdim) = qm;
  return out;
}

inline Eigen::MatrixXcd single_qubit_lift(const Eigen::Matrix2cd& u, int q,
                                          int n_qubits) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
  for (int k = n_qubits - 1; k >= 0; --k) {  // qubit 0 outermost (MSB)
    const Eigen::Matrix2cd g =
        (k == q) ? u : Eigen::Matrix2cd::Identity().eval();
    Eigen::MatrixXcd next(m.rows() * 2, m.cols() * 2);
    next.topLeftCorner(m.rows(), m.cols()) = g(0, 0) * m;
    next.topRightCorner(m.rows(), m.cols()) = g(0, 1) * m;
    next.bottomLeftCorner(m.rows(), m.cols()) = g(1, 0) * m;
    next.bottomRightCorner(m.rows(), m.cols()) = g(1, 1) * m;
    m.swap(next);
  }
  return m;
}

inline Eigen::MatrixXcd hermitian_exponential(const Eigen::MatrixXcd& h,
                                              double prefactor) {
  // exp(-i prefactor H)
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  Eigen::VectorXcd phases(es.eigenvalues().size());
  for (long i = 0; i < phases.size(); ++i)
    phases(i) = std::exp(cplx(0, -prefactor * es.eigenvalues()(i)));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace detail

// Exact matrix of one gate on the truncated Fock (x) qubit space.
inline Eigen::MatrixXcd gate_matrix(const Gate& g, int n_fock, int n_qubits) {
  using K = Gate::Kind;
  const long qdim = 1L << n_qubits;
  switch (g.kind) {
    case K::Hadamard: {
      Eigen::Matrix2cd h;
      h << 1, 1, 1, -1;
      h /= std::sqrt(2.0);
      return detail::lift_qubit_matrix(
          detail::single_qubit_lift(h, g.q0, n_qubits), n_fock);
    }
    case K::Phase:
    case K::PhaseDagger: {
      Eigen::Matrix2cd s;
      s << 1, 0, 0, (g.kind == K::Phase ? cplx(0, 1) : cplx(0, -1));
      return detail::lift_qubit_matrix(
          detail::single_qubit_lift(s, g.q0, n_qubits), n_fock);
    }
    case K::CNOT: {
      Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(qdim, qdim);
      for (long idx = 0; idx < qdim; ++idx) {
        const int cbit = int(idx >> (n_qubits - 1 - g.q0)) & 1;
        long jdx = idx;
        if (cbit) jdx = idx ^ (1L << (n_qubits - 1 - g.q1));
        m(jdx, idx) = 1.0;
      }
      return detail::lift_qubit_matrix(m, n_fock);
    }
    case K::PauliRotation: {
      const Eigen::MatrixXcd p = pauli_string_matrix(g.pauli);
      const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(qdim, qdim);
      return detail::lift_qubit_matrix(
          std::cos(g.angle) * id - cplx(0, 1) * std::sin(g.angle) * p, n_fock);
    }
    case K::SpinDependentDisplacement: {
      const Eigen::MatrixXcd boson = BosonPoly(g.V0, g.V1).matrix(n_fock);
      Eigen::MatrixXcd gen;
      if (g.q0 < 0) {
        // boson-only pulse (identity Pauli string)
        gen = Eigen::MatrixXcd::Zero(qdim * n_fock, qdim * n_fock);
        for (int v = 0; v < n_fock; ++v)
          for (int w = 0; w < n_fock; ++w)
            gen.block(v * qdim, w * qdim, qdim, qdim) =
                boson(v, w) * Eigen::MatrixXcd::Identity(qdim, qdim);
      } else {
        PauliString xs(n_qubits);
        xs.letters[g.q0] = 1;
        const Eigen::MatrixXcd xp = pauli_string_matrix(xs);
        gen = Eigen::MatrixXcd::Zero(qdim * n_fock, qdim * n_fock);
        for (int v = 0; v < n_fock; ++v)
          for (int w = 0; w < n_fock; ++w)
            gen.block(v * qdim, w * qdim, qdim, qdim) = boson(v, w) * xp;
      }
      return detail::hermitian_exponential(gen, g.dt);
    }
    case K::FreeEvolution: {
      Eigen::MatrixXcd m =
          Eigen::MatrixXcd::Zero(qdim * n_fock, qdim * n_fock);
      for (int v = 0; v < n_fock; ++v)
        for (long q = 0; q < qdim; ++q)
          m(v * qdim + q, v * qdim + q) = std::exp(cplx(0, -g.angle * v));
      return m;
    }
  }
  throw std::logic_error("gate_matrix: unreachable");
}

// Compile one Hamiltonian term into its digital-analog gate sequence:
// single-qubit basis changes + CNOT fan-out around the analog pivot pulse.
inline std::vector<Gate> compile_term(const CMQBTerm& term, double dt) {
  std::vector<Gate> seq;
  if (term.pauli.is_identity()) {
    seq.push_back(Gate::sdd(-1, term.V0, term.V1, dt));
    return seq;
  }
  if (term.V1 == 0.0) {
    seq.push_back(Gate::rotation(term.pauli, term.V0 * dt));
    return seq;
  }
  const int n = term.pauli.n_qubits();
  std::vector<int> support;
  for (int q = 0; q < n; ++q)
    if (term.pauli.letters[q]) support.push_back(q);
  const int pivot = support.front();

  // inverse basis changes first
  for (int q : support) {
    if (term.pauli.letters[q] == 2) seq.push_back(Gate::phase_dagger(q));
    if (term.pauli.letters[q] == 3) seq.push_back(Gate::hadamard(q));
  }
  for (std::size_t i = 1; i < support.size(); ++i)
    seq.push_back(Gate::cnot(pivot, support[i]));
  seq.push_back(Gate::sdd(pivot, term.V0, term.V1, dt));
  for (std::size_t i = support.size(); i-- > 1;)
    seq.push_back(Gate::cnot(pivot, support[i]));
  for (auto it = support.rbegin(); it != support.rend(); ++it) {
    if (term.pauli.letters[*it] == 3) seq.push_back(Gate::hadamard(*it));
    if (term.pauli.letters[*it] == 2) seq.push_back(Gate::phase(*it));
  }
  return seq;
}

struct GateSchedule {
  std::vector<Gate> step_gates;  // one Trotter step, in application order
  int n_steps = 0;
  double dt = 0.0;
  int n_qubits = 0;
  int order = 1;
  std::string ordering = "model-groups";

  double total_time() const { return n_steps * dt; }

  int cnot_count_per_step() const {
    int c = 0;
    for (const auto& g : step_gates) c += (g.kind == Gate::Kind::CNOT);
    return c;
  }
  int pulse_count_per_step() const {
    int c = 0;
    for (const auto& g : step_gates)
      c += (g.kind == Gate::Kind::SpinDependentDisplacement ||
            g.kind == Gate::Kind::PauliRotation);
    return c;
  }
};

// First-order (Lie) or second-order (Strang) Trotter schedule over the terms
// in spec order, with an explicit free-evolution factor for the base
// oscillator each step. N_t = round(t / dt); callers should compare against
// the exact evolution at total_time() = N_t dt.
inline GateSchedule trotterize(const CMQBHamiltonianSpec& spec, double t,
                               double dt, int order = 1) {
  if (dt <= 0) throw std::invalid_argument("trotterize: dt <= 0");
  if (t <= 0) throw std::invalid_argument("trotterize: t <= 0");
  if (order != 1 && order != 2)
    throw std::invalid_argument("trotterize: order must be 1 or 2");
  GateSchedule sched;
  sched.n_steps = std::max(1, int(std::lround(t / dt)));
  sched.dt = dt;
  sched.n_qubits = spec.n_qubits;
  sched.order = order;

  auto emit = [&](double step, bool reversed) {
    std::vector<std::vector<Gate>> parts;
    parts.push_back({Gate::free_evolution(spec.omega * step)});
    for (const auto& term : spec.terms) parts.push_back(compile_term(term, step));
    if (reversed) std::reverse(parts.begin(), parts.end());
    for (auto& p : parts)
      sched.step_gates.insert(sched.step_gates.end(), p.begin(), p.end());
  };
  if (order == 1) {
    emit(dt, false);
  } else {
    emit(0.5 * dt, true);
    emit(0.5 * dt, false);
  }
  return sched;
}

// Product of a gate sequence as a dense matrix (application order).
inline Eigen::MatrixXcd sequence_matrix(const std::vector<Gate>& gates,
                                        int n_fock, int n_qubits) {
  const long dim = (1L << n_qubits) * n_fock;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
  for (const auto& g : gates) u = gate_matrix(g, n_fock, n_qubits) * u;
  return u;
}

// Apply the schedule step by step, recording the state at every step
// boundary (including t = 0).
inline PropagationResult propagate_schedule(const VibronicState& psi0,
                                            const GateSchedule& sched) {
  const long dim = psi0.dim();
  if (psi0.n_qubits != sched.n_qubits && !sched.step_gates.empty())
    throw std::invalid_argument("propagate_schedule: dimension mismatch");
  PropagationResult out;
  out.method = "trotter";
  out.times.push_back(0.0);
  out.states.push_back(psi0);
  if (sched.step_gates.empty() || sched.n_steps == 0) return out;
  const Eigen::MatrixXcd u_step =
      sequence_matrix(sched.step_gates, psi0.n_fock, psi0.n_qubits);
  VibronicState st = psi0;
  for (int step = 1; step <= sched.n_steps; ++step) {
    st.amplitudes = u_step * st.amplitudes;
    out.times.push_back(step * sched.dt);
    out.states.push_back(st);
  }
  (void)dim;
  return out;
}

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// Deterministic, diffable text dump of one Trotter step (1-based qubits).
inline std::string schedule_text(const GateSchedule& sched) {
  std::ostringstream os;
  os << "# trotter schedule order=" << sched.order
     << " ordering=" << sched.ordering << " dt=" << format_double(sched.dt)
     << " steps=" << sched.n_steps << " nq=" << sched.n_qubits << "\n";
  using K = Gate::Kind;
  for (const auto& g : sched.step_gates) {
    switch (g.kind) {
      case K::Hadamard: os << "H " << g.q0 + 1 << "\n"; break;
      case K::Phase: os << "S " << g.q0 + 1 << "\n"; break;
      case K::PhaseDagger: os << "SDAG " << g.q0 + 1 << "\n"; break;
      case K::CNOT: os << "CNOT " << g.q0 + 1 << " " << g.q1 + 1 << "\n"; break;
      case K::PauliRotation:
        os << "ROT " << g.pauli.str() << " angle=" << format_double(g.angle)
           << "\n";
        break;
      case K::SpinDependentDisplacement:
        os << "SDD mode=" << g.mode << " pivot=" << g.q0 + 1
           << " V0=" << format_double(g.V0) << " V1=" << format_double(g.V1)
           << " dt=" << format_double(g.dt) << "\n";
        break;
      case K::FreeEvolution:
        os << "FREE mode=" << g.mode << " theta=" << format_double(g.angle)
           << "\n";
        break;
    }
  }
  return os.str();
}

}  // namespace cmqb
