#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "cmqb/boson.hpp"
#include "cmqb/grid.hpp"
#include "cmqb/pauli.hpp"

namespace cmqb {

// Vibronic statevector on the truncated Fock (x) qubit space, Fock-major
// layout: amplitude(v, q) = amplitudes(v * 2^Nq + q).
struct VibronicState {
  Eigen::VectorXcd amplitudes;
  int n_fock = 0;
  int n_qubits = 0;
  double omega = 0.0;
  double mass = 0.0;

  long dim() const { return amplitudes.size(); }
  int qdim() const { return 1 << n_qubits; }
  double norm() const { return amplitudes.norm(); }

  cplx amp(int v, int q) const { return amplitudes(long(v) * qdim() + q); }

  // Population of the top Fock level; must stay tiny for a healthy truncation.
  double top_level_population() const {
    return amplitudes.segment(long(n_fock - 1) * qdim(), qdim()).squaredNorm();
  }

  // Boson-sector block as an (n_fock x 2^Nq) matrix view.
  Eigen::MatrixXcd blocks() const {
    Eigen::MatrixXcd m(n_fock, qdim());
    for (int v = 0; v < n_fock; ++v)
      m.row(v) = amplitudes.segment(long(v) * qdim(), qdim()).transpose();
    return m;
  }
};

inline int bitstring_to_index(const std::string& bits) {
  int idx = 0;
  for (char c : bits) {
    if (c != '0' && c != '1')
      throw std::invalid_argument("bitstring_to_index: bad character");
    idx = idx * 2 + (c - '0');
  }
  return idx;
}

// Coherent nuclear state D(alpha)|0> (alpha = R0 sqrt(M omega / 2)) tensored
// with a qubit occupation bitstring.
inline VibronicState prepare_initial_state(double R0,
                                           const std::string& occupation,
                                           int n_fock, double omega,
                                           double mass) {
  VibronicState st;
  st.n_fock = n_fock;
  st.n_qubits = static_cast<int>(occupation.size());
  st.omega = omega;
  st.mass = mass;
  const double alpha = R0 * std::sqrt(mass * omega / 2.0);
  Eigen::VectorXcd fock = Eigen::VectorXcd::Zero(n_fock);
  fock(0) = 1.0;
  fock = displacement_operator(cplx(alpha, 0), n_fock) * fock;
  st.amplitudes = Eigen::VectorXcd::Zero(long(n_fock) * st.qdim());
  const int q = bitstring_to_index(occupation);
  for (int v = 0; v < n_fock; ++v)
    st.amplitudes(long(v) * st.qdim() + q) = fock(v);
  if (st.top_level_population() > 1e-6)
    throw std::runtime_error(
        "prepare_initial_state: Fock truncation too small (top-level "
        "population " +
        std::to_string(st.top_level_population()) + "); increase n_fock to ~" +
        std::to_string(int(std::ceil(alpha * alpha + 6 * alpha + 6))));
  return st;
}

inline cplx expectation(const VibronicState& st, const Eigen::MatrixXcd& op) {
  if (op.rows() != st.dim() || op.cols() != st.dim())
    throw std::invalid_argument("expectation: shape mismatch");
  return st.amplitudes.dot(op * st.amplitudes);
}

// <psi| B (x) P |psi> without building the full matrix: B acts on the Fock
// index, P on the qubit index.
inline cplx expectation(const VibronicState& st, const Eigen::MatrixXcd& boson_op,
                        const QubitOperator& qubit_op) {
  if (boson_op.rows() != st.n_fock)
    throw std::invalid_argument("expectation: boson dimension mismatch");
  Eigen::MatrixXcd blocks = st.blocks();            // n_fock x qdim
  Eigen::MatrixXcd mixed = boson_op * blocks;       // apply boson part
  cplx total = 0.0;
  for (const auto& [s, c] : qubit_op.terms()) {
    for (int v = 0; v < st.n_fock; ++v) {
      Eigen::VectorXcd row = mixed.row(v).transpose();
      total += c * st.amplitudes.segment(long(v) * st.qdim(), st.qdim())
                       .dot(apply_pauli_string(s, row));
    }
  }
  return total;
}

inline cplx expectation(const VibronicState& st, const QubitOperator& qubit_op) {
  return expectation(
      st, Eigen::MatrixXcd::Identity(st.n_fock, st.n_fock), qubit_op);
}

inline double fidelity(const VibronicState& a, const VibronicState& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("fidelity: dim mismatch");
  if (std::abs(a.norm() - 1.0) > 1e-8 || std::abs(b.norm() - 1.0) > 1e-8)
    throw std::invalid_argument("fidelity: unnormalized input");
  return std::norm(a.amplitudes.dot(b.amplitudes));
}

// Harmonic-oscillator eigenfunctions chi_v(Q) (unit mass, frequency omega) on
// a set of Q points; rows = Fock level, columns = grid point.
inline Eigen::MatrixXd harmonic_eigenfunctions(int n_fock, double omega,
                                               const Eigen::VectorXd& q_points) {
  const int n = static_cast<int>(q_points.size());
  Eigen::MatrixXd chi(n_fock, n);
  for (int i = 0; i < n; ++i) {
    const double y = std::sqrt(omega) * q_points(i);
    chi(0, i) = std::pow(omega / M_PI, 0.25) * std::exp(-0.5 * y * y);
    if (n_fock > 1) chi(1, i) = std::sqrt(2.0) * y * chi(0, i);
    for (int v = 2; v < n_fock; ++v)
      chi(v, i) = (std::sqrt(2.0) * y * chi(v - 1, i) -
                   std::sqrt(double(v - 1)) * chi(v - 2, i)) /
                  std::sqrt(double(v));
  }
  return chi;
}

struct NuclearWavefunction {
  Eigen::VectorXd r_points;
  Eigen::MatrixXcd per_sector;  // (n_R x 2^Nq) complex psi(R) per qubit sector
  Eigen::VectorXd density;      // reduced |psi(R)|^2, normalized over dR
};

// Contract Fock amplitudes with harmonic-oscillator eigenfunctions in the
// mass-weighted coordinate Q = sqrt(M) R; densities are reported per unit R.
inline NuclearWavefunction nuclear_wavefunction(const VibronicState& st,
                                                const SpatialGrid& r_grid) {
  NuclearWavefunction out;
  out.r_points = r_grid.points();
  const double root_m = std::sqrt(st.mass);
  Eigen::VectorXd q_points = out.r_points * root_m;
  Eigen::MatrixXd chi = harmonic_eigenfunctions(st.n_fock, st.omega, q_points);
  // psi(R) = sqrt(sqrt(M)) * sum_v C_v chi_v(Q) so that |psi|^2 dR integrates
  // to the sector population.
  out.per_sector = std::sqrt(root_m) *
                   (chi.transpose().cast<cplx>() * st.blocks());
  out.density = out.per_sector.cwiseAbs2().rowwise().sum();
  return out;
}

// Fractional occupation numbers <a^dag_p a_p> = <(I - Z_p)/2> per orbital.
inline Eigen::VectorXd occupation_numbers(const VibronicState& st) {
  Eigen::VectorXd fon(st.n_qubits);
  Eigen::MatrixXcd blocks = st.blocks();
  for (int p = 0; p < st.n_qubits; ++p) {
    double occ = 0.0;
    for (int q = 0; q < st.qdim(); ++q)
      if ((q >> (st.n_qubits - 1 - p)) & 1)
        occ += blocks.col(q).squaredNorm();
    fon(p) = occ;
  }
  return fon;
}

}  // namespace cmqb
