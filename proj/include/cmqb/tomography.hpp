#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cmqb/density.hpp"
#include "cmqb/fermion.hpp"
#include "cmqb/orbitals.hpp"
#include "cmqb/state.hpp"

namespace cmqb {

// Uniform, symmetric momentum grid conjugate to the physical displacement R.
struct MomentumGrid {
  int n_k = 250;
  double dk = 1.26;

  double k(int j) const { return (j - 0.5 * (n_k - 1)) * dk; }
  double resolution() const { return 2.0 * M_PI / (n_k * dk); }

  // Conjugate real-space grid of the discrete inverse transform.
  Eigen::VectorXd r_points() const {
    const double dR = resolution();
    Eigen::VectorXd r(n_k);
    for (int m = 0; m < n_k; ++m) r(m) = (m - 0.5 * (n_k - 1)) * dR;
    return r;
  }
};

// Qubit image of a^dag_p a_q.
inline QubitOperator transition_operator(int p, int q, int n_qubits) {
  std::vector<LadderOp> ops = {{p, true}, {q, false}};
  return jordan_wigner(ops, n_qubits);
}

// One-particle reduced density matrix Gamma_pq = <a^dag_p a_q>, Hermitized.
inline Eigen::MatrixXcd measure_rdm1(const VibronicState& st) {
  const int n = st.n_qubits;
  Eigen::MatrixXcd g(n, n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      g(p, q) = expectation(st, transition_operator(p, q, n));
  return 0.5 * (g + g.adjoint().eval());
}

// Sampled characteristic function C_pq(k) = <a^dag_p a_q (x) D(i xi)> with
// xi = k / sqrt(2 M omega), so that k is conjugate to the displacement R of
// the moving ion. pair = (-1, -1) drops the transition operator (pure nuclear
// characteristic function C(k) = <e^{i k R}>).
struct CharacteristicSamples {
  MomentumGrid grid;
  Eigen::VectorXcd values;
  int p = -1, q = -1;
  double max_leakage = 0.0;  // displaced-state weight at the embedding edge
  double time = 0.0;
};

namespace detail {

// Fock dimension large enough to hold D(i xi)|psi> for |psi| supported on
// n_fock levels: displacement by xi reaches ~ (sqrt(n) + xi)^2 with Poisson
// spread on top.
inline int displacement_embedding_dim(int n_fock, double xi_max) {
  const double reach = std::sqrt(double(n_fock)) + std::abs(xi_max);
  return std::max(n_fock + 8, int(std::ceil(reach * reach + 5.0 * reach + 10)));
}

}  // namespace detail

inline CharacteristicSamples characteristic_function(const VibronicState& st,
                                                     const MomentumGrid& grid,
                                                     int p = -1, int q = -1) {
  if (grid.n_k <= 0 || grid.dk <= 0)
    throw std::invalid_argument("characteristic_function: bad momentum grid");
  if ((p < 0) != (q < 0))
    throw std::invalid_argument("characteristic_function: half-open pair");
  const double r_scale = 1.0 / std::sqrt(2.0 * st.mass * st.omega);
  const double xi_max = std::abs(grid.k(0)) * r_scale;
  const int n_embed = detail::displacement_embedding_dim(st.n_fock, xi_max);

  // D(i xi) = exp(i xi (b + b^dag)): diagonalize the position quadrature once
  // on the embedding space, then every k is a phase rotation.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      boson_position_raw(n_embed));
  if (es.info() != Eigen::Success)
    throw std::runtime_error("characteristic_function: eigensolver failed");
  const Eigen::MatrixXd& vecs = es.eigenvectors();
  const Eigen::VectorXd& lam = es.eigenvalues();
  const Eigen::MatrixXd w = vecs.topRows(st.n_fock);  // n_fock x n_embed

  // T(v, v') = <psi_v | A | psi_v'> over the qubit index, A = a^dag_p a_q
  // (or identity).
  const Eigen::MatrixXcd blocks = st.blocks();  // n_fock x qdim
  Eigen::MatrixXcd applied;
  if (p < 0) {
    applied = blocks;
  } else {
    const QubitOperator op = transition_operator(p, q, st.n_qubits);
    applied = Eigen::MatrixXcd::Zero(st.n_fock, st.qdim());
    for (int v = 0; v < st.n_fock; ++v) {
      Eigen::VectorXcd row = blocks.row(v).transpose();
      Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(st.qdim());
      for (const auto& [s, c] : op.terms()) acc += c * apply_pauli_string(s, row);
      applied.row(v) = acc.transpose();
    }
  }
  const Eigen::MatrixXcd t_mat = blocks.conjugate() * applied.transpose();

  // C(k) = sum_j e^{i xi lam_j} g_j with g_j = (W^T T W)_{jj}.
  const Eigen::MatrixXcd wt = w.transpose().cast<cplx>();
  Eigen::VectorXcd g(n_embed);
  {
    const Eigen::MatrixXcd tw = t_mat * w.cast<cplx>();
    for (int j = 0; j < n_embed; ++j) g(j) = wt.row(j).transpose().dot(tw.col(j));
  }

  CharacteristicSamples out;
  out.grid = grid;
  out.p = p;
  out.q = q;
  out.values.resize(grid.n_k);
  for (int j = 0; j < grid.n_k; ++j) {
    const double xi = grid.k(j) * r_scale;
    cplx c = 0.0;
    for (int m = 0; m < n_embed; ++m) c += std::exp(cplx(0, xi * lam(m))) * g(m);
    out.values(j) = c;
  }

  // Leakage monitor: weight of the maximally displaced state in the top
  // embedding levels. If this is not tiny the truncated D lost unitarity.
  {
    const int margin = 5;
    Eigen::VectorXcd phases(n_embed);
    for (int m = 0; m < n_embed; ++m)
      phases(m) = std::exp(cplx(0, xi_max * lam(m)));
    double leak = 0.0;
    for (int qq = 0; qq < st.qdim(); ++qq) {
      Eigen::VectorXcd colc = Eigen::VectorXcd::Zero(n_embed);
      colc.head(st.n_fock) = blocks.col(qq);
      Eigen::VectorXcd disp =
          vecs.cast<cplx>() *
          (phases.array() * (vecs.transpose().cast<cplx>() * colc).array())
              .matrix();
      leak += disp.tail(margin).squaredNorm();
    }
    out.max_leakage = leak;
  }
  return out;
}

// Discrete inverse transform rho(R) = (dk / 2 pi) sum_j C(k_j) e^{-i k_j R}.
inline Eigen::VectorXcd inverse_transform(const CharacteristicSamples& cf) {
  const Eigen::VectorXd r = cf.grid.r_points();
  Eigen::VectorXcd rho = Eigen::VectorXcd::Zero(cf.grid.n_k);
  for (int m = 0; m < cf.grid.n_k; ++m) {
    cplx acc = 0.0;
    for (int j = 0; j < cf.grid.n_k; ++j)
      acc += cf.values(j) * std::exp(cplx(0, -cf.grid.k(j) * r(m)));
    rho(m) = acc * (cf.grid.dk / (2.0 * M_PI));
  }
  return rho;
}

// Nuclear density from the pure characteristic function. The imaginary
// residue of the transform must stay below imag_tol; density mass near the
// conjugate-window edge signals aliasing and is reported via edge_fraction.
inline DensityGrid reconstruct_nuclear_density(const CharacteristicSamples& cf,
                                               double imag_tol = 1e-6) {
  if (cf.p >= 0)
    throw std::invalid_argument(
        "reconstruct_nuclear_density: needs the pair-free characteristic "
        "function");
  const Eigen::VectorXcd rho = inverse_transform(cf);
  const double imag_max = rho.imag().cwiseAbs().maxCoeff();
  if (imag_max > imag_tol)
    throw std::runtime_error(
        "reconstruct_nuclear_density: imaginary residue " +
        std::to_string(imag_max) + " exceeds tolerance");
  DensityGrid out;
  out.R_points = cf.grid.r_points();
  out.values = rho.real().transpose();
  out.time = cf.time;
  return out;
}

// Fraction of (absolute) density mass in the outer cells of the R window.
inline double density_edge_fraction(const DensityGrid& d, int edge_cells = 3) {
  const Eigen::VectorXd mass = d.values.cwiseAbs().colwise().sum();
  const int n = int(mass.size());
  const int m = std::min(edge_cells, n / 2);
  return (mass.head(m).sum() + mass.tail(m).sum()) /
         std::max(mass.sum(), 1e-300);
}

// Orbital pairs whose transition densities enter the joint reconstruction:
// the four diagonal occupations and the two spin-conserving off-diagonal
// pairs with non-vanishing orbital overlap.
inline std::vector<std::pair<int, int>> tomography_orbital_pairs() {
  return {{0, 0}, {1, 1}, {2, 2}, {3, 3}, {0, 2}, {1, 3}};
}

// Measurement budget: two Pauli strings per orbital pair; spin symmetry
// identifies the up/down copies.
struct MeasurementBudget {
  int pauli_sets = 0;
  int with_spin_symmetry = 0;
};

inline MeasurementBudget tomography_measurement_budget() {
  const auto pairs = tomography_orbital_pairs();
  MeasurementBudget b;
  b.pauli_sets = 2 * int(pairs.size());
  int unique_spatial = 0;
  std::vector<std::pair<int, int>> seen;
  for (auto [p, q] : pairs) {
    std::pair<int, int> key{p / 2, q / 2};  // spatial labels
    bool found = false;
    for (auto& s : seen) found = found || s == key;
    if (!found) {
      seen.push_back(key);
      ++unique_spatial;
    }
  }
  b.with_spin_symmetry = 2 * unique_spatial;
  return b;
}

// Joint electron-nuclear density rho(r, R) = sum_pq eta_p(r;R) eta_q(r;R)
// F_pq(R), with F_pq the inverse transform of C_pq(k). Orbitals are linearly
// interpolated in R; the electron grid is the orbital grid.
inline DensityGrid reconstruct_joint_density(const VibronicState& st,
                                             const OrbitalSet& orbitals,
                                             const MomentumGrid& grid,
                                             double imag_tol = 1e-6) {
  if (orbitals.kind != OrbitalSet::Kind::Diabatic)
    throw std::invalid_argument(
        "reconstruct_joint_density: diabatic orbitals required");
  DensityGrid out;
  out.r_points = orbitals.electron_grid.points();
  out.R_points = grid.r_points();
  out.values = Eigen::MatrixXd::Zero(out.r_points.size(), out.R_points.size());
  const double dr_e = orbitals.electron_grid.spacing();

  for (auto [p, q] : tomography_orbital_pairs()) {
    CharacteristicSamples cf = characteristic_function(st, grid, p, q);
    Eigen::VectorXcd f = inverse_transform(cf);
    // p != q contributes together with its Hermitian partner (q, p):
    // F_pq + F_qp = 2 Re F_pq for the real orbitals used here.
    const double weight = (p == q) ? 1.0 : 2.0;
    const double imag_max = f.imag().cwiseAbs().maxCoeff();
    if (p == q && imag_max > imag_tol)
      throw std::runtime_error(
          "reconstruct_joint_density: imaginary residue " +
          std::to_string(imag_max) + " on diagonal pair");
    for (int m = 0; m < out.R_points.size(); ++m) {
      const Eigen::VectorXd up =
          orbitals.interpolate(p / 2, out.R_points(m)) / std::sqrt(dr_e);
      const Eigen::VectorXd uq =
          (q / 2 == p / 2)
              ? up
              : Eigen::VectorXd(orbitals.interpolate(q / 2, out.R_points(m)) /
                                std::sqrt(dr_e));
      out.values.col(m) += weight * f(m).real() * up.cwiseProduct(uq);
    }
  }
  return out;
}

// Shot-sampled characteristic function: the real and imaginary Hadamard-test
// outcomes of every k sample are drawn binomially with the exact expectation
// as the success probability (clamped into [0, 1] against roundoff).
// Deterministic under a fixed seed; shots <= 0 returns the input unchanged.
inline CharacteristicSamples sample_characteristic(
    const CharacteristicSamples& cf, long shots, std::uint64_t seed) {
  if (shots <= 0) return cf;
  CharacteristicSamples out = cf;
  std::mt19937_64 rng(seed);
  for (int j = 0; j < cf.grid.n_k; ++j) {
    const double p_re =
        std::min(1.0, std::max(0.0, 0.5 * (1.0 + cf.values(j).real())));
    const double p_im =
        std::min(1.0, std::max(0.0, 0.5 * (1.0 + cf.values(j).imag())));
    std::binomial_distribution<long> bin_re(shots, p_re), bin_im(shots, p_im);
    out.values(j) = {2.0 * double(bin_re(rng)) / double(shots) - 1.0,
                     2.0 * double(bin_im(rng)) / double(shots) - 1.0};
  }
  return out;
}

// Hadamard-test estimate of <psi| U |psi> for a unitary U: exact at
// shots = 0, otherwise binomially sampled ancilla statistics for the real
// and imaginary interference circuits (deterministic under a fixed seed).
inline cplx hadamard_test_sample(const VibronicState& st,
                                 const Eigen::MatrixXcd& u, long shots = 0,
                                 std::uint64_t seed = 0) {
  if (u.rows() != st.dim() || u.cols() != st.dim())
    throw std::invalid_argument("hadamard_test_sample: shape mismatch");
  const double unitarity =
      (u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols()))
          .cwiseAbs()
          .maxCoeff();
  if (unitarity > 1e-8)
    throw std::invalid_argument("hadamard_test_sample: operator not unitary");
  const cplx exact = st.amplitudes.dot(u * st.amplitudes);
  if (shots <= 0) return exact;
  const double p_re = std::min(1.0, std::max(0.0, 0.5 * (1.0 + exact.real())));
  const double p_im = std::min(1.0, std::max(0.0, 0.5 * (1.0 + exact.imag())));
  std::mt19937_64 rng(seed);
  std::binomial_distribution<long> bin_re(shots, p_re), bin_im(shots, p_im);
  const double re = 2.0 * double(bin_re(rng)) / double(shots) - 1.0;
  const double im = 2.0 * double(bin_im(rng)) / double(shots) - 1.0;
  return {re, im};
}

}  // namespace cmqb
