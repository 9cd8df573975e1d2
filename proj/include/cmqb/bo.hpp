#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "cmqb/density.hpp"
#include "cmqb/evolve.hpp"
#include "cmqb/grid.hpp"
#include "cmqb/integrals.hpp"
#include "cmqb/orbitals.hpp"
#include "cmqb/tomography.hpp"

namespace cmqb {

// 3x3 electronic Hamiltonian in the CSF basis (Phi1, Phi2, Phi3) =
// (|1100>, |0011>, open-shell singlet), from the linear integral fits.
inline Eigen::Matrix3d build_csf_hamiltonian(const TaylorFitSet& fits,
                                             double R) {
  auto v = [&](const char* label) {
    auto it = fits.find(label);
    if (it == fits.end())
      throw std::invalid_argument(std::string("build_csf_hamiltonian: missing ") +
                                  label);
    return it->second.v0 + it->second.v1 * R;
  };
  const double rt2 = std::sqrt(2.0);
  Eigen::Matrix3d h;
  h(0, 0) = 2.0 * v("h_aa") + v("v_aaaa");
  h(1, 1) = 2.0 * v("h_bb") + v("v_bbbb");
  h(2, 2) = v("h_aa") + v("h_bb") + v("v_abab") + v("v_aabb");
  h(0, 1) = v("v_aabb");
  h(0, 2) = rt2 * (v("h_ab") + v("v_aaab"));
  h(1, 2) = rt2 * (v("h_ab") + v("v_abbb"));
  h(1, 0) = h(0, 1);
  h(2, 0) = h(0, 2);
  h(2, 1) = h(1, 2);
  return h;
}

// CSF basis vectors on the 4-qubit Fock space (occupation-number kets built
// by ascending-order creation). Signs fixed so that <Phi_i|H|Phi_j>
// reproduces the printed CSF matrix.
inline std::vector<Eigen::VectorXcd> csf_fock_vectors() {
  std::vector<Eigen::VectorXcd> v(3, Eigen::VectorXcd::Zero(16));
  v[0](bitstring_to_index("1100")) = 1.0;
  v[1](bitstring_to_index("0011")) = 1.0;
  v[2](bitstring_to_index("1001")) = 1.0 / std::sqrt(2.0);
  v[2](bitstring_to_index("0110")) = -1.0 / std::sqrt(2.0);
  return v;
}

// BO surfaces and couplings on a uniform R grid, sign-chained from the first
// grid point.
struct BOSurfaceSet {
  SpatialGrid r_grid;
  Eigen::MatrixXd energies;         // 3 x n_R, ascending per column
  std::vector<Eigen::Matrix3d> u;   // U(R): columns = BO states in CSF basis
  std::vector<Eigen::Matrix3d> d;   // NACs D_ij(R), antisymmetric
  std::vector<Eigen::Matrix3d> dprime;  // dD/dR per grid point
  bool nac_undersampled = false;    // peak resolution warning
};

// Linear coefficient dH/dR of the CSF Hamiltonian (constant in R).
inline Eigen::Matrix3d csf_hamiltonian_slope(const TaylorFitSet& fits) {
  TaylorFitSet slope;
  for (const auto& [label, f] : fits) slope[label] = {f.v1, 0.0, 0.0};
  return build_csf_hamiltonian(slope, 0.0);
}

inline BOSurfaceSet diagonalize_bo(const TaylorFitSet& fits,
                                   const SpatialGrid& r_grid) {
  BOSurfaceSet set;
  set.r_grid = r_grid;
  set.energies.resize(3, r_grid.n);
  set.u.resize(r_grid.n);
  for (int j = 0; j < r_grid.n; ++j) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(
        build_csf_hamiltonian(fits, r_grid.point(j)));
    set.energies.col(j) = es.eigenvalues();
    Eigen::Matrix3d u = es.eigenvectors();
    for (int c = 0; c < 3; ++c) {
      if (j == 0) {
        // deterministic anchor: leading CSF amplitude positive
        int imax = 0;
        u.col(c).cwiseAbs().maxCoeff(&imax);
        if (u(imax, c) < 0) u.col(c) *= -1.0;
      } else if (u.col(c).dot(set.u[j - 1].col(c)) < 0) {
        u.col(c) *= -1.0;
      }
    }
    set.u[j] = u;
  }
  return set;
}

// First-derivative couplings D_ab = <u_a|dU/dR u_b> from the
// Hellmann-Feynman form D_ab = V_ab / (E_b - E_a), V = U^T (dH/dR) U, which
// is exact under the linear fits and stays accurate through sharp avoided
// crossings where finite differences of the eigenvectors do not. The
// derivative dD/dR follows from d(V)/dR = [V, D] and dE_a/dR = V_aa.
inline void compute_nacs(BOSurfaceSet& set, const TaylorFitSet& fits) {
  const int nr = set.r_grid.n;
  const double dr = set.r_grid.spacing();
  const Eigen::Matrix3d h1 = csf_hamiltonian_slope(fits);
  set.d.resize(nr);
  set.dprime.resize(nr);
  double peak = 0.0;
  for (int j = 0; j < nr; ++j) {
    const Eigen::Matrix3d v = set.u[j].transpose() * h1 * set.u[j];
    Eigen::Matrix3d d = Eigen::Matrix3d::Zero();
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        if (a == b) continue;
        const double gap = set.energies(b, j) - set.energies(a, j);
        if (std::abs(gap) < 1e-12)
          throw std::runtime_error("compute_nacs: degenerate surfaces");
        d(a, b) = v(a, b) / gap;
      }
    const Eigen::Matrix3d vd = v * d - d * v;
    Eigen::Matrix3d dp = Eigen::Matrix3d::Zero();
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        if (a == b) continue;
        const double gap = set.energies(b, j) - set.energies(a, j);
        dp(a, b) = (vd(a, b) - d(a, b) * (v(b, b) - v(a, a))) / gap;
      }
    set.d[j] = d;
    set.dprime[j] = dp;
    peak = std::max(peak, d.cwiseAbs().maxCoeff());
  }
  set.nac_undersampled = peak * dr > 0.5;
}

// Wavepacket on (BO-state subset) x (DVR grid), state-major amplitudes.
struct DVRState {
  SpatialGrid grid;
  std::vector<int> states;  // 1-based BO-state labels, ascending
  Eigen::VectorXcd amplitudes;
  double discarded_weight = 0.0;  // initial-projection loss

  int n_states() const { return static_cast<int>(states.size()); }
  long dim() const { return amplitudes.size(); }
  double norm() const { return amplitudes.norm(); }
  cplx amp(int s, int j) const { return amplitudes(long(s) * grid.n + j); }
};

struct BHHamiltonian {
  SpatialGrid grid;
  std::vector<int> states;
  Eigen::MatrixXd h;
};

// Born-Huang effective Hamiltonian on the sinc-DVR grid for a subset of BO
// states: per-state kinetic + E_i(R) + (1/2) k R^2 on the diagonal, and
// -(1/M) D_ij d/dR - (1/2M) G_ij with G = dD/dR + D^2 restricted to the
// subset on the off-diagonals. Hermitized after discretization.
inline BHHamiltonian build_bh_hamiltonian(const BOSurfaceSet& surfaces,
                                          const ModelParams& params,
                                          const std::vector<int>& subset) {
  if (subset.empty())
    throw std::invalid_argument("build_bh_hamiltonian: empty subset");
  for (int s : subset)
    if (s < 1 || s > 3)
      throw std::invalid_argument("build_bh_hamiltonian: state out of range");
  if (surfaces.d.empty())
    throw std::invalid_argument("build_bh_hamiltonian: NACs not computed");
  const int nr = surfaces.r_grid.n;
  const int ns = static_cast<int>(subset.size());
  const long dim = long(ns) * nr;
  if (dim > 6000)
    throw std::invalid_argument("build_bh_hamiltonian: dimension " +
                                std::to_string(dim) + " exceeds guard (6000)");
  const Eigen::MatrixXd kin = sinc_dvr_kinetic(surfaces.r_grid, params.M);
  const Eigen::MatrixXd der = sinc_dvr_derivative(surfaces.r_grid);

  // subset-restricted D(R) and G(R) = dD/dR + D^2 per grid point
  std::vector<Eigen::MatrixXd> dsub(nr), gsub(nr);
  for (int j = 0; j < nr; ++j) {
    Eigen::MatrixXd d(ns, ns);
    for (int a = 0; a < ns; ++a)
      for (int b = 0; b < ns; ++b)
        d(a, b) = surfaces.d[j](subset[a] - 1, subset[b] - 1);
    dsub[j] = d;
  }
  for (int j = 0; j < nr; ++j) {
    Eigen::MatrixXd dp(ns, ns);
    for (int a = 0; a < ns; ++a)
      for (int b = 0; b < ns; ++b)
        dp(a, b) = surfaces.dprime[j](subset[a] - 1, subset[b] - 1);
    gsub[j] = dp + dsub[j] * dsub[j];
  }

  BHHamiltonian bh;
  bh.grid = surfaces.r_grid;
  bh.states = subset;
  bh.h = Eigen::MatrixXd::Zero(dim, dim);
  for (int a = 0; a < ns; ++a) {
    bh.h.block(long(a) * nr, long(a) * nr, nr, nr) = kin;
    for (int j = 0; j < nr; ++j) {
      const double R = surfaces.r_grid.point(j);
      bh.h(long(a) * nr + j, long(a) * nr + j) +=
          surfaces.energies(subset[a] - 1, j) + 0.5 * params.k * R * R;
    }
  }
  for (int a = 0; a < ns; ++a)
    for (int b = 0; b < ns; ++b) {
      Eigen::MatrixXd block = Eigen::MatrixXd::Zero(nr, nr);
      for (int j = 0; j < nr; ++j) {
        block.row(j) = -(dsub[j](a, b) / params.M) * der.row(j);
        block(j, j) += -0.5 / params.M * gsub[j](a, b);
      }
      bh.h.block(long(a) * nr, long(b) * nr, nr, nr) += block;
    }
  bh.h = 0.5 * (bh.h + bh.h.transpose().eval());
  return bh;
}

// Ground-coherent nuclear Gaussian centered at R0 times the CSF-1 electronic
// vector, rotated to the BO basis pointwise and projected onto the subset.
inline DVRState initial_state_bo(double R0, const BOSurfaceSet& surfaces,
                                 const std::vector<int>& subset, double omega,
                                 double mass) {
  const int nr = surfaces.r_grid.n;
  const int ns = static_cast<int>(subset.size());
  DVRState st;
  st.grid = surfaces.r_grid;
  st.states = subset;
  st.amplitudes = Eigen::VectorXcd::Zero(long(ns) * nr);
  Eigen::VectorXd chi(nr);
  for (int j = 0; j < nr; ++j) {
    const double x = surfaces.r_grid.point(j) - R0;
    chi(j) = std::exp(-0.5 * mass * omega * x * x);
  }
  chi /= chi.norm();
  double kept = 0.0;
  for (int j = 0; j < nr; ++j) {
    const Eigen::Vector3d c_bo =
        surfaces.u[j].transpose() * Eigen::Vector3d(1, 0, 0);
    for (int a = 0; a < ns; ++a) {
      const double amp = chi(j) * c_bo(subset[a] - 1);
      st.amplitudes(long(a) * nr + j) = amp;
      kept += amp * amp;
    }
  }
  st.discarded_weight = 1.0 - kept;
  if (st.discarded_weight > 0.05)
    throw std::runtime_error(
        "initial_state_bo: projection discards weight " +
        std::to_string(st.discarded_weight) + " > 0.05");
  st.amplitudes /= st.amplitudes.norm();
  return st;
}

struct BHPropagation {
  std::vector<double> times;
  std::vector<DVRState> states;
};

// Spectral propagation of the Born-Huang Hamiltonian.
inline BHPropagation propagate_bh(const DVRState& psi0, const BHHamiltonian& bh,
                                  const std::vector<double>& t_grid) {
  if (bh.h.rows() != psi0.dim())
    throw std::invalid_argument("propagate_bh: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(bh.h);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("propagate_bh: eigensolver failed");
  const Eigen::VectorXcd w0 =
      es.eigenvectors().transpose().cast<cplx>() * psi0.amplitudes;
  BHPropagation out;
  for (double t : t_grid) {
    Eigen::VectorXcd w = w0;
    for (long i = 0; i < w.size(); ++i)
      w(i) *= std::exp(cplx(0, -es.eigenvalues()(i) * t));
    DVRState st = psi0;
    st.amplitudes = es.eigenvectors().cast<cplx>() * w;
    if (std::abs(st.norm() - 1.0) > 1e-8)
      throw std::runtime_error("propagate_bh: norm drift");
    out.times.push_back(t);
    out.states.push_back(std::move(st));
  }
  return out;
}

// CSF-basis coefficients c^CSF(R) of a DVR state (DVR l2 coefficients, not
// per-unit-R amplitudes).
inline Eigen::MatrixXcd csf_coefficients(const DVRState& st,
                                         const BOSurfaceSet& surfaces) {
  const int nr = st.grid.n;
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(3, nr);
  for (int j = 0; j < nr; ++j) {
    Eigen::Vector3cd c_bo = Eigen::Vector3cd::Zero();
    for (int a = 0; a < st.n_states(); ++a)
      c_bo(st.states[a] - 1) = st.amp(a, j);
    c.col(j) = surfaces.u[j].cast<cplx>() * c_bo;
  }
  return c;
}

// Fractional occupations of the four spin orbitals implied by the CSF
// content of a DVR state.
inline Eigen::VectorXd bo_occupation_numbers(const DVRState& st,
                                             const BOSurfaceSet& surfaces) {
  const Eigen::MatrixXcd c = csf_coefficients(st, surfaces);
  // per-CSF spin-orbital occupations: Phi1 -> (1,1,0,0), Phi2 -> (0,0,1,1),
  // Phi3 -> (1/2,1/2,1/2,1/2); CSF cross terms carry no diagonal density.
  Eigen::VectorXd fon = Eigen::VectorXd::Zero(4);
  for (int j = 0; j < st.grid.n; ++j) {
    const double w1 = std::norm(c(0, j)), w2 = std::norm(c(1, j)),
                 w3 = std::norm(c(2, j));
    fon(0) += w1 + 0.5 * w3;
    fon(1) += w1 + 0.5 * w3;
    fon(2) += w2 + 0.5 * w3;
    fon(3) += w2 + 0.5 * w3;
  }
  return fon;
}

// Joint electron-nuclear density of a DVR state on (orbital electron grid) x
// (explicit R grid); DVR amplitudes are interpolated as wavefunctions per
// unit sqrt(R).
inline DensityGrid bo_densities(const DVRState& st,
                                const OrbitalSet& orbitals,
                                const BOSurfaceSet& surfaces,
                                const SpatialGrid& out_grid) {
  if (orbitals.kind != OrbitalSet::Kind::Diabatic)
    throw std::invalid_argument("bo_densities: diabatic orbitals required");
  const Eigen::MatrixXcd c = csf_coefficients(st, surfaces);
  const double dR = st.grid.spacing();

  // CSF transition 1RDMs from the Fock-space vectors (sign-safe).
  const auto csf = csf_fock_vectors();
  std::vector<Eigen::MatrixXcd> gamma_ij(9, Eigen::MatrixXcd(4, 4));
  for (int i = 0; i < 3; ++i)
    for (int jj = 0; jj < 3; ++jj) {
      Eigen::MatrixXcd g(4, 4);
      for (int p = 0; p < 4; ++p)
        for (int q = 0; q < 4; ++q) {
          const Eigen::MatrixXcd a =
              qubit_operator_matrix(transition_operator(p, q, 4));
          g(p, q) = csf[i].dot(a * csf[jj]);
        }
      gamma_ij[i * 3 + jj] = g;
    }

  DensityGrid out;
  out.r_points = orbitals.electron_grid.points();
  out.R_points = out_grid.points();
  out.values = Eigen::MatrixXd::Zero(out.r_points.size(), out_grid.n);
  const double dr_e = orbitals.electron_grid.spacing();

  for (int m = 0; m < out_grid.n; ++m) {
    const double R = out_grid.point(m);
    // interpolate the per-unit-R CSF wavefunction
    double f = (R - st.grid.lo) / dR;
    f = std::min(std::max(f, 0.0), double(st.grid.n - 1));
    const int j0 = std::min(int(f), st.grid.n - 2);
    const double w = f - j0;
    const Eigen::Vector3cd cm =
        ((1.0 - w) * c.col(j0) + w * c.col(j0 + 1)) / std::sqrt(dR);
    Eigen::MatrixXcd gamma = Eigen::MatrixXcd::Zero(4, 4);
    for (int i = 0; i < 3; ++i)
      for (int jj = 0; jj < 3; ++jj)
        gamma += std::conj(cm(i)) * cm(jj) * gamma_ij[i * 3 + jj];
    const Eigen::VectorXd ua = orbitals.interpolate(0, R) / std::sqrt(dr_e);
    const Eigen::VectorXd ub = orbitals.interpolate(1, R) / std::sqrt(dr_e);
    for (int p = 0; p < 4; ++p)
      for (int q = 0; q < 4; ++q) {
        const double g = gamma(p, q).real();
        if (g == 0.0) continue;
        const Eigen::VectorXd& up = (p / 2 == 0) ? ua : ub;
        const Eigen::VectorXd& uq = (q / 2 == 0) ? ua : ub;
        out.values.col(m) += g * up.cwiseProduct(uq);
      }
  }
  return out;
}

// Weyl's dimension formula for the number of spin-S CSFs of N_e electrons in
// N_o spin orbitals (N_o/2 spatial orbitals), in exact integer arithmetic.
inline std::uint64_t weyl_count(double S, int n_orbitals, int n_electrons) {
  if (n_orbitals <= 0 || n_orbitals % 2 != 0)
    throw std::invalid_argument("weyl_count: N_o must be positive and even");
  if (n_electrons < 0 || n_electrons > n_orbitals)
    throw std::invalid_argument("weyl_count: N_e out of range");
  const double twice_s = 2.0 * S;
  if (std::abs(twice_s - std::lround(twice_s)) > 1e-12 || S < 0)
    throw std::invalid_argument("weyl_count: S must be a half-integer >= 0");
  const long s2 = std::lround(twice_s);
  if ((n_electrons - s2) % 2 != 0)
    throw std::invalid_argument("weyl_count: S incompatible with N_e parity");
  const long n = n_orbitals / 2 + 1;  // spatial orbitals + 1
  const long k1 = (n_electrons - s2) / 2;
  const long k2 = (n_electrons + s2) / 2 + 1;
  auto binom = [](long nn, long kk) -> std::uint64_t {
    if (kk < 0 || kk > nn) return 0;
    kk = std::min(kk, nn - kk);
    std::uint64_t r = 1;
    for (long i = 1; i <= kk; ++i) r = r * std::uint64_t(nn - kk + i) / i;
    return r;
  };
  // (2S+1)/(N_o/2+1) * C(n, k1) * C(n, k2) is always integral; divide last.
  return std::uint64_t(s2 + 1) * binom(n, k1) * binom(n, k2) / std::uint64_t(n);
}

// Brute-force CSF count: determinants with S_z = S minus those with
// S_z = S + 1 (branching-diagram identity), by direct enumeration.
inline std::uint64_t csf_count_enumeration(double S, int n_orbitals,
                                           int n_electrons) {
  if (n_orbitals <= 0 || n_orbitals % 2 != 0 || n_orbitals > 30)
    throw std::invalid_argument("csf_count_enumeration: bad N_o");
  const long s2 = std::lround(2.0 * S);
  auto dets_with_sz = [&](long twice_sz) -> std::uint64_t {
    std::uint64_t count = 0;
    for (std::uint32_t occ = 0; occ < (1u << n_orbitals); ++occ) {
      int ne = 0;
      long tsz = 0;
      for (int p = 0; p < n_orbitals; ++p)
        if ((occ >> p) & 1) {
          ++ne;
          tsz += (p % 2 == 0) ? 1 : -1;  // even index = spin up
        }
      if (ne == n_electrons && tsz == twice_sz) ++count;
    }
    return count;
  };
  const std::uint64_t at_s = dets_with_sz(s2);
  const std::uint64_t above = dets_with_sz(s2 + 2);
  return at_s - above;
}

}  // namespace cmqb
