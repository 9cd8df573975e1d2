#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>

#include "cmqb/grid.hpp"

namespace cmqb {

// One-dimensional two-electron Shin-Metiu model: two fixed ions at +-L/2, a
// moving ion at R bound by a harmonic potential, soft-Coulomb interactions.
// All quantities in atomic units.
struct ModelParams {
  double M = 1836.0;  // moving-ion mass
  double k = 4.0;     // harmonic spring constant
  double L = 5.4;     // fixed-ion separation
  double C_l = 0.3;   // softening, left fixed ion
  double C_r = 0.3;   // softening, right fixed ion
  double C_c = 0.6;   // softening, moving ion
  double C_e = 5.0;   // softening, electron-electron

  void validate() const {
    if (M <= 0 || k <= 0 || L <= 0 || C_l <= 0 || C_r <= 0 || C_c <= 0 ||
        C_e <= 0)
      throw std::invalid_argument("ModelParams: all parameters must be > 0");
  }

  double omega() const { return std::sqrt(k / M); }
};

// erf(|x|/C)/|x| with the analytic limit 2/(C sqrt(pi)) at x -> 0.
inline double soft_coulomb(double x, double c) {
  const double ax = std::abs(x);
  if (ax < 1e-6 * c) {
    const double z = ax / c;
    return 2.0 / (c * std::sqrt(M_PI)) * (1.0 - z * z / 3.0);
  }
  return std::erf(ax / c) / ax;
}

inline double nuclear_potential(const ModelParams& p, double R) {
  return 0.5 * p.k * R * R;
}

// Electron-nuclear attraction wells at the moving ion and the two fixed ions.
inline double electron_nuclear_potential(const ModelParams& p, double r,
                                         double R) {
  return -soft_coulomb(r - R, p.C_c) - soft_coulomb(r - 0.5 * p.L, p.C_r) -
         soft_coulomb(r + 0.5 * p.L, p.C_l);
}

// Discretized one-electron Hamiltonian h_1e(r; R): sinc-DVR kinetic energy
// plus the three soft-Coulomb attraction wells on the diagonal.
inline Eigen::MatrixXd build_h1e(const SpatialGrid& grid,
                                 const ModelParams& params, double R) {
  params.validate();
  if (grid.lo > -0.5 * params.L - 3.0 || grid.hi < 0.5 * params.L + 3.0)
    throw std::invalid_argument(
        "build_h1e: electron grid must span the fixed ions with >= 3 a.u. "
        "margin");
  Eigen::MatrixXd h = sinc_dvr_kinetic(grid, 1.0);
  for (int i = 0; i < grid.n; ++i) {
    const double v = electron_nuclear_potential(params, grid.point(i), R);
    if (!std::isfinite(v))
      throw std::runtime_error("build_h1e: non-finite potential entry");
    h(i, i) += v;
  }
  return h;
}

struct AdiabaticPair {
  double e1 = 0.0, e2 = 0.0;
  Eigen::VectorXd psi1, psi2;  // l2-normalized grid coefficients
};

// Sign convention: positive amplitude at the point of maximum |psi|.
inline void fix_orbital_sign(Eigen::VectorXd& v) {
  int imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  if (v(imax) < 0) v = -v;
}

// Two lowest eigenpairs of a real-symmetric h1e, ascending.
inline AdiabaticPair solve_adiabatic_orbitals(const Eigen::MatrixXd& h1e,
                                              double degeneracy_tol = 1e-10) {
  if ((h1e - h1e.transpose()).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("solve_adiabatic_orbitals: h1e not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h1e);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("solve_adiabatic_orbitals: eigensolver failed");
  AdiabaticPair out;
  out.e1 = es.eigenvalues()(0);
  out.e2 = es.eigenvalues()(1);
  if (out.e2 - out.e1 < degeneracy_tol)
    throw std::runtime_error(
        "solve_adiabatic_orbitals: lowest pair degenerate beyond tolerance");
  out.psi1 = es.eigenvectors().col(0);
  out.psi2 = es.eigenvectors().col(1);
  fix_orbital_sign(out.psi1);
  fix_orbital_sign(out.psi2);
  return out;
}

}  // namespace cmqb
