#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "cmqb/model.hpp"

namespace cmqb {

// Two real orbitals per R-grid point, stored as l2-normalized vectors on the
// electron grid (columns of a matrix, one column pair per R point).
struct OrbitalSet {
  enum class Kind { Adiabatic, Diabatic };
  Kind kind = Kind::Adiabatic;
  SpatialGrid electron_grid;
  SpatialGrid r_grid;  // nuclear positions
  // orb[0], orb[1]: (n_electron x n_R) matrices.
  std::array<Eigen::MatrixXd, 2> orb;
  Eigen::VectorXd e1, e2;  // adiabatic eigenvalues per R (kept for diagnostics)

  int n_r() const { return r_grid.n; }

  // Orbital values linearly interpolated (and clamped) in R, returned as
  // l2-normalized grid coefficients.
  Eigen::VectorXd interpolate(int which, double R) const {
    double f = (R - r_grid.lo) / r_grid.spacing();
    if (f <= 0) return orb[which].col(0);
    if (f >= n_r() - 1) return orb[which].col(n_r() - 1);
    int i = static_cast<int>(f);
    double w = f - i;
    return (1.0 - w) * orb[which].col(i) + w * orb[which].col(i + 1);
  }
};

inline double fraction_left(const SpatialGrid& grid, const Eigen::VectorXd& v) {
  double left = 0.0, total = 0.0;
  for (int i = 0; i < grid.n; ++i) {
    const double p = v(i) * v(i);
    total += p;
    if (grid.point(i) < 0.0) left += p;
  }
  return left / total;
}

// Solve the two lowest adiabatic orbitals on every R point and chain the
// signs so each orbital is continuous along R.
inline OrbitalSet solve_adiabatic_set(const SpatialGrid& electron_grid,
                                      const SpatialGrid& r_grid,
                                      const ModelParams& params) {
  OrbitalSet set;
  set.kind = OrbitalSet::Kind::Adiabatic;
  set.electron_grid = electron_grid;
  set.r_grid = r_grid;
  set.orb[0].resize(electron_grid.n, r_grid.n);
  set.orb[1].resize(electron_grid.n, r_grid.n);
  set.e1.resize(r_grid.n);
  set.e2.resize(r_grid.n);
  for (int j = 0; j < r_grid.n; ++j) {
    auto pair = solve_adiabatic_orbitals(
        build_h1e(electron_grid, params, r_grid.point(j)));
    set.e1(j) = pair.e1;
    set.e2(j) = pair.e2;
    set.orb[0].col(j) = pair.psi1;
    set.orb[1].col(j) = pair.psi2;
    if (j > 0) {
      for (int o = 0; o < 2; ++o)
        if (set.orb[o].col(j).dot(set.orb[o].col(j - 1)) < 0)
          set.orb[o].col(j) *= -1.0;
    }
  }
  return set;
}

// First derivative coupling d_12(R) = <psi_1 | d/dR psi_2> by central
// differences (one-sided at the grid ends).
inline Eigen::VectorXd adiabatic_coupling(const OrbitalSet& set) {
  const int nr = set.n_r();
  const double dr = set.r_grid.spacing();
  Eigen::VectorXd d(nr);
  for (int j = 0; j < nr; ++j) {
    int jp = std::min(j + 1, nr - 1), jm = std::max(j - 1, 0);
    Eigen::VectorXd dpsi =
        (set.orb[1].col(jp) - set.orb[1].col(jm)) / ((jp - jm) * dr);
    d(j) = set.orb[0].col(j).dot(dpsi);
  }
  return d;
}

// Two-state diabatization: integrate the mixing angle d(theta)/dR = -d_12(R)
// along the grid, anchored at the R endpoint where the adiabatic orbitals are
// most localized. The accumulated angle between adjacent grid points is taken
// from the 2x2 orbital overlap (discrete parallel transport), which stays
// accurate through the sharp coupling peak where naive quadrature of d_12
// fails. Output eta_a localized left, eta_b localized right.
inline OrbitalSet diabatize(const OrbitalSet& adiabatic) {
  if (adiabatic.kind != OrbitalSet::Kind::Adiabatic)
    throw std::invalid_argument("diabatize: input must be adiabatic");
  const int nr = adiabatic.n_r();
  const double dr = adiabatic.r_grid.spacing();
  Eigen::VectorXd d12 = adiabatic_coupling(adiabatic);
  if (d12.cwiseAbs().maxCoeff() * dr >= 0.5)
    throw std::runtime_error(
        "diabatize: R grid too coarse for the coupling peak (|d12| dR >= 0.5)");

  // Localization score per endpoint: best of both orbitals.
  auto loc = [&](int j) {
    double a = std::abs(2.0 * fraction_left(adiabatic.electron_grid,
                                            adiabatic.orb[0].col(j)) -
                        1.0);
    double b = std::abs(2.0 * fraction_left(adiabatic.electron_grid,
                                            adiabatic.orb[1].col(j)) -
                        1.0);
    return std::max(a, b);
  };
  const double loc_lo = loc(0), loc_hi = loc(nr - 1);
  if (std::max(loc_lo, loc_hi) < 0.5)
    throw std::runtime_error(
        "diabatize: no localized anchor endpoint (max localization " +
        std::to_string(std::max(loc_lo, loc_hi)) + " < 0.5)");

  // Finite frame rotation between adjacent grid points from the orbital
  // overlap matrix; equals the integral of d_12 across the interval.
  Eigen::VectorXd delta(nr - 1);
  for (int j = 0; j + 1 < nr; ++j) {
    const double o00 = adiabatic.orb[0].col(j).dot(adiabatic.orb[0].col(j + 1));
    const double o01 = adiabatic.orb[0].col(j).dot(adiabatic.orb[1].col(j + 1));
    const double o10 = adiabatic.orb[1].col(j).dot(adiabatic.orb[0].col(j + 1));
    const double o11 = adiabatic.orb[1].col(j).dot(adiabatic.orb[1].col(j + 1));
    delta(j) = std::atan2(o01 - o10, o00 + o11);
  }
  // Anchor symmetrically: accumulate from the left endpoint, then split the
  // transport defect -- the deviation of the total angle from an exact
  // multiple of pi/2 (a quarter turn only relabels the pair) -- between the
  // two localized endpoints. This restores the model's R -> -R mirror
  // symmetry that a single-endpoint anchor breaks.
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(nr);
  for (int j = 1; j < nr; ++j) theta(j) = theta(j - 1) - delta(j - 1);
  const double defect =
      theta(nr - 1) -
      M_PI_2 * std::round(theta(nr - 1) / M_PI_2);
  theta.array() -= 0.5 * defect;

  OrbitalSet dia;
  dia.kind = OrbitalSet::Kind::Diabatic;
  dia.electron_grid = adiabatic.electron_grid;
  dia.r_grid = adiabatic.r_grid;
  dia.e1 = adiabatic.e1;
  dia.e2 = adiabatic.e2;
  dia.orb[0].resize(adiabatic.electron_grid.n, nr);
  dia.orb[1].resize(adiabatic.electron_grid.n, nr);
  for (int j = 0; j < nr; ++j) {
    const double c = std::cos(theta(j)), s = std::sin(theta(j));
    dia.orb[0].col(j) =
        c * adiabatic.orb[0].col(j) - s * adiabatic.orb[1].col(j);
    dia.orb[1].col(j) =
        s * adiabatic.orb[0].col(j) + c * adiabatic.orb[1].col(j);
  }

  // Label: eta_a = left-localized at the R-grid midpoint, eta_b = right.
  const int mid = nr / 2;
  if (fraction_left(dia.electron_grid, dia.orb[0].col(mid)) <
      fraction_left(dia.electron_grid, dia.orb[1].col(mid)))
    std::swap(dia.orb[0], dia.orb[1]);

  // One global sign per orbital: positive peak amplitude at the midpoint.
  for (int o = 0; o < 2; ++o) {
    int imax = 0;
    dia.orb[o].col(mid).cwiseAbs().maxCoeff(&imax);
    if (dia.orb[o].col(mid)(imax) < 0) dia.orb[o] *= -1.0;
  }

  // Residual diabatic coupling must be strongly suppressed.
  Eigen::VectorXd dab(nr);
  for (int j = 0; j < nr; ++j) {
    int jp = std::min(j + 1, nr - 1), jm = std::max(j - 1, 0);
    Eigen::VectorXd dpsi =
        (dia.orb[1].col(jp) - dia.orb[1].col(jm)) / ((jp - jm) * dr);
    dab(j) = dia.orb[0].col(j).dot(dpsi);
  }
  if (dab.cwiseAbs().maxCoeff() > 1e-2 * d12.cwiseAbs().maxCoeff())
    throw std::runtime_error(
        "diabatize: residual coupling not suppressed below 1e-2 of the "
        "adiabatic peak");
  return dia;
}

}  // namespace cmqb
