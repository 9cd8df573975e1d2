#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "cmqb/orbitals.hpp"

namespace cmqb {

// Integral labels tabulated per R. The two-electron convention is
// v_pqrs = <pq|v_ee|rs> (p,r share electron 1; q,s share electron 2).
inline const std::vector<std::string>& integral_labels() {
  static const std::vector<std::string> labels = {
      "h_aa",   "h_bb",   "h_ab",   "v_aaaa", "v_bbbb",
      "v_abab", "v_aaab", "v_abbb", "v_aabb"};
  return labels;
}

struct IntegralTables {
  SpatialGrid r_grid;
  std::map<std::string, Eigen::VectorXd> values;  // label -> per-R samples
  Eigen::VectorXd d_ab, g_ab;                     // derivative couplings

  const Eigen::VectorXd& at(const std::string& label) const {
    auto it = values.find(label);
    if (it == values.end())
      throw std::invalid_argument("IntegralTables: unknown label " + label);
    return it->second;
  }
};

struct TaylorFit {
  double v0 = 0.0;
  double v1 = 0.0;
  double residual = 0.0;  // max |v(R) - (v0 + v1 R)| over the fit window
};

using TaylorFitSet = std::map<std::string, TaylorFit>;

// Electron-electron interaction kernel erf(|r-r'|/C_e)/|r-r'| sampled on the
// electron grid; coincident points use the analytic limit.
inline Eigen::MatrixXd ee_kernel(const SpatialGrid& grid,
                                 const ModelParams& params) {
  Eigen::MatrixXd k(grid.n, grid.n);
  for (int i = 0; i < grid.n; ++i)
    for (int j = 0; j <= i; ++j) {
      const double v = soft_coulomb(grid.point(i) - grid.point(j), params.C_e);
      k(i, j) = v;
      k(j, i) = v;
    }
  return k;
}

// One- and two-electron integrals and derivative couplings of the diabatic
// orbitals, tabulated on the R grid. With l2-normalized orbital vectors u the
// quadrature weights cancel: h_pq = u_p^T H1e u_q and
// v_pqrs = (u_p o u_r)^T K (u_q o u_s) with o the elementwise product.
inline IntegralTables compute_electron_integrals(const OrbitalSet& orbitals,
                                                 const ModelParams& params) {
  if (orbitals.kind != OrbitalSet::Kind::Diabatic)
    throw std::invalid_argument(
        "compute_electron_integrals: diabatic orbitals required");
  const SpatialGrid& eg = orbitals.electron_grid;
  const SpatialGrid& rg = orbitals.r_grid;
  const int nr = rg.n;
  const double dr = rg.spacing();
  const Eigen::MatrixXd kernel = ee_kernel(eg, params);
  const Eigen::MatrixXd kinetic = sinc_dvr_kinetic(eg, 1.0);

  IntegralTables t;
  t.r_grid = rg;
  for (const auto& label : integral_labels())
    t.values[label] = Eigen::VectorXd::Zero(nr);
  t.d_ab.resize(nr);
  t.g_ab.resize(nr);

  for (int j = 0; j < nr; ++j) {
    const double R = rg.point(j);
    const Eigen::VectorXd ua = orbitals.orb[0].col(j);
    const Eigen::VectorXd ub = orbitals.orb[1].col(j);

    Eigen::VectorXd ven(eg.n);
    for (int i = 0; i < eg.n; ++i)
      ven(i) = electron_nuclear_potential(params, eg.point(i), R);
    const Eigen::VectorXd h_ua = kinetic * ua + ven.cwiseProduct(ua);
    const Eigen::VectorXd h_ub = kinetic * ub + ven.cwiseProduct(ub);
    t.values["h_aa"](j) = ua.dot(h_ua);
    t.values["h_bb"](j) = ub.dot(h_ub);
    t.values["h_ab"](j) = ua.dot(h_ub);

    const Eigen::VectorXd aa = ua.cwiseProduct(ua);
    const Eigen::VectorXd bb = ub.cwiseProduct(ub);
    const Eigen::VectorXd ab = ua.cwiseProduct(ub);
    const Eigen::VectorXd k_aa = kernel * aa;
    const Eigen::VectorXd k_bb = kernel * bb;
    const Eigen::VectorXd k_ab = kernel * ab;
    t.values["v_aaaa"](j) = aa.dot(k_aa);
    t.values["v_bbbb"](j) = bb.dot(k_bb);
    t.values["v_abab"](j) = aa.dot(k_bb);
    t.values["v_aaab"](j) = aa.dot(k_ab);
    t.values["v_abbb"](j) = ab.dot(k_bb);
    t.values["v_aabb"](j) = ab.dot(k_ab);

    // Central finite differences in R; one-sided at the boundaries.
    const int jp = std::min(j + 1, nr - 1), jm = std::max(j - 1, 0);
    t.d_ab(j) = ua.dot((orbitals.orb[1].col(jp) - orbitals.orb[1].col(jm)) /
                       ((jp - jm) * dr));
    if (j > 0 && j < nr - 1) {
      t.g_ab(j) = ua.dot((orbitals.orb[1].col(jp) -
                          2.0 * orbitals.orb[1].col(j) +
                          orbitals.orb[1].col(jm)) /
                         (dr * dr));
    } else {
      t.g_ab(j) = 0.0;  // no centered stencil at the boundary
    }
  }
  return t;
}

// First-order Taylor fit about R = 0: v0 = value at R = 0, v1 = centered
// finite-difference slope across the fit window (secant through the window
// endpoints), residual = max deviation of the linear model over the window.
inline TaylorFitSet taylor_fit(const IntegralTables& tables,
                               double window_half_width = 0.8) {
  const SpatialGrid& rg = tables.r_grid;
  if (window_half_width > std::min(-rg.lo, rg.hi) + 1e-12)
    throw std::invalid_argument("taylor_fit: window outside the R table");
  const int j0 = rg.index_of(0.0);
  const double dr = rg.spacing();
  const int m = std::max(1, int(std::lround(window_half_width / dr)));
  TaylorFitSet fits;
  for (const auto& label : integral_labels()) {
    const Eigen::VectorXd& v = tables.at(label);
    TaylorFit f;
    f.v0 = v(j0);
    f.v1 = (v(j0 + m) - v(j0 - m)) / (2.0 * m * dr);
    for (int j = 0; j < rg.n; ++j) {
      const double R = rg.point(j);
      if (std::abs(R) > window_half_width + 1e-12) continue;
      f.residual = std::max(f.residual, std::abs(v(j) - (f.v0 + f.v1 * R)));
    }
    fits[label] = f;
  }
  return fits;
}

}  // namespace cmqb
