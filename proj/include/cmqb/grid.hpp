#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace cmqb {

// Uniform 1-D grid. Orbital/wavefunction vectors over a grid are stored with
// l2 normalization (coefficient c_i ~ sqrt(spacing) * psi(x_i)), so inner
// products are plain dot products and no quadrature weights appear in
// operator matrix elements.
struct SpatialGrid {
  double lo = 0.0;
  double hi = 0.0;
  int n = 0;

  SpatialGrid() = default;
  SpatialGrid(double lo_, double hi_, int n_) : lo(lo_), hi(hi_), n(n_) {
    if (n < 3) throw std::invalid_argument("SpatialGrid: need n >= 3");
    if (!(hi > lo)) throw std::invalid_argument("SpatialGrid: hi <= lo");
  }

  double spacing() const { return (hi - lo) / (n - 1); }
  double point(int i) const { return lo + spacing() * i; }

  Eigen::VectorXd points() const {
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x(i) = point(i);
    return x;
  }

  // Trapezoid quadrature weights (for norm checks on function values).
  Eigen::VectorXd trapezoid_weights() const {
    Eigen::VectorXd w = Eigen::VectorXd::Constant(n, spacing());
    w(0) *= 0.5;
    w(n - 1) *= 0.5;
    return w;
  }

  int index_of(double x, double tol = 1e-9) const {
    double f = (x - lo) / spacing();
    int i = static_cast<int>(std::lround(f));
    if (i < 0 || i >= n || std::abs(f - i) > tol)
      throw std::invalid_argument("SpatialGrid: x not on grid");
    return i;
  }
};

// Colbert-Miller sinc-DVR kinetic energy matrix, -1/(2m) d^2/dx^2 on a
// uniform grid with the (-inf, inf) formula.
inline Eigen::MatrixXd sinc_dvr_kinetic(const SpatialGrid& grid, double mass) {
  const int n = grid.n;
  const double d = grid.spacing();
  const double pref = 1.0 / (2.0 * mass * d * d);
  Eigen::MatrixXd t(n, n);
  for (int i = 0; i < n; ++i) {
    t(i, i) = pref * M_PI * M_PI / 3.0;
    for (int j = 0; j < i; ++j) {
      const int k = i - j;
      double v = pref * 2.0 / double(k) / double(k);
      if (k % 2) v = -v;
      t(i, j) = v;
      t(j, i) = v;
    }
  }
  return t;
}

// Antisymmetric sinc-DVR first-derivative matrix d/dx.
inline Eigen::MatrixXd sinc_dvr_derivative(const SpatialGrid& grid) {
  const int n = grid.n;
  const double d = grid.spacing();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const int k = i - j;
      double v = 1.0 / (d * k);
      if (k % 2 != 0) v = -v;  // (-1)^k / (d k)
      m(i, j) = v;
    }
  return m;
}

}  // namespace cmqb
