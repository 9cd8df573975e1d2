#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace cmqb {

// Sampled probability density: either nuclear-only rho(R) or joint rho(r, R).
// Joint values are stored with r as the row index (r-fastest on disk).
struct DensityGrid {
  Eigen::VectorXd r_points;  // electron grid (empty for nuclear-only)
  Eigen::VectorXd R_points;  // nuclear grid
  Eigen::MatrixXd values;    // (n_r x n_R), or (1 x n_R) for nuclear-only
  double time = 0.0;

  bool is_joint() const { return r_points.size() > 0; }

  double dr() const {
    return r_points.size() > 1 ? r_points(1) - r_points(0) : 1.0;
  }
  double dR() const {
    return R_points.size() > 1 ? R_points(1) - R_points(0) : 1.0;
  }

  double integral() const { return values.sum() * dr() * dR(); }

  // Fraction of the total density with electron coordinate r < 0.
  double electron_weight_left() const {
    if (!is_joint()) throw std::logic_error("electron_weight_left: not joint");
    double left = 0.0, total = 0.0;
    for (int i = 0; i < r_points.size(); ++i) {
      const double s = values.row(i).sum();
      total += s;
      if (r_points(i) < 0.0) left += s;
    }
    return left / total;
  }
};

// L1 distance between two densities on identical grids.
inline double density_l1(const DensityGrid& a, const DensityGrid& b) {
  if (a.values.rows() != b.values.rows() || a.values.cols() != b.values.cols())
    throw std::invalid_argument("density_l1: grid mismatch");
  return (a.values - b.values).cwiseAbs().sum() * a.dr() * a.dR();
}

}  // namespace cmqb
