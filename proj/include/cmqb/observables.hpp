#pragma once

#include <Eigen/Dense>
#include <vector>

#include "cmqb/density.hpp"
#include "cmqb/orbitals.hpp"
#include "cmqb/state.hpp"
#include "cmqb/tomography.hpp"

namespace cmqb {

// Position-resolved 1RDM Gamma_pq(R) contracted with the orbital values:
// rho(r, R) = sum_pq Gamma_pq(R) eta_p(r; R) eta_q(r; R). Reference joint
// density straight from the statevector (no measurement layer).
inline DensityGrid joint_density_from_state(const VibronicState& st,
                                            const OrbitalSet& orbitals,
                                            const SpatialGrid& R_grid) {
  NuclearWavefunction nw = nuclear_wavefunction(st, R_grid);
  const int n_orb = st.n_qubits;
  std::vector<Eigen::MatrixXcd> a_pq;  // qubit matrices of a^dag_p a_q
  for (int p = 0; p < n_orb; ++p)
    for (int q = 0; q < n_orb; ++q)
      a_pq.push_back(
          qubit_operator_matrix(transition_operator(p, q, n_orb)));

  DensityGrid out;
  out.r_points = orbitals.electron_grid.points();
  out.R_points = R_grid.points();
  out.values = Eigen::MatrixXd::Zero(out.r_points.size(), R_grid.n);
  const double dr_e = orbitals.electron_grid.spacing();

  for (int m = 0; m < R_grid.n; ++m) {
    const Eigen::VectorXcd phi = nw.per_sector.row(m).transpose();
    Eigen::MatrixXcd gamma(n_orb, n_orb);
    for (int p = 0; p < n_orb; ++p)
      for (int q = 0; q < n_orb; ++q)
        gamma(p, q) = phi.dot(a_pq[p * n_orb + q] * phi);
    const Eigen::VectorXd ua =
        orbitals.interpolate(0, R_grid.point(m)) / std::sqrt(dr_e);
    const Eigen::VectorXd ub =
        orbitals.interpolate(1, R_grid.point(m)) / std::sqrt(dr_e);
    for (int p = 0; p < n_orb; ++p)
      for (int q = 0; q < n_orb; ++q) {
        const double g = gamma(p, q).real();
        if (g == 0.0) continue;
        const Eigen::VectorXd& up = (p / 2 == 0) ? ua : ub;
        const Eigen::VectorXd& uq = (q / 2 == 0) ? ua : ub;
        out.values.col(m) += g * up.cwiseProduct(uq);
      }
  }
  return out;
}

// Nuclear density rho(R) on an explicit grid, straight from the statevector.
inline DensityGrid nuclear_density_from_state(const VibronicState& st,
                                              const SpatialGrid& R_grid) {
  NuclearWavefunction nw = nuclear_wavefunction(st, R_grid);
  DensityGrid out;
  out.R_points = nw.r_points;
  out.values = nw.density.transpose();
  return out;
}

}  // namespace cmqb
