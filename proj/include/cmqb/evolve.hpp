#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

#include "cmqb/state.hpp"

namespace cmqb {

struct PropagationResult {
  std::vector<double> times;
  std::vector<VibronicState> states;
  std::string method;  // "exact" or "trotter"
};

// Spectral propagator exp(-i H t): one eigendecomposition, then any time is a
// diagonal phase application.
class SpectralPropagator {
 public:
  explicit SpectralPropagator(const Eigen::MatrixXcd& h) {
    if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
      throw std::invalid_argument("SpectralPropagator: H not Hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    if (es.info() != Eigen::Success)
      throw std::runtime_error("SpectralPropagator: eigensolver failed");
    evals_ = es.eigenvalues();
    evecs_ = es.eigenvectors();
  }

  Eigen::VectorXcd apply(const Eigen::VectorXcd& v, double t) const {
    Eigen::VectorXcd w = evecs_.adjoint() * v;
    for (long i = 0; i < w.size(); ++i)
      w(i) *= std::exp(cplx(0, -evals_(i) * t));
    return evecs_ * w;
  }

  const Eigen::VectorXd& eigenvalues() const { return evals_; }

 private:
  Eigen::VectorXd evals_;
  Eigen::MatrixXcd evecs_;
};

inline PropagationResult exact_evolve(const Eigen::MatrixXcd& h,
                                      const VibronicState& psi0,
                                      const std::vector<double>& t_grid) {
  if (h.rows() != psi0.dim())
    throw std::invalid_argument("exact_evolve: dimension mismatch");
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1]))
      throw std::invalid_argument("exact_evolve: times must increase");
  SpectralPropagator prop(h);
  PropagationResult out;
  out.method = "exact";
  for (double t : t_grid) {
    VibronicState st = psi0;
    st.amplitudes = prop.apply(psi0.amplitudes, t);
    out.times.push_back(t);
    out.states.push_back(std::move(st));
  }
  return out;
}

inline std::vector<double> uniform_times(double t_final, double dt_out) {
  std::vector<double> t;
  for (int i = 1; i * dt_out <= t_final + 1e-9; ++i) t.push_back(i * dt_out);
  return t;
}

}  // namespace cmqb
