#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace cmqb {

// Truncated Fock-space operators for a single bosonic mode.
inline Eigen::MatrixXd boson_annihilate(int n_fock) {
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n_fock, n_fock);
  for (int v = 1; v < n_fock; ++v) b(v - 1, v) = std::sqrt(double(v));
  return b;
}

inline Eigen::MatrixXd boson_create(int n_fock) {
  return boson_annihilate(n_fock).transpose();
}

inline Eigen::MatrixXd boson_number(int n_fock) {
  Eigen::MatrixXd n = Eigen::MatrixXd::Zero(n_fock, n_fock);
  for (int v = 0; v < n_fock; ++v) n(v, v) = v;
  return n;
}

// b + b^dag (tridiagonal, proportional to the mode position operator).
inline Eigen::MatrixXd boson_position_raw(int n_fock) {
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n_fock, n_fock);
  for (int v = 1; v < n_fock; ++v) {
    q(v - 1, v) = std::sqrt(double(v));
    q(v, v - 1) = std::sqrt(double(v));
  }
  return q;
}

// exp(alpha b^dag - alpha^* b) by exponentiating the truncated generator.
// Exactly unitary on the truncated space; accuracy against the untruncated
// operator is the caller's concern (see tomography leakage monitor).
inline Eigen::MatrixXcd displacement_operator(std::complex<double> alpha,
                                              int n_fock) {
  // generator G = alpha b^dag - alpha^* b is anti-Hermitian; exponentiate
  // via the Hermitian matrix K = -i G.
  Eigen::MatrixXcd g = alpha * boson_create(n_fock).cast<std::complex<double>>() -
                       std::conj(alpha) *
                           boson_annihilate(n_fock).cast<std::complex<double>>();
  Eigen::MatrixXcd k = std::complex<double>(0, -1) * g;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(k);
  Eigen::VectorXcd phases =
      (std::complex<double>(0, 1) * es.eigenvalues().cast<std::complex<double>>())
          .array()
          .exp();
  return es.eigenvectors() * phases.asDiagonal() *
         es.eigenvectors().adjoint();
}

// Degree-1 polynomial in (b + b^dag): c0 + c1 (b + b^dag). Coefficients are
// complex while intermediate Jordan-Wigner phases circulate; physical
// Hamiltonian terms end up real.
struct BosonPoly {
  std::complex<double> c0{0, 0};
  std::complex<double> c1{0, 0};

  BosonPoly() = default;
  BosonPoly(std::complex<double> a0, std::complex<double> a1) : c0(a0), c1(a1) {}
  static BosonPoly constant(double v) { return {{v, 0}, {0, 0}}; }

  BosonPoly& operator+=(const BosonPoly& o) {
    c0 += o.c0;
    c1 += o.c1;
    return *this;
  }
  BosonPoly operator*(const std::complex<double>& f) const {
    return {c0 * f, c1 * f};
  }
  bool operator==(const BosonPoly& o) const { return c0 == o.c0 && c1 == o.c1; }

  Eigen::MatrixXcd matrix(int n_fock) const {
    return c0 * Eigen::MatrixXcd::Identity(n_fock, n_fock) +
           c1 * boson_position_raw(n_fock).cast<std::complex<double>>();
  }
};

inline double coeff_norm(const BosonPoly& p) {
  return std::abs(p.c0) + std::abs(p.c1);
}
inline bool coeff_is_real(const BosonPoly& p, double tol) {
  return std::abs(p.c0.imag()) <= tol && std::abs(p.c1.imag()) <= tol;
}

}  // namespace cmqb
