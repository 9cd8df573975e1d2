#include <doctest.h>

#include <cmath>

#include "cmqb/bo.hpp"
#include "cmqb/hamiltonian.hpp"
#include "printed_model.hpp"

using namespace cmqb;

namespace {

// Synthetic integral fits with every label distinct and nonzero, so any
// mis-assembled coefficient shows up.
TaylorFitSet synthetic_fits() {
  TaylorFitSet f;
  f["h_aa"] = {-2.5, 0.21, 0};
  f["h_bb"] = {-2.5, -0.21, 0};
  f["h_ab"] = {-0.004, 0.0002, 0};
  f["v_aaaa"] = {0.22, 0.0005, 0};
  f["v_bbbb"] = {0.22, -0.0005, 0};
  f["v_abab"] = {0.16, 0.0001, 0};
  f["v_aaab"] = {0.0002, -0.0003, 0};
  f["v_abbb"] = {0.0002, 0.0003, 0};
  f["v_aabb"] = {2e-6, 1e-7, 0};
  return f;
}

}  // namespace

TEST_CASE("model group table covers exactly the 27 printed strings") {
  int count = 0;
  std::map<int, int> per_group;
  for (int idx = 0; idx < 256; ++idx) {
    PauliString s(4);
    int x = idx;
    for (int q = 0; q < 4; ++q) {
      s.letters[q] = uint8_t(x % 4);
      x /= 4;
    }
    const int g = model_term_group(s);
    if (g >= 0) {
      ++count;
      per_group[g]++;
    }
  }
  CHECK(count == 27);
  CHECK(per_group.size() == 11);
  CHECK(per_group[0] == 1);
  CHECK(per_group[7] == 4);
  CHECK(per_group[10] == 4);
}

TEST_CASE("programmatic JW assembly matches the printed coefficient table") {
  const TaylorFitSet fits = synthetic_fits();
  ModelParams params;
  const CMQBHamiltonianSpec spec =
      build_molecular_qubit_hamiltonian(fits, params);
  CHECK(spec.terms.size() == 27);

  const auto v0 = cmqb_test::printed_coefficients(
      cmqb_test::fit_values(fits, false));
  const auto v1 = cmqb_test::printed_coefficients(
      cmqb_test::fit_values(fits, true));
  for (const auto& t : spec.terms) {
    const std::string s = t.pauli.str();
    double expected0 = v0.at(s);
    if (s == "IIII") expected0 += 0.5 * spec.omega;  // oscillator zero point
    CHECK_MESSAGE(std::abs(t.V0 - expected0) < 1e-12, s);
    CHECK_MESSAGE(std::abs(t.V1 - v1.at(s) * spec.r_scale()) < 1e-12, s);
  }
}

TEST_CASE("terms are grouped in printed order and all strings mapped") {
  const CMQBHamiltonianSpec spec =
      build_molecular_qubit_hamiltonian(synthetic_fits(), ModelParams{});
  int prev = -1;
  for (const auto& t : spec.terms) {
    CHECK(t.group >= 0);
    CHECK(t.group >= prev);
    prev = t.group;
  }
}

TEST_CASE("electronic Hamiltonian commutes with N and S_z") {
  const Eigen::MatrixXcd h = qubit_operator_matrix(
      electronic_qubit_hamiltonian(synthetic_fits(), 0.07));
  const Eigen::MatrixXcd n = qubit_operator_matrix(number_operator(4));
  const Eigen::MatrixXcd sz = qubit_operator_matrix(sz_operator(4));
  CHECK((h * n - n * h).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((h * sz - sz * h).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("CSF projection of the JW Hamiltonian equals the printed 3x3") {
  const TaylorFitSet fits = synthetic_fits();
  const auto csf = csf_fock_vectors();
  for (double R : {-0.3, 0.0, 0.12}) {
    const Eigen::MatrixXcd h =
        qubit_operator_matrix(electronic_qubit_hamiltonian(fits, R));
    Eigen::Matrix3cd proj;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) proj(i, j) = csf[i].dot(h * csf[j]);
    const Eigen::Matrix3d ref = build_csf_hamiltonian(fits, R);
    CHECK((proj - ref.cast<cplx>()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("symbolic matrix: Hermitian, dimension and guards") {
  const CMQBHamiltonianSpec spec =
      build_molecular_qubit_hamiltonian(synthetic_fits(), ModelParams{});
  const Eigen::MatrixXcd h = symbolic_matrix(spec, 6);
  CHECK(h.rows() == 6 * 16);
  CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() < 1e-13);
  CHECK_THROWS(symbolic_matrix(spec, 1));
  // matches the sum of per-term matrices plus the free oscillator
  Eigen::MatrixXcd direct = Eigen::MatrixXcd::Zero(96, 96);
  for (const auto& t : spec.terms) direct += term_matrix(t, 6);
  for (int v = 0; v < 6; ++v)
    for (int q = 0; q < 16; ++q)
      direct(v * 16 + q, v * 16 + q) += spec.omega * v;
  CHECK((h - direct).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("hamiltonian JSON round-trip preserves the spec") {
  const CMQBHamiltonianSpec spec =
      build_molecular_qubit_hamiltonian(synthetic_fits(), ModelParams{});
  const CMQBHamiltonianSpec back =
      hamiltonian_from_json(hamiltonian_to_json(spec));
  REQUIRE(back.terms.size() == spec.terms.size());
  CHECK(back.omega == spec.omega);
  CHECK(back.mass == spec.mass);
  for (std::size_t i = 0; i < spec.terms.size(); ++i) {
    CHECK(back.terms[i].pauli == spec.terms[i].pauli);
    CHECK(back.terms[i].V0 == spec.terms[i].V0);
    CHECK(back.terms[i].V1 == spec.terms[i].V1);
    CHECK(back.terms[i].group == spec.terms[i].group);
  }
}

TEST_CASE("missing integral label is rejected") {
  TaylorFitSet f = synthetic_fits();
  f.erase("v_abab");
  CHECK_THROWS(build_molecular_qubit_hamiltonian(f, ModelParams{}));
}
