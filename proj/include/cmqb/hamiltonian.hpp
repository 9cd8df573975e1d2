#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cmqb/fermion.hpp"
#include "cmqb/integrals.hpp"

namespace cmqb {

// One coupled term: (V0 + V1 (b + b^dag)) * Pauli string.
struct CMQBTerm {
  PauliString pauli;
  double V0 = 0.0;
  double V1 = 0.0;
  int group = -1;  // coefficient-group index in the printed model expression
};

// Mapped model Hamiltonian: omega b^dag b + sum of CMQBTerms. Terms are kept
// in the model's fixed coefficient-group order for deterministic Trotter
// splitting.
struct CMQBHamiltonianSpec {
  double omega = 0.0;
  double mass = 0.0;
  int n_qubits = 0;
  int n_mode = 1;
  std::vector<CMQBTerm> terms;

  // Scale factor between (b + b^dag) and the physical displacement R of the
  // moving ion: R = (b + b^dag) / sqrt(2 M omega).
  double r_scale() const { return 1.0 / std::sqrt(2.0 * mass * omega); }
};

// Group index of each Pauli string in the four-orbital model expression
// (0 = identity ... 10 = the XXYY exchange group); -1 if not part of it.
inline int model_term_group(const PauliString& s) {
  static const std::map<std::string, int> groups = {
      {"IIII", 0},
      {"ZIII", 1}, {"IZII", 1},
      {"IIZI", 2}, {"IIIZ", 2},
      {"ZZII", 3},
      {"IIZZ", 4},
      {"ZIIZ", 5}, {"IZZI", 5},
      {"ZIZI", 6}, {"IZIZ", 6},
      {"XZXI", 7}, {"YZYI", 7}, {"IXZX", 7}, {"IYZY", 7},
      {"ZXZX", 8}, {"ZYZY", 8}, {"XIXI", 8}, {"YIYI", 8},
      {"XZXZ", 9}, {"YZYZ", 9}, {"IXIX", 9}, {"IYIY", 9},
      {"XXYY", 10}, {"YYXX", 10}, {"XYYX", 10}, {"YXXY", 10}};
  auto it = groups.find(s.str());
  return it == groups.end() ? -1 : it->second;
}

// Spin-orbital layout: (0,1) = (eta_a up, eta_a down), (2,3) = (eta_b up,
// eta_b down).
inline int spatial_of(int p) { return p / 2; }
inline bool spin_up(int p) { return p % 2 == 0; }

inline std::string one_electron_label(int p, int q) {
  static const char* names[2][2] = {{"h_aa", "h_ab"}, {"h_ab", "h_bb"}};
  return names[spatial_of(p)][spatial_of(q)];
}

// Canonical spatial label of v_pqrs: electron 1 carries (p,r), electron 2
// carries (q,s); real orbitals make each pair and the pair order symmetric.
inline std::string two_electron_label(int p, int q, int r, int s) {
  auto pair_key = [](int x, int y) {
    int a = std::min(x, y), b = std::max(x, y);
    return a * 2 + b;  // aa=0, ab=1, bb=3
  };
  int k1 = pair_key(spatial_of(p), spatial_of(r));
  int k2 = pair_key(spatial_of(q), spatial_of(s));
  if (k1 > k2) std::swap(k1, k2);
  if (k1 == 0 && k2 == 0) return "v_aaaa";
  if (k1 == 3 && k2 == 3) return "v_bbbb";
  if (k1 == 0 && k2 == 3) return "v_abab";
  if (k1 == 0 && k2 == 1) return "v_aaab";
  if (k1 == 1 && k2 == 3) return "v_abbb";
  return "v_aabb";  // (ab, ab)
}

// Second-quantized electronic terms of the four-spin-orbital model with the
// given per-label coefficient polynomials (derivative couplings are zero for
// the diabatic orbitals and omitted).
inline std::vector<FermionTerm> model_electronic_terms(
    const std::map<std::string, BosonPoly>& coeffs) {
  constexpr int n_orb = 4;
  auto coeff = [&](const std::string& label) {
    auto it = coeffs.find(label);
    if (it == coeffs.end())
      throw std::invalid_argument("model_electronic_terms: missing label " +
                                  label);
    return it->second;
  };
  std::vector<FermionTerm> terms;
  for (int p = 0; p < n_orb; ++p)
    for (int q = 0; q < n_orb; ++q) {
      if (spin_up(p) != spin_up(q)) continue;
      terms.push_back({coeff(one_electron_label(p, q)),
                       {{p, true}, {q, false}}});
    }
  for (int p = 0; p < n_orb; ++p)
    for (int q = 0; q < n_orb; ++q)
      for (int r = 0; r < n_orb; ++r)
        for (int s = 0; s < n_orb; ++s) {
          if (spin_up(p) != spin_up(r) || spin_up(q) != spin_up(s)) continue;
          // 1/2 v_pqrs a^dag_p a^dag_q a_s a_r
          terms.push_back({coeff(two_electron_label(p, q, r, s)) * cplx(0.5, 0),
                           {{p, true}, {q, true}, {s, false}, {r, false}}});
        }
  return terms;
}

inline PauliSum<BosonPoly> map_terms(const std::vector<FermionTerm>& terms,
                                     int n_qubits) {
  PauliSum<BosonPoly> sum(n_qubits);
  for (const auto& t : terms) sum += jordan_wigner(t, n_qubits);
  return sum;
}

// Electronic Hamiltonian at fixed R as a scalar qubit operator (first two
// terms of the second-quantized Hamiltonian; no nuclear part).
inline QubitOperator electronic_qubit_hamiltonian(const TaylorFitSet& fits,
                                                  double R) {
  std::map<std::string, BosonPoly> coeffs;
  for (const auto& [label, fit] : fits)
    coeffs[label] = BosonPoly::constant(fit.v0 + fit.v1 * R);
  PauliSum<BosonPoly> mapped = map_terms(model_electronic_terms(coeffs), 4);
  QubitOperator out(4);
  for (const auto& [s, c] : mapped.terms()) {
    if (std::abs(c.c0.imag()) > 1e-12 || std::abs(c.c1) > 1e-14)
      throw std::runtime_error("electronic_qubit_hamiltonian: non-real term");
    out.add(s, c.c0.real());
  }
  return out;
}

// Assemble the full cMQB Hamiltonian from Taylor fits: Jordan-Wigner mapped
// electronic part with v(R) = v0 + v1 R, R = (b + b^dag)/sqrt(2 M omega),
// plus the nuclear kinetic + harmonic part omega(b^dag b + 1/2).
inline CMQBHamiltonianSpec build_molecular_qubit_hamiltonian(
    const TaylorFitSet& fits, const ModelParams& params) {
  for (const auto& label : integral_labels())
    if (!fits.count(label))
      throw std::invalid_argument("build_molecular_qubit_hamiltonian: missing " +
                                  label);
  CMQBHamiltonianSpec spec;
  spec.omega = params.omega();
  spec.mass = params.M;
  spec.n_qubits = 4;

  std::map<std::string, BosonPoly> coeffs;
  for (const auto& label : integral_labels()) {
    const TaylorFit& f = fits.at(label);
    coeffs[label] = BosonPoly(f.v0, f.v1 * spec.r_scale());
  }
  PauliSum<BosonPoly> mapped = map_terms(model_electronic_terms(coeffs), 4);
  // zero-point energy of the nuclear mode
  mapped.add(PauliString(4), BosonPoly::constant(0.5 * spec.omega));

  for (const auto& [s, c] : mapped.terms()) {
    if (!coeff_is_real(c, 1e-12))
      throw std::runtime_error(
          "build_molecular_qubit_hamiltonian: non-Hermitian term " + s.str());
    CMQBTerm term;
    term.pauli = s;
    term.V0 = c.c0.real();
    term.V1 = c.c1.real();
    term.group = model_term_group(s);
    spec.terms.push_back(term);
  }
  // Model grouping order, then printed order inside each group.
  std::stable_sort(spec.terms.begin(), spec.terms.end(),
                   [](const CMQBTerm& a, const CMQBTerm& b) {
                     if (a.group != b.group) return a.group < b.group;
                     return a.pauli < b.pauli;
                   });
  return spec;
}

// Dense Hermitian matrix on the truncated Fock (x) qubit space. Layout is
// Fock-major: index = v * 2^Nq + q.
inline Eigen::MatrixXcd symbolic_matrix(const CMQBHamiltonianSpec& spec,
                                        int n_fock) {
  if (n_fock < 2) throw std::invalid_argument("symbolic_matrix: n_fock < 2");
  const long qdim = 1L << spec.n_qubits;
  const long dim = qdim * n_fock;
  if (dim > (1L << 20))
    throw std::invalid_argument("symbolic_matrix: dimension overflow");
  auto kron = [&](const Eigen::MatrixXcd& b, const Eigen::MatrixXcd& q) {
    Eigen::MatrixXcd out(b.rows() * q.rows(), b.cols() * q.cols());
    for (int i = 0; i < b.rows(); ++i)
      for (int j = 0; j < b.cols(); ++j)
        out.block(i * q.rows(), j * q.cols(), q.rows(), q.cols()) =
            b(i, j) * q;
    return out;
  };
  const Eigen::MatrixXcd qubit_id = Eigen::MatrixXcd::Identity(qdim, qdim);
  Eigen::MatrixXcd h =
      spec.omega *
      kron(boson_number(n_fock).cast<cplx>(), qubit_id);
  for (const auto& t : spec.terms)
    h += kron(BosonPoly(t.V0, t.V1).matrix(n_fock),
              pauli_string_matrix(t.pauli));
  const double defect = (h - h.adjoint()).cwiseAbs().maxCoeff();
  if (defect > 1e-13)
    throw std::runtime_error("symbolic_matrix: Hermiticity guard violated");
  return 0.5 * (h + h.adjoint().eval());
}

// Matrix of a single (V0, V1, P) term on the same layout.
inline Eigen::MatrixXcd term_matrix(const CMQBTerm& t, int n_fock) {
  const int qdim = 1 << t.pauli.n_qubits();
  Eigen::MatrixXcd boson = BosonPoly(t.V0, t.V1).matrix(n_fock);
  Eigen::MatrixXcd p = pauli_string_matrix(t.pauli);
  Eigen::MatrixXcd out(qdim * n_fock, qdim * n_fock);
  for (int i = 0; i < n_fock; ++i)
    for (int j = 0; j < n_fock; ++j)
      out.block(i * qdim, j * qdim, qdim, qdim) = boson(i, j) * p;
  return out;
}

// Total-number and spin-z operators in the Jordan-Wigner image (spin-up on
// even orbital indices).
inline QubitOperator number_operator(int n_qubits) {
  QubitOperator out(n_qubits);
  for (int p = 0; p < n_qubits; ++p) {
    std::vector<LadderOp> ops = {{p, true}, {p, false}};
    out += jordan_wigner(ops, n_qubits);
  }
  return out;
}

inline QubitOperator sz_operator(int n_qubits) {
  QubitOperator out(n_qubits);
  for (int p = 0; p < n_qubits; ++p) {
    std::vector<LadderOp> ops = {{p, true}, {p, false}};
    out += jordan_wigner(ops, n_qubits).scaled(spin_up(p) ? 0.5 : -0.5);
  }
  return out;
}

// hamiltonian.json round-trip.
inline nlohmann::json hamiltonian_to_json(const CMQBHamiltonianSpec& spec) {
  nlohmann::json j;
  j["omega"] = spec.omega;
  j["mass"] = spec.mass;
  j["n_qubits"] = spec.n_qubits;
  j["n_mode"] = spec.n_mode;
  j["terms"] = nlohmann::json::array();
  for (const auto& t : spec.terms)
    j["terms"].push_back({{"pauli", t.pauli.str()}, {"V0", t.V0}, {"V1", t.V1}});
  return j;
}

inline CMQBHamiltonianSpec hamiltonian_from_json(const nlohmann::json& j) {
  CMQBHamiltonianSpec spec;
  spec.omega = j.at("omega").get<double>();
  spec.mass = j.at("mass").get<double>();
  spec.n_qubits = j.at("n_qubits").get<int>();
  spec.n_mode = j.at("n_mode").get<int>();
  for (const auto& jt : j.at("terms")) {
    CMQBTerm t;
    t.pauli = PauliString::parse(jt.at("pauli").get<std::string>());
    t.V0 = jt.at("V0").get<double>();
    t.V1 = jt.at("V1").get<double>();
    t.group = model_term_group(t.pauli);
    spec.terms.push_back(t);
  }
  return spec;
}

}  // namespace cmqb
