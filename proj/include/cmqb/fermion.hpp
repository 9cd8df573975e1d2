#pragma once

#include <stdexcept>
#include <vector>

#include "cmqb/boson.hpp"
#include "cmqb/pauli.hpp"

namespace cmqb {

struct LadderOp {
  int orbital = 0;  // 0-based spin-orbital index
  bool create = false;
};

// Ordered product of ladder operators with a boson-polynomial coefficient
// (applied right to left, as written).
struct FermionTerm {
  BosonPoly coefficient;
  std::vector<LadderOp> ops;
};

// Jordan-Wigner image of a single ladder operator:
//   a_p     -> (prod_{k<p} Z_k) (X_p + i Y_p)/2
//   a^dag_p -> (prod_{k<p} Z_k) (X_p - i Y_p)/2
inline QubitOperator jordan_wigner_ladder(const LadderOp& op, int n_qubits) {
  if (op.orbital < 0 || op.orbital >= n_qubits)
    throw std::out_of_range("jordan_wigner: orbital index out of range");
  PauliString x(n_qubits), y(n_qubits);
  for (int k = 0; k < op.orbital; ++k) {
    x.letters[k] = 3;
    y.letters[k] = 3;
  }
  x.letters[op.orbital] = 1;
  y.letters[op.orbital] = 2;
  QubitOperator out(n_qubits);
  out.add(x, cplx(0.5, 0));
  out.add(y, op.create ? cplx(0, -0.5) : cplx(0, 0.5));
  return out;
}

// Jordan-Wigner image of a ladder-operator product, fully expanded and
// canonicalized (scalar coefficients).
inline QubitOperator jordan_wigner(const std::vector<LadderOp>& ops,
                                   int n_qubits) {
  QubitOperator out(n_qubits);
  out.add(PauliString(n_qubits), cplx(1, 0));
  for (const auto& op : ops) out = out * jordan_wigner_ladder(op, n_qubits);
  return out;
}

// Same, carrying the term's boson polynomial through the expansion.
inline PauliSum<BosonPoly> jordan_wigner(const FermionTerm& term,
                                         int n_qubits) {
  QubitOperator qubit_part = jordan_wigner(term.ops, n_qubits);
  PauliSum<BosonPoly> out(n_qubits);
  for (const auto& [s, c] : qubit_part.terms()) out.add(s, term.coefficient * c);
  return out;
}

}  // namespace cmqb
