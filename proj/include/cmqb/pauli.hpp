#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace cmqb {

using cplx = std::complex<double>;

// Pauli letters per qubit: 0=I, 1=X, 2=Y, 3=Z.
struct PauliString {
  std::vector<uint8_t> letters;

  PauliString() = default;
  explicit PauliString(int n_qubits) : letters(n_qubits, 0) {}
  // e.g. PauliString::parse("XZXI")
  static PauliString parse(const std::string& s) {
    PauliString p;
    for (char c : s) {
      switch (c) {
        case 'I': p.letters.push_back(0); break;
        case 'X': p.letters.push_back(1); break;
        case 'Y': p.letters.push_back(2); break;
        case 'Z': p.letters.push_back(3); break;
        default: throw std::invalid_argument("PauliString: bad letter");
      }
    }
    return p;
  }

  int n_qubits() const { return static_cast<int>(letters.size()); }
  bool is_identity() const {
    for (auto l : letters)
      if (l) return false;
    return true;
  }
  int weight() const {
    int w = 0;
    for (auto l : letters) w += (l != 0);
    return w;
  }
  std::string str() const {
    static const char sym[] = "IXYZ";
    std::string s;
    for (auto l : letters) s.push_back(sym[l]);
    return s;
  }
  bool operator<(const PauliString& o) const { return letters < o.letters; }
  bool operator==(const PauliString& o) const { return letters == o.letters; }
};

// Single-letter product a*b = i^phase * c; returns (c, phase in {0,1,2,3}).
inline std::pair<uint8_t, int> pauli_letter_product(uint8_t a, uint8_t b) {
  if (a == 0) return {b, 0};
  if (b == 0) return {a, 0};
  if (a == b) return {0, 0};
  // XY=iZ, YZ=iX, ZX=iY and the reversed orders pick up -i.
  static const uint8_t third[4][4] = {
      {0, 0, 0, 0}, {0, 0, 3, 2}, {0, 3, 0, 1}, {0, 2, 1, 0}};
  const bool cyclic = (a == 1 && b == 2) || (a == 2 && b == 3) ||
                      (a == 3 && b == 1);
  return {third[a][b], cyclic ? 1 : 3};
}

// Product of two strings: phase * string, phase a power of i.
inline std::pair<PauliString, cplx> pauli_product(const PauliString& a,
                                                  const PauliString& b) {
  if (a.n_qubits() != b.n_qubits())
    throw std::invalid_argument("pauli_product: length mismatch");
  PauliString out(a.n_qubits());
  int phase = 0;
  for (int q = 0; q < a.n_qubits(); ++q) {
    auto [letter, ph] = pauli_letter_product(a.letters[q], b.letters[q]);
    out.letters[q] = letter;
    phase = (phase + ph) % 4;
  }
  static const cplx ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return {out, ipow[phase]};
}

inline bool pauli_commute(const PauliString& a, const PauliString& b) {
  int anti = 0;
  for (int q = 0; q < a.n_qubits(); ++q) {
    uint8_t la = a.letters[q], lb = b.letters[q];
    if (la && lb && la != lb) ++anti;
  }
  return anti % 2 == 0;
}

// Customization points for PauliSum coefficient types (found by ADL).
inline double coeff_norm(const cplx& c) { return std::abs(c); }
inline bool coeff_is_real(const cplx& c, double tol) {
  return std::abs(c.imag()) <= tol;
}

// Coefficient-weighted sum of Pauli strings in canonical (sorted, merged,
// pruned) form. Coeff must support +=, *cplx, and coeff_norm.
template <typename Coeff>
class PauliSum {
 public:
  static constexpr double prune_tol = 1e-14;

  PauliSum() = default;
  explicit PauliSum(int n_qubits) : n_qubits_(n_qubits) {}

  int n_qubits() const { return n_qubits_; }
  const std::map<PauliString, Coeff>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  void add(const PauliString& s, const Coeff& c) {
    if (n_qubits_ == 0) n_qubits_ = s.n_qubits();
    if (s.n_qubits() != n_qubits_)
      throw std::invalid_argument("PauliSum: length mismatch");
    auto [it, fresh] = terms_.try_emplace(s, c);
    if (!fresh) it->second += c;
    if (coeff_norm(it->second) <= prune_tol) terms_.erase(it);
  }

  PauliSum& operator+=(const PauliSum& o) {
    for (const auto& [s, c] : o.terms_) add(s, c);
    return *this;
  }

  PauliSum operator*(const PauliSum& o) const {
    PauliSum out(n_qubits_);
    for (const auto& [sa, ca] : terms_)
      for (const auto& [sb, cb] : o.terms_) {
        auto [s, phase] = pauli_product(sa, sb);
        out.add(s, (ca * cb) * phase);
      }
    return out;
  }

  PauliSum scaled(const cplx& f) const {
    PauliSum out(n_qubits_);
    for (const auto& [s, c] : terms_) out.add(s, c * f);
    return out;
  }

  Coeff coefficient(const PauliString& s) const {
    auto it = terms_.find(s);
    return it == terms_.end() ? Coeff{} : it->second;
  }

 private:
  int n_qubits_ = 0;
  std::map<PauliString, Coeff> terms_;
};

using QubitOperator = PauliSum<cplx>;

inline Eigen::Matrix2cd pauli_matrix(uint8_t letter) {
  Eigen::Matrix2cd m;
  switch (letter) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, cplx(0, -1), cplx(0, 1), 0; break;
    case 3: m << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("pauli_matrix: bad letter");
  }
  return m;
}

// Dense matrix on the 2^n qubit space. Basis index bit convention: qubit 0 is
// the most significant bit, so |q_1 q_2 ... q_n> reads as a binary number.
inline Eigen::MatrixXcd pauli_string_matrix(const PauliString& s) {
  const int n = s.n_qubits();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
  for (int q = n - 1; q >= 0; --q) {  // qubit 0 ends up outermost (MSB)
    const Eigen::Matrix2cd p = pauli_matrix(s.letters[q]);
    Eigen::MatrixXcd next(m.rows() * 2, m.cols() * 2);
    next.topLeftCorner(m.rows(), m.cols()) = p(0, 0) * m;
    next.topRightCorner(m.rows(), m.cols()) = p(0, 1) * m;
    next.bottomLeftCorner(m.rows(), m.cols()) = p(1, 0) * m;
    next.bottomRightCorner(m.rows(), m.cols()) = p(1, 1) * m;
    m.swap(next);
  }
  return m;
}

inline Eigen::MatrixXcd qubit_operator_matrix(const QubitOperator& op) {
  const int dim = 1 << op.n_qubits();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [s, c] : op.terms()) m += c * pauli_string_matrix(s);
  return m;
}

// In-place action of a Pauli string on a qubit-space vector, using the fact
// that every string is a signed permutation of basis states.
inline Eigen::VectorXcd apply_pauli_string(const PauliString& s,
                                           const Eigen::VectorXcd& v) {
  const int n = s.n_qubits();
  const int dim = 1 << n;
  if (v.size() != dim)
    throw std::invalid_argument("apply_pauli_string: dimension mismatch");
  int flip = 0;  // X/Y bit flips
  for (int q = 0; q < n; ++q)
    if (s.letters[q] == 1 || s.letters[q] == 2) flip |= 1 << (n - 1 - q);
  Eigen::VectorXcd out(dim);
  static const cplx ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (int idx = 0; idx < dim; ++idx) {
    // amplitude v(idx) is routed to basis state idx^flip with a phase
    int phase = 0;
    for (int q = 0; q < n; ++q) {
      const int bit = (idx >> (n - 1 - q)) & 1;
      switch (s.letters[q]) {
        case 2: phase = (phase + (bit ? 3 : 1)) % 4; break;  // Y|0>=i|1>, Y|1>=-i|0>
        case 3: phase = (phase + (bit ? 2 : 0)) % 4; break;  // Z|1>=-|1>
        default: break;
      }
    }
    out(idx ^ flip) = ipow[phase] * v(idx);
  }
  return out;
}

}  // namespace cmqb
