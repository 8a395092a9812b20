#pragma once

// Gate library, qubit embeddings and the reference models S_n, Cl_n, U_n and
// the Y-rotation variant. Qubits are numbered from 1, qubit 1 being the most
// significant tensor factor; outcome bit i of a label belongs to qubit i+1.

#include <cmath>
#include <string>
#include <vector>

#include "qsq/model.hpp"

namespace qsq::gates {

inline const Complex I1{0.0, 1.0};
inline const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

inline Matrix id2() { return Matrix::identity(2); }
inline Matrix pauli_x() { return {{0.0, 1.0}, {1.0, 0.0}}; }
inline Matrix pauli_y() { return {{0.0, -I1}, {I1, 0.0}}; }
inline Matrix pauli_z() { return {{1.0, 0.0}, {0.0, -1.0}}; }
inline Matrix hadamard() { return {{kInvSqrt2, kInvSqrt2}, {kInvSqrt2, -kInvSqrt2}}; }
inline Matrix phase_s() { return {{1.0, 0.0}, {0.0, I1}}; }
inline Matrix phase_t() { return {{1.0, 0.0}, {0.0, std::polar(1.0, kPi / 4)}}; }
inline Matrix phase(double angle) { return {{1.0, 0.0}, {0.0, std::polar(1.0, angle)}}; }

// Principal square root of Y: eigenphase 1 on |+y>, i on |-y>.
inline Matrix sqrt_y() {
  const Complex c(0.5, 0.5);
  return {{c, -c}, {c, c}};
}

inline Matrix ket0() { return Matrix::column({1.0, 0.0}); }
inline Matrix ket1() { return Matrix::column({0.0, 1.0}); }
inline Matrix ket_plus() { return Matrix::column({kInvSqrt2, kInvSqrt2}); }
inline Matrix ket_minus() { return Matrix::column({kInvSqrt2, -kInvSqrt2}); }
inline Matrix ket_plus_y() { return Matrix::column({kInvSqrt2, I1 * kInvSqrt2}); }
inline Matrix ket_minus_y() { return Matrix::column({kInvSqrt2, -I1 * kInvSqrt2}); }

// Single-qubit ket from a symbol: 0 1 + - r (|+y>) l (|-y>).
inline Matrix ket_from_symbol(char c) {
  switch (c) {
    case '0': return ket0();
    case '1': return ket1();
    case '+': return ket_plus();
    case '-': return ket_minus();
    case 'r': return ket_plus_y();
    case 'l': return ket_minus_y();
    default: throw ContractError(std::string("unknown qubit state symbol '") + c + "'");
  }
}

inline Matrix product_ket(const std::string& symbols) {
  std::vector<Matrix> f;
  for (char c : symbols) f.push_back(ket_from_symbol(c));
  return kron_all(f);
}

// |0><0| (x) I + |1><1| (x) u
inline Matrix controlled(const Matrix& u) {
  const std::size_t d = u.rows();
  Matrix out(2 * d, 2 * d);
  for (std::size_t i = 0; i < d; ++i) out(i, i) = 1.0;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) out(d + i, d + j) = u(i, j);
  return out;
}

// |+><+| (x) I + |-><-| (x) X
inline Matrix controlled_hadamard_x() {
  const Matrix h = hadamard();
  return kron(h, id2()) * controlled(pauli_x()) * kron(h, id2());
}

inline Matrix controlled_s() { return controlled(phase_s()); }
inline Matrix ccz() { return controlled(controlled(pauli_z())); }
inline Matrix swap() {
  Matrix m(4, 4);
  m(0, 0) = m(3, 3) = 1.0;
  m(1, 2) = m(2, 1) = 1.0;
  return m;
}

// |+y><0| + |-y><1|
inline Matrix w_conversion() {
  Matrix w(2, 2);
  const Matrix p = ket_plus_y(), m = ket_minus_y();
  for (std::size_t i = 0; i < 2; ++i) {
    w(i, 0) = p(i, 0);
    w(i, 1) = m(i, 0);
  }
  return w;
}

// Acts with g on the listed qubits (1-based, in g's factor order) of an n-qubit register.
inline Matrix embed(const Matrix& g, const std::vector<std::size_t>& qubits, std::size_t n) {
  const std::size_t k = qubits.size();
  if (g.rows() != (std::size_t{1} << k) || !g.is_square()) throw DimensionError("gate does not match qubit count");
  for (std::size_t i = 0; i < k; ++i) {
    if (qubits[i] < 1 || qubits[i] > n) throw DimensionError("qubit index out of range");
    for (std::size_t j = 0; j < i; ++j)
      if (qubits[i] == qubits[j]) throw DimensionError("repeated qubit index");
  }
  const std::size_t d = std::size_t{1} << n;
  std::size_t mask = 0;
  for (auto q : qubits) mask |= std::size_t{1} << (n - q);
  auto local = [&](std::size_t idx) {
    std::size_t v = 0;
    for (auto q : qubits) v = (v << 1) | ((idx >> (n - q)) & 1);
    return v;
  };
  Matrix out(d, d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c)
      if ((r & ~mask) == (c & ~mask)) out(r, c) = g(local(r), local(c));
  return out;
}

inline Matrix embed1(const Matrix& u, std::size_t qubit, std::size_t n) { return embed(u, {qubit}, n); }

// Two-qubit gate on the ordered pair (control, target); the pair may be non-adjacent or reversed.
inline Matrix embed2(const Matrix& u, std::size_t control, std::size_t target, std::size_t n) {
  return embed(u, {control, target}, n);
}

inline Label s_label(std::size_t k, std::size_t n) {
  if (n == 1) return "s";
  if (n == 2) return k == 1 ? "s_a" : "s_b";
  return "s" + std::to_string(k);
}

inline Label cx_label(std::size_t k, std::size_t n) { return n == 2 ? "cx" : "cx1" + std::to_string(k); }

inline const Label kHadamardLabel = "h";
inline const Label kControlledSLabel = "cs";
inline const Label kTLabel = "t";

inline std::string bitstring(std::size_t value, std::size_t n) {
  std::string s(n, '0');
  for (std::size_t i = 0; i < n; ++i)
    if ((value >> (n - 1 - i)) & 1) s[i] = '1';
  return s;
}

// Projective measurement onto the product basis with |0>,|1> replaced by `zero`,`one`.
inline std::vector<PovmOutcome> product_povm(const Matrix& zero, const Matrix& one, std::size_t n) {
  std::vector<PovmOutcome> povm;
  for (std::size_t v = 0; v < (std::size_t{1} << n); ++v) {
    const std::string label = bitstring(v, n);
    std::vector<Matrix> f;
    for (char c : label) f.push_back(c == '0' ? zero : one);
    povm.push_back({label, projector(kron_all(f))});
  }
  return povm;
}

inline void require_qubits(std::size_t n, std::size_t lo = 1) {
  if (n < lo || n > 10) throw ContractError("qubit count out of supported range");
}

inline QuantumModel build_S_n(std::size_t n) {
  require_qubits(n);
  std::vector<Matrix> plus(n, ket_plus());
  std::vector<std::pair<Label, QuantumChannel>> channels;
  for (std::size_t k = 1; k <= n; ++k)
    channels.emplace_back(s_label(k, n), QuantumChannel::unitary(embed(phase_s(), {k}, n)));
  return QuantumModel(projector(kron_all(plus)), std::move(channels), product_povm(ket_plus(), ket_minus(), n));
}

inline QuantumModel build_Cl_n(std::size_t n) {
  QuantumModel m = augment(build_S_n(n), kHadamardLabel, QuantumChannel::unitary(embed(hadamard(), {1}, n)));
  for (std::size_t k = 2; k <= n; ++k)
    m = augment(m, cx_label(k, n), QuantumChannel::unitary(embed(controlled_hadamard_x(), {1, k}, n)));
  return m;
}

inline QuantumModel build_U_n(std::size_t n) {
  require_qubits(n, 2);
  return augment(build_Cl_n(n), kControlledSLabel, QuantumChannel::unitary(embed(controlled_s(), {1, 2}, n)));
}

inline QuantumModel build_S2_cx() {
  return augment(build_S_n(2), cx_label(2, 2), QuantumChannel::unitary(controlled_hadamard_x()));
}

inline QuantumModel build_Sy_n(std::size_t n) {
  require_qubits(n);
  std::vector<Matrix> zeros(n, ket0());
  std::vector<std::pair<Label, QuantumChannel>> channels;
  for (std::size_t k = 1; k <= n; ++k)
    channels.emplace_back(s_label(k, n), QuantumChannel::unitary(embed(sqrt_y(), {k}, n)));
  return QuantumModel(projector(kron_all(zeros)), std::move(channels), product_povm(ket0(), ket1(), n));
}

// Gauge carrying the Y-rotation model onto S_n: (W^dagger)^{(x) n}.
inline Matrix sy_to_s_gauge(std::size_t n) {
  std::vector<Matrix> f(n, w_conversion().adjoint());
  return kron_all(f);
}

// Number of applications after which the unitary is proportional to the identity.
inline unsigned gate_order(const Matrix& u, unsigned max_order = 64, double tol = 1e-9) {
  Matrix p = u;
  for (unsigned k = 1; k <= max_order; ++k) {
    if (phase_aligned_distance(p, Matrix::identity(u.rows())) <= tol) return k;
    p = p * u;
  }
  throw ContractError("gate has no finite order within the search bound");
}

// Reference model by short name: "s", "cl", "u" or "sy".
inline QuantumModel build_model(const std::string& id, std::size_t n) {
  if (id == "s") return build_S_n(n);
  if (id == "sy") return build_Sy_n(n);
  if (id == "cl") return build_Cl_n(n);
  if (id == "u") return build_U_n(n);
  throw ContractError("unknown model '" + id + "' (expected s, cl, u or sy)");
}

}  // namespace qsq::gates
