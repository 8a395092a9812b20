#pragma once

// Structural tools on channels over bipartite spaces: restricted subchannels,
// coherence graphs, block-diagonal Kraus decompositions, and the numerical
// checks that turn local information into a global unitary.

#include <optional>
#include <queue>
#include <variant>
#include <vector>

#include "qsq/model.hpp"
#include "qsq/random.hpp"

namespace qsq {

// d^2 density matrices spanning all operators on C^d: |a><a|, and |a>+|b>, |a>+i|b> for a<b.
inline std::vector<Matrix> spanning_states(std::size_t d) {
  std::vector<Matrix> out;
  for (std::size_t a = 0; a < d; ++a) out.push_back(projector(basis_ket(d, a)));
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = a + 1; b < d; ++b) {
      out.push_back(projector(normalized(basis_ket(d, a) + basis_ket(d, b))));
      out.push_back(projector(normalized(basis_ket(d, a) + basis_ket(d, b) * Complex(0.0, 1.0))));
    }
  return out;
}

inline void require_density(const Matrix& rho, const char* what, double tol = 1e-9) {
  if (!rho.is_square() || hermiticity_defect(rho) > tol || std::abs(rho.trace() - Complex(1.0)) > tol ||
      hermitian_eig(rho, 1e-6).values.front() < -tol)
    throw ContractError(std::string(what) + " is not a density matrix");
}

// The channel's sole unitary Kraus operator up to phase, read off the rank of its
// Choi matrix; nullopt when the channel is not unitary within tol.
inline std::optional<Matrix> channel_as_unitary(const QuantumChannel& ch, double tol = 1e-9) {
  const std::size_t d = ch.dim();
  if (ch.single_kraus()) {
    if (is_unitary(ch.kraus()[0], tol * std::sqrt(double(d)) * 10)) return ch.kraus()[0];
    return std::nullopt;
  }
  Matrix j(d * d, d * d);
  for (const auto& k : ch.kraus()) {
    const Matrix v(d * d, 1, k.data());
    j += projector(v);
  }
  const auto eig = hermitian_eig(j, 1e-6);
  const std::size_t top = d * d - 1;
  if (top > 0 && eig.values[top - 1] > tol) return std::nullopt;
  Matrix u(d, d, (eig.vectors.col(top) * std::sqrt(std::max(0.0, eig.values[top]))).data());
  if (!is_unitary(u, std::sqrt(tol))) return std::nullopt;
  return u;
}

// Lambda restricted to one subsystem: sigma -> tr_rest[Lambda(sigma (x) anchor)], with
// `anchor` a state on the remaining factors in layout order.
class Subchannel {
 public:
  Subchannel(QuantumChannel ch, DimsLayout layout, std::size_t keep, Matrix anchor)
      : ch_(std::move(ch)), layout_(std::move(layout)), keep_(keep), anchor_(std::move(anchor)) {
    if (total_dim(layout_) != ch_.dim()) throw DimensionError("layout does not match channel");
    if (keep_ >= layout_.size()) throw DimensionError("kept subsystem out of range");
    if (anchor_.rows() * layout_[keep_] != ch_.dim()) throw DimensionError("anchor does not match complement");
    require_density(anchor_, "anchor");
  }

  std::size_t dim() const { return layout_[keep_]; }

  Matrix apply(const Matrix& sigma) const {
    return partial_trace(ch_.apply(embed_subsystem(sigma, anchor_, layout_, keep_)), layout_, {keep_});
  }

  // J[(p,q),(p',q')] = <p| Lambda(|q><q'|) |p'>; for Kraus K_j this is sum_j vec(K_j) vec(K_j)^dagger.
  Matrix choi() const {
    const std::size_t d = dim();
    Matrix j(d * d, d * d);
    for (std::size_t q = 0; q < d; ++q)
      for (std::size_t qq = 0; qq < d; ++qq) {
        Matrix e(d, d);
        e(q, qq) = 1.0;
        const Matrix out = apply(e);
        for (std::size_t p = 0; p < d; ++p)
          for (std::size_t pp = 0; pp < d; ++pp) j(p * d + q, pp * d + qq) = out(p, pp);
      }
    return j;
  }

  bool is_cptp(double tol = 1e-9) const {
    const Matrix j = choi();
    if (hermitian_eig(j, 1e-6).values.front() < -tol) return false;
    const std::size_t d = dim();
    for (std::size_t q = 0; q < d; ++q)
      for (std::size_t qq = 0; qq < d; ++qq) {
        Complex s = 0.0;
        for (std::size_t p = 0; p < d; ++p) s += j(p * d + q, p * d + qq);
        if (std::abs(s - Complex(q == qq ? 1.0 : 0.0)) > tol) return false;
      }
    return true;
  }

  QuantumChannel to_channel(double cutoff = 1e-12) const {
    const std::size_t d = dim();
    const auto eig = hermitian_eig(choi(), 1e-6);
    std::vector<Matrix> ks;
    for (std::size_t k = d * d; k-- > 0;) {
      if (eig.values[k] <= cutoff) break;
      ks.emplace_back(d, d, (eig.vectors.col(k) * std::sqrt(eig.values[k])).data());
    }
    if (ks.empty()) throw ContractError("subchannel vanishes");
    return QuantumChannel(std::move(ks));
  }

 private:
  QuantumChannel ch_;
  DimsLayout layout_;
  std::size_t keep_;
  Matrix anchor_;
};

inline Subchannel subchannel(const QuantumChannel& ch, const DimsLayout& layout, std::size_t keep,
                             const Matrix& anchor) {
  return Subchannel(ch, layout, keep, anchor);
}

class CoherenceGraph {
 public:
  explicit CoherenceGraph(std::size_t n) : adj_(n, std::vector<bool>(n, false)) {}

  std::size_t size() const { return adj_.size(); }
  bool has_edge(std::size_t k, std::size_t l) const { return adj_[k][l]; }
  void add_edge(std::size_t k, std::size_t l) {
    if (k == l) return;
    adj_[k][l] = adj_[l][k] = true;
  }

  std::vector<std::pair<std::size_t, std::size_t>> edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t k = 0; k < size(); ++k)
      for (std::size_t l = k + 1; l < size(); ++l)
        if (adj_[k][l]) out.emplace_back(k, l);
    return out;
  }

  // Parent of each vertex in a breadth-first tree from vertex 0 (root maps to itself);
  // nullopt entries are unreachable.
  std::vector<std::optional<std::size_t>> bfs_tree() const {
    std::vector<std::optional<std::size_t>> parent(size());
    if (size() == 0) return parent;
    parent[0] = 0;
    std::queue<std::size_t> q;
    q.push(0);
    while (!q.empty()) {
      const std::size_t k = q.front();
      q.pop();
      for (std::size_t l = 0; l < size(); ++l)
        if (adj_[k][l] && !parent[l]) {
          parent[l] = k;
          q.push(l);
        }
    }
    return parent;
  }

  bool is_connected() const {
    for (const auto& p : bfs_tree())
      if (!p) return false;
    return true;
  }

 private:
  std::vector<std::vector<bool>> adj_;
};

inline void require_orthonormal_basis(const Matrix& basis, std::size_t d) {
  if (basis.rows() != d || basis.cols() != d) throw DimensionError("basis must have d columns of length d");
  if (!has_orthonormal_columns(basis, 1e-8)) throw ContractError("basis is not orthonormal");
}

// Vertices are basis vectors (columns of `basis`); k~l when some state has a
// nonzero coherence <k|sigma|l>.
inline CoherenceGraph coherence_graph(const Matrix& basis, const std::vector<Matrix>& states, double tol = 1e-9) {
  const std::size_t d = basis.rows();
  require_orthonormal_basis(basis, d);
  CoherenceGraph g(d);
  for (const auto& s : states) {
    if (s.rows() != d || s.cols() != d) throw DimensionError("state does not match basis");
    const Matrix m = basis.adjoint() * s * basis;
    for (std::size_t k = 0; k < d; ++k)
      for (std::size_t l = k + 1; l < d; ++l)
        if (std::abs(m(k, l)) > tol) g.add_edge(k, l);
  }
  return g;
}

namespace detail {

inline void require_bipartite(const DimsLayout& layout, std::size_t fixed) {
  if (layout.size() != 2) throw DimensionError("bipartite layout expected");
  if (fixed > 1) throw DimensionError("fixed subsystem must be 0 or 1");
}

// Isometry |psi> (x) I from the other factor into the joint space, with psi in slot `fixed`.
inline Matrix slot_isometry(const Matrix& psi, const DimsLayout& layout, std::size_t fixed) {
  const std::size_t other = layout[1 - fixed];
  const Matrix id = Matrix::identity(other);
  return fixed == 0 ? kron(psi, id) : kron(id, psi);
}

inline Matrix place(const Matrix& on_fixed, const Matrix& on_other, std::size_t fixed) {
  return fixed == 0 ? kron(on_fixed, on_other) : kron(on_other, on_fixed);
}

}  // namespace detail

// Lambda = sum_j K_j (.) K_j^dagger with K_j = sum_i psi_i (x) K_j^i.
struct BlockKraus {
  DimsLayout layout;
  std::size_t fixed = 0;
  Matrix basis;
  std::vector<std::vector<Matrix>> blocks;  // blocks[i][j] = K_j^i

  Matrix kraus(std::size_t j) const {
    Matrix k(total_dim(layout), total_dim(layout));
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      const Matrix b = detail::slot_isometry(basis.col(i), layout, fixed);
      k += b * blocks[i][j] * b.adjoint();
    }
    return k;
  }

  QuantumChannel reassemble() const {
    std::vector<Matrix> ks;
    for (std::size_t j = 0; j < blocks.front().size(); ++j) ks.push_back(kraus(j));
    return QuantumChannel(std::move(ks));
  }

  // Restriction to the other factor when the fixed factor holds basis vector i.
  QuantumChannel block_channel(std::size_t i) const { return QuantumChannel(blocks[i]); }
};

struct MembershipFailure {
  std::size_t basis_index;
  std::size_t anchor_index;  // index into spanning_states of the other factor
  double deviation;
};

// Checks tr_other[Lambda(psi_i (x) rho)] = psi_i over a spanning set of rho and, on
// success, splits every Kraus operator into blocks K_j^i.
inline std::variant<BlockKraus, MembershipFailure> kraus_block_structure(const QuantumChannel& ch,
                                                                        const DimsLayout& layout,
                                                                        const Matrix& basis, std::size_t fixed = 0,
                                                                        double tol = 1e-9) {
  detail::require_bipartite(layout, fixed);
  if (total_dim(layout) != ch.dim()) throw DimensionError("layout does not match channel");
  require_orthonormal_basis(basis, layout[fixed]);
  const auto anchors = spanning_states(layout[1 - fixed]);
  for (std::size_t i = 0; i < basis.cols(); ++i) {
    const Matrix psi = projector(basis.col(i));
    for (std::size_t a = 0; a < anchors.size(); ++a) {
      const Matrix out = ch.apply(detail::place(psi, anchors[a], fixed));
      const double dev = (partial_trace(out, layout, {fixed}) - psi).frobenius_norm();
      if (dev > tol) return MembershipFailure{i, a, dev};
    }
  }
  BlockKraus bk{layout, fixed, basis, {}};
  for (std::size_t i = 0; i < basis.cols(); ++i) {
    const Matrix b = detail::slot_isometry(basis.col(i), layout, fixed);
    std::vector<Matrix> row;
    for (const auto& k : ch.kraus()) row.push_back(b.adjoint() * k * b);
    bk.blocks.push_back(std::move(row));
  }
  for (std::size_t j = 0; j < ch.kraus().size(); ++j) {
    const double off = (bk.kraus(j) - ch.kraus()[j]).frobenius_norm();
    if (off > std::sqrt(tol)) return MembershipFailure{0, 0, off};
  }
  return bk;
}

// (ch1 o ch2) restricted with psi_i on the fixed factor equals the composition of the
// individual restrictions, for every basis vector. Both channels must preserve the basis marginally.
inline bool subchannel_homomorphism_check(const QuantumChannel& ch1, const QuantumChannel& ch2,
                                          const DimsLayout& layout, const Matrix& basis, std::size_t fixed = 0,
                                          double tol = 1e-9) {
  for (const auto* ch : {&ch1, &ch2})
    if (std::holds_alternative<MembershipFailure>(kraus_block_structure(*ch, layout, basis, fixed, tol)))
      throw ContractError("channel does not preserve the basis on the fixed subsystem");
  const QuantumChannel both = QuantumChannel::compose(ch1, ch2);
  const auto inputs = spanning_states(layout[1 - fixed]);
  for (std::size_t i = 0; i < basis.cols(); ++i) {
    const Matrix psi = projector(basis.col(i));
    const Subchannel s12(both, layout, 1 - fixed, psi), s1(ch1, layout, 1 - fixed, psi), s2(ch2, layout, 1 - fixed, psi);
    for (const auto& rho : inputs)
      if ((s12.apply(rho) - s1.apply(s2.apply(rho))).frobenius_norm() > tol) return false;
  }
  return true;
}

// Channels that send an orthonormal basis to pure, mutually orthogonal states never
// raise the purity of random inputs.
inline bool purity_nonincrease_check(const QuantumChannel& ch, const Matrix& onb, std::size_t trials, Rng& rng,
                                     double tol = 1e-9) {
  const std::size_t d = ch.dim();
  require_orthonormal_basis(onb, d);
  std::vector<Matrix> images;
  for (std::size_t i = 0; i < d; ++i) images.push_back(ch.apply(projector(onb.col(i))));
  for (std::size_t i = 0; i < d; ++i) {
    if (!is_pure(images[i])) throw ContractError("channel does not map the basis to pure states");
    for (std::size_t j = 0; j < i; ++j)
      if (std::abs(inner(images[i], images[j])) > 1e-8) throw ContractError("basis images are not orthogonal");
  }
  for (std::size_t t = 0; t < trials; ++t) {
    const Matrix rho = (t % 2 == 0) ? random_density(d, rng) : random_pure_state(d, rng);
    if (purity(ch.apply(rho)) > purity(rho) + tol) return false;
  }
  return true;
}

// Contrapositive of orthogonality preservation: overlapping inputs keep overlapping images.
inline bool orthogonality_check(const QuantumChannel& ch, std::size_t trials, Rng& rng) {
  const std::size_t d = ch.dim();
  for (std::size_t t = 0; t < trials; ++t) {
    const Matrix rho = random_pure_state(d, rng);
    const Matrix sigma = random_pure_state(d, rng);
    const double ov = std::real(inner(rho, sigma));
    if (ov <= 1e-6) continue;
    if (std::real(inner(ch.apply(rho), ch.apply(sigma))) <= 1e-12) return false;
  }
  return true;
}

struct UnitaryReconstruction {
  Matrix unitary;
  std::vector<double> phases;  // theta_i, with theta_0 = 0
  double residual = 0.0;       // superoperator distance to the channel
};

// Product input sigma (x) rho with sigma on the fixed factor and rho on the other.
struct ProductInput {
  Matrix on_fixed;
  Matrix on_other;
};

// Builds U = sum_i e^{i theta_i} psi_i (x) U_i from the action of Lambda on basis-anchored
// inputs, recovering the relative phases from coherent product inputs.
inline UnitaryReconstruction reconstruct_unitary_from_subchannels(const QuantumChannel& ch, const DimsLayout& layout,
                                                                  const Matrix& basis,
                                                                  const std::vector<Matrix>& sub_unitaries,
                                                                  const std::vector<ProductInput>& coherent_inputs,
                                                                  std::size_t fixed = 0, double tol = 1e-8) {
  detail::require_bipartite(layout, fixed);
  if (total_dim(layout) != ch.dim()) throw DimensionError("layout does not match channel");
  require_orthonormal_basis(basis, layout[fixed]);
  const std::size_t n = basis.cols();
  if (sub_unitaries.size() != n) throw DimensionError("one sub-unitary per basis vector expected");
  for (const auto& u : sub_unitaries)
    if (!is_unitary(u, 1e-8) || u.rows() != layout[1 - fixed]) throw ContractError("sub-unitary is not unitary");

  const auto probes = spanning_states(layout[1 - fixed]);
  for (std::size_t i = 0; i < n; ++i) {
    const Matrix psi = projector(basis.col(i));
    for (const auto& rho : probes) {
      const Matrix expect = detail::place(psi, sub_unitaries[i] * rho * sub_unitaries[i].adjoint(), fixed);
      if ((ch.apply(detail::place(psi, rho, fixed)) - expect).frobenius_norm() > tol)
        throw ConditionError("(i)", "channel does not act as the given sub-unitary on basis vector " +
                                        std::to_string(i));
    }
  }

  std::vector<Matrix> sigmas;
  std::vector<Matrix> outputs;
  for (const auto& in : coherent_inputs) {
    const Matrix out = ch.apply(detail::place(in.on_fixed, in.on_other, fixed));
    if (!is_pure(out)) throw ConditionError("(ii)", "output of a coherent input is not pure");
    sigmas.push_back(in.on_fixed);
    outputs.push_back(out);
  }
  const CoherenceGraph g = coherence_graph(basis, sigmas);
  if (!g.is_connected()) throw ConditionError("(ii)", "coherence graph of the inputs is disconnected");

  std::vector<Matrix> iso;
  for (std::size_t i = 0; i < n; ++i) iso.push_back(detail::slot_isometry(basis.col(i), layout, fixed));
  // Relative phase g_kl = e^{i(theta_k - theta_l)} from the strongest coherent input on that edge.
  auto relative_phase = [&](std::size_t k, std::size_t l) {
    std::size_t best = 0;
    double best_w = -1.0;
    for (std::size_t t = 0; t < sigmas.size(); ++t) {
      const double w = std::abs(inner(basis.col(k), sigmas[t] * basis.col(l)));
      if (w > best_w) {
        best_w = w;
        best = t;
      }
    }
    const Complex c = inner(basis.col(k), sigmas[best] * basis.col(l));
    const Matrix& rho = coherent_inputs[best].on_other;
    const Matrix expect = sub_unitaries[k] * rho * sub_unitaries[l].adjoint();
    const Matrix block = iso[k].adjoint() * outputs[best] * iso[l];
    const Complex gkl = inner(expect, block) / (c * purity(rho));
    return std::arg(gkl);
  };
  const auto parent = g.bfs_tree();
  std::vector<double> theta(n, 0.0);
  std::vector<bool> done(n, false);
  done[0] = true;
  // Resolve vertices in an order where the parent is already known.
  for (std::size_t pass = 0; pass < n; ++pass)
    for (std::size_t k = 1; k < n; ++k)
      if (!done[k] && done[*parent[k]]) {
        theta[k] = theta[*parent[k]] + relative_phase(k, *parent[k]);
        done[k] = true;
      }

  Matrix u(ch.dim(), ch.dim());
  for (std::size_t i = 0; i < n; ++i) u += iso[i] * sub_unitaries[i] * iso[i].adjoint() * std::polar(1.0, theta[i]);
  const double residual = (ch.superop() - superoperator({u})).frobenius_norm();
  if (residual > 10 * tol) throw ConditionError("verify", "reconstructed unitary does not reproduce the channel");
  return {u, theta, residual};
}

// Decides Lambda = U (.) U^dagger from its action on an eigenbasis of U and on pure
// coherent inputs whose coherence graph in that eigenbasis is connected.
inline bool check_channel_equals_unitary(const QuantumChannel& ch, const Matrix& u,
                                         const std::vector<Matrix>& coherent_inputs, double tol = 1e-9,
                                         std::optional<Matrix> eigenbasis = std::nullopt) {
  if (u.rows() != ch.dim() || !u.is_square()) throw DimensionError("unitary does not match channel");
  const Matrix basis = eigenbasis ? *eigenbasis : unitary_eig(u).vectors;
  require_orthonormal_basis(basis, ch.dim());
  for (std::size_t i = 0; i < basis.cols(); ++i) {
    const Matrix v = basis.col(i);
    if ((u * v - v * inner(v, u * v)).frobenius_norm() > 1e-8)
      throw ContractError("supplied basis is not an eigenbasis of the unitary");
  }
  for (const auto& s : coherent_inputs)
    if (!is_pure(s)) throw ConditionError("coherence", "coherent input is not pure");
  if (!coherence_graph(basis, coherent_inputs).is_connected())
    throw ConditionError("coherence", "coherence graph of the inputs is disconnected");

  for (std::size_t i = 0; i < basis.cols(); ++i) {
    const Matrix psi = projector(basis.col(i));
    if ((ch.apply(psi) - psi).frobenius_norm() > tol) return false;
  }
  for (const auto& s : coherent_inputs)
    if ((ch.apply(s) - u * s * u.adjoint()).frobenius_norm() > tol) return false;
  return (ch.superop() - superoperator({u})).frobenius_norm() <= 10 * tol;
}

}  // namespace qsq
