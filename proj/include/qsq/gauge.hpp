#pragma once

// Gauge equivalence of quantum models. A gauge G carries model b onto model a:
// G rho_b G^dagger = rho_a, G M_b G^dagger = M_a for every outcome and
// G Lambda_b(G^dagger (.) G) G^dagger = Lambda_a for every label. The antiunitary
// branch complex-conjugates b first.

#include <algorithm>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsq/analysis.hpp"
#include "qsq/gates.hpp"
#include "qsq/quiz.hpp"

namespace qsq {

struct GaugeResult {
  bool antiunitary = false;
  Matrix matrix;
  double residual = 0.0;
};

namespace detail {

inline void require_same_structure(const QuantumModel& a, const QuantumModel& b) {
  if (a.dim() != b.dim()) throw DimensionError("models have different dimensions");
  auto sorted = [](std::vector<std::string> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  if (sorted(a.alphabet()) != sorted(b.alphabet())) throw ContractError("models have different instruction labels");
  if (sorted(a.outcome_labels()) != sorted(b.outcome_labels())) throw ContractError("models have different outcome labels");
}

// Frobenius distance between the superoperators of two Kraus sets.
inline double superop_distance(const std::vector<Matrix>& a, const std::vector<Matrix>& b) {
  const std::size_t d = a.front().rows();
  if (d <= 16) return (superoperator(a) - superoperator(b)).frobenius_norm();
  // ||sum A (x) conj A - sum B (x) conj B||^2 through traces of Kraus products.
  auto gram = [](const std::vector<Matrix>& x, const std::vector<Matrix>& y) {
    double s = 0.0;
    for (const auto& p : x)
      for (const auto& q : y) s += std::norm(inner(p, q));
    return s;
  };
  return std::sqrt(std::max(0.0, gram(a, a) + gram(b, b) - 2.0 * gram(a, b)));
}

inline double channel_distance(const QuantumChannel& a, const QuantumChannel& b) {
  if (a.single_kraus() && b.single_kraus()) return phase_aligned_distance(a.kraus()[0], b.kraus()[0]);
  return superop_distance(a.kraus(), b.kraus());
}

}  // namespace detail

// Largest deviation over state, effects and channels after carrying b onto a with g.
inline double gauge_residual(const QuantumModel& a, const QuantumModel& b, const Matrix& g, bool antiunitary = false) {
  detail::require_same_structure(a, b);
  if (g.rows() != a.dim() || !g.is_square()) throw DimensionError("gauge does not match model dimension");
  const QuantumModel moved = conjugate_model(antiunitary ? complex_conjugate_model(b) : b, g);
  double r = (moved.initial_state() - a.initial_state()).frobenius_norm();
  for (const auto& o : a.povm())
    r = std::max(r, (moved.povm()[*moved.outcome_index(o.label)].effect - o.effect).frobenius_norm());
  for (const auto& [l, ch] : a.channels()) r = std::max(r, detail::channel_distance(ch, moved.channel(l)));
  return r;
}

namespace detail {

// Eigenbasis shared by all effects, one column per joint eigenvector, with its
// vector of effect expectations.
struct PovmBasis {
  Matrix vectors;
  std::vector<std::vector<double>> signatures;
};

inline bool signatures_match(const std::vector<double>& x, const std::vector<double>& y, double tol = 1e-6) {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (std::abs(x[i] - y[i]) > tol) return false;
  return true;
}

// Effects are visited in the order of `labels` so signatures of two models line up.
inline std::optional<PovmBasis> povm_basis(const QuantumModel& m, const std::vector<std::string>& labels) {
  std::vector<Matrix> effects;
  for (const auto& l : labels) effects.push_back(m.povm()[*m.outcome_index(l)].effect);
  for (std::size_t i = 0; i < effects.size(); ++i)
    for (std::size_t j = i + 1; j < effects.size(); ++j)
      if ((effects[i] * effects[j] - effects[j] * effects[i]).frobenius_norm() > 1e-8) return std::nullopt;
  const std::size_t d = m.dim();
  Matrix h(d, d);
  for (std::size_t i = 0; i < effects.size(); ++i)
    h += effects[i] * (1.0 + std::fmod(0.7548776662466927 * static_cast<double>(i + 1), 1.0) * 3.0 + static_cast<double>(i));
  const auto eig = hermitian_eig(h, 1e-6);
  PovmBasis out{eig.vectors, {}};
  for (std::size_t k = 0; k < d; ++k) {
    const Matrix v = eig.vectors.col(k);
    std::vector<double> sig;
    for (const auto& e : effects) {
      const double ev = inner(v, e * v).real();
      if ((e * v - v * ev).frobenius_norm() > 1e-7) return std::nullopt;
      sig.push_back(ev);
    }
    out.signatures.push_back(std::move(sig));
  }
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t l = k + 1; l < d; ++l)
      if (signatures_match(out.signatures[k], out.signatures[l]))
        throw std::domain_error("POVM eigenbasis is degenerate; the effects do not fix a basis");
  return out;
}

// Accumulates Z_pr = sum over state and channel-image entries of a_pr conj(b_pr);
// the diagonal gauge D should satisfy d_p conj(d_r) ~ phase(Z_pr).
inline Matrix phase_constraints(const QuantumModel& a, const QuantumModel& b) {
  const std::size_t d = a.dim();
  Matrix z(d, d);
  auto add = [&](const Matrix& x, const Matrix& y) {
    for (std::size_t p = 0; p < d; ++p)
      for (std::size_t r = 0; r < d; ++r) z(p, r) += x(p, r) * std::conj(y(p, r));
  };
  add(a.initial_state(), b.initial_state());
  for (const auto& [l, ch] : a.channels()) {
    const auto& kb = b.channel(l).kraus();
    for (std::size_t q = 0; q < d; ++q) {
      Matrix ia(d, d), ib(d, d);
      for (const auto& k : ch.kraus()) ia += projector(k.col(q));
      for (const auto& k : kb) ib += projector(k.col(q));
      add(ia, ib);
    }
  }
  return z;
}

inline std::vector<Complex> synchronize_phases(const Matrix& z, std::vector<std::size_t>& component) {
  const std::size_t d = z.rows();
  double scale = 0.0;
  for (const auto& x : z.data()) scale = std::max(scale, std::abs(x));
  const double cut = std::max(1e-14, 1e-10 * scale);
  std::vector<Complex> ph(d, 1.0);
  std::vector<bool> seen(d, false);
  component.assign(d, 0);
  std::size_t comp = 0;
  // Prim-style maximum-weight spanning forest.
  for (std::size_t root = 0; root < d; ++root) {
    if (seen[root]) continue;
    seen[root] = true;
    component[root] = comp;
    std::vector<std::size_t> tree{root};
    while (true) {
      double best = cut;
      std::size_t bp = d, br = d;
      for (std::size_t r : tree)
        for (std::size_t p = 0; p < d; ++p)
          if (!seen[p] && std::abs(z(p, r)) > best) {
            best = std::abs(z(p, r));
            bp = p;
            br = r;
          }
      if (bp == d) break;
      ph[bp] = z(bp, br) / std::abs(z(bp, br)) * ph[br];
      seen[bp] = true;
      component[bp] = comp;
      tree.push_back(bp);
    }
    ++comp;
  }
  for (int it = 0; it < 30; ++it) {
    std::vector<Complex> next(d);
    for (std::size_t p = 0; p < d; ++p) {
      Complex s = 0.0;
      for (std::size_t r = 0; r < d; ++r)
        if (r != p && component[r] == component[p]) s += z(p, r) * ph[r];
      next[p] = std::abs(s) > cut ? s / std::abs(s) : ph[p];
    }
    ph = next;
  }
  return ph;
}

inline Matrix diagonal_gauge(const Matrix& va, const std::vector<Complex>& ph, const Matrix& vb) {
  return va * Matrix::diagonal(ph) * vb.adjoint();
}

// Gauge carrying b onto a when both POVMs share a non-degenerate joint eigenbasis.
inline std::optional<GaugeResult> fit_gauge(const QuantumModel& a, const QuantumModel& b, bool antiunitary) {
  const auto labels = a.outcome_labels();
  const auto ba = povm_basis(a, labels);
  const auto bb = povm_basis(b, labels);
  if (!ba && !bb) throw std::domain_error("effects do not commute; no joint eigenbasis to match");
  if (!ba || !bb) return std::nullopt;
  const std::size_t d = a.dim();
  Matrix vb(d, d);
  std::vector<bool> used(d, false);
  for (std::size_t k = 0; k < d; ++k) {
    std::size_t hit = d;
    for (std::size_t l = 0; l < d && hit == d; ++l)
      if (!used[l] && signatures_match(ba->signatures[k], bb->signatures[l])) hit = l;
    if (hit == d) return std::nullopt;
    used[hit] = true;
    for (std::size_t i = 0; i < d; ++i) vb(i, k) = bb->vectors(i, hit);
  }
  const Matrix& va = ba->vectors;
  const QuantumModel ca = conjugate_model(a, va.adjoint());
  const QuantumModel cb = conjugate_model(b, vb.adjoint());
  std::vector<std::size_t> component;
  auto ph = synchronize_phases(phase_constraints(ca, cb), component);
  const std::size_t comps = *std::max_element(component.begin(), component.end()) + 1;
  auto residual = [&](const std::vector<Complex>& p) { return gauge_residual(a, b, diagonal_gauge(va, p, vb)); };
  // Offsets between disconnected components are not fixed by the constraints above.
  if (comps > 1 && comps <= 8) {
    for (int sweep = 0; sweep < 3; ++sweep) {
      for (std::size_t c = 1; c < comps; ++c) {
        auto shifted = [&](double angle) {
          auto p = ph;
          for (std::size_t i = 0; i < d; ++i)
            if (component[i] == c) p[i] *= std::polar(1.0, angle);
          return p;
        };
        double best_angle = 0.0, best = residual(ph);
        for (int g = 1; g < 48; ++g) {
          const double ang = 2.0 * kPi * g / 48.0;
          const double r = residual(shifted(ang));
          if (r < best) {
            best = r;
            best_angle = ang;
          }
        }
        double lo = best_angle - 2.0 * kPi / 48.0, hi = best_angle + 2.0 * kPi / 48.0;
        for (int it = 0; it < 60; ++it) {
          const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
          if (residual(shifted(m1)) < residual(shifted(m2)))
            hi = m2;
          else
            lo = m1;
        }
        const double ang = 0.5 * (lo + hi);
        if (residual(shifted(ang)) < best) best_angle = ang;
        ph = shifted(best_angle);
      }
    }
  }
  const Matrix g = diagonal_gauge(va, ph, vb);
  return GaugeResult{antiunitary, g, residual(ph)};
}

}  // namespace detail

// Searches for a gauge carrying b onto a. Returns the gauge when its residual is
// within tol, trying the unitary branch first.
inline std::optional<GaugeResult> check_equivalence(const QuantumModel& a, const QuantumModel& b,
                                                    bool allow_antiunitary = true, double tol = 1e-8) {
  detail::require_same_structure(a, b);
  std::optional<GaugeResult> best;
  if (auto u = detail::fit_gauge(a, b, false)) {
    if (u->residual <= tol) return u;
    best = u;
  }
  if (allow_antiunitary) {
    if (auto v = detail::fit_gauge(a, complex_conjugate_model(b), true)) {
      if (v->residual <= tol && (!best || v->residual < best->residual)) return v;
    }
  }
  return std::nullopt;
}

// Best candidate regardless of tolerance, for reporting how far two models are apart.
inline std::optional<GaugeResult> best_gauge_candidate(const QuantumModel& a, const QuantumModel& b,
                                                       bool allow_antiunitary = true) {
  detail::require_same_structure(a, b);
  auto u = detail::fit_gauge(a, b, false);
  if (allow_antiunitary) {
    auto v = detail::fit_gauge(a, complex_conjugate_model(b), true);
    if (v && (!u || v->residual < u->residual)) return v;
  }
  return u;
}

namespace detail {

inline void require_quiz_pass(const QuantumModel& target, const std::vector<InstructionString>& strings,
                              const QuantumModel& impl) {
  for (const auto& l : target.alphabet())
    if (!impl.has_label(l)) throw ReconstructionError("quiz", "implementation lacks label '" + l + "'");
  for (const auto& o : target.outcome_labels())
    if (!impl.outcome_index(o)) throw ReconstructionError("quiz", "implementation lacks outcome '" + o + "'");
  const auto report = quiz_exhaustive(impl, make_table(target, strings));
  if (!report.accepted())
    throw ReconstructionError("quiz", "implementation fails the quiz on '" + to_text(report.first_violation->string) + "'");
}

inline Matrix unitary_of(const QuantumChannel& ch, const std::string& step) {
  auto u = channel_as_unitary(ch, 1e-8);
  if (!u) throw ReconstructionError(step, "implemented channel is not unitary");
  return *u;
}

}  // namespace detail

// Constructive single-qubit gauge. Diagonalising U_s = V diag(l0, l1) V^dagger, the
// eigenvalue ratio l1/l0 is i (k = 1) or -i (k = 3); theta is the relative phase of
// the initial ket in the eigenbasis. The gauge carrying the implementation onto the
// target is U^dagger with U = V diag(1, e^{i theta}) for k = 1 and
// U = V X diag(1, e^{-i theta}) for k = 3.
struct S1Reconstruction {
  GaugeResult gauge;
  int k = 1;
  double theta = 0.0;
};

inline S1Reconstruction reconstruct_gauge_S1_detailed(const QuantumModel& impl) {
  const QuantumModel target = gates::build_S_n(1);
  if (impl.dim() != 2) throw DimensionError("single-qubit reconstruction needs a two-dimensional model");
  detail::require_quiz_pass(target, gen_X1(), impl);
  if (!is_pure(impl.initial_state())) throw ReconstructionError("state", "initial state is not pure");
  const Matrix psi = dominant_vector(impl.initial_state());
  const Matrix us = detail::unitary_of(impl.channel("s"), "unitarity");

  auto eig = unitary_eig(us);
  // Canonical order: the eigenvector with the larger weight on |0> comes first.
  if (std::abs(eig.vectors(0, 1)) > std::abs(eig.vectors(0, 0)) + 1e-12) {
    std::swap(eig.values[0], eig.values[1]);
    for (std::size_t i = 0; i < 2; ++i) std::swap(eig.vectors(i, 0), eig.vectors(i, 1));
  }
  const Complex ratio = eig.values[1] / eig.values[0];
  int k = 0;
  if (std::abs(ratio - Complex(0.0, 1.0)) < 1e-6)
    k = 1;
  else if (std::abs(ratio - Complex(0.0, -1.0)) < 1e-6)
    k = 3;
  else
    throw ReconstructionError("classification", "eigenvalue ratio of the channel is not +i or -i");
  const Matrix& v = eig.vectors;
  const Complex c0 = inner(v.col(0), psi), c1 = inner(v.col(1), psi);
  if (std::abs(std::abs(c0) - std::abs(c1)) > 1e-6)
    throw ReconstructionError("classification", "initial state is not balanced in the eigenbasis");
  const double theta = std::arg(c1 / c0);
  Matrix u = k == 1 ? v * gates::phase(theta) : v * gates::pauli_x() * gates::phase(-theta);
  const Matrix g = u.adjoint();
  const double res = gauge_residual(target, impl, g);
  if (res > 1e-8) throw ReconstructionError("residual", "gauge residual " + std::to_string(res) + " exceeds 1e-8");
  return {GaugeResult{false, g, res}, k, theta};
}

inline GaugeResult reconstruct_gauge_S1(const QuantumModel& impl) { return reconstruct_gauge_S1_detailed(impl).gauge; }

struct S2Reconstruction {
  GaugeResult gauge;
  Matrix product_basis;  // U_(x), mapping the distinguished states onto |ij>
  double r = 0.0, s = 0.0, t = 0.0, alpha = 0.0, beta = 0.0;
};

namespace detail {

// X^q = |+><+| + e^{i pi q}|-><-|.
inline Matrix x_power(double q) {
  return projector(gates::ket_plus()) + projector(gates::ket_minus()) * std::polar(1.0, kPi * q);
}

// q with e^{i pi q} = z / |z|, folded into (-1, 1].
inline double half_turns(Complex z) { return std::arg(z) / kPi; }

inline QuantumModel qubit_submodel(const QuantumChannel& ch) {
  const Matrix p0 = projector(gates::ket0()), p1 = projector(gates::ket1());
  return QuantumModel(p0, {{"s", ch}}, {{"0", p0}, {"1", p1}});
}

}  // namespace detail

// Constructive two-qubit gauge for an implementation of S_2. The quiz on X2 is
// not rerun; instead each stage raises ReconstructionError naming the stage whose
// numerical check failed, and the final residual certifies the result.
inline S2Reconstruction reconstruct_gauge_S2_detailed(const QuantumModel& impl) {
  using detail::x_power;
  const QuantumModel target = gates::build_S_n(2);
  if (impl.dim() != 4) throw DimensionError("two-qubit reconstruction needs a four-dimensional model");
  for (const auto& l : target.alphabet())
    if (!impl.has_label(l)) throw UnknownLabelError("implementation lacks label '" + l + "'");
  for (const auto& o : target.outcome_labels())
    if (!impl.outcome_index(o)) throw UnknownLabelError("implementation lacks outcome '" + o + "'");
  const DimsLayout layout{2, 2};
  const Simulator sim(impl);

  // basis: psi_ij prepared by s_b^{2j} s_a^{2i}
  Matrix u_prod(4, 4);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      const Matrix rho = sim.state(concat({InstructionString(2 * j, "s_b"), InstructionString(2 * i, "s_a")}));
      if (!is_pure(rho)) throw ReconstructionError("basis", "distinguished state is not pure");
      const std::string ij = gates::bitstring(2 * i + j, 2);
      if (sim.distribution_of_state(rho)[*impl.outcome_index(ij)] < 1.0 - kSupportEps)
        throw ReconstructionError("basis", "distinguished state does not give outcome " + ij + " with certainty");
      u_prod += outer(basis_ket(4, 2 * i + j), dominant_vector(rho));
    }
  if (!is_unitary(u_prod, 1e-8)) throw ReconstructionError("basis", "distinguished states are not orthonormal");
  const QuantumModel m = conjugate_model(impl, u_prod);
  const QuantumChannel& la = m.channel("s_a");
  const QuantumChannel& lb = m.channel("s_b");
  const Matrix comp = Matrix::identity(2);

  // marginal: Lambda_a keeps the computational basis of B, Lambda_b that of A
  if (std::holds_alternative<MembershipFailure>(kraus_block_structure(la, layout, comp, 1)))
    throw ReconstructionError("marginal", "channel s_a disturbs the distinguished basis of the second qubit");
  if (std::holds_alternative<MembershipFailure>(kraus_block_structure(lb, layout, comp, 0)))
    throw ReconstructionError("marginal", "channel s_b disturbs the distinguished basis of the first qubit");

  // subchannel: single-qubit gauges of every conditional action
  std::vector<Matrix> v(2), w(2), ua(2), ub(2);
  for (std::size_t j = 0; j < 2; ++j) {
    const QuantumChannel sa = subchannel(la, layout, 0, projector(basis_ket(2, j))).to_channel();
    const QuantumChannel sb = subchannel(lb, layout, 1, projector(basis_ket(2, j))).to_channel();
    try {
      v[j] = reconstruct_gauge_S1(detail::qubit_submodel(sa)).matrix.adjoint();
      w[j] = reconstruct_gauge_S1(detail::qubit_submodel(sb)).matrix.adjoint();
    } catch (const ReconstructionError& e) {
      throw ReconstructionError("subchannel", std::string("single-qubit reconstruction failed: ") + e.what());
    }
    ua[j] = detail::unitary_of(sa, "subchannel");
    ub[j] = detail::unitary_of(sb, "subchannel");
  }

  // purity: both orders of the two channels keep psi_00 pure
  const Matrix psi00 = projector(basis_ket(4, 0));
  if (!is_pure(la.apply(lb.apply(psi00))) || !is_pure(lb.apply(la.apply(psi00))))
    throw ReconstructionError("purity", "composed channels map psi_00 to a mixed state");

  // unitarity: glue the conditional unitaries with coherent inputs
  Matrix big_a, big_b;
  try {
    const Matrix on_b = partial_trace(lb.apply(psi00), layout, {1});
    big_a = reconstruct_unitary_from_subchannels(la, layout, comp, ua, {ProductInput{on_b, projector(basis_ket(2, 0))}}, 1)
                .unitary;
    const Matrix on_a = partial_trace(la.apply(psi00), layout, {0});
    big_b = reconstruct_unitary_from_subchannels(lb, layout, comp, ub, {ProductInput{on_a, projector(basis_ket(2, 0))}}, 0)
                .unitary;
  } catch (const ConditionError& e) {
    throw ReconstructionError("unitarity", std::string("condition ") + e.condition() + " failed: " + e.what());
  }

  // relative gauge: V_0^dagger V_1 ~ X^r and W_0^dagger W_1 ~ X^s
  auto relative = [](const Matrix& m0, const Matrix& m1) {
    const Matrix q = m0.adjoint() * m1;
    const Matrix p = gates::ket_plus(), mi = gates::ket_minus();
    if (std::abs(inner(p, q * mi)) > 1e-6 || std::abs(inner(mi, q * p)) > 1e-6)
      throw ReconstructionError("relative gauge", "single-qubit gauges differ by more than a power of X");
    return detail::half_turns(inner(mi, q * mi) / inner(p, q * p));
  };
  S2Reconstruction out;
  out.product_basis = u_prod;
  out.r = relative(v[0], v[1]);
  out.s = relative(w[0], w[1]);

  // phase fixing: Theta = C_hX^{-s} (V_0 (x) W_0)^dagger
  const Matrix plus = projector(gates::ket_plus()), minus = projector(gates::ket_minus());
  const Matrix chx = kron(plus, comp) + kron(minus, x_power(-out.s));
  const Matrix theta = chx * kron(v[0], w[0]).adjoint();
  const Matrix ta = theta * big_a * theta.adjoint();
  const Matrix tb = theta * big_b * theta.adjoint();
  const Matrix sg = gates::phase_s();
  // Theta U_a Theta^dagger = S (x) |+><+| + e^{i pi alpha} X^t S X^{-t} (x) |-><-|, up to phase
  auto block = [&](const Matrix& mtx, const Matrix& ket) {
    const Matrix iso = kron(comp, ket);
    return iso.adjoint() * mtx * iso;
  };
  const Matrix a_plus = block(ta, gates::ket_plus());
  const Matrix a_minus = block(ta, gates::ket_minus()) * std::conj(aligning_phase(a_plus, sg));
  const Complex e_alpha = a_minus.trace() / sg.trace();
  out.alpha = detail::half_turns(e_alpha);
  const Matrix conj_s = a_minus * (1.0 / e_alpha);
  const Complex off = inner(gates::ket_plus(), conj_s * gates::ket_minus()) /
                      inner(gates::ket_plus(), sg * gates::ket_minus());
  out.t = -detail::half_turns(off);
  // Theta U_b Theta^dagger = X^beta (x) S, up to phase
  const Matrix cb = tb * kron(comp, sg.adjoint());
  const Matrix e_plus0 = kron(gates::ket_plus(), gates::ket0()), e_minus0 = kron(gates::ket_minus(), gates::ket0());
  out.beta = detail::half_turns(inner(e_minus0, cb * e_minus0) / inner(e_plus0, cb * e_plus0));
  for (double q : {out.t, out.alpha, out.beta})
    if (std::abs(q) > 1e-6)
      throw ReconstructionError("phase fixing", "residual rotation parameter " + std::to_string(q) + " is not zero");
  if (phase_aligned_distance(ta, kron(sg, comp)) > 1e-7 || phase_aligned_distance(tb, kron(comp, sg)) > 1e-7)
    throw ReconstructionError("phase fixing", "transformed channels are not S (x) I and I (x) S");

  const Matrix g = theta * u_prod;
  const double res = gauge_residual(target, impl, g);
  if (res > 1e-7) throw ReconstructionError("residual", "gauge residual " + std::to_string(res) + " exceeds 1e-7");
  out.gauge = GaugeResult{false, g, res};
  return out;
}

inline GaugeResult reconstruct_gauge_S2(const QuantumModel& impl) { return reconstruct_gauge_S2_detailed(impl).gauge; }

}  // namespace qsq
