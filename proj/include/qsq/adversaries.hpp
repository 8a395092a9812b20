#pragma once

// Deviant implementations of the reference models, and bounded-length comparison
// of output maps.

#include <optional>
#include <string>
#include <vector>

#include "qsq/gates.hpp"
#include "qsq/parallel.hpp"
#include "qsq/quiz.hpp"

namespace qsq {

enum class AdversaryKind {
  TSubstitution,
  Overrotation,
  Depolarizing,
  DecoherentConditional,
  SwappedLabels,
  WrongInitialState,
  TzAmbiguityPair,
};

inline const std::vector<std::pair<AdversaryKind, std::string>>& adversary_names() {
  static const std::vector<std::pair<AdversaryKind, std::string>> names{
      {AdversaryKind::TSubstitution, "t_substitution"},
      {AdversaryKind::Overrotation, "overrotation"},
      {AdversaryKind::Depolarizing, "depolarizing"},
      {AdversaryKind::DecoherentConditional, "decoherent_conditional"},
      {AdversaryKind::SwappedLabels, "swapped_labels"},
      {AdversaryKind::WrongInitialState, "wrong_initial_state"},
      {AdversaryKind::TzAmbiguityPair, "tz_ambiguity_pair"},
  };
  return names;
}

inline std::string to_string(AdversaryKind k) {
  for (const auto& [kind, name] : adversary_names())
    if (kind == k) return name;
  return "unknown";
}

inline AdversaryKind parse_adversary_kind(const std::string& name) {
  for (const auto& [kind, n] : adversary_names())
    if (n == name) return kind;
  throw ContractError("unknown adversary kind '" + name + "'");
}

struct AdversarySpec {
  AdversaryKind kind = AdversaryKind::TSubstitution;
  std::string base = "s";  // reference model id, see gates::build_model
  std::size_t n = 1;
  std::string label;      // channel to corrupt; empty means the S gate on qubit 1
  double angle = 0.0;     // overrotation, in (0, pi)
  double strength = 0.0;  // depolarizing, in (0, 1]
};

struct AdversaryModels {
  QuantumModel model;
  std::optional<QuantumModel> partner;  // second member of a pair
};

// u^p through the principal logarithm of each eigenvalue.
inline Matrix unitary_power(const Matrix& u, double p) {
  const auto eig = unitary_eig(u);
  std::vector<Complex> lam;
  for (const auto& z : eig.values) lam.push_back(std::polar(1.0, p * std::arg(z)));
  return eig.vectors * Matrix::diagonal(lam) * eig.vectors.adjoint();
}

// All 4^n Pauli strings on n qubits.
inline std::vector<Matrix> pauli_strings(std::size_t n) {
  const std::vector<Matrix> single{gates::id2(), gates::pauli_x(), gates::pauli_y(), gates::pauli_z()};
  std::vector<Matrix> out{Matrix::identity(1)};
  for (std::size_t q = 0; q < n; ++q) {
    std::vector<Matrix> next;
    for (const auto& p : out)
      for (const auto& s : single) next.push_back(kron(p, s));
    out = std::move(next);
  }
  return out;
}

// rho -> (1-p) U rho U^dagger + p tr(rho) I/d.
inline QuantumChannel depolarized_unitary(const Matrix& u, double p, std::size_t n) {
  const double d = static_cast<double>(u.rows());
  std::vector<Matrix> ks{u * std::sqrt(1.0 - p)};
  for (const auto& pauli : pauli_strings(n)) ks.push_back(pauli * u * (std::sqrt(p) / d));
  return QuantumChannel(std::move(ks));
}

namespace detail {

// Single-qubit measurement basis of a reference model: |+>,|-> or |0>,|1>.
inline std::pair<Matrix, Matrix> reference_basis(const std::string& base) {
  if (base == "sy") return {gates::ket0(), gates::ket1()};
  return {gates::ket_plus(), gates::ket_minus()};
}

inline const Matrix& single_unitary(const QuantumModel& m, const Label& l) {
  const auto& ch = m.channel(l);
  if (!ch.single_kraus()) throw ContractError("channel '" + l + "' of the base model is not unitary");
  return ch.kraus()[0];
}

}  // namespace detail

inline AdversaryModels build_adversary(const AdversarySpec& spec) {
  if (spec.kind == AdversaryKind::TzAmbiguityPair) {
    const QuantumModel cl = gates::build_Cl_n(spec.n);
    const Matrix t = gates::embed(gates::phase_t(), {1}, spec.n);
    const Matrix tz = gates::embed(gates::phase_t() * gates::pauli_z(), {1}, spec.n);
    return {augment(cl, gates::kTLabel, QuantumChannel::unitary(t)),
            augment(cl, gates::kTLabel, QuantumChannel::unitary(tz))};
  }
  const QuantumModel base = gates::build_model(spec.base, spec.n);
  const Label label = spec.label.empty() ? gates::s_label(1, spec.n) : spec.label;
  if (!base.has_label(label)) throw UnknownLabelError("base model has no label '" + label + "'");
  switch (spec.kind) {
    case AdversaryKind::TSubstitution:
      return {with_channel(base, label, QuantumChannel::unitary(unitary_power(detail::single_unitary(base, label), 0.5))),
              std::nullopt};
    case AdversaryKind::Overrotation: {
      if (!(spec.angle > 0.0 && spec.angle < kPi)) throw ContractError("overrotation angle must lie in (0, pi)");
      const double p = (kPi / 2 + spec.angle) / (kPi / 2);
      return {with_channel(base, label, QuantumChannel::unitary(unitary_power(detail::single_unitary(base, label), p))),
              std::nullopt};
    }
    case AdversaryKind::Depolarizing: {
      if (!(spec.strength > 0.0 && spec.strength <= 1.0)) throw ContractError("depolarizing strength must lie in (0, 1]");
      if (spec.n > 4) throw ContractError("depolarizing adversary supports at most 4 qubits");
      return {with_channel(base, label, depolarized_unitary(detail::single_unitary(base, label), spec.strength, spec.n)),
              std::nullopt};
    }
    case AdversaryKind::DecoherentConditional: {
      if (spec.n < 2) throw ContractError("decoherent conditional adversary needs at least two qubits");
      // The gate acts as before but dephases qubit 2 in its distinguished basis.
      const auto [b0, b1] = detail::reference_basis(spec.base);
      const Matrix& u = detail::single_unitary(base, label);
      std::vector<Matrix> ks{u * gates::embed(projector(b0), {2}, spec.n), u * gates::embed(projector(b1), {2}, spec.n)};
      return {with_channel(base, label, QuantumChannel(std::move(ks))), std::nullopt};
    }
    case AdversaryKind::SwappedLabels: {
      auto povm = base.povm();
      std::swap(povm[0].effect, povm[1].effect);
      return {with_povm(base, std::move(povm)), std::nullopt};
    }
    case AdversaryKind::WrongInitialState: {
      // Qubit 1 starts in the other distinguished state.
      std::string flipped(spec.n, '0');
      flipped[0] = '1';
      const Matrix& e = base.povm()[*base.outcome_index(flipped)].effect;
      return {with_initial_state(base, e * (1.0 / e.trace().real())), std::nullopt};
    }
    case AdversaryKind::TzAmbiguityPair:
      break;
  }
  throw ContractError("unhandled adversary kind");
}

struct OutputMapComparison {
  bool equal = true;
  std::optional<InstructionString> first_divergence;
  std::size_t strings_compared = 0;
};

// Compares output supports on every string up to max_len, by length and then in
// alphabet order of a. The first differing string is reported.
inline OutputMapComparison output_map_equality(const QuantumModel& a, const QuantumModel& b, std::size_t max_len,
                                               double eps = kSupportEps) {
  auto sorted = [](std::vector<std::string> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  if (sorted(a.alphabet()) != sorted(b.alphabet())) throw ContractError("models have different instruction labels");
  if (sorted(a.outcome_labels()) != sorted(b.outcome_labels())) throw ContractError("models have different outcome labels");
  const Simulator sa(a), sb(b);
  const auto alphabet = a.alphabet();

  struct Node {
    InstructionString x;
    Ket ka, kb;
    Matrix ra, rb;
  };
  auto support_a = [&](const Node& nd) {
    return sa.support_of(sa.ket_path() ? sa.distribution_of_ket(nd.ka) : sa.distribution_of_state(nd.ra), eps);
  };
  auto support_b = [&](const Node& nd) {
    return sb.support_of(sb.ket_path() ? sb.distribution_of_ket(nd.kb) : sb.distribution_of_state(nd.rb), eps);
  };
  auto child = [&](const Node& nd, const Label& l) {
    Node c{concat({nd.x, {l}}), {}, {}, {}, {}};
    if (sa.ket_path())
      c.ka = sa.apply(a.label_index(l), nd.ka);
    else
      c.ra = a.channel(l).apply(nd.ra);
    if (sb.ket_path())
      c.kb = sb.apply(b.label_index(l), nd.kb);
    else
      c.rb = b.channel(l).apply(nd.rb);
    return c;
  };

  Node root{{}, {}, {}, {}, {}};
  if (sa.ket_path()) root.ka = sa.initial_ket();
  else root.ra = a.initial_state();
  if (sb.ket_path()) root.kb = sb.initial_ket();
  else root.rb = b.initial_state();

  OutputMapComparison out;
  std::vector<Node> level{root};
  for (std::size_t len = 0;; ++len) {
    std::vector<char> differs(level.size(), 0);
    parallel_for(level.size(), [&](std::size_t i) { differs[i] = support_a(level[i]) != support_b(level[i]); });
    for (std::size_t i = 0; i < level.size(); ++i) {
      ++out.strings_compared;
      if (differs[i]) {
        out.equal = false;
        out.first_divergence = level[i].x;
        return out;
      }
    }
    if (len == max_len) break;
    std::vector<Node> next(level.size() * alphabet.size());
    parallel_for(level.size(), [&](std::size_t i) {
      for (std::size_t j = 0; j < alphabet.size(); ++j) next[i * alphabet.size() + j] = child(level[i], alphabet[j]);
    });
    level = std::move(next);
  }
  return out;
}

// Smallest overrotation of `label` that the exhaustive quiz on `table` detects at
// support threshold eps, located on a logarithmic grid and refined by bisection.
inline std::optional<double> min_detectable_overrotation(const std::string& base, std::size_t n,
                                                         const ExpectedOutcomeTable& table, double eps = kSupportEps,
                                                         const std::string& label = "") {
  auto rejected = [&](double angle) {
    AdversarySpec spec{AdversaryKind::Overrotation, base, n, label, angle, 0.0};
    return !quiz_exhaustive(build_adversary(spec).model, table, eps).accepted();
  };
  double lo = 0.0, hi = -1.0;
  for (double a = 1e-9; a < kPi; a *= 2.0) {
    if (rejected(a)) {
      hi = a;
      break;
    }
    lo = a;
  }
  if (hi < 0.0) return std::nullopt;
  for (int it = 0; it < 60 && hi - lo > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (rejected(mid) ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace qsq
