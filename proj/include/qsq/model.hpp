#pragma once

// Operational models: an initial state, labelled channels and a labelled POVM.
// Running an instruction string applies the labelled channels left to right.

#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qsq/linalg.hpp"

namespace qsq {

using Label = std::string;
using InstructionString = std::vector<Label>;
using OutputSupport = std::set<std::string>;

inline constexpr double kSupportEps = 1e-9;
inline constexpr double kPurityCutoff = 1e-7;

inline std::string to_text(const InstructionString& x) {
  std::string out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) out += ' ';
    out += x[i];
  }
  return out;
}

inline InstructionString parse_instruction_string(const std::string& text) {
  InstructionString out;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

// Shorthand for building strings: repeat(x, k) concatenates k copies.
inline InstructionString repeat(const InstructionString& x, std::size_t k) {
  InstructionString out;
  for (std::size_t i = 0; i < k; ++i) out.insert(out.end(), x.begin(), x.end());
  return out;
}

inline InstructionString concat(std::initializer_list<InstructionString> parts) {
  InstructionString out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

inline bool is_pure(const Matrix& rho) { return purity(rho) >= 1.0 - kPurityCutoff; }

class QuantumChannel {
 public:
  QuantumChannel() = default;

  explicit QuantumChannel(std::vector<Matrix> kraus) : kraus_(std::move(kraus)) {
    if (kraus_.empty()) throw DimensionError("channel needs at least one Kraus operator");
    const std::size_t d = kraus_[0].rows();
    for (const auto& k : kraus_)
      if (k.rows() != d || k.cols() != d) throw DimensionError("Kraus operators must be square and equal-sized");
  }

  static QuantumChannel unitary(const Matrix& u) { return QuantumChannel({u}); }

  const std::vector<Matrix>& kraus() const { return kraus_; }
  std::size_t dim() const { return kraus_.empty() ? 0 : kraus_[0].rows(); }
  bool single_kraus() const { return kraus_.size() == 1; }

  Matrix apply(const Matrix& rho) const {
    if (rho.rows() != dim() || rho.cols() != dim()) throw DimensionError("state does not match channel dimension");
    Matrix out(dim(), dim());
    for (const auto& k : kraus_) out += k * rho * k.adjoint();
    return out;
  }

  // Sum_j K_j^dagger K_j, which equals the identity for a trace-preserving map.
  Matrix kraus_sum() const {
    Matrix s(dim(), dim());
    for (const auto& k : kraus_) s += k.adjoint() * k;
    return s;
  }

  Matrix superop() const { return superoperator(kraus_); }

  // Sequential composition: (second o first)(rho) = second(first(rho)).
  static QuantumChannel compose(const QuantumChannel& second, const QuantumChannel& first) {
    std::vector<Matrix> ks;
    for (const auto& a : second.kraus_)
      for (const auto& b : first.kraus_) ks.push_back(a * b);
    return QuantumChannel(std::move(ks));
  }

 private:
  std::vector<Matrix> kraus_;
};

struct PovmOutcome {
  std::string label;
  Matrix effect;
};

class QuantumModel {
 public:
  QuantumModel(Matrix initial_state, std::vector<std::pair<Label, QuantumChannel>> channels,
               std::vector<PovmOutcome> povm)
      : initial_state_(std::move(initial_state)), channels_(std::move(channels)), povm_(std::move(povm)) {
    if (!initial_state_.is_square()) throw DimensionError("initial state must be square");
    const std::size_t d = initial_state_.rows();
    for (std::size_t i = 0; i < channels_.size(); ++i) {
      if (channels_[i].second.dim() != d) throw DimensionError("channel '" + channels_[i].first + "' has wrong dimension");
      if (!index_.emplace(channels_[i].first, i).second)
        throw ContractError("duplicate channel label '" + channels_[i].first + "'");
    }
    if (povm_.empty()) throw DimensionError("POVM needs at least one outcome");
    for (std::size_t i = 0; i < povm_.size(); ++i) {
      if (povm_[i].effect.rows() != d || povm_[i].effect.cols() != d)
        throw DimensionError("effect '" + povm_[i].label + "' has wrong dimension");
      if (!outcome_index_.emplace(povm_[i].label, i).second)
        throw ContractError("duplicate outcome label '" + povm_[i].label + "'");
    }
  }

  std::size_t dim() const { return initial_state_.rows(); }
  const Matrix& initial_state() const { return initial_state_; }
  const std::vector<std::pair<Label, QuantumChannel>>& channels() const { return channels_; }
  const std::vector<PovmOutcome>& povm() const { return povm_; }

  bool has_label(const Label& l) const { return index_.count(l) != 0; }

  std::size_t label_index(const Label& l) const {
    auto it = index_.find(l);
    if (it == index_.end()) throw UnknownLabelError("unknown instruction label '" + l + "'");
    return it->second;
  }

  const QuantumChannel& channel(const Label& l) const { return channels_[label_index(l)].second; }

  std::vector<Label> alphabet() const {
    std::vector<Label> out;
    for (const auto& [l, _] : channels_) out.push_back(l);
    return out;
  }

  std::vector<std::string> outcome_labels() const {
    std::vector<std::string> out;
    for (const auto& o : povm_) out.push_back(o.label);
    return out;
  }

  std::optional<std::size_t> outcome_index(const std::string& label) const {
    auto it = outcome_index_.find(label);
    if (it == outcome_index_.end()) return std::nullopt;
    return it->second;
  }

 private:
  Matrix initial_state_;
  std::vector<std::pair<Label, QuantumChannel>> channels_;
  std::vector<PovmOutcome> povm_;
  std::unordered_map<Label, std::size_t> index_;
  std::unordered_map<std::string, std::size_t> outcome_index_;
};

inline QuantumModel with_channel(const QuantumModel& m, const Label& label, const QuantumChannel& ch) {
  auto channels = m.channels();
  bool replaced = false;
  for (auto& [l, c] : channels)
    if (l == label) {
      c = ch;
      replaced = true;
    }
  if (!replaced) channels.emplace_back(label, ch);
  return QuantumModel(m.initial_state(), std::move(channels), m.povm());
}

inline QuantumModel with_initial_state(const QuantumModel& m, const Matrix& rho) {
  return QuantumModel(rho, m.channels(), m.povm());
}

inline QuantumModel with_povm(const QuantumModel& m, std::vector<PovmOutcome> povm) {
  return QuantumModel(m.initial_state(), m.channels(), std::move(povm));
}

// Adds a new labelled instruction; the label must be fresh.
inline QuantumModel augment(const QuantumModel& m, const Label& label, const QuantumChannel& ch) {
  if (m.has_label(label)) throw ContractError("label '" + label + "' already present");
  if (ch.dim() != m.dim()) throw DimensionError("augmenting channel has wrong dimension");
  return with_channel(m, label, ch);
}

// Conjugates every component by g: X -> g X g^dagger.
inline QuantumModel conjugate_model(const QuantumModel& m, const Matrix& g) {
  const Matrix gd = g.adjoint();
  std::vector<std::pair<Label, QuantumChannel>> channels;
  for (const auto& [l, c] : m.channels()) {
    std::vector<Matrix> ks;
    for (const auto& k : c.kraus()) ks.push_back(g * k * gd);
    channels.emplace_back(l, QuantumChannel(std::move(ks)));
  }
  std::vector<PovmOutcome> povm;
  for (const auto& o : m.povm()) povm.push_back({o.label, g * o.effect * gd});
  return QuantumModel(g * m.initial_state() * gd, std::move(channels), std::move(povm));
}

// Entrywise complex conjugation of every component.
inline QuantumModel complex_conjugate_model(const QuantumModel& m) {
  std::vector<std::pair<Label, QuantumChannel>> channels;
  for (const auto& [l, c] : m.channels()) {
    std::vector<Matrix> ks;
    for (const auto& k : c.kraus()) ks.push_back(k.conj());
    channels.emplace_back(l, QuantumChannel(std::move(ks)));
  }
  std::vector<PovmOutcome> povm;
  for (const auto& o : m.povm()) povm.push_back({o.label, o.effect.conj()});
  return QuantumModel(m.initial_state().conj(), std::move(channels), std::move(povm));
}

// Compressed rows of a matrix, used to apply gate matrices with few nonzeros to kets.
class SparseMatrix {
 public:
  explicit SparseMatrix(const Matrix& m) : rows_(m.rows()), start_(m.rows() + 1, 0) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
      for (std::size_t j = 0; j < m.cols(); ++j)
        if (m(i, j) != Complex(0.0)) entries_.push_back({j, m(i, j)});
      start_[i + 1] = entries_.size();
    }
  }

  void apply(const std::vector<Complex>& in, std::vector<Complex>& out) const {
    out.assign(rows_, Complex(0.0));
    for (std::size_t i = 0; i < rows_; ++i) {
      Complex s = 0.0;
      for (std::size_t k = start_[i]; k < start_[i + 1]; ++k) s += entries_[k].second * in[entries_[k].first];
      out[i] = s;
    }
  }

 private:
  std::size_t rows_;
  std::vector<std::size_t> start_;
  std::vector<std::pair<std::size_t, Complex>> entries_;
};

using Ket = std::vector<Complex>;

// Evaluates instruction strings on a fixed model. When the initial state is pure
// and every channel has a single Kraus operator, states are propagated as kets;
// the results agree with the density-matrix path to rounding.
class Simulator {
 public:
  explicit Simulator(const QuantumModel& m) : model_(m) {
    pure_ = true;
    for (const auto& [_, c] : m.channels())
      if (!c.single_kraus()) pure_ = false;
    if (pure_) {
      const auto eig = hermitian_eig(m.initial_state(), 1e-6);
      const std::size_t d = m.dim();
      Matrix v = eig.vectors.col(d - 1);
      if ((projector(v) - m.initial_state()).frobenius_norm() > kArithmeticTol) pure_ = false;
      if (pure_) {
        initial_ket_ = v.data();
        for (const auto& [_, c] : m.channels()) sparse_.emplace_back(c.kraus()[0]);
      }
    }
    for (const auto& o : m.povm()) {
      const auto eig = hermitian_eig(o.effect, 1e-6);
      const std::size_t d = m.dim();
      const double top = eig.values[d - 1];
      const double rest = o.effect.trace().real() - top;
      if (std::abs(rest) <= kArithmeticTol && top >= 0.0) {
        Matrix w = eig.vectors.col(d - 1) * std::sqrt(top);
        rank_one_.push_back(w.data());
      } else {
        rank_one_.clear();
        break;
      }
    }
  }

  const QuantumModel& model() const { return model_; }
  bool ket_path() const { return pure_; }

  Matrix state(const InstructionString& x) const {
    if (pure_) {
      const Ket k = ket(x);
      return projector(Matrix::column(k));
    }
    Matrix rho = model_.initial_state();
    for (const auto& l : x) rho = model_.channel(l).apply(rho);
    return rho;
  }

  // Requires ket_path().
  const Ket& initial_ket() const { return initial_ket_; }

  // Vectors w_a with effect_a = |w_a><w_a|, or empty when some effect has higher rank.
  const std::vector<Ket>& rank_one_effects() const { return rank_one_; }

  Ket ket(const InstructionString& x) const {
    Ket cur = initial_ket_;
    for (const auto& l : x) cur = apply(model_.label_index(l), cur);
    return cur;
  }

  Ket apply(std::size_t label_index, const Ket& in) const {
    Ket out;
    sparse_[label_index].apply(in, out);
    return out;
  }

  std::vector<double> distribution_of_ket(const Ket& v) const {
    std::vector<double> p;
    p.reserve(model_.povm().size());
    if (!rank_one_.empty()) {
      for (const auto& w : rank_one_) {
        Complex s = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) s += std::conj(w[i]) * v[i];
        p.push_back(std::norm(s));
      }
      return p;
    }
    for (const auto& o : model_.povm()) {
      Complex s = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) s += std::conj(v[i]) * o.effect(i, j) * v[j];
      p.push_back(s.real());
    }
    return p;
  }

  std::vector<double> distribution_of_state(const Matrix& rho) const {
    std::vector<double> p;
    p.reserve(model_.povm().size());
    const std::size_t d = rho.rows();
    for (const auto& o : model_.povm()) {
      Complex s = 0.0;
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) s += o.effect(i, j) * rho(j, i);
      p.push_back(s.real());
    }
    return p;
  }

  std::vector<double> distribution(const InstructionString& x) const {
    if (pure_) return distribution_of_ket(ket(x));
    return distribution_of_state(state(x));
  }

  OutputSupport support_of(const std::vector<double>& p, double eps) const {
    OutputSupport s;
    for (std::size_t i = 0; i < p.size(); ++i)
      if (p[i] > eps) s.insert(model_.povm()[i].label);
    return s;
  }

  OutputSupport support(const InstructionString& x, double eps = kSupportEps) const {
    return support_of(distribution(x), eps);
  }

 private:
  const QuantumModel& model_;
  bool pure_ = false;
  Ket initial_ket_;
  std::vector<SparseMatrix> sparse_;
  std::vector<Ket> rank_one_;
};

inline Matrix run_sequence(const QuantumModel& m, const InstructionString& x) {
  Matrix rho = m.initial_state();
  for (const auto& l : x) rho = m.channel(l).apply(rho);
  return rho;
}

// Outcome probabilities, aligned with m.povm().
inline std::vector<double> outcome_distribution(const QuantumModel& m, const InstructionString& x) {
  return Simulator(m).distribution(x);
}

inline std::map<std::string, double> outcome_map(const QuantumModel& m, const InstructionString& x) {
  const auto p = outcome_distribution(m, x);
  std::map<std::string, double> out;
  for (std::size_t i = 0; i < p.size(); ++i) out[m.povm()[i].label] = p[i];
  return out;
}

inline OutputSupport output_support(const QuantumModel& m, const InstructionString& x, double eps = kSupportEps) {
  return Simulator(m).support(x, eps);
}

struct AttainableState {
  Matrix state;
  InstructionString witness;  // a shortest string reaching it
};

// Breadth-first orbit of the initial state up to max_depth channel applications,
// deduplicated by Frobenius distance.
inline std::vector<AttainableState> attainable_states(const QuantumModel& m, std::size_t max_depth,
                                                      double dedup_tol = 1e-9) {
  std::vector<AttainableState> found{{m.initial_state(), {}}};
  std::vector<std::size_t> frontier{0};
  auto known = [&](const Matrix& rho) {
    for (const auto& s : found)
      if ((s.state - rho).frobenius_norm() <= dedup_tol) return true;
    return false;
  };
  for (std::size_t depth = 0; depth < max_depth && !frontier.empty(); ++depth) {
    std::vector<std::size_t> next;
    for (std::size_t idx : frontier)
      for (const auto& [l, c] : m.channels()) {
        Matrix out = c.apply(found[idx].state);
        if (!known(out)) {
          InstructionString w = found[idx].witness;
          w.push_back(l);
          found.push_back({std::move(out), std::move(w)});
          next.push_back(found.size() - 1);
        }
      }
    frontier = std::move(next);
  }
  return found;
}

// Lists every violated model invariant; an empty list means the model is valid.
inline std::vector<std::string> validate_model(const QuantumModel& m, double tol = kLogicalTol) {
  std::vector<std::string> v;
  const std::size_t d = m.dim();
  auto min_eig = [](const Matrix& h) { return hermitian_eig((h + h.adjoint()) * 0.5, 1.0).values.front(); };
  const Matrix& rho = m.initial_state();
  if (!rho.all_finite()) v.push_back("initial state has non-finite entries");
  if (hermiticity_defect(rho) > tol) v.push_back("initial state is not Hermitian");
  if (std::abs(rho.trace() - Complex(1.0)) > tol) v.push_back("initial state does not have unit trace");
  if (min_eig(rho) < -tol) v.push_back("initial state is not positive semidefinite");
  for (const auto& [l, c] : m.channels()) {
    for (const auto& k : c.kraus())
      if (!k.all_finite()) v.push_back("channel '" + l + "' has non-finite entries");
    if ((c.kraus_sum() - Matrix::identity(d)).frobenius_norm() > tol)
      v.push_back("channel '" + l + "' is not trace preserving");
  }
  Matrix total(d, d);
  std::size_t label_len = m.povm().front().label.size();
  for (const auto& o : m.povm()) {
    if (hermiticity_defect(o.effect) > tol) v.push_back("effect '" + o.label + "' is not Hermitian");
    else if (min_eig(o.effect) < -tol) v.push_back("effect '" + o.label + "' is not positive semidefinite");
    if (o.label.size() != label_len) v.push_back("outcome label '" + o.label + "' has inconsistent length");
    total += o.effect;
  }
  if ((total - Matrix::identity(d)).frobenius_norm() > tol) v.push_back("POVM effects do not sum to the identity");
  return v;
}

}  // namespace qsq
