#pragma once

// Instruction sets and their expected-outcome tables.
//
// A table entry names the outcome positions that are checked and the values
// they may take. Positions are 0-based indices into the outcome label; for the
// built-in models position i is qubit i+1. When the reference support is a
// cylinder set (fixed on some positions, unrestricted on the rest) only the
// fixed positions are checked; otherwise every position is checked against
// the full support.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "qsq/analysis.hpp"
#include "qsq/gates.hpp"
#include "qsq/parallel.hpp"

namespace qsq {

struct TableEntry {
  std::vector<std::size_t> checked_bits;
  std::set<std::string> allowed_values;

  std::string project(const std::string& outcome) const {
    std::string out;
    for (auto b : checked_bits) {
      if (b >= outcome.size()) throw ContractError("checked position beyond outcome label");
      out += outcome[b];
    }
    return out;
  }

  bool allows(const std::string& outcome) const { return allowed_values.count(project(outcome)) != 0; }

  bool operator==(const TableEntry& o) const {
    return checked_bits == o.checked_bits && allowed_values == o.allowed_values;
  }
};

class ExpectedOutcomeTable {
 public:
  void add(const InstructionString& x, TableEntry e) {
    const std::string key = to_text(x);
    if (index_.count(key)) throw ContractError("duplicate instruction string '" + key + "'");
    index_[key] = entries_.size();
    entries_.emplace_back(x, std::move(e));
  }

  std::size_t size() const { return entries_.size(); }
  const std::vector<std::pair<InstructionString, TableEntry>>& entries() const { return entries_; }
  const TableEntry* find(const InstructionString& x) const {
    auto it = index_.find(to_text(x));
    return it == index_.end() ? nullptr : &entries_[it->second].second;
  }
  std::vector<InstructionString> strings() const {
    std::vector<InstructionString> out;
    for (const auto& [x, _] : entries_) out.push_back(x);
    return out;
  }

 private:
  std::vector<std::pair<InstructionString, TableEntry>> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct InstructionSet {
  std::vector<InstructionString> strings;
  std::string target;  // reference model the set is designed for, e.g. "S2"

  std::size_t size() const { return strings.size(); }
  bool contains(const InstructionString& x) const {
    for (const auto& s : strings)
      if (s == x) return true;
    return false;
  }
};

struct TestSuite {
  InstructionSet set;
  ExpectedOutcomeTable table;
};

// Keeps first occurrences, in order.
inline std::vector<InstructionString> dedup(const std::vector<InstructionString>& xs) {
  std::set<InstructionString> seen;
  std::vector<InstructionString> out;
  for (const auto& x : xs)
    if (seen.insert(x).second) out.push_back(x);
  return out;
}

inline std::vector<InstructionString> set_union(std::initializer_list<std::vector<InstructionString>> parts) {
  std::vector<InstructionString> all;
  for (const auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  return dedup(all);
}

// Table entry describing a reference support over the model's outcome labels.
inline TableEntry entry_from_support(const QuantumModel& target, const OutputSupport& support) {
  if (support.empty()) throw ContractError("reference support is empty");
  const std::size_t len = support.begin()->size();
  TableEntry e;
  for (std::size_t b = 0; b < len; ++b) {
    const char c = (*support.begin())[b];
    bool fixed = true;
    for (const auto& s : support)
      if (s[b] != c) fixed = false;
    if (fixed) e.checked_bits.push_back(b);
  }
  const std::string value = e.project(*support.begin());
  std::size_t cylinder = 0;
  for (const auto& o : target.povm())
    if (o.label.size() == len && e.project(o.label) == value) ++cylinder;
  if (cylinder == support.size()) {
    e.allowed_values = {value};
  } else {
    e.checked_bits.clear();
    for (std::size_t b = 0; b < len; ++b) e.checked_bits.push_back(b);
    e.allowed_values = support;
  }
  return e;
}

inline ExpectedOutcomeTable make_table(const QuantumModel& target, const std::vector<InstructionString>& strings,
                                       double eps = kSupportEps) {
  const Simulator sim(target);
  std::vector<TableEntry> entries(strings.size());
  parallel_for(strings.size(), [&](std::size_t i) { entries[i] = entry_from_support(target, sim.support(strings[i], eps)); });
  ExpectedOutcomeTable t;
  for (std::size_t i = 0; i < strings.size(); ++i) t.add(strings[i], entries[i]);
  return t;
}

inline ExpectedOutcomeTable make_table(const QuantumModel& target, const InstructionSet& set, double eps = kSupportEps) {
  return make_table(target, set.strings, eps);
}

namespace detail {

inline InstructionString pow(const Label& l, std::size_t k) { return InstructionString(k, l); }

}  // namespace detail

inline std::vector<InstructionString> gen_X1() {
  return {{}, detail::pow("s", 2), detail::pow("s", 4)};
}

inline std::vector<InstructionString> gen_X2() {
  using detail::pow;
  std::vector<InstructionString> xs;
  for (std::size_t j = 0; j < 2; ++j)
    for (std::size_t i = 0; i < 5; ++i) xs.push_back(concat({pow("s_b", 2 * j), pow("s_a", i)}));
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 5; ++j) xs.push_back(concat({pow("s_a", 2 * i), pow("s_b", j)}));
  xs.push_back(repeat({"s_a", "s_b"}, 2));
  xs.push_back(repeat({"s_b", "s_a"}, 2));
  return dedup(xs);
}

inline std::vector<InstructionString> gen_Xcx() {
  using detail::pow;
  std::vector<InstructionString> xs;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) xs.push_back(concat({pow("s_a", 2 * i), pow("s_b", 2 * j), {"cx"}}));
  xs.push_back({"s_b", "cx", "s_b"});
  xs.push_back({"s_a", "cx", "s_a"});
  xs.push_back({"s_a", "s_b", "s_b", "cx", "s_a"});
  return xs;
}

// The six single-qubit words on qubit 1 probing the Hadamard, for a register of n qubits.
inline std::vector<InstructionString> hadamard_words(std::size_t n) {
  using detail::pow;
  const Label a = gates::s_label(1, n), h = gates::kHadamardLabel;
  return {{h}, concat({pow(a, 2), {h}}), {h, h}, {a, h, a}, concat({pow(a, 3), {h, a}}), {h, a, h}};
}

// Hadamard tests: every Hadamard-basis setting of qubits 2..n followed by each word,
// plus two strings with all qubits in |+y>. For n = 2 this is the standard set X_h.
inline std::vector<InstructionString> gen_hadamard_tests(std::size_t n) {
  using detail::pow;
  if (n < 2) throw ContractError("Hadamard tests need at least two qubits");
  std::vector<InstructionString> xs;
  const auto words = hadamard_words(n);
  for (std::size_t mask = 0; mask < (std::size_t{1} << (n - 1)); ++mask) {
    InstructionString prefix;
    for (std::size_t k = 2; k <= n; ++k)
      if ((mask >> (n - k)) & 1) prefix = concat({prefix, pow(gates::s_label(k, n), 2)});
    for (const auto& w : words) xs.push_back(concat({prefix, w}));
  }
  InstructionString all_y;
  for (std::size_t k = 1; k <= n; ++k) all_y.push_back(gates::s_label(k, n));
  for (std::size_t j = 1; j <= 2; ++j) xs.push_back(concat({all_y, pow(gates::kHadamardLabel, j), all_y}));
  return dedup(xs);
}

inline std::vector<InstructionString> gen_Xh() { return gen_hadamard_tests(2); }

inline std::size_t xn_cardinality_bound(std::size_t n) { return 5 * n * (std::size_t{1} << (n - 1)) + 2 * n + n * (n - 1) / 2; }

// Single-qubit rotation tests for n >= 3 qubits (n = 1, 2 delegate to X1, X2).
inline std::vector<InstructionString> gen_Xn(std::size_t n) {
  using detail::pow;
  if (n == 0 || n > 10) throw ContractError("qubit count out of range");
  if (n == 1) return gen_X1();
  if (n == 2) return gen_X2();
  auto s = [n](std::size_t k) { return gates::s_label(k, n); };
  std::vector<InstructionString> xs;
  for (std::size_t k = 1; k <= n; ++k) {
    for (std::size_t mask = 0; mask < (std::size_t{1} << (n - 1)); ++mask) {
      InstructionString prefix;
      std::size_t bit = 0;
      for (std::size_t i = 1; i <= n; ++i) {
        if (i == k) continue;
        if ((mask >> (n - 2 - bit)) & 1) prefix = concat({prefix, pow(s(i), 2)});
        ++bit;
      }
      for (std::size_t jk = 0; jk < 5; ++jk) xs.push_back(concat({prefix, pow(s(k), jk)}));
    }
  }
  for (std::size_t k = 1; k <= n; ++k) {
    InstructionString base;
    for (std::size_t i = k - 1; i >= 1; --i) base.push_back(s(i));
    for (std::size_t i = n; i >= k; --i) base.push_back(s(i));
    xs.push_back(repeat(base, 2));
  }
  for (std::size_t k = 1; k <= n; ++k) {
    InstructionString base;
    for (std::size_t i = n; i >= 1; --i) base.push_back(s(i));
    base.push_back(s(k));
    xs.push_back(repeat(base, 2));
  }
  for (std::size_t m = 1; m < n; ++m)
    for (std::size_t l = m + 1; l <= n; ++l) {
      InstructionString x;
      for (std::size_t i = n; i >= m; --i) x.push_back(s(i));
      x.push_back(s(l));
      xs.push_back(x);
    }
  return dedup(xs);
}

namespace detail {

// Phase-insensitive 64-bit hash of a ket, used to deduplicate breadth-first searches.
inline std::uint64_t ket_key(const Ket& v) {
  Complex ph = 1.0;
  for (const auto& z : v)
    if (std::abs(z) > 1e-3) {
      ph = std::conj(z) / std::abs(z);
      break;
    }
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](long long x) {
    h ^= static_cast<std::uint64_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h *= 1099511628211ull;
  };
  for (const auto& z : v) {
    const Complex w = z * ph;
    mix(std::llround(w.real() * 1e7));
    mix(std::llround(w.imag() * 1e7));
  }
  return h;
}

inline double ket_fidelity(const Ket& a, const Ket& b) {
  Complex s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return std::norm(s);
}

// Shortest label sequence (breadth first, alphabet order) from `start` to a ket accepted by `goal`.
inline std::optional<InstructionString> bfs_kets(const Simulator& sim, const Ket& start,
                                                 const std::function<bool(const Ket&)>& goal, std::size_t max_len,
                                                 std::size_t max_states) {
  if (goal(start)) return InstructionString{};
  const auto alphabet = sim.model().alphabet();
  struct Node {
    Ket ket;
    std::size_t parent;
    std::size_t label;
  };
  std::vector<Node> nodes{{start, 0, 0}};
  std::unordered_set<std::uint64_t> seen{ket_key(start)};
  std::size_t level_begin = 0;
  for (std::size_t depth = 0; depth < max_len; ++depth) {
    const std::size_t level_end = nodes.size();
    for (std::size_t n = level_begin; n < level_end; ++n) {
      for (std::size_t a = 0; a < alphabet.size(); ++a) {
        Ket next = sim.apply(a, nodes[n].ket);
        if (!seen.insert(ket_key(next)).second) continue;
        nodes.push_back({std::move(next), n, a});
        if (goal(nodes.back().ket)) {
          InstructionString path;
          for (std::size_t cur = nodes.size() - 1; cur != 0; cur = nodes[cur].parent) path.push_back(alphabet[nodes[cur].label]);
          return InstructionString(path.rbegin(), path.rend());
        }
        if (nodes.size() >= max_states) return std::nullopt;
      }
    }
    level_begin = level_end;
    if (level_begin == nodes.size()) break;
  }
  return std::nullopt;
}

inline bool singleton_support(const Simulator& sim, const Ket& v, double eps) {
  std::size_t count = 0;
  for (double p : sim.distribution_of_ket(v))
    if (p > eps && ++count > 1) return false;
  return count == 1;
}

inline Ket matrix_times_ket(const Matrix& u, const Ket& v) { return (u * Matrix::column(v)).data(); }

}  // namespace detail

// Reverses the string, replacing each label by its inverse power; valid for unitary channels.
inline InstructionString inverse_string(const QuantumModel& m, const InstructionString& x) {
  InstructionString out;
  for (auto it = x.rbegin(); it != x.rend(); ++it) {
    const auto& ch = m.channel(*it);
    if (!ch.single_kraus()) throw ContractError("inverse needs a unitary channel");
    const unsigned order = gates::gate_order(ch.kraus()[0]);
    for (unsigned k = 1; k < order; ++k) out.push_back(*it);
  }
  return out;
}

inline constexpr std::size_t kComplementMaxLength = 12;
inline constexpr std::size_t kSearchMaxStates = 1u << 13;

// Shortest string of length <= 12 preparing a ket (up to phase) from the initial state.
inline std::optional<InstructionString> find_preparation(const Simulator& sim, const Ket& target,
                                                         std::size_t max_len = kComplementMaxLength,
                                                         std::size_t max_states = kSearchMaxStates) {
  return detail::bfs_kets(sim, sim.initial_ket(),
                          [&](const Ket& v) { return detail::ket_fidelity(v, target) >= 1.0 - 1e-9; }, max_len,
                          max_states);
}

// Shortest string of length <= 12 after which `start` yields a single outcome.
inline std::optional<InstructionString> find_complement(const Simulator& sim, const Ket& start, double eps = kSupportEps,
                                                        std::size_t max_len = kComplementMaxLength,
                                                        std::size_t max_states = kSearchMaxStates) {
  // With a rank-one measurement a deterministic ket is one of the effect vectors, so a
  // hash lookup screens candidates before the full distribution is computed.
  std::unordered_set<std::uint64_t> effect_keys;
  for (const auto& w : sim.rank_one_effects()) effect_keys.insert(detail::ket_key(w));
  auto goal = [&](const Ket& v) {
    if (!effect_keys.empty() && !effect_keys.count(detail::ket_key(v))) return false;
    return detail::singleton_support(sim, v, eps);
  };
  return detail::bfs_kets(sim, start, goal, max_len, max_states);
}

// Tests certifying a new unitary `u` under `label` on top of a certified model:
// each eigenbasis preparation and each coherent preparation is followed by u and a
// complement string that makes the outcome deterministic.
inline TestSuite gen_augmentation_tests(const QuantumModel& certified, const Label& label, const Matrix& u,
                                        const std::vector<InstructionString>& eigen_preps,
                                        const std::vector<InstructionString>& coherent_preps,
                                        double eps = kSupportEps) {
  if (certified.has_label(label)) throw ContractError("label '" + label + "' is already certified");
  if (!is_unitary(u, 1e-9) || u.rows() != certified.dim()) throw ContractError("augmenting gate must be a unitary of the model dimension");
  const Simulator sim(certified);
  if (!sim.ket_path()) throw ContractError("certified model must have a pure initial state and unitary channels");
  const std::size_t d = certified.dim();

  std::vector<Ket> eig_kets;
  for (const auto& x : eigen_preps) eig_kets.push_back(sim.ket(x));
  if (eig_kets.size() != d) throw ConditionError("(ii)", "eigenbasis preparations do not span the space");
  std::vector<Matrix> cols;
  for (const auto& k : eig_kets) cols.push_back(Matrix::column(k));
  const Matrix basis = columns_to_matrix(cols);
  if (!has_orthonormal_columns(basis, 1e-8)) throw ConditionError("(ii)", "prepared eigenbasis is not orthonormal");
  for (std::size_t i = 0; i < d; ++i) {
    const Matrix v = basis.col(i);
    if ((u * v - v * inner(v, u * v)).frobenius_norm() > 1e-8)
      throw ConditionError("(ii)", "preparation '" + to_text(eigen_preps[i]) + "' is not an eigenvector of the gate");
  }

  std::vector<Ket> coh_kets;
  std::vector<Matrix> coh_states;
  for (const auto& y : coherent_preps) {
    coh_kets.push_back(sim.ket(y));
    coh_states.push_back(projector(Matrix::column(coh_kets.back())));
  }
  if (!coherence_graph(basis, coh_states).is_connected())
    throw ConditionError("(iii)", "coherence graph of the coherent preparations is disconnected");

  std::vector<InstructionString> tests;
  auto complement_for = [&](const Ket& after, const InstructionString& prep, const Ket& before,
                            const std::optional<InstructionString>& witness) -> InstructionString {
    if (auto c = find_complement(sim, after, eps)) return *c;
    if (detail::ket_fidelity(after, before) >= 1.0 - 1e-9) return inverse_string(certified, prep);
    if (witness) return inverse_string(certified, *witness);
    throw ConditionError("(i)", "no complement found after preparation '" + to_text(prep) + "'");
  };
  for (std::size_t i = 0; i < eigen_preps.size(); ++i) {
    const Ket after = detail::matrix_times_ket(u, eig_kets[i]);
    tests.push_back(concat({eigen_preps[i], {label}, complement_for(after, eigen_preps[i], eig_kets[i], std::nullopt)}));
  }
  for (std::size_t i = 0; i < coherent_preps.size(); ++i) {
    const Ket after = detail::matrix_times_ket(u, coh_kets[i]);
    std::optional<InstructionString> witness;
    if (detail::ket_fidelity(after, coh_kets[i]) >= 1.0 - 1e-9) witness = coherent_preps[i];
    else witness = find_preparation(sim, after);
    if (!witness)
      throw ConditionError("(iii)", "image of coherent preparation '" + to_text(coherent_preps[i]) +
                                        "' is not attainable within the search bound");
    tests.push_back(concat({coherent_preps[i], {label}, complement_for(after, coherent_preps[i], coh_kets[i], witness)}));
  }

  const QuantumModel target = augment(certified, label, QuantumChannel::unitary(u));
  TestSuite suite{{dedup(tests), "augmented:" + label}, {}};
  suite.table = make_table(target, suite.set.strings, eps);
  const std::size_t width = target.povm().front().label.size();
  for (const auto& [x, e] : suite.table.entries())
    if (e.allowed_values.size() != 1 || e.checked_bits.size() != width)
      throw ConditionError("(i)", "test '" + to_text(x) + "' is not deterministic");
  return suite;
}

namespace detail {

inline InstructionString relabel_pair(const InstructionString& two_qubit, std::size_t k, std::size_t n) {
  InstructionString out;
  for (const auto& l : two_qubit) {
    if (l == "s_a") out.push_back(gates::s_label(1, n));
    else if (l == "s_b") out.push_back(gates::s_label(k, n));
    else if (l == "cx") out.push_back(gates::cx_label(k, n));
    else out.push_back(l);
  }
  return out;
}

// Shortest Cl_2 strings taking |++> to |+0> and |+1>.
inline const std::vector<InstructionString>& two_qubit_computational_preps() {
  static const std::vector<InstructionString> preps = [] {
    const QuantumModel cl2 = gates::build_Cl_n(2);
    const Simulator sim(cl2);
    std::vector<InstructionString> out;
    for (const char* target : {"+0", "+1"}) {
      auto p = find_preparation(sim, gates::product_ket(target).data(), 24, 1u << 12);
      if (!p) throw std::logic_error("two-qubit preparation not found");
      out.push_back(*p);
    }
    return out;
  }();
  return preps;
}

}  // namespace detail

// Cl_n string preparing the computational basis state |bits> from |+>^n: each qubit
// k >= 2 is prepared through qubit 1, which is then rotated last.
inline InstructionString computational_prep(const std::string& bits) {
  const std::size_t n = bits.size();
  if (n < 1) throw ContractError("empty bitstring");
  InstructionString out;
  for (std::size_t k = 2; k <= n; ++k)
    out = concat({out, detail::relabel_pair(detail::two_qubit_computational_preps()[bits[k - 1] == '1'], k, n)});
  const Label a = gates::s_label(1, n);
  if (bits[0] == '1') out = concat({out, {a, a}});
  out.push_back(gates::kHadamardLabel);
  return out;
}

// Hadamard-basis preparations s_1^{2b_1} ... s_n^{2b_n} in binary order of b.
inline std::vector<InstructionString> hadamard_basis_preps(std::size_t n) {
  std::vector<InstructionString> out;
  for (std::size_t v = 0; v < (std::size_t{1} << n); ++v) {
    InstructionString x;
    for (std::size_t k = 1; k <= n; ++k)
      if ((v >> (n - k)) & 1) x = concat({x, detail::pow(gates::s_label(k, n), 2)});
    out.push_back(x);
  }
  return out;
}

// Tests adding C_hX on qubits (1, j) to S_n.
inline TestSuite gen_cx_tests(std::size_t n, std::size_t j) {
  const QuantumModel sn = gates::build_S_n(n);
  InstructionString rest;
  for (std::size_t k = 2; k <= n; ++k)
    if (k != j) rest.push_back(gates::s_label(k, n));
  const Label a = gates::s_label(1, n), b = gates::s_label(j, n);
  const std::vector<InstructionString> coherent{concat({{b}, rest}), concat({{a}, rest}), concat({{a, b, b}, rest})};
  return gen_augmentation_tests(sn, gates::cx_label(j, n),
                                gates::embed(gates::controlled_hadamard_x(), {1, j}, n), hadamard_basis_preps(n),
                                coherent);
}

// Tests adding CS on qubits (1, 2) to Cl_n.
inline TestSuite gen_cs_tests(std::size_t n) {
  std::vector<InstructionString> eigen;
  for (std::size_t v = 0; v < (std::size_t{1} << n); ++v) eigen.push_back(computational_prep(gates::bitstring(v, n)));
  const Label a = gates::s_label(1, n);
  const std::vector<InstructionString> coherent{
      {gates::kHadamardLabel},
      detail::relabel_pair(detail::two_qubit_computational_preps()[0], 2, n),
      {a, a, gates::kHadamardLabel}};
  return gen_augmentation_tests(gates::build_Cl_n(n), gates::kControlledSLabel,
                                gates::embed(gates::controlled_s(), {1, 2}, n), eigen, coherent);
}

inline std::vector<InstructionString> gen_XCl_strings(std::size_t n) {
  if (n < 2) throw ContractError("Clifford instruction sets need at least two qubits");
  std::vector<InstructionString> xs = gen_Xn(n);
  for (std::size_t j = 2; j <= n; ++j) {
    const auto cx = gen_cx_tests(n, j);
    xs.insert(xs.end(), cx.set.strings.begin(), cx.set.strings.end());
  }
  const auto h = gen_hadamard_tests(n);
  xs.insert(xs.end(), h.begin(), h.end());
  return dedup(xs);
}

inline TestSuite gen_XCl(std::size_t n) {
  TestSuite s{{gen_XCl_strings(n), "Cl" + std::to_string(n)}, {}};
  s.table = make_table(gates::build_Cl_n(n), s.set.strings);
  return s;
}

inline TestSuite gen_Xu(std::size_t n) {
  if (n < 2) throw ContractError("the universal set needs at least two qubits");
  std::vector<InstructionString> xs = gen_XCl_strings(n);
  const auto cs = gen_cs_tests(n);
  xs.insert(xs.end(), cs.set.strings.begin(), cs.set.strings.end());
  TestSuite s{{dedup(xs), "U" + std::to_string(n)}, {}};
  s.table = make_table(gates::build_U_n(n), s.set.strings);
  return s;
}

// Instruction set and table for a reference model by name ("s", "sy", "cl", "u").
// The S-type models use X1, X2 or Xn; the gate-set models use XCl and Xu.
inline TestSuite generate_suite(const std::string& model, std::size_t n) {
  if (model == "s" || model == "sy") {
    if (n < 1 || n > 8) throw ContractError("model '" + model + "' supports 1 to 8 qubits");
    const auto strings = n == 1 ? gen_X1() : n == 2 ? gen_X2() : gen_Xn(n);
    const QuantumModel target = model == "s" ? gates::build_S_n(n) : gates::build_Sy_n(n);
    return {{strings, (model == "s" ? "S" : "Sy") + std::to_string(n)}, make_table(target, strings)};
  }
  if (model == "cl" || model == "u") {
    if (n < 2 || n > 6) throw ContractError("model '" + model + "' supports 2 to 6 qubits");
    return model == "cl" ? gen_XCl(n) : gen_Xu(n);
  }
  throw ContractError("unknown model '" + model + "' (expected s, sy, cl or u)");
}

}  // namespace qsq
