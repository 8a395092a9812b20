#pragma once

// The quiz: run instruction strings on an implementation and reject as soon as an
// outcome falls outside the expected table. Sampled mode draws strings from a
// distribution and outcomes from the Born rule; exhaustive mode compares the full
// support of every string.

#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "qsq/instructions.hpp"
#include "qsq/random.hpp"

namespace qsq {

struct QuizConfig {
  std::size_t rounds = 1000;
  std::vector<double> weights;  // over table entries; empty means uniform
  std::uint64_t seed = 0;
};

struct Violation {
  InstructionString string;
  std::vector<std::string> observed;  // offending outcome labels
  TableEntry expected;
};

enum class Verdict { Accept, Reject };

inline const char* to_string(Verdict v) { return v == Verdict::Accept ? "accept" : "reject"; }

struct QuizReport {
  std::string mode;  // "sampled" or "exhaustive"
  Verdict verdict = Verdict::Accept;
  std::size_t rounds_executed = 0;
  std::uint64_t seed = 0;
  std::optional<Violation> first_violation;
  std::vector<Violation> violations;
  std::vector<InstructionString> strings;   // table order
  std::vector<std::size_t> per_string_runs;  // aligned with `strings`

  bool accepted() const { return verdict == Verdict::Accept; }
};

namespace detail {

inline void require_compatible(const QuantumModel& impl, const ExpectedOutcomeTable& table) {
  const std::size_t width = impl.povm().front().label.size();
  for (const auto& [x, e] : table.entries())
    for (const auto& l : x)
      if (!impl.has_label(l)) throw UnknownLabelError("implementation lacks instruction label '" + l + "'");
  for (const auto& [x, e] : table.entries())
    for (auto b : e.checked_bits)
      if (b >= width) throw ContractError("table checks a position beyond the outcome labels");
  for (const auto& o : impl.povm())
    if (o.label.size() != width) throw ContractError("outcome labels have inconsistent length");
}

inline std::vector<double> resolve_weights(const std::vector<double>& w, std::size_t n) {
  if (n == 0) throw ContractError("empty instruction table");
  if (w.empty()) return std::vector<double>(n, 1.0 / static_cast<double>(n));
  if (w.size() != n) throw ContractError("one weight per instruction string expected");
  double sum = 0.0;
  for (double x : w) {
    if (!(x > 0.0)) throw ContractError("weights must be positive");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw ContractError("weights must sum to one");
  return w;
}

// Smallest index whose cumulative weight exceeds u.
inline std::size_t inverse_cdf(const std::vector<double>& p, double u) {
  double total = 0.0;
  for (double x : p) total += std::max(0.0, x);
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    acc += std::max(0.0, p[i]) / total;
    if (u < acc) return i;
  }
  for (std::size_t i = p.size(); i-- > 0;)
    if (p[i] > 0.0) return i;
  return p.size() - 1;
}

}  // namespace detail

inline QuizReport quiz_sampled(const QuantumModel& impl, const ExpectedOutcomeTable& table, const QuizConfig& cfg) {
  detail::require_compatible(impl, table);
  const auto weights = detail::resolve_weights(cfg.weights, table.size());
  const Simulator sim(impl);
  std::vector<std::optional<std::vector<double>>> cache(table.size());
  Rng rng(cfg.seed);
  QuizReport r;
  r.mode = "sampled";
  r.seed = cfg.seed;
  r.strings = table.strings();
  r.per_string_runs.assign(table.size(), 0);
  for (std::size_t round = 0; round < cfg.rounds; ++round) {
    const std::size_t i = detail::inverse_cdf(weights, uniform01(rng));
    const auto& [x, entry] = table.entries()[i];
    if (!cache[i]) cache[i] = sim.distribution(x);
    const std::size_t a = detail::inverse_cdf(*cache[i], uniform01(rng));
    ++r.per_string_runs[i];
    ++r.rounds_executed;
    const std::string& outcome = impl.povm()[a].label;
    if (!entry.allows(outcome)) {
      r.verdict = Verdict::Reject;
      r.first_violation = Violation{x, {outcome}, entry};
      r.violations.push_back(*r.first_violation);
      break;
    }
  }
  return r;
}

inline QuizReport quiz_exhaustive(const QuantumModel& impl, const ExpectedOutcomeTable& table, double eps = kSupportEps) {
  detail::require_compatible(impl, table);
  const Simulator sim(impl);
  std::vector<std::vector<std::string>> offending(table.size());
  parallel_for(table.size(), [&](std::size_t i) {
    const auto& [x, entry] = table.entries()[i];
    for (const auto& outcome : sim.support(x, eps))
      if (!entry.allows(outcome)) offending[i].push_back(outcome);
  });
  QuizReport r;
  r.mode = "exhaustive";
  r.strings = table.strings();
  r.per_string_runs.assign(table.size(), 1);
  r.rounds_executed = table.size();
  for (std::size_t i = 0; i < table.size(); ++i)
    if (!offending[i].empty()) r.violations.push_back({table.entries()[i].first, offending[i], table.entries()[i].second});
  if (!r.violations.empty()) {
    r.verdict = Verdict::Reject;
    r.first_violation = r.violations.front();
  }
  return r;
}

// Probability that one quiz round rejects: sum_x mu(x) * P(outcome outside the table entry).
inline double detection_probability(const QuantumModel& impl, const ExpectedOutcomeTable& table,
                                    const std::vector<double>& weights = {}) {
  detail::require_compatible(impl, table);
  const auto mu = detail::resolve_weights(weights, table.size());
  const Simulator sim(impl);
  double total = 0.0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto& [x, entry] = table.entries()[i];
    const auto p = sim.distribution(x);
    double bad = 0.0;
    for (std::size_t a = 0; a < p.size(); ++a)
      if (!entry.allows(impl.povm()[a].label)) bad += std::max(0.0, p[a]);
    total += mu[i] * bad;
  }
  return total;
}

// Rounds needed so that an implementation caught with probability p per round
// survives all of them with probability at most delta.
inline std::size_t rounds_for_confidence(double p, double delta) {
  if (!(p > 0.0 && p <= 1.0) || !(delta > 0.0 && delta < 1.0)) throw ContractError("need 0 < p <= 1 and 0 < delta < 1");
  if (p == 1.0) return 1;
  return static_cast<std::size_t>(std::ceil(std::log(delta) / std::log1p(-p)));
}

}  // namespace qsq
