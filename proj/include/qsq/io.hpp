#pragma once

// JSON encoding of models, channels, instruction tables, quiz reports and gauges.
// Complex numbers are [re, im] pairs and matrices are lists of rows. Objects keep
// insertion order so that output is byte-stable.

#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "qsq/adversaries.hpp"
#include "qsq/gauge.hpp"

namespace qsq::io {

using Json = nlohmann::ordered_json;

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline double clean(double x) { return x == 0.0 ? 0.0 : x; }  // folds -0 into 0

inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  return j.at(key);
}

}  // namespace detail

inline Json to_json(Complex z) { return Json::array({detail::clean(z.real()), detail::clean(z.imag())}); }

inline Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ParseError("complex number must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline Matrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("matrix must be a non-empty list of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty()) throw ParseError("matrix rows must be non-empty lists");
  const std::size_t cols = j[0].size();
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) throw ParseError("matrix rows have unequal lengths");
    for (std::size_t k = 0; k < cols; ++k) m(i, k) = complex_from_json(j[i][k]);
  }
  if (!m.all_finite()) throw ParseError("matrix has non-finite entries");
  return m;
}

inline Json to_json(const QuantumChannel& ch) {
  Json ks = Json::array();
  for (const auto& k : ch.kraus()) ks.push_back(to_json(k));
  return ks;
}

inline QuantumChannel channel_from_json(const Json& j) {
  const Json& ks = j.is_object() ? detail::field(j, "kraus") : j;
  if (!ks.is_array() || ks.empty()) throw ParseError("channel needs a non-empty list of Kraus operators");
  std::vector<Matrix> out;
  for (const auto& k : ks) out.push_back(matrix_from_json(k));
  return QuantumChannel(std::move(out));
}

inline Json channel_document(const QuantumChannel& ch) { return Json{{"dim", ch.dim()}, {"kraus", to_json(ch)}}; }

inline Json to_json(const QuantumModel& m) {
  Json channels = Json::object();
  for (const auto& [l, ch] : m.channels()) channels[l] = to_json(ch);
  Json povm = Json::array();
  for (const auto& o : m.povm()) povm.push_back(Json{{"label", o.label}, {"effect", to_json(o.effect)}});
  return Json{{"dim", m.dim()}, {"initial_state", to_json(m.initial_state())}, {"channels", channels}, {"povm", povm}};
}

// Parses and validates a model; any structural or physical violation is an error.
inline QuantumModel model_from_json(const Json& j, double tol = 1e-9) {
  const auto dim = detail::field(j, "dim");
  if (!dim.is_number_unsigned() || dim.get<std::size_t>() == 0) throw ParseError("dim must be a positive integer");
  const Json& chs = detail::field(j, "channels");
  if (!chs.is_object()) throw ParseError("channels must map labels to Kraus lists");
  std::vector<std::pair<Label, QuantumChannel>> channels;
  for (const auto& [label, ks] : chs.items()) {
    if (label.empty() || label.find(' ') != std::string::npos) throw ParseError("channel labels must be non-empty words");
    channels.emplace_back(label, channel_from_json(ks));
  }
  const Json& pj = detail::field(j, "povm");
  if (!pj.is_array()) throw ParseError("povm must be a list of {label, effect}");
  std::vector<PovmOutcome> povm;
  for (const auto& o : pj) {
    const Json& l = detail::field(o, "label");
    if (!l.is_string()) throw ParseError("outcome label must be a string");
    povm.push_back({l.get<std::string>(), matrix_from_json(detail::field(o, "effect"))});
  }
  QuantumModel m(matrix_from_json(detail::field(j, "initial_state")), std::move(channels), std::move(povm));
  if (m.dim() != dim.get<std::size_t>()) throw ParseError("dim does not match the initial state");
  const auto problems = validate_model(m, tol);
  if (!problems.empty()) throw ParseError("invalid model: " + problems.front());
  return m;
}

inline Json to_json(const TableEntry& e) {
  return Json{{"checked_bits", e.checked_bits}, {"allowed_values", e.allowed_values}};
}

inline TableEntry entry_from_json(const Json& j) {
  TableEntry e;
  try {
    e.checked_bits = detail::field(j, "checked_bits").get<std::vector<std::size_t>>();
    const auto values = detail::field(j, "allowed_values").get<std::vector<std::string>>();
    e.allowed_values = {values.begin(), values.end()};
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("bad table entry: ") + ex.what());
  }
  for (const auto& v : e.allowed_values)
    if (v.size() != e.checked_bits.size()) throw ParseError("allowed value length differs from the checked positions");
  return e;
}

inline Json to_json(const ExpectedOutcomeTable& t) {
  Json out = Json::object();
  for (const auto& [x, e] : t.entries()) out[to_text(x)] = to_json(e);
  return out;
}

inline ExpectedOutcomeTable table_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("table must map instruction strings to entries");
  ExpectedOutcomeTable t;
  for (const auto& [key, e] : j.items()) t.add(parse_instruction_string(key), entry_from_json(e));
  return t;
}

inline Json suite_document(const std::string& model, std::size_t n, const TestSuite& s) {
  Json strings = Json::array();
  for (const auto& x : s.set.strings) strings.push_back(to_text(x));
  return Json{{"model", model}, {"n", n}, {"target", s.set.target}, {"size", s.set.size()}, {"strings", strings},
              {"table", to_json(s.table)}};
}

// Accepts a suite document or a bare table object.
inline ExpectedOutcomeTable table_from_document(const Json& j) {
  if (j.is_object() && j.contains("table")) return table_from_json(j.at("table"));
  return table_from_json(j);
}

inline Json to_json(const Violation& v) {
  return Json{{"string", to_text(v.string)}, {"observed", v.observed}, {"expected", to_json(v.expected)}};
}

inline Json to_json(const QuizReport& r) {
  Json runs = Json::object();
  for (std::size_t i = 0; i < r.strings.size(); ++i) runs[to_text(r.strings[i])] = r.per_string_runs[i];
  Json violations = Json::array();
  for (const auto& v : r.violations) violations.push_back(to_json(v));
  return Json{{"mode", r.mode},
              {"verdict", to_string(r.verdict)},
              {"rounds_executed", r.rounds_executed},
              {"seed", r.seed},
              {"first_violation", r.first_violation ? to_json(*r.first_violation) : Json(nullptr)},
              {"violations", violations},
              {"per_string_runs", runs}};
}

inline Json to_json(const GaugeResult& g) {
  return Json{{"antiunitary", g.antiunitary}, {"matrix", to_json(g.matrix)}, {"residual", g.residual}};
}

inline GaugeResult gauge_from_json(const Json& j) {
  const Json& flag = detail::field(j, "antiunitary");
  const Json& res = detail::field(j, "residual");
  if (!flag.is_boolean() || !res.is_number()) throw ParseError("gauge needs a boolean flag and a numeric residual");
  GaugeResult g{flag.get<bool>(), matrix_from_json(detail::field(j, "matrix")), res.get<double>()};
  if (!is_unitary(g.matrix, 1e-9)) throw ParseError("gauge matrix is not unitary");
  return g;
}

inline AdversarySpec adversary_from_json(const Json& j) {
  AdversarySpec s;
  try {
    s.kind = parse_adversary_kind(detail::field(j, "kind").get<std::string>());
    s.base = j.value("base", std::string("s"));
    s.n = j.value("n", std::size_t{1});
    s.label = j.value("label", std::string());
    s.angle = j.value("angle", 0.0);
    s.strength = j.value("strength", 0.0);
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("bad adversary spec: ") + ex.what());
  }
  return s;
}

inline Json to_json(const AdversarySpec& s) {
  return Json{{"kind", to_string(s.kind)}, {"base", s.base}, {"n", s.n},
              {"label", s.label}, {"angle", s.angle}, {"strength", s.strength}};
}

inline Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("'" + path + "' is not valid JSON: " + e.what());
  }
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline void write_json(const std::string& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << dump(j);
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

inline QuantumModel read_model(const std::string& path) {
  try {
    return model_from_json(read_json(path));
  } catch (const std::invalid_argument& e) {
    throw ParseError("'" + path + "': " + e.what());
  }
}

}  // namespace qsq::io
