#pragma once

// Command-line front end. Exit codes: 0 accept / positive, 2 reject / negative,
// 1 error. JSON goes to --out when given, otherwise to stdout; a one-line
// summary goes to stdout when a file is written.

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qsq/io.hpp"

namespace qsq::cli {

inline constexpr int kExitPositive = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNegative = 2;

namespace detail {

inline std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

inline DimsLayout parse_layout(const std::string& text) {
  DimsLayout layout;
  for (const auto& p : split(text, ',')) {
    std::size_t used = 0;
    const long v = std::stol(p, &used);
    if (used != p.size() || v < 1) throw ContractError("layout entries must be positive integers");
    layout.push_back(static_cast<std::size_t>(v));
  }
  if (layout.empty()) throw ContractError("empty layout");
  return layout;
}

// Comma-separated product kets in the symbols 0 1 + - r l.
inline std::vector<Matrix> parse_kets(const std::string& text) {
  std::vector<Matrix> out;
  for (const auto& s : split(text, ',')) out.push_back(gates::product_ket(s));
  if (out.empty()) throw ContractError("no kets given");
  return out;
}

class Emitter {
 public:
  Emitter(std::ostream& out, std::string path) : out_(out), path_(std::move(path)) {}

  void emit(const io::Json& j, const std::string& summary) const {
    if (path_.empty()) {
      out_ << io::dump(j);
    } else {
      io::write_json(path_, j);
      out_ << summary << "\n";
    }
  }

 private:
  std::ostream& out_;
  std::string path_;
};

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Quantum system quizzing: instruction sets, quizzes, adversaries and gauge checks", "qsq"};
  app.require_subcommand(1);
  std::string out_path;
  int code = kExitPositive;
  const detail::Emitter* emitter = nullptr;

  // gen
  std::string gen_model;
  std::size_t gen_n = 1;
  auto* gen = app.add_subcommand("gen", "Write an instruction set with its expected-outcome table");
  gen->add_option("model", gen_model, "Reference model")->required()->check(CLI::IsMember({"s", "sy", "cl", "u"}));
  gen->add_option("n", gen_n, "Number of qubits")->required()->check(CLI::Range(1, 8));
  gen->add_option("--out", out_path, "Output path");

  // model
  std::string model_name;
  std::size_t model_n = 1;
  auto* model = app.add_subcommand("model", "Write a reference model");
  model->add_option("name", model_name, "Reference model")->required()->check(CLI::IsMember({"s", "sy", "cl", "u"}));
  model->add_option("n", model_n, "Number of qubits")->required()->check(CLI::Range(1, 8));
  model->add_option("--out", out_path, "Output path");

  // adversary
  AdversarySpec adv;
  std::string adv_kind, adv_spec_file, partner_path;
  auto* adversary = app.add_subcommand("adversary", "Write a deviant model");
  std::vector<std::string> kinds;
  for (const auto& [_, name] : adversary_names()) kinds.push_back(name);
  adversary->add_option("kind", adv_kind, "Adversary kind")->check(CLI::IsMember(kinds));
  adversary->add_option("--spec", adv_spec_file, "Adversary spec JSON (overrides the flags)")->check(CLI::ExistingFile);
  adversary->add_option("--base", adv.base, "Base model")->check(CLI::IsMember({"s", "sy", "cl", "u"}));
  adversary->add_option("--n", adv.n, "Number of qubits")->check(CLI::Range(1, 8));
  adversary->add_option("--label", adv.label, "Channel to corrupt (default: S on qubit 1)");
  adversary->add_option("--angle", adv.angle, "Overrotation angle in (0, pi)");
  adversary->add_option("--strength", adv.strength, "Depolarizing strength in (0, 1]");
  adversary->add_option("--out", out_path, "Output path");
  adversary->add_option("--partner-out", partner_path, "Output path of the second model of a pair");

  // quiz
  std::string quiz_model, quiz_table, quiz_mode = "exhaustive", quiz_weights;
  QuizConfig cfg;
  double quiz_eps = kSupportEps;
  auto* quiz = app.add_subcommand("quiz", "Quiz an implementation against an expected-outcome table");
  quiz->add_option("--model", quiz_model, "Implementation model JSON")->required()->check(CLI::ExistingFile);
  quiz->add_option("--table", quiz_table, "Suite or table JSON")->required()->check(CLI::ExistingFile);
  quiz->add_option("--mode", quiz_mode, "exhaustive or sampled")->check(CLI::IsMember({"exhaustive", "sampled"}));
  quiz->add_option("--rounds", cfg.rounds, "Rounds in sampled mode");
  quiz->add_option("--seed", cfg.seed, "Seed in sampled mode");
  quiz->add_option("--eps", quiz_eps, "Support threshold in exhaustive mode")->check(CLI::PositiveNumber);
  quiz->add_option("--weights", quiz_weights, "JSON list of string weights, in table order")->check(CLI::ExistingFile);
  quiz->add_option("--out", out_path, "Report path");

  // equiv
  std::string eq_a, eq_b;
  bool eq_anti = false;
  double eq_tol = 1e-8;
  auto* equiv = app.add_subcommand("equiv", "Search for a gauge carrying model B onto model A");
  equiv->add_option("a", eq_a, "Model A")->required()->check(CLI::ExistingFile);
  equiv->add_option("b", eq_b, "Model B")->required()->check(CLI::ExistingFile);
  equiv->add_flag("--antiunitary", eq_anti, "Also try complex conjugation");
  equiv->add_option("--tol", eq_tol, "Residual tolerance")->check(CLI::PositiveNumber);
  equiv->add_option("--out", out_path, "Gauge path");

  // outmap
  std::string om_a, om_b;
  std::size_t om_len = 6;
  double om_eps = kSupportEps;
  auto* outmap = app.add_subcommand("outmap", "Compare output supports on all strings up to a length");
  outmap->add_option("a", om_a, "Model A")->required()->check(CLI::ExistingFile);
  outmap->add_option("b", om_b, "Model B")->required()->check(CLI::ExistingFile);
  outmap->add_option("--max-len", om_len, "Longest string compared")->check(CLI::Range(0, 10));
  outmap->add_option("--eps", om_eps, "Support threshold")->check(CLI::PositiveNumber);
  outmap->add_option("--out", out_path, "Report path");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Channel analysis and constructive gauges");
  analyze->require_subcommand(1);
  std::string an_channel, an_layout = "2,2", an_anchor, an_basis, an_states, an_model;
  std::size_t an_keep = 0, an_fixed = 0;
  double an_tol = 1e-9;
  auto* sub = analyze->add_subcommand("subchannel", "Subchannel on one factor for a product anchor");
  sub->add_option("--channel", an_channel, "Channel JSON")->required()->check(CLI::ExistingFile);
  sub->add_option("--layout", an_layout, "Factor dimensions, e.g. 2,2");
  sub->add_option("--keep", an_keep, "Kept factor (0-based)");
  sub->add_option("--anchor", an_anchor, "Anchor ket on the complement, e.g. +")->required();
  sub->add_option("--out", out_path, "Output path");
  auto* coh = analyze->add_subcommand("coherence", "Coherence graph of states in a basis");
  coh->add_option("--basis", an_basis, "Basis kets, e.g. ++,+-,-+,--")->required();
  coh->add_option("--states", an_states, "Pure states as kets, e.g. rr,+0")->required();
  coh->add_option("--tol", an_tol, "Edge threshold")->check(CLI::PositiveNumber);
  coh->add_option("--out", out_path, "Output path");
  auto* blocks = analyze->add_subcommand("blocks", "Block Kraus structure over a basis of one factor");
  blocks->add_option("--channel", an_channel, "Channel JSON")->required()->check(CLI::ExistingFile);
  blocks->add_option("--layout", an_layout, "Factor dimensions, e.g. 2,2");
  blocks->add_option("--basis", an_basis, "Basis kets of the fixed factor, e.g. +,-")->required();
  blocks->add_option("--fixed", an_fixed, "Fixed factor (0 or 1)")->check(CLI::Range(0, 1));
  blocks->add_option("--tol", an_tol, "Tolerance")->check(CLI::PositiveNumber);
  blocks->add_option("--out", out_path, "Output path");
  auto* rs1 = analyze->add_subcommand("reconstruct-s1", "Constructive gauge onto S_1");
  rs1->add_option("--model", an_model, "Implementation model JSON")->required()->check(CLI::ExistingFile);
  rs1->add_option("--out", out_path, "Gauge path");
  auto* rs2 = analyze->add_subcommand("reconstruct-s2", "Constructive gauge onto S_2");
  rs2->add_option("--model", an_model, "Implementation model JSON")->required()->check(CLI::ExistingFile);
  rs2->add_option("--out", out_path, "Gauge path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPositive;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPositive;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }

  const detail::Emitter emit(out, out_path);
  emitter = &emit;
  try {
    if (*gen) {
      const TestSuite s = generate_suite(gen_model, gen_n);
      emitter->emit(io::suite_document(gen_model, gen_n, s),
                    s.set.target + ": " + std::to_string(s.set.size()) + " strings -> " + out_path);
    } else if (*model) {
      const QuantumModel m = gates::build_model(model_name, model_n);
      emitter->emit(io::to_json(m), model_name + std::to_string(model_n) + " -> " + out_path);
    } else if (*adversary) {
      if (!adv_spec_file.empty())
        adv = io::adversary_from_json(io::read_json(adv_spec_file));
      else if (adv_kind.empty())
        throw ContractError("adversary kind or --spec required");
      else
        adv.kind = parse_adversary_kind(adv_kind);
      const AdversaryModels made = build_adversary(adv);
      if (made.partner) {
        if (out_path.empty() || partner_path.empty()) throw ContractError("a model pair needs --out and --partner-out");
        io::write_json(partner_path, io::to_json(*made.partner));
      }
      emitter->emit(io::to_json(made.model), to_string(adv.kind) + " -> " + out_path);
    } else if (*quiz) {
      const QuantumModel impl = io::read_model(quiz_model);
      const ExpectedOutcomeTable table = io::table_from_document(io::read_json(quiz_table));
      if (!quiz_weights.empty()) cfg.weights = io::read_json(quiz_weights).get<std::vector<double>>();
      const QuizReport r = quiz_mode == "sampled" ? quiz_sampled(impl, table, cfg) : quiz_exhaustive(impl, table, quiz_eps);
      emitter->emit(io::to_json(r), std::string(to_string(r.verdict)) + " after " + std::to_string(r.rounds_executed) +
                                        " rounds -> " + out_path);
      code = r.accepted() ? kExitPositive : kExitNegative;
    } else if (*equiv) {
      const QuantumModel a = io::read_model(eq_a), b = io::read_model(eq_b);
      const auto g = check_equivalence(a, b, eq_anti, eq_tol);
      io::Json j{{"equivalent", g.has_value()}};
      if (g) {
        const io::Json gj = io::to_json(*g);
        for (const auto& [k, v] : gj.items()) j[k] = v;
      } else if (const auto best = best_gauge_candidate(a, b, eq_anti)) {
        j["best_residual"] = best->residual;
      }
      emitter->emit(j, std::string(g ? "equivalent" : "not equivalent") + " -> " + out_path);
      code = g ? kExitPositive : kExitNegative;
    } else if (*outmap) {
      const auto c = output_map_equality(io::read_model(om_a), io::read_model(om_b), om_len, om_eps);
      io::Json j{{"equal", c.equal},
                 {"max_len", om_len},
                 {"strings_compared", c.strings_compared},
                 {"first_divergence", c.first_divergence ? io::Json(to_text(*c.first_divergence)) : io::Json(nullptr)}};
      emitter->emit(j, std::string(c.equal ? "equal" : "different") + " -> " + out_path);
      code = c.equal ? kExitPositive : kExitNegative;
    } else if (*sub) {
      const QuantumChannel ch = io::channel_from_json(io::read_json(an_channel));
      const Subchannel s = subchannel(ch, detail::parse_layout(an_layout), an_keep, projector(gates::product_ket(an_anchor)));
      const QuantumChannel reduced = s.to_channel();
      io::Json j{{"dim", reduced.dim()}, {"kraus", io::to_json(reduced)}, {"cptp", s.is_cptp()}};
      emitter->emit(j, "subchannel of dimension " + std::to_string(reduced.dim()) + " -> " + out_path);
    } else if (*coh) {
      const auto basis = columns_to_matrix(detail::parse_kets(an_basis));
      std::vector<Matrix> states;
      for (const auto& k : detail::parse_kets(an_states)) states.push_back(projector(k));
      const CoherenceGraph g = coherence_graph(basis, states, an_tol);
      io::Json edges = io::Json::array();
      for (const auto& [k, l] : g.edges()) edges.push_back({k, l});
      io::Json j{{"vertices", g.size()}, {"edges", edges}, {"connected", g.is_connected()}};
      emitter->emit(j, std::string(g.is_connected() ? "connected" : "disconnected") + " -> " + out_path);
      code = g.is_connected() ? kExitPositive : kExitNegative;
    } else if (*blocks) {
      const QuantumChannel ch = io::channel_from_json(io::read_json(an_channel));
      const DimsLayout layout = detail::parse_layout(an_layout);
      const Matrix basis = columns_to_matrix(detail::parse_kets(an_basis));
      const auto r = kraus_block_structure(ch, layout, basis, an_fixed, an_tol);
      io::Json j;
      if (const auto* b = std::get_if<BlockKraus>(&r)) {
        io::Json per_basis = io::Json::array();
        for (const auto& ks : b->blocks) {
          io::Json list = io::Json::array();
          for (const auto& k : ks) list.push_back(io::to_json(k));
          per_basis.push_back(list);
        }
        j = io::Json{{"membership", true},
                     {"blocks", per_basis},
                     {"reassembly_residual", (b->reassemble().superop() - ch.superop()).frobenius_norm()}};
      } else {
        const auto& f = std::get<MembershipFailure>(r);
        j = io::Json{{"membership", false},
                     {"basis_index", f.basis_index},
                     {"anchor_index", f.anchor_index},
                     {"deviation", f.deviation}};
        code = kExitNegative;
      }
      emitter->emit(j, std::string(code == kExitPositive ? "block structure found" : "membership failure") + " -> " +
                           out_path);
    } else if (*rs1 || *rs2) {
      const QuantumModel impl = io::read_model(an_model);
      try {
        const GaugeResult g = *rs1 ? reconstruct_gauge_S1(impl) : reconstruct_gauge_S2(impl);
        io::Json j{{"reconstructed", true}};
        const io::Json gj = io::to_json(g);
        for (const auto& [k, v] : gj.items()) j[k] = v;
        emitter->emit(j, "gauge residual " + std::to_string(g.residual) + " -> " + out_path);
      } catch (const ReconstructionError& e) {
        emitter->emit(io::Json{{"reconstructed", false}, {"step", e.step()}, {"message", e.what()}},
                      "failed at step '" + e.step() + "' -> " + out_path);
        code = kExitNegative;
      }
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return code;
}

}  // namespace qsq::cli
