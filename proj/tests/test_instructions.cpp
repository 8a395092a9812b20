#include <gtest/gtest.h>

#include "qsq/instructions.hpp"
#include "test_util.hpp"

using namespace qsq;
using qsq::testing::words;

namespace {

std::set<std::string> texts(const std::vector<InstructionString>& xs) {
  std::set<std::string> out;
  for (const auto& x : xs) out.insert(to_text(x));
  return out;
}

bool all_distinct(const std::vector<InstructionString>& xs) { return texts(xs).size() == xs.size(); }

// Every outcome the reference model can produce passes its own table.
void expect_complete(const QuantumModel& target, const ExpectedOutcomeTable& table) {
  const Simulator sim(target);
  for (const auto& [x, e] : table.entries())
    for (const auto& a : sim.support(x)) EXPECT_TRUE(e.allows(a)) << to_text(x) << " -> " << a;
}

}  // namespace

TEST(X1, Contents) {
  EXPECT_EQ(texts(gen_X1()), (std::set<std::string>{"", "s s", "s s s s"}));
}

TEST(X1, TableExamples) {
  const auto t = make_table(gates::build_S_n(1), gen_X1());
  EXPECT_EQ(t.find({})->allowed_values, std::set<std::string>{"0"});
  EXPECT_EQ(t.find(words("s s"))->allowed_values, std::set<std::string>{"1"});
  EXPECT_EQ(t.find(words("s s s s"))->allowed_values, std::set<std::string>{"0"});
}

TEST(X2, CardinalityAndMembers) {
  const auto x2 = gen_X2();
  EXPECT_EQ(x2.size(), 19u);
  EXPECT_TRUE(all_distinct(x2));
  const auto t = texts(x2);
  for (const char* w : {"", "s_a s_a s_a s_a", "s_b s_b s_a s_a s_a", "s_a s_b s_a s_b", "s_b s_a s_b s_a",
                        "s_a s_a s_b s_b s_b s_b"})
    EXPECT_TRUE(t.count(w)) << w;
  EXPECT_FALSE(t.count("s_a s_b"));
}

TEST(X2, MixedEntriesCheckOneQubit) {
  const auto t = make_table(gates::build_S_n(2), gen_X2());
  const TableEntry* e = t.find(words("s_b s_b s_a"));
  ASSERT_NE(e, nullptr);
  EXPECT_EQ(e->checked_bits, std::vector<std::size_t>{1});
  EXPECT_EQ(e->allowed_values, std::set<std::string>{"1"});
  e = t.find(words("s_a s_b s_a s_b"));
  EXPECT_EQ(e->checked_bits, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(e->allowed_values, std::set<std::string>{"11"});
}

TEST(Xcx, Contents) {
  const auto x = gen_Xcx();
  EXPECT_EQ(x.size(), 7u);
  EXPECT_TRUE(texts(x).count("s_a s_b s_b cx s_a"));
  const auto t = make_table(gates::build_S2_cx(), x);
  for (const auto& [s, e] : t.entries()) {
    EXPECT_EQ(e.checked_bits.size(), 2u) << to_text(s);
    EXPECT_EQ(e.allowed_values.size(), 1u) << to_text(s);
  }
}

TEST(Xcx, GeneratorReproducesStandardSet) {
  const auto suite = gen_cx_tests(2, 2);
  EXPECT_EQ(texts(suite.set.strings), texts(gen_Xcx()));
}

TEST(Xh, Cardinality) {
  const auto xh = gen_Xh();
  EXPECT_EQ(xh.size(), 14u);
  EXPECT_TRUE(all_distinct(xh));
  expect_complete(gates::build_Cl_n(2), make_table(gates::build_Cl_n(2), xh));
}

TEST(Xn, FrozenCardinalities) {
  const std::map<std::size_t, std::size_t> expected{{1, 3}, {2, 19}, {3, 58}, {4, 143}, {5, 341}, {6, 796}};
  for (const auto& [n, size] : expected) {
    const auto xs = gen_Xn(n);
    EXPECT_EQ(xs.size(), size) << n;
    EXPECT_TRUE(all_distinct(xs));
    if (n >= 3) {
      EXPECT_LE(xs.size(), xn_cardinality_bound(n));
    }
  }
}

TEST(Xn, Membership) {
  const auto t = texts(gen_Xn(3));
  EXPECT_TRUE(t.count("s1 s1 s1 s1"));
  EXPECT_TRUE(t.count("s2 s2 s3 s3 s1 s1 s1"));
  EXPECT_TRUE(t.count("s3 s2 s1 s3 s2 s1"));
  EXPECT_TRUE(t.count("s3 s2 s1 s2"));
  EXPECT_FALSE(t.count("s1 s2"));
  for (const auto& x : gen_Xn(3))
    for (const auto& l : x) EXPECT_TRUE(l == "s1" || l == "s2" || l == "s3");
}

TEST(Xn, OnlyCheckedPositionsAreFixed) {
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto target = gates::build_S_n(n);
    const auto t = make_table(target, gen_Xn(n));
    expect_complete(target, t);
    for (const auto& [x, e] : t.entries()) {
      ASSERT_EQ(e.allowed_values.size(), 1u) << to_text(x);
      EXPECT_FALSE(e.checked_bits.empty()) << to_text(x);
    }
  }
}

TEST(XCl, CompleteAndDistinct) {
  for (std::size_t n = 2; n <= 3; ++n) {
    const auto suite = gen_XCl(n);
    EXPECT_TRUE(all_distinct(suite.set.strings));
    EXPECT_EQ(suite.table.size(), suite.set.size());
    expect_complete(gates::build_Cl_n(n), suite.table);
  }
}

TEST(Xu, FrozenCardinalities) {
  const std::map<std::size_t, std::size_t> expected{{2, 47}, {3, 117}, {4, 269}, {5, 614}};
  for (const auto& [n, size] : expected) {
    const auto suite = gen_Xu(n);
    EXPECT_EQ(suite.set.size(), size) << n;
    EXPECT_LE(static_cast<double>(size) / (n * (std::size_t{1} << n)), 6.0);
  }
}

TEST(Xu, CompleteOnReference) {
  for (std::size_t n = 2; n <= 3; ++n) expect_complete(gates::build_U_n(n), gen_Xu(n).table);
}

TEST(Xu, Deterministic) {
  const auto a = gen_Xu(3), b = gen_Xu(3);
  EXPECT_EQ(a.set.strings, b.set.strings);
  ASSERT_EQ(a.table.size(), b.table.size());
  for (std::size_t i = 0; i < a.table.size(); ++i) EXPECT_EQ(a.table.entries()[i].second, b.table.entries()[i].second);
}

TEST(ComputationalPrep, PreparesBasisStates) {
  const auto cl = gates::build_Cl_n(3);
  const Simulator sim(cl);
  for (std::size_t v = 0; v < 8; ++v) {
    const std::string bits = gates::bitstring(v, 3);
    const Ket k = sim.ket(computational_prep(bits));
    EXPECT_NEAR(detail::ket_fidelity(k, gates::product_ket(bits).data()), 1.0, 1e-12) << bits;
  }
}

TEST(Augmentation, LabelAlreadyCertified) {
  EXPECT_THROW(gen_augmentation_tests(gates::build_S_n(2), "s_a", gates::controlled_hadamard_x(),
                                      hadamard_basis_preps(2), {words("s_b")}),
               ContractError);
}

TEST(Augmentation, NonEigenvectorPreparationFailsConditionTwo) {
  auto preps = hadamard_basis_preps(2);
  preps[0] = words("s_b");
  try {
    gen_augmentation_tests(gates::build_S_n(2), "cx", gates::controlled_hadamard_x(), preps, {words("s_b")});
    FAIL() << "expected ConditionError";
  } catch (const ConditionError& e) {
    EXPECT_EQ(e.condition(), "(ii)");
  }
}

TEST(Augmentation, TooFewPreparationsFailConditionTwo) {
  auto preps = hadamard_basis_preps(2);
  preps.pop_back();
  try {
    gen_augmentation_tests(gates::build_S_n(2), "cx", gates::controlled_hadamard_x(), preps, {words("s_b")});
    FAIL() << "expected ConditionError";
  } catch (const ConditionError& e) {
    EXPECT_EQ(e.condition(), "(ii)");
  }
}

TEST(Augmentation, DisconnectedCoherenceFailsConditionThree) {
  try {
    gen_augmentation_tests(gates::build_S_n(2), "cx", gates::controlled_hadamard_x(), hadamard_basis_preps(2),
                           {words("s_a s_a")});
    FAIL() << "expected ConditionError";
  } catch (const ConditionError& e) {
    EXPECT_EQ(e.condition(), "(iii)");
  }
}

TEST(Augmentation, TestsAreDeterministicOnTarget) {
  for (std::size_t j = 2; j <= 3; ++j) {
    const auto suite = gen_cx_tests(3, j);
    for (const auto& [x, e] : suite.table.entries()) {
      EXPECT_EQ(e.allowed_values.size(), 1u);
      EXPECT_EQ(e.checked_bits.size(), 3u);
    }
  }
}

TEST(GenerateSuite, Dispatch) {
  EXPECT_EQ(generate_suite("s", 2).set.size(), 19u);
  EXPECT_EQ(generate_suite("s", 2).set.target, "S2");
  EXPECT_EQ(generate_suite("sy", 1).set.target, "Sy1");
  EXPECT_EQ(generate_suite("u", 2).set.size(), 47u);
  EXPECT_THROW(generate_suite("u", 1), ContractError);
  EXPECT_THROW(generate_suite("s", 9), ContractError);
  EXPECT_THROW(generate_suite("q", 2), ContractError);
}

TEST(GenerateSuite, SyTableMatchesSTable) {
  // The two models are gauge equivalent with identical outcome labels, so their tables agree.
  for (std::size_t n = 1; n <= 3; ++n) {
    const auto a = generate_suite("s", n), b = generate_suite("sy", n);
    ASSERT_EQ(a.table.size(), b.table.size());
    for (std::size_t i = 0; i < a.table.size(); ++i) EXPECT_EQ(a.table.entries()[i].second, b.table.entries()[i].second);
  }
}

TEST(TableEntry, ProjectAndAllow) {
  TableEntry e{{0, 2}, {"10"}};
  EXPECT_EQ(e.project("1x0"), "10");
  EXPECT_TRUE(e.allows("110"));
  EXPECT_FALSE(e.allows("111"));
  EXPECT_THROW(e.project("1"), ContractError);
}

TEST(Table, DuplicateStringRejected) {
  ExpectedOutcomeTable t;
  t.add(words("s"), {{0}, {"0"}});
  EXPECT_THROW(t.add(words("s"), {{0}, {"1"}}), ContractError);
}
