#include <gtest/gtest.h>

#include "qsq/gates.hpp"
#include "test_util.hpp"

using namespace qsq;
using qsq::testing::words;

namespace {

double dist(const Matrix& a, const Matrix& b) { return (a - b).frobenius_norm(); }

Matrix pow(const Matrix& u, int k) {
  Matrix p = Matrix::identity(u.rows());
  for (int i = 0; i < k; ++i) p = p * u;
  return p;
}

// Permutation unitary for a classical reversible map on n-bit basis labels (qubit 1 is the high bit).
Matrix permutation(std::size_t n, const std::function<std::size_t(std::size_t)>& f) {
  const std::size_t d = std::size_t{1} << n;
  Matrix m(d, d);
  for (std::size_t v = 0; v < d; ++v) m(f(v), v) = 1.0;
  return m;
}

std::size_t bit(std::size_t v, std::size_t q, std::size_t n) { return (v >> (n - q)) & 1; }
std::size_t flip(std::size_t v, std::size_t q, std::size_t n) { return v ^ (std::size_t{1} << (n - q)); }

Matrix cnot() { return permutation(2, [](std::size_t v) { return bit(v, 1, 2) ? flip(v, 2, 2) : v; }); }

}  // namespace

TEST(Gates, Identities) {
  using namespace gates;
  EXPECT_LT(dist(pow(phase_s(), 2), pauli_z()), 1e-15);
  EXPECT_LT(dist(pow(sqrt_y(), 2), pauli_y()), 1e-15);
  EXPECT_LT(dist(pow(hadamard(), 2), id2()), 1e-15);
  EXPECT_LT(dist(pow(phase_t(), 2), phase_s()), 1e-15);
  EXPECT_LT(dist(pow(controlled_hadamard_x(), 2), Matrix::identity(4)), 1e-14);
  EXPECT_LT(dist(pow(controlled_s(), 4), Matrix::identity(4)), 1e-15);
  EXPECT_LT(dist(pow(phase_t(), 8), id2()), 1e-14);
  EXPECT_LT(dist(pow(swap(), 2), Matrix::identity(4)), 1e-15);
}

TEST(Gates, SqrtYMatrix) {
  const Complex c(0.5, 0.5);
  const Matrix expect{{c, -c}, {c, c}};
  EXPECT_LT(dist(gates::sqrt_y(), expect), 1e-15);
  EXPECT_TRUE(is_unitary(gates::sqrt_y()));
}

TEST(Gates, ControlledHadamardXActsOnHadamardBasis) {
  using namespace gates;
  const Matrix u = controlled_hadamard_x();
  EXPECT_LT(dist(u * product_ket("++"), product_ket("++")), 1e-15);
  EXPECT_LT(dist(u * product_ket("-0"), product_ket("-1")), 1e-15);
  EXPECT_LT(dist(u * product_ket("--"), product_ket("--") * -1.0), 1e-15);
}

TEST(Gates, WConversionDirection) {
  // W carries the computational basis onto the Y eigenbasis, so it diagonalises sqrt(Y) into S.
  const Matrix w = gates::w_conversion();
  EXPECT_TRUE(is_unitary(w));
  EXPECT_LT(dist(w.adjoint() * gates::sqrt_y() * w, gates::phase_s()), 1e-15);
}

TEST(Gates, GateOrder) {
  EXPECT_EQ(gates::gate_order(gates::phase_s()), 4u);
  EXPECT_EQ(gates::gate_order(gates::phase_t()), 8u);
  EXPECT_EQ(gates::gate_order(gates::hadamard()), 2u);
  EXPECT_EQ(gates::gate_order(gates::sqrt_y()), 4u);
  EXPECT_THROW(gates::gate_order(gates::phase(1.0)), ContractError);
}

TEST(Embed, SingleQubitMatchesKron) {
  using namespace gates;
  EXPECT_LT(dist(embed1(pauli_z(), 2, 3), kron_all({id2(), pauli_z(), id2()})), 1e-15);
  EXPECT_LT(dist(embed1(phase_s(), 1, 1), phase_s()), 1e-15);
  EXPECT_THROW(embed1(pauli_z(), 4, 3), DimensionError);
  EXPECT_THROW(embed1(pauli_z(), 0, 3), DimensionError);
}

TEST(Embed, AdjacentPair) {
  EXPECT_LT(dist(gates::embed2(cnot(), 1, 2, 2), cnot()), 1e-15);
  const Matrix expect = permutation(3, [](std::size_t v) { return bit(v, 2, 3) ? flip(v, 3, 3) : v; });
  EXPECT_LT(dist(gates::embed2(cnot(), 2, 3, 3), expect), 1e-15);
}

TEST(Embed, NonAdjacentPair) {
  const Matrix expect = permutation(3, [](std::size_t v) { return bit(v, 1, 3) ? flip(v, 3, 3) : v; });
  EXPECT_LT(dist(gates::embed2(cnot(), 1, 3, 3), expect), 1e-15);
}

TEST(Embed, ReversedPair) {
  const Matrix expect = permutation(2, [](std::size_t v) { return bit(v, 2, 2) ? flip(v, 1, 2) : v; });
  EXPECT_LT(dist(gates::embed2(cnot(), 2, 1, 2), expect), 1e-15);
  const Matrix rev4 = permutation(4, [](std::size_t v) { return bit(v, 4, 4) ? flip(v, 2, 4) : v; });
  EXPECT_LT(dist(gates::embed2(cnot(), 4, 2, 4), rev4), 1e-15);
}

TEST(Embed, RepeatedQubitThrows) { EXPECT_THROW(gates::embed2(cnot(), 2, 2, 3), DimensionError); }

TEST(Embed, DisjointSupportsCommute) {
  Rng rng(31);
  for (int t = 0; t < 20; ++t) {
    const Matrix a = gates::embed1(random_unitary(2, rng), 1, 4);
    const Matrix b = gates::embed2(random_unitary(4, rng), 4, 2, 4);
    EXPECT_LT(dist(a * b, b * a), 1e-12);
  }
}

TEST(Embed, PreservesUnitarity) {
  Rng rng(32);
  for (int t = 0; t < 10; ++t) EXPECT_TRUE(is_unitary(gates::embed2(random_unitary(4, rng), 3, 1, 3), 1e-12));
}

TEST(Labels, Conventions) {
  EXPECT_EQ(gates::s_label(1, 1), "s");
  EXPECT_EQ(gates::s_label(1, 2), "s_a");
  EXPECT_EQ(gates::s_label(2, 2), "s_b");
  EXPECT_EQ(gates::s_label(3, 5), "s3");
  EXPECT_EQ(gates::cx_label(2, 2), "cx");
  EXPECT_EQ(gates::cx_label(3, 4), "cx13");
  EXPECT_EQ(gates::bitstring(5, 4), "0101");
}

TEST(ReferenceModels, Alphabets) {
  EXPECT_EQ(gates::build_S_n(3).alphabet(), (std::vector<Label>{"s1", "s2", "s3"}));
  EXPECT_EQ(gates::build_Cl_n(2).alphabet(), (std::vector<Label>{"s_a", "s_b", "h", "cx"}));
  EXPECT_EQ(gates::build_U_n(3).alphabet(), (std::vector<Label>{"s1", "s2", "s3", "h", "cx12", "cx13", "cs"}));
  EXPECT_EQ(gates::build_Sy_n(1).alphabet(), (std::vector<Label>{"s"}));
  EXPECT_THROW(gates::build_U_n(1), ContractError);
  EXPECT_THROW(gates::build_S_n(0), ContractError);
  EXPECT_THROW(gates::build_model("t", 2), ContractError);
}

TEST(ReferenceModels, AllValid) {
  for (std::size_t n = 1; n <= 4; ++n) {
    EXPECT_TRUE(validate_model(gates::build_S_n(n)).empty());
    EXPECT_TRUE(validate_model(gates::build_Sy_n(n)).empty());
  }
  for (std::size_t n = 2; n <= 4; ++n) {
    EXPECT_TRUE(validate_model(gates::build_Cl_n(n)).empty());
    EXPECT_TRUE(validate_model(gates::build_U_n(n)).empty());
  }
  EXPECT_TRUE(validate_model(gates::build_S2_cx()).empty());
}

TEST(ReferenceModels, Examples) {
  const auto sy = gates::build_Sy_n(1);
  EXPECT_EQ(output_support(sy, {}), OutputSupport({"0"}));
  EXPECT_EQ(output_support(sy, words("s")), OutputSupport({"0", "1"}));
  EXPECT_EQ(output_support(sy, words("s s")), OutputSupport({"1"}));

  const auto cl = gates::build_Cl_n(2);
  EXPECT_EQ(output_support(cl, words("cx")), OutputSupport({"00"}));
  EXPECT_EQ(output_support(cl, words("s_a s_a cx")), OutputSupport({"10"}));
  EXPECT_EQ(output_support(cl, words("s_a s_a s_b s_b cx")), OutputSupport({"11"}));
  EXPECT_EQ(output_support(cl, words("h")), OutputSupport({"00", "10"}));
  EXPECT_EQ(output_support(cl, words("h h")), OutputSupport({"00"}));

  const auto u = gates::build_U_n(2);
  EXPECT_EQ(output_support(u, words("cs")).size(), 4u);
}

TEST(ReferenceModels, SyIsGaugeEquivalentToS) {
  for (std::size_t n = 1; n <= 3; ++n) {
    const auto sy = gates::build_Sy_n(n), s = gates::build_S_n(n);
    const Matrix g = gates::sy_to_s_gauge(n);
    EXPECT_LT(dist(g * sy.initial_state() * g.adjoint(), s.initial_state()), 1e-14);
    for (const auto& l : s.alphabet())
      EXPECT_LT(dist(g * sy.channel(l).kraus()[0] * g.adjoint(), s.channel(l).kraus()[0]), 1e-14);
    for (std::size_t a = 0; a < s.povm().size(); ++a)
      EXPECT_LT(dist(g * sy.povm()[a].effect * g.adjoint(), s.povm()[a].effect), 1e-14);
  }
}

TEST(ProductKet, Symbols) {
  EXPECT_LT(dist(gates::product_ket("0"), gates::ket0()), 1e-15);
  EXPECT_EQ(gates::product_ket("+r-").rows(), 8u);
  EXPECT_THROW(gates::product_ket("x"), ContractError);
}

TEST(Embed, ListedExamples) {
  using namespace gates;
  EXPECT_LT(dist(embed1(pauli_z(), 2, 2), Matrix::diagonal({1.0, -1.0, 1.0, -1.0})), 1e-15);
  EXPECT_LT(dist(embed1(pauli_x(), 1, 3) * product_ket("000"), product_ket("100")), 1e-15);
  EXPECT_LT(dist(embed2(controlled_hadamard_x(), 1, 2, 2), controlled_hadamard_x()), 1e-15);
  EXPECT_LT(dist(embed2(controlled_s(), 1, 2, 2) * product_ket("11"), product_ket("11") * I1), 1e-15);
}

TEST(ReferenceModels, ListedExamples) {
  EXPECT_EQ(output_support(gates::build_S_n(2), words("s_b s_b")), OutputSupport({"01"}));
  const auto s3 = gates::build_S_n(3);
  EXPECT_EQ(s3.dim(), 8u);
  EXPECT_EQ(s3.povm().size(), 8u);
  EXPECT_EQ(gates::build_U_n(2).alphabet().size(), 5u);
  const Matrix cs = gates::controlled_s();
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      if (i != j) {
        EXPECT_EQ(cs(i, j), Complex(0.0));
      }
  const auto s4 = gates::build_S_n(4);
  for (std::size_t k = 1; k <= 4; ++k)
    for (std::size_t l = k + 1; l <= 4; ++l) {
      const Matrix& a = s4.channel(gates::s_label(k, 4)).kraus()[0];
      const Matrix& b = s4.channel(gates::s_label(l, 4)).kraus()[0];
      EXPECT_LT(dist(a * b, b * a), 1e-12);
    }
}
