#include <gtest/gtest.h>

#include "lemma_checks.hpp"
#include "qsq/gates.hpp"

using namespace qsq;
using namespace qsq::testing;

namespace {

double dist(const Matrix& a, const Matrix& b) { return (a - b).frobenius_norm(); }

QuantumChannel conj(const Matrix& u) { return QuantumChannel::unitary(u); }

Matrix hadamard_basis() { return columns_to_matrix({gates::ket_plus(), gates::ket_minus()}); }
Matrix computational_basis() { return Matrix::identity(2); }

Matrix hadamard_basis_2q() {
  return columns_to_matrix({gates::product_ket("++"), gates::product_ket("+-"), gates::product_ket("-+"),
                            gates::product_ket("--")});
}

// sum_j (psi_j (x) U_j) (.) (psi_j (x) U_j)^dagger over the Hadamard basis of A.
QuantumChannel decoherent_block(const Matrix& u0, const Matrix& u1) {
  return QuantumChannel({kron(projector(gates::ket_plus()), u0), kron(projector(gates::ket_minus()), u1)});
}

}  // namespace

TEST(Subchannel, ProductChannelRestrictsToFactor) {
  Rng rng(51);
  const Matrix anchor = random_density(2, rng);
  const auto sub = subchannel(conj(kron(gates::phase_s(), gates::id2())), {2, 2}, 0, anchor);
  for (int t = 0; t < 5; ++t) {
    const Matrix s = random_density(2, rng);
    EXPECT_LT(dist(sub.apply(s), gates::phase_s() * s * gates::phase_s().adjoint()), 1e-14);
  }
  EXPECT_TRUE(sub.is_cptp());
  EXPECT_LT(phase_aligned_distance(*channel_as_unitary(sub.to_channel()), gates::phase_s()), 1e-7);
}

TEST(Subchannel, ControlledHadamardXWithPlusControlIsIdentity) {
  Rng rng(52);
  const auto sub = subchannel(conj(gates::controlled_hadamard_x()), {2, 2}, 1, projector(gates::ket_plus()));
  for (int t = 0; t < 5; ++t) {
    const Matrix s = random_density(2, rng);
    EXPECT_LT(dist(sub.apply(s), s), 1e-14);
  }
}

TEST(Subchannel, SwapWithZeroAnchorIsConstant) {
  Rng rng(53);
  const auto sub = subchannel(conj(gates::swap()), {2, 2}, 0, projector(gates::ket0()));
  for (int t = 0; t < 5; ++t) EXPECT_LT(dist(sub.apply(random_density(2, rng)), projector(gates::ket0())), 1e-14);
  EXPECT_TRUE(sub.is_cptp());
}

TEST(Subchannel, TracePreservingForRandomChannels) {
  Rng rng(54);
  for (int t = 0; t < 20; ++t) {
    const QuantumChannel ch(random_kraus(6, 3, rng));
    EXPECT_TRUE(subchannel(ch, {2, 3}, t % 2, random_density(t % 2 ? 2 : 3, rng)).is_cptp());
  }
}

TEST(Subchannel, Errors) {
  const auto ch = conj(Matrix::identity(4));
  EXPECT_THROW(subchannel(ch, {2, 3}, 0, projector(gates::ket0())), DimensionError);
  EXPECT_THROW(subchannel(ch, {2, 2}, 2, projector(gates::ket0())), DimensionError);
  EXPECT_THROW(subchannel(ch, {2, 2}, 0, Matrix::identity(2)), ContractError);
}

TEST(CoherenceGraph, PathIsConnected) {
  std::vector<Matrix> states;
  for (std::size_t k = 0; k < 3; ++k) states.push_back(projector(normalized(basis_ket(4, k) + basis_ket(4, k + 1))));
  const auto g = coherence_graph(Matrix::identity(4), states);
  EXPECT_TRUE(g.is_connected());
  EXPECT_EQ(g.edges(), (std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {1, 2}, {2, 3}}));
}

TEST(CoherenceGraph, IsolatedVertex) {
  const auto g = coherence_graph(Matrix::identity(3), {projector(normalized(basis_ket(3, 0) + basis_ket(3, 1)))});
  EXPECT_FALSE(g.is_connected());
  EXPECT_FALSE(g.bfs_tree()[2].has_value());
}

TEST(CoherenceGraph, ControlledHadamardXCoherentSet) {
  const std::vector<Matrix> states{projector(gates::product_ket("+r")), projector(gates::product_ket("r+")),
                                   projector(gates::product_ket("r-"))};
  EXPECT_TRUE(coherence_graph(hadamard_basis_2q(), states).is_connected());
  EXPECT_FALSE(coherence_graph(hadamard_basis_2q(), {states[0], states[1]}).is_connected());
}

TEST(CoherenceGraph, Simple) {
  Rng rng(55);
  const auto g = coherence_graph(random_unitary(5, rng), {random_pure_state(5, rng)});
  for (std::size_t k = 0; k < 5; ++k) {
    EXPECT_FALSE(g.has_edge(k, k));
    for (std::size_t l = 0; l < 5; ++l) EXPECT_EQ(g.has_edge(k, l), g.has_edge(l, k));
  }
  EXPECT_THROW(coherence_graph(Matrix::diagonal({1.0, 2.0}), {}), ContractError);
}

TEST(BlockKraus, ControlledHadamardX) {
  const auto r = kraus_block_structure(conj(gates::controlled_hadamard_x()), {2, 2}, hadamard_basis());
  ASSERT_TRUE(std::holds_alternative<BlockKraus>(r));
  const auto& bk = std::get<BlockKraus>(r);
  EXPECT_LT(dist(bk.blocks[0][0], gates::id2()), 1e-14);
  EXPECT_LT(dist(bk.blocks[1][0], gates::pauli_x()), 1e-14);
}

TEST(BlockKraus, DecoherentChannelHasValidBlocks) {
  Rng rng(56);
  const Matrix u0 = random_unitary(2, rng), u1 = random_unitary(2, rng);
  const auto r = kraus_block_structure(decoherent_block(u0, u1), {2, 2}, hadamard_basis());
  ASSERT_TRUE(std::holds_alternative<BlockKraus>(r));
  const auto& bk = std::get<BlockKraus>(r);
  EXPECT_LT(dist(bk.blocks[0][0], u0), 1e-14);
  EXPECT_LT(dist(bk.blocks[1][1], u1), 1e-14);
  EXPECT_LT(bk.blocks[0][1].frobenius_norm(), 1e-14);
}

TEST(BlockKraus, SwapFailsMembership) {
  const auto r = kraus_block_structure(conj(gates::swap()), {2, 2}, computational_basis());
  ASSERT_TRUE(std::holds_alternative<MembershipFailure>(r));
  EXPECT_GT(std::get<MembershipFailure>(r).deviation, 0.1);
}

TEST(BlockKraus, FixedSecondFactor) {
  Rng rng(57);
  const Matrix basis = random_unitary(2, rng);
  std::vector<Matrix> ks(2, Matrix(6, 6));
  for (std::size_t i = 0; i < 2; ++i) {
    const auto b = random_kraus(3, 2, rng);
    for (std::size_t j = 0; j < 2; ++j) ks[j] += kron(b[j], projector(basis.col(i)));
  }
  const QuantumChannel ch(ks);
  const auto r = kraus_block_structure(ch, {3, 2}, basis, 1);
  ASSERT_TRUE(std::holds_alternative<BlockKraus>(r));
  EXPECT_LT(dist(std::get<BlockKraus>(r).reassemble().superop(), ch.superop()), 1e-12);
}

TEST(BlockKraus, RandomReassemblyProperty) {
  const auto r = run_block_kraus(100, 58);
  EXPECT_EQ(r.failures, 0u);
  EXPECT_LE(r.worst, 1e-9);
}

TEST(SubchannelHomomorphism, Examples) {
  const auto ch = conj(gates::controlled_hadamard_x());
  EXPECT_TRUE(subchannel_homomorphism_check(ch, ch, {2, 2}, hadamard_basis()));
  Rng rng(59);
  const auto a = decoherent_block(random_unitary(2, rng), random_unitary(2, rng));
  EXPECT_TRUE(subchannel_homomorphism_check(a, ch, {2, 2}, hadamard_basis()));
  EXPECT_THROW(subchannel_homomorphism_check(conj(gates::swap()), ch, {2, 2}, hadamard_basis()), ContractError);
}

TEST(SubchannelHomomorphism, RandomProperty) { EXPECT_EQ(run_subchannel_homomorphism(100, 60).failures, 0u); }

TEST(PurityNonincrease, UnitaryPreservesPurity) {
  Rng rng(61);
  const Matrix u = random_unitary(3, rng);
  EXPECT_TRUE(purity_nonincrease_check(conj(u), Matrix::identity(3), 20, rng));
  const Matrix rho = random_density(3, rng);
  EXPECT_NEAR(purity(conj(u).apply(rho)), purity(rho), 1e-13);
}

TEST(PurityNonincrease, DephasingHalvesPurityOfPlus) {
  const QuantumChannel deph({projector(gates::ket0()), projector(gates::ket1())});
  EXPECT_NEAR(purity(deph.apply(projector(gates::ket_plus()))), 0.5, 1e-15);
  Rng rng(62);
  EXPECT_TRUE(purity_nonincrease_check(deph, computational_basis(), 20, rng));
  EXPECT_THROW(purity_nonincrease_check(deph, hadamard_basis(), 20, rng), ContractError);
}

TEST(PurityNonincrease, RandomProperty) { EXPECT_EQ(run_purity_nonincrease(100, 63).failures, 0u); }

TEST(Orthogonality, UnitaryKeepsOrthogonalInputsOrthogonal) {
  Rng rng(64);
  const Matrix u = random_unitary(3, rng), v = random_unitary(3, rng);
  const Matrix a = projector(v.col(0)), b = projector(v.col(1));
  EXPECT_NEAR(std::abs(inner(conj(u).apply(a), conj(u).apply(b))), 0.0, 1e-14);
  EXPECT_TRUE(orthogonality_check(conj(u), 20, rng));
}

TEST(Orthogonality, RandomProperty) { EXPECT_EQ(run_orthogonality(100, 65).failures, 0u); }

TEST(CoherentSupport, RandomProperty) {
  const auto r = run_coherent_support(100, 66);
  EXPECT_GT(r.trials, 100u);
  EXPECT_EQ(r.failures, 0u);
  EXPECT_GT(r.worst, 1e-6);
}

TEST(UnitaryReconstruction, ControlledHadamardX) {
  const Matrix r = projector(gates::ket_plus_y());
  const auto rec = reconstruct_unitary_from_subchannels(conj(gates::controlled_hadamard_x()), {2, 2}, hadamard_basis(),
                                                        {gates::id2(), gates::pauli_x()}, {{r, r}});
  EXPECT_LT(phase_aligned_distance(rec.unitary, gates::controlled_hadamard_x()), 1e-12);
  EXPECT_LT(rec.residual, 1e-12);
}

TEST(UnitaryReconstruction, ProductOfPhaseGates) {
  const Matrix s = gates::phase_s();
  const Matrix p = projector(gates::ket_plus());
  const auto rec = reconstruct_unitary_from_subchannels(conj(kron(s, s)), {2, 2}, computational_basis(), {s, s}, {{p, p}});
  EXPECT_LT(phase_aligned_distance(rec.unitary, kron(s, s)), 1e-12);
  EXPECT_NEAR(rec.phases[1], kPi / 2, 1e-12);
}

TEST(UnitaryReconstruction, DecoherentChannelFailsConditionTwo) {
  const Matrix r = projector(gates::ket_plus_y());
  try {
    reconstruct_unitary_from_subchannels(decoherent_block(gates::id2(), gates::pauli_x()), {2, 2}, hadamard_basis(),
                                         {gates::id2(), gates::pauli_x()}, {{r, r}});
    FAIL() << "expected ConditionError";
  } catch (const ConditionError& e) {
    EXPECT_EQ(e.condition(), "(ii)");
  }
}

TEST(UnitaryReconstruction, WrongSubUnitaryFailsConditionOne) {
  const Matrix r = projector(gates::ket_plus_y());
  try {
    reconstruct_unitary_from_subchannels(conj(gates::controlled_hadamard_x()), {2, 2}, hadamard_basis(),
                                         {gates::id2(), gates::pauli_z()}, {{r, r}});
    FAIL() << "expected ConditionError";
  } catch (const ConditionError& e) {
    EXPECT_EQ(e.condition(), "(i)");
  }
}

TEST(UnitaryReconstruction, RandomProperty) {
  const auto r = run_unitarity_reconstruction(100, 67);
  EXPECT_EQ(r.positive.failures, 0u);
  EXPECT_LE(r.positive.worst, 1e-8);
  EXPECT_EQ(r.negatives_refused, r.negatives);
}

TEST(ChannelEqualsUnitary, Examples) {
  const Matrix plus = projector(gates::ket_plus());
  EXPECT_TRUE(check_channel_equals_unitary(conj(gates::phase_s()), gates::phase_s(), {plus}));
  EXPECT_FALSE(check_channel_equals_unitary(conj(gates::pauli_z()), gates::phase_s(), {plus}));
  const std::vector<Matrix> coherent{projector(gates::product_ket("+r")), projector(gates::product_ket("r+")),
                                     projector(gates::product_ket("r-"))};
  EXPECT_TRUE(check_channel_equals_unitary(conj(gates::controlled_hadamard_x()), gates::controlled_hadamard_x(),
                                           coherent, 1e-9, hadamard_basis_2q()));
}

TEST(ChannelEqualsUnitary, DisconnectedInputsRefused) {
  EXPECT_THROW(check_channel_equals_unitary(conj(gates::phase_s()), gates::phase_s(), {projector(gates::ket0())}),
               ConditionError);
}

TEST(ChannelAsUnitary, DetectsUnitaryMultiKraus) {
  Rng rng(68);
  const Matrix u = random_unitary(3, rng);
  const QuantumChannel split({u * std::sqrt(0.3), u * Complex(0.0, std::sqrt(0.7))});
  const auto got = channel_as_unitary(split);
  ASSERT_TRUE(got);
  EXPECT_LT(phase_aligned_distance(*got, u), 1e-7);
  EXPECT_FALSE(channel_as_unitary(QuantumChannel(random_kraus(3, 2, rng))));
}
