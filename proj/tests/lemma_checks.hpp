#pragma once

// Randomized property runs over block channels, shared by the unit tests and the
// acceptance binary. Each run reports how many trials failed and the worst residual.

#include <algorithm>
#include <variant>

#include "qsq/analysis.hpp"
#include "qsq/random.hpp"

namespace qsq::testing {

struct PropertyRun {
  std::size_t trials = 0;
  std::size_t failures = 0;
  double worst = 0.0;
};

// Lambda = sum_j K_j (.) K_j^dagger with K_j = sum_i psi_i (x) K_j^i; W = columns of `basis`.
inline QuantumChannel random_block_channel(const Matrix& basis, std::size_t db, std::size_t rank, Rng& rng) {
  const std::size_t da = basis.rows();
  std::vector<Matrix> ks(rank, Matrix(da * db, da * db));
  for (std::size_t i = 0; i < da; ++i) {
    const auto blocks = random_kraus(db, rank, rng);
    const Matrix psi = projector(basis.col(i));
    for (std::size_t j = 0; j < rank; ++j) ks[j] += kron(psi, blocks[j]);
  }
  return QuantumChannel(std::move(ks));
}

// Kraus K_j = V sum_i c_ij psi_i with sum_j |c_ij|^2 = 1: sends the basis to the pure,
// orthogonal states V psi_i while dephasing coherences between them.
inline QuantumChannel random_basis_preserving_channel(const Matrix& basis, std::size_t rank, Rng& rng) {
  const std::size_t d = basis.rows();
  const Matrix v = random_unitary(d, rng);
  std::vector<Matrix> ks(rank, Matrix(d, d));
  for (std::size_t i = 0; i < d; ++i) {
    const Matrix c = random_ket(rank, rng);
    const Matrix psi = projector(basis.col(i));
    for (std::size_t j = 0; j < rank; ++j) ks[j] += v * psi * c(j, 0);
  }
  return QuantumChannel(std::move(ks));
}

// Overlapping pure inputs keep overlapping images: 20 pairs on each random channel.
inline PropertyRun run_orthogonality(std::size_t trials, std::uint64_t seed) {
  Rng rng(seed);
  PropertyRun r;
  for (std::size_t t = 0; t < trials; ++t, ++r.trials) {
    const std::size_t d = 2 + t % 3;
    const QuantumChannel ch(random_kraus(d, 1 + t % 4, rng));
    if (!orthogonality_check(ch, 20, rng)) ++r.failures;
  }
  return r;
}

inline PropertyRun run_purity_nonincrease(std::size_t trials, std::uint64_t seed) {
  Rng rng(seed);
  PropertyRun r;
  for (std::size_t t = 0; t < trials; ++t, ++r.trials) {
    const std::size_t d = 2 + t % 3;
    const Matrix basis = random_unitary(d, rng);
    if (!purity_nonincrease_check(random_basis_preserving_channel(basis, 1 + t % 3, rng), basis, 10, rng)) ++r.failures;
  }
  return r;
}

// Blocks read off a random block channel reassemble it as a superoperator.
inline PropertyRun run_block_kraus(std::size_t trials, std::uint64_t seed, double tol = 1e-9) {
  Rng rng(seed);
  PropertyRun r;
  for (std::size_t t = 0; t < trials; ++t, ++r.trials) {
    const std::size_t da = 2 + t % 2, db = 2 + (t / 2) % 2;
    const Matrix basis = random_unitary(da, rng);
    const QuantumChannel ch = random_block_channel(basis, db, 1 + t % 3, rng);
    const auto bk = kraus_block_structure(ch, {da, db}, basis, 0, tol);
    if (!std::holds_alternative<BlockKraus>(bk)) {
      ++r.failures;
      continue;
    }
    const double res = (std::get<BlockKraus>(bk).reassemble().superop() - ch.superop()).frobenius_norm();
    r.worst = std::max(r.worst, res);
    // Interchange: Lambda(psi_i (x) rho) = psi_i (x) Lambda_i(rho).
    const Matrix rho = random_density(db, rng);
    for (std::size_t i = 0; i < da; ++i) {
      const Matrix psi = projector(basis.col(i));
      const Matrix lhs = ch.apply(kron(psi, rho));
      const Matrix rhs = kron(psi, std::get<BlockKraus>(bk).block_channel(i).apply(rho));
      r.worst = std::max(r.worst, (lhs - rhs).frobenius_norm());
    }
    if (r.worst > tol) ++r.failures;
  }
  return r;
}

inline PropertyRun run_subchannel_homomorphism(std::size_t trials, std::uint64_t seed, double tol = 1e-9) {
  Rng rng(seed);
  PropertyRun r;
  for (std::size_t t = 0; t < trials; ++t, ++r.trials) {
    const std::size_t da = 2 + t % 2, db = 2;
    const Matrix basis = random_unitary(da, rng);
    const QuantumChannel a = random_block_channel(basis, db, 1 + t % 2, rng);
    const QuantumChannel b = random_block_channel(basis, db, 1 + (t / 2) % 2, rng);
    if (!subchannel_homomorphism_check(a, b, {da, db}, basis, 0, tol)) ++r.failures;
  }
  return r;
}

// Block unitary sum_k psi_k (x) U_k on input rho (x) phi_0: whenever tr[psi_i rho] and
// |<phi_l|U_i|phi_0>| are bounded away from zero, outcome (i, l) keeps positive probability.
inline PropertyRun run_coherent_support(std::size_t trials, std::uint64_t seed, double threshold = 1e-6) {
  Rng rng(seed);
  PropertyRun r;
  r.worst = 1.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t da = 2 + t % 2, db = 2 + (t / 2) % 2;
    const Matrix psi = random_unitary(da, rng), phi = random_unitary(db, rng);
    std::vector<Matrix> us;
    Matrix u(da * db, da * db);
    for (std::size_t k = 0; k < da; ++k) {
      us.push_back(random_unitary(db, rng));
      u += kron(projector(psi.col(k)), us.back());
    }
    const Matrix rho = random_density(da, rng);
    const Matrix out = u * kron(rho, projector(phi.col(0))) * u.adjoint();
    for (std::size_t i = 0; i < da; ++i) {
      if (std::real(inner(projector(psi.col(i)), rho)) <= 0.05) continue;
      for (std::size_t l = 0; l < db; ++l) {
        if (std::abs(inner(phi.col(l), us[i] * phi.col(0))) <= 0.05) continue;
        const double p = std::real(inner(kron(projector(psi.col(i)), projector(phi.col(l))), out));
        ++r.trials;
        r.worst = std::min(r.worst, p);
        if (p <= threshold) ++r.failures;
      }
    }
  }
  return r;
}

// Random block unitaries are rebuilt from their sub-unitaries and coherent inputs
// |w_0> + |w_k>; the matching decoherent channel must be refused.
struct UnitarityRun {
  PropertyRun positive;
  std::size_t negatives_refused = 0;
  std::size_t negatives = 0;
};

inline UnitarityRun run_unitarity_reconstruction(std::size_t trials, std::uint64_t seed, double tol = 1e-8) {
  Rng rng(seed);
  UnitarityRun r;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t da = 2 + t % 2, db = 2 + (t / 2) % 2;
    const Matrix basis = random_unitary(da, rng);
    std::vector<Matrix> subs;
    Matrix u(da * db, da * db);
    std::vector<Matrix> decoherent;
    for (std::size_t k = 0; k < da; ++k) {
      subs.push_back(random_unitary(db, rng));
      const Matrix block = kron(projector(basis.col(k)), subs.back());
      u += block * std::polar(1.0, 2 * kPi * uniform01(rng));
      decoherent.push_back(block);
    }
    std::vector<ProductInput> inputs;
    for (std::size_t k = 1; k < da; ++k)
      inputs.push_back({projector(normalized(basis.col(0) + basis.col(k))), random_pure_state(db, rng)});
    ++r.positive.trials;
    try {
      const auto rec = reconstruct_unitary_from_subchannels(QuantumChannel::unitary(u), {da, db}, basis, subs, inputs, 0, tol);
      const double d = phase_aligned_distance(rec.unitary, u);
      r.positive.worst = std::max({r.positive.worst, rec.residual, d});
      if (rec.residual > tol || d > tol) ++r.positive.failures;
    } catch (const std::exception&) {
      ++r.positive.failures;
    }
    ++r.negatives;
    try {
      reconstruct_unitary_from_subchannels(QuantumChannel(decoherent), {da, db}, basis, subs, inputs, 0, tol);
    } catch (const ConditionError& e) {
      if (e.condition() == "(ii)") ++r.negatives_refused;
    }
  }
  return r;
}

}  // namespace qsq::testing
