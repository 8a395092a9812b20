#pragma once

// Seeded generators for Haar-random unitaries, states and channels.

#include <cstdint>
#include <random>
#include <vector>

#include "qsq/linalg.hpp"

namespace qsq {

using Rng = std::mt19937_64;

inline Matrix ginibre(std::size_t rows, std::size_t cols, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(rows, cols);
  for (auto& z : m.data()) {
    const double re = g(rng);
    const double im = g(rng);
    z = Complex(re, im);
  }
  return m;
}

// Columns of a Ginibre matrix orthonormalised by modified Gram-Schmidt; the
// resulting isometry is Haar distributed.
inline Matrix random_isometry(std::size_t rows, std::size_t cols, Rng& rng) {
  if (cols > rows) throw DimensionError("isometry needs cols <= rows");
  Matrix m = ginibre(rows, cols, rng);
  for (std::size_t j = 0; j < cols; ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      Complex ov = 0.0;
      for (std::size_t i = 0; i < rows; ++i) ov += std::conj(m(i, k)) * m(i, j);
      for (std::size_t i = 0; i < rows; ++i) m(i, j) -= ov * m(i, k);
    }
    double n = 0.0;
    for (std::size_t i = 0; i < rows; ++i) n += std::norm(m(i, j));
    n = std::sqrt(n);
    for (std::size_t i = 0; i < rows; ++i) m(i, j) /= n;
  }
  return m;
}

inline Matrix random_unitary(std::size_t d, Rng& rng) { return random_isometry(d, d, rng); }

inline Matrix random_ket(std::size_t d, Rng& rng) { return normalized(ginibre(d, 1, rng)); }

inline Matrix random_pure_state(std::size_t d, Rng& rng) { return projector(random_ket(d, rng)); }

// Full-rank mixed state from the Ginibre ensemble.
inline Matrix random_density(std::size_t d, Rng& rng) {
  const Matrix g = ginibre(d, d, rng);
  Matrix rho = g * g.adjoint();
  return rho * (1.0 / rho.trace().real());
}

// Kraus operators of a random channel on dimension d with the given Kraus rank,
// obtained by slicing a random isometry C^d -> C^d (x) C^rank.
inline std::vector<Matrix> random_kraus(std::size_t d, std::size_t rank, Rng& rng) {
  const Matrix v = random_isometry(d * rank, d, rng);
  std::vector<Matrix> out;
  for (std::size_t r = 0; r < rank; ++r) {
    Matrix k(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) k(i, j) = v(i * rank + r, j);
    out.push_back(k);
  }
  return out;
}

inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace qsq
