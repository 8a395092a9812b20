#pragma once

// Dense complex linear algebra on row-major matrices, plus the handful of
// quantum-information primitives the rest of the library needs.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "qsq/errors.hpp"

namespace qsq {

using Complex = std::complex<double>;

inline constexpr double kLogicalTol = 1e-9;
inline constexpr double kArithmeticTol = 1e-12;
inline constexpr double kPi = 3.14159265358979323846;

class Matrix {
 public:
  Matrix() = default;

  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {
    if (rows == 0 || cols == 0) throw DimensionError("matrix dimensions must be positive");
  }

  Matrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (rows == 0 || cols == 0) throw DimensionError("matrix dimensions must be positive");
    if (data_.size() != rows * cols) throw DimensionError("entry count does not match shape");
  }

  Matrix(std::initializer_list<std::initializer_list<Complex>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    if (rows_ == 0 || cols_ == 0) throw DimensionError("matrix dimensions must be positive");
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw DimensionError("ragged matrix literal");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static Matrix diagonal(const std::vector<Complex>& d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  // Column vector from entries.
  static Matrix column(const std::vector<Complex>& v) { return Matrix(v.size(), 1, v); }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }
  bool is_square() const { return rows_ == cols_ && rows_ > 0; }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  const std::vector<Complex>& data() const { return data_; }
  std::vector<Complex>& data() { return data_; }

  Matrix adjoint() const {
    Matrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
    return out;
  }

  Matrix transpose() const {
    Matrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
  }

  Matrix conj() const {
    Matrix out = *this;
    for (auto& z : out.data_) z = std::conj(z);
    return out;
  }

  Complex trace() const {
    if (!is_square()) throw DimensionError("trace of non-square matrix");
    Complex t = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const auto& z : data_) s += std::norm(z);
    return std::sqrt(s);
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& z : data_) m = std::max(m, std::abs(z));
    return m;
  }

  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
  }

  Matrix col(std::size_t j) const {
    Matrix out(rows_, 1);
    for (std::size_t i = 0; i < rows_; ++i) out(i, 0) = (*this)(i, j);
    return out;
  }

  Matrix& operator+=(const Matrix& o) {
    require_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    require_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  Matrix& operator*=(Complex s) {
    for (auto& z : data_) z *= s;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, Complex s) { return a *= s; }
  friend Matrix operator*(Complex s, Matrix a) { return a *= s; }
  friend Matrix operator*(Matrix a, double s) { return a *= Complex(s); }
  friend Matrix operator*(double s, Matrix a) { return a *= Complex(s); }
  friend Matrix operator-(Matrix a) { return a *= Complex(-1.0); }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw DimensionError("incompatible shapes in product");
    Matrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      Complex* orow = &out.data_[i * b.cols_];
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Complex aik = a(i, k);
        if (aik == Complex(0.0)) continue;
        const Complex* brow = &b.data_[k * b.cols_];
        for (std::size_t j = 0; j < b.cols_; ++j) orow[j] += aik * brow[j];
      }
    }
    return out;
  }

 private:
  void require_same_shape(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

// Subsystem dimensions of a tensor-product space, most significant factor first.
using DimsLayout = std::vector<std::size_t>;

inline std::size_t total_dim(const DimsLayout& layout) {
  if (layout.empty()) throw DimensionError("empty layout");
  std::size_t d = 1;
  for (auto k : layout) {
    if (k < 2) throw DimensionError("subsystem dimensions must be at least 2");
    d *= k;
  }
  return d;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      if (aij == Complex(0.0)) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return out;
}

inline Matrix kron_all(const std::vector<Matrix>& factors) {
  if (factors.empty()) throw DimensionError("kron of nothing");
  Matrix out = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) out = kron(out, factors[i]);
  return out;
}

inline Complex inner(const Matrix& a, const Matrix& b) {
  // Hilbert-Schmidt inner product tr(a^dagger b); also the vector inner product for columns.
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("shape mismatch in inner product");
  Complex s = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k) s += std::conj(a.data()[k]) * b.data()[k];
  return s;
}

inline Matrix outer(const Matrix& ket, const Matrix& bra_source) { return ket * bra_source.adjoint(); }

inline Matrix projector(const Matrix& ket) { return outer(ket, ket); }

inline Matrix normalized(Matrix v) {
  const double n = v.frobenius_norm();
  if (n == 0.0) throw ContractError("cannot normalize the zero vector");
  return v * (1.0 / n);
}

inline double hermiticity_defect(const Matrix& m) {
  if (!m.is_square()) throw DimensionError("hermiticity of non-square matrix");
  double s = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) s += std::norm(m(i, j) - std::conj(m(j, i)));
  return std::sqrt(s);
}

inline bool is_hermitian(const Matrix& m, double tol = kArithmeticTol) {
  return m.is_square() && hermiticity_defect(m) <= tol;
}

inline bool is_unitary(const Matrix& m, double tol = kArithmeticTol) {
  if (!m.is_square()) return false;
  return (m.adjoint() * m - Matrix::identity(m.rows())).frobenius_norm() <= tol;
}

// min over phi of ||a - e^{i phi} b||_F.
inline double phase_aligned_distance(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("shape mismatch in distance");
  const Complex ov = inner(b, a);
  const Complex ph = std::abs(ov) == 0.0 ? Complex(1.0) : ov / std::abs(ov);
  double s = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k) s += std::norm(a.data()[k] - ph * b.data()[k]);
  return std::sqrt(s);
}

// The phase e^{i phi} minimising ||a - e^{i phi} b||.
inline Complex aligning_phase(const Matrix& a, const Matrix& b) {
  const Complex ov = inner(b, a);
  if (std::abs(ov) == 0.0) return 1.0;
  return ov / std::abs(ov);
}

struct EigenDecomposition {
  std::vector<double> values;  // ascending
  Matrix vectors;              // column k pairs with values[k]
};

// Cyclic Jacobi diagonalisation of a Hermitian matrix.
inline EigenDecomposition hermitian_eig(const Matrix& m, double tol = 1e-9) {
  if (!m.is_square()) throw DimensionError("eigendecomposition of non-square matrix");
  if (hermiticity_defect(m) > tol * std::max(1.0, m.frobenius_norm()))
    throw ContractError("matrix is not Hermitian within tolerance");
  const std::size_t n = m.rows();
  Matrix a = (m + m.adjoint()) * 0.5;
  Matrix v = Matrix::identity(n);
  const double scale = std::max(1.0, a.frobenius_norm());
  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
  };
  for (int sweep = 0; sweep < 100 && off_norm() > 1e-12 * scale; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double g = std::abs(apq);
        if (g < 1e-300) continue;
        const Complex e = apq / g;
        const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * g);
        const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // R = E P with E = diag(1, conj(e)) on (p,q) and the real Jacobi rotation P.
        const Complex rpp = c, rpq = s, rqp = -s * std::conj(e), rqq = c * std::conj(e);
        for (std::size_t k = 0; k < n; ++k) {  // A <- A R
          const Complex akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * rpp + akq * rqp;
          a(k, q) = akp * rpq + akq * rqq;
        }
        for (std::size_t k = 0; k < n; ++k) {  // A <- R^dagger A
          const Complex apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(rpp) * apk + std::conj(rqp) * aqk;
          a(q, k) = std::conj(rpq) * apk + std::conj(rqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {  // V <- V R
          const Complex vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * rpp + vkq * rqp;
          v(k, q) = vkp * rpq + vkq * rqq;
        }
      }
    }
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });
  EigenDecomposition out{std::vector<double>(n), Matrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

struct UnitaryEigenDecomposition {
  std::vector<Complex> values;
  Matrix vectors;
};

// Eigendecomposition of a unitary through a generic Hermitian combination of its
// real and imaginary parts, which commute and share its eigenvectors.
inline UnitaryEigenDecomposition unitary_eig(const Matrix& u, double tol = 1e-9) {
  if (!is_unitary(u, tol)) throw ContractError("matrix is not unitary within tolerance");
  const Matrix re = (u + u.adjoint()) * 0.5;
  const Matrix im = (u - u.adjoint()) * Complex(0.0, -0.5);
  const auto eig = hermitian_eig(re + im * 0.6180339887498949, 1e-6);
  UnitaryEigenDecomposition out{{}, eig.vectors};
  for (std::size_t k = 0; k < u.cols(); ++k) {
    const Matrix v = eig.vectors.col(k);
    out.values.push_back(inner(v, u * v));
  }
  return out;
}

inline double purity(const Matrix& rho) { return std::real(inner(rho, rho)); }

// Eigenvector of the largest eigenvalue; for a pure state this is its ket.
inline Matrix dominant_vector(const Matrix& rho) {
  const auto eig = hermitian_eig(rho, 1e-6);
  return eig.vectors.col(rho.rows() - 1);
}

// Reorders tensor factors: output factor i is input factor perm[i].
inline Matrix permute_subsystems(const Matrix& m, const DimsLayout& layout, const std::vector<std::size_t>& perm) {
  const std::size_t d = total_dim(layout);
  if (m.rows() != d || m.cols() != d) throw DimensionError("matrix does not match layout");
  if (perm.size() != layout.size()) throw DimensionError("permutation length mismatch");
  std::vector<bool> seen(perm.size(), false);
  for (auto p : perm) {
    if (p >= perm.size() || seen[p]) throw DimensionError("invalid permutation");
    seen[p] = true;
  }
  const std::size_t n = layout.size();
  DimsLayout new_layout(n);
  for (std::size_t i = 0; i < n; ++i) new_layout[i] = layout[perm[i]];
  // map[new_index] = old_index
  std::vector<std::size_t> map(d);
  std::vector<std::size_t> digits(n);
  for (std::size_t idx = 0; idx < d; ++idx) {
    std::size_t rem = idx;
    for (std::size_t i = n; i-- > 0;) {
      digits[i] = rem % new_layout[i];
      rem /= new_layout[i];
    }
    std::vector<std::size_t> old_digits(n);
    for (std::size_t i = 0; i < n; ++i) old_digits[perm[i]] = digits[i];
    std::size_t old = 0;
    for (std::size_t i = 0; i < n; ++i) old = old * layout[i] + old_digits[i];
    map[idx] = old;
  }
  Matrix out(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) out(i, j) = m(map[i], map[j]);
  return out;
}

// Traces out every subsystem not listed in `keep`; kept factors stay in layout order.
inline Matrix partial_trace(const Matrix& m, const DimsLayout& layout, std::vector<std::size_t> keep) {
  const std::size_t d = total_dim(layout);
  if (m.rows() != d || m.cols() != d) throw DimensionError("matrix does not match layout");
  std::sort(keep.begin(), keep.end());
  if (std::adjacent_find(keep.begin(), keep.end()) != keep.end()) throw DimensionError("duplicate kept subsystem");
  for (auto k : keep)
    if (k >= layout.size()) throw DimensionError("kept subsystem out of range");
  if (keep.empty()) return Matrix(1, 1, {m.trace()});
  std::vector<std::size_t> perm = keep;
  for (std::size_t i = 0; i < layout.size(); ++i)
    if (!std::binary_search(keep.begin(), keep.end(), i)) perm.push_back(i);
  const Matrix p = permute_subsystems(m, layout, perm);
  std::size_t dk = 1;
  for (auto k : keep) dk *= layout[k];
  const std::size_t dt = d / dk;
  Matrix out(dk, dk);
  for (std::size_t i = 0; i < dk; ++i)
    for (std::size_t j = 0; j < dk; ++j) {
      Complex s = 0.0;
      for (std::size_t t = 0; t < dt; ++t) s += p(i * dt + t, j * dt + t);
      out(i, j) = s;
    }
  return out;
}

// Places `sigma` on subsystem `slot` and `rest` (ordered like the remaining factors) elsewhere.
inline Matrix embed_subsystem(const Matrix& sigma, const Matrix& rest, const DimsLayout& layout, std::size_t slot) {
  if (slot >= layout.size()) throw DimensionError("slot out of range");
  if (sigma.rows() != layout[slot] || sigma.cols() != layout[slot]) throw DimensionError("sigma does not fit slot");
  const Matrix joint = kron(sigma, rest);
  if (joint.rows() != total_dim(layout)) throw DimensionError("rest does not fit layout");
  DimsLayout joint_layout{layout[slot]};
  for (std::size_t i = 0; i < layout.size(); ++i)
    if (i != slot) joint_layout.push_back(layout[i]);
  // joint factor 0 is `slot`; factor k>0 is the k-th remaining subsystem.
  std::vector<std::size_t> perm(layout.size());
  std::size_t next = 1;
  for (std::size_t i = 0; i < layout.size(); ++i) perm[i] = (i == slot) ? 0 : next++;
  return permute_subsystems(joint, joint_layout, perm);
}

// Row-major vectorisation convention: vec(K X K^dagger) = (K (x) conj K) vec(X).
inline Matrix superoperator(const std::vector<Matrix>& kraus) {
  if (kraus.empty()) throw DimensionError("empty Kraus list");
  Matrix s(kraus[0].rows() * kraus[0].rows(), kraus[0].cols() * kraus[0].cols());
  for (const auto& k : kraus) s += kron(k, k.conj());
  return s;
}

// Computational-basis ket |index> in dimension d.
inline Matrix basis_ket(std::size_t d, std::size_t index) {
  if (index >= d) throw DimensionError("basis index out of range");
  Matrix v(d, 1);
  v(index, 0) = 1.0;
  return v;
}

inline Matrix matrix_power(const Matrix& m, unsigned k) {
  if (!m.is_square()) throw DimensionError("power of non-square matrix");
  Matrix out = Matrix::identity(m.rows());
  for (unsigned i = 0; i < k; ++i) out = out * m;
  return out;
}

// Columns of `m` are orthonormal within tol.
inline bool has_orthonormal_columns(const Matrix& m, double tol = 1e-8) {
  return (m.adjoint() * m - Matrix::identity(m.cols())).max_abs() <= tol;
}

inline Matrix columns_to_matrix(const std::vector<Matrix>& columns) {
  if (columns.empty()) throw DimensionError("no columns");
  Matrix out(columns[0].rows(), columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].rows() != out.rows() || columns[j].cols() != 1) throw DimensionError("ragged column list");
    for (std::size_t i = 0; i < out.rows(); ++i) out(i, j) = columns[j](i, 0);
  }
  return out;
}

}  // namespace qsq
