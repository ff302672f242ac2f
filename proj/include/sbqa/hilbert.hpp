#pragma once

// Composite spin (x) boson Hilbert space and elementary sparse operators.
//
// Index convention: lexicographic with spins as the fastest-varying factor.
//   index = sum_i bit_i * 2^i + 2^N * sum_r n_r * (n_max + 1)^r
// bit_i = 0 is spin down (sigma^z = -1), bit_i = 1 is spin up.  Index 0 is
// |all down> (x) |vacuum>.  Because the spin block is contiguous, a state
// vector viewed as a (2^N x boson_dim) column-major matrix has one column per
// bosonic occupation pattern.

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace sbqa {

using cplx = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using SparseMatrix = Eigen::SparseMatrix<cplx, Eigen::RowMajor, std::ptrdiff_t>;

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an iterative procedure fails to reach its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Occupation labels of one basis state.
struct BasisLabel {
  std::vector<int> spins;        // 0 = down, 1 = up
  std::vector<int> occupations;  // 0..n_max per mode

  bool operator==(const BasisLabel&) const = default;
};

class Basis {
 public:
  static constexpr std::size_t kDefaultMaxDim = std::size_t{1} << 24;

  Basis(std::size_t n_spins, std::size_t n_modes, std::size_t n_max,
        std::size_t max_dim = kDefaultMaxDim);

  std::size_t n_spins() const { return n_spins_; }
  std::size_t n_modes() const { return n_modes_; }
  std::size_t n_max() const { return n_max_; }
  std::size_t dim() const { return dim_; }
  std::size_t spin_dim() const { return spin_dim_; }
  std::size_t boson_dim() const { return dim_ / spin_dim_; }
  std::size_t levels_per_mode() const { return n_max_ + 1; }

  BasisLabel decode(std::size_t index) const;
  std::size_t encode(const BasisLabel& label) const;

  int spin_bit(std::size_t index, std::size_t site) const {
    return static_cast<int>((index >> site) & 1U);
  }
  int occupation(std::size_t index, std::size_t mode) const;

  /// Stride of mode `mode` in the flat index.
  std::size_t mode_stride(std::size_t mode) const { return mode_strides_[mode]; }

  bool operator==(const Basis& other) const {
    return n_spins_ == other.n_spins_ && n_modes_ == other.n_modes_ &&
           n_max_ == other.n_max_;
  }

  std::string describe() const;

 private:
  std::size_t n_spins_;
  std::size_t n_modes_;
  std::size_t n_max_;
  std::size_t spin_dim_;
  std::size_t dim_;
  std::vector<std::size_t> mode_strides_;
};

Basis build_basis(std::size_t n_spins, std::size_t n_modes, std::size_t n_max,
                  std::size_t max_dim = Basis::kDefaultMaxDim);

/// Complex sparse matrix bound to the Basis it acts on.  Immutable once built.
class SparseOperator {
 public:
  SparseOperator(Basis basis, SparseMatrix matrix);

  static SparseOperator zero(const Basis& basis);
  static SparseOperator identity(const Basis& basis);

  const Basis& basis() const { return basis_; }
  const SparseMatrix& matrix() const { return matrix_; }
  std::size_t dim() const { return basis_.dim(); }
  std::ptrdiff_t nonzeros() const { return matrix_.nonZeros(); }

  Vector apply(const Vector& v) const { return matrix_ * v; }
  cplx expectation(const Vector& v) const { return v.dot(matrix_ * v); }

  SparseOperator adjoint() const;
  SparseOperator operator*(const SparseOperator& rhs) const;
  SparseOperator operator+(const SparseOperator& rhs) const;
  SparseOperator operator-(const SparseOperator& rhs) const;
  SparseOperator scaled(cplx factor) const;

  /// max_ij |H_ij - conj(H_ji)|
  double hermiticity_defect() const;
  /// True when every stored entry has |Im| <= tol.
  bool is_real(double tol = 0.0) const;
  /// Upper bound on the spectral norm (max absolute row sum).
  double norm_bound() const;

  /// Real part as a real sparse matrix (same sparsity).
  Eigen::SparseMatrix<double, Eigen::RowMajor, std::ptrdiff_t> real_part() const;
  Matrix dense() const { return Matrix(matrix_); }

 private:
  Basis basis_;
  SparseMatrix matrix_;
};

enum class Axis { x, y, z };
enum class Ladder { annihilate, create, number };

SparseOperator pauli(const Basis& basis, Axis axis, std::size_t site);
SparseOperator boson(const Basis& basis, std::size_t mode, Ladder kind);

/// coefficient * (factors[0] * factors[1] * ...)
struct Term {
  cplx coefficient;
  std::vector<SparseOperator> factors;
};

/// Sparse sum of scaled operator products; duplicate entries are merged.
SparseOperator combine(const Basis& basis, const std::vector<Term>& terms);

}  // namespace sbqa
