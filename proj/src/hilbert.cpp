#include "sbqa/hilbert.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace sbqa {

namespace {

using Triplet = Eigen::Triplet<cplx, std::ptrdiff_t>;

SparseMatrix from_triplets(std::size_t dim, const std::vector<Triplet>& triplets) {
  SparseMatrix m(static_cast<std::ptrdiff_t>(dim), static_cast<std::ptrdiff_t>(dim));
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  return m;
}

// Re-emit a matrix through triplets so that entry order is canonical
// (row-major, ascending column) regardless of how it was produced.
SparseMatrix canonical(const SparseMatrix& m) {
  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(m.nonZeros()));
  for (std::ptrdiff_t r = 0; r < m.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(m, r); it; ++it) {
      triplets.emplace_back(it.row(), it.col(), it.value());
    }
  }
  return from_triplets(static_cast<std::size_t>(m.rows()), triplets);
}

void require_same_basis(const Basis& a, const Basis& b, const char* what) {
  if (!(a == b)) {
    throw Error(std::string(what) + ": basis mismatch (" + a.describe() + " vs " +
                b.describe() + ")");
  }
}

}  // namespace

Basis::Basis(std::size_t n_spins, std::size_t n_modes, std::size_t n_max,
             std::size_t max_dim)
    : n_spins_(n_spins), n_modes_(n_modes), n_max_(n_max) {
  if (n_spins < 1) {
    throw Error("build_basis: n_spins must be >= 1");
  }
  if (n_spins >= 63) {
    throw Error("build_basis: dimension too large (n_spins = " + std::to_string(n_spins) +
                ")");
  }
  spin_dim_ = std::size_t{1} << n_spins;
  // Accumulate in long double so an overflowing product is caught before wrap-around.
  long double dim = static_cast<long double>(spin_dim_);
  const long double levels = static_cast<long double>(n_max + 1);
  for (std::size_t r = 0; r < n_modes; ++r) {
    dim *= levels;
  }
  if (dim > static_cast<long double>(max_dim)) {
    std::ostringstream msg;
    msg << "build_basis: dimension too large (" << static_cast<double>(dim) << " > cap "
        << max_dim << ") for n_spins=" << n_spins << ", n_modes=" << n_modes
        << ", n_max=" << n_max;
    throw Error(msg.str());
  }
  dim_ = static_cast<std::size_t>(dim);
  mode_strides_.resize(n_modes);
  std::size_t stride = spin_dim_;
  for (std::size_t r = 0; r < n_modes; ++r) {
    mode_strides_[r] = stride;
    stride *= n_max + 1;
  }
}

int Basis::occupation(std::size_t index, std::size_t mode) const {
  return static_cast<int>((index / mode_strides_[mode]) % (n_max_ + 1));
}

BasisLabel Basis::decode(std::size_t index) const {
  if (index >= dim_) {
    throw Error("Basis::decode: index " + std::to_string(index) + " out of range");
  }
  BasisLabel label;
  label.spins.resize(n_spins_);
  label.occupations.resize(n_modes_);
  for (std::size_t i = 0; i < n_spins_; ++i) label.spins[i] = spin_bit(index, i);
  for (std::size_t r = 0; r < n_modes_; ++r) label.occupations[r] = occupation(index, r);
  return label;
}

std::size_t Basis::encode(const BasisLabel& label) const {
  if (label.spins.size() != n_spins_ || label.occupations.size() != n_modes_) {
    throw Error("Basis::encode: label shape does not match basis " + describe());
  }
  std::size_t index = 0;
  for (std::size_t i = 0; i < n_spins_; ++i) {
    if (label.spins[i] != 0 && label.spins[i] != 1) {
      throw Error("Basis::encode: spin digit must be 0 or 1");
    }
    index |= static_cast<std::size_t>(label.spins[i]) << i;
  }
  for (std::size_t r = 0; r < n_modes_; ++r) {
    const int n = label.occupations[r];
    if (n < 0 || static_cast<std::size_t>(n) > n_max_) {
      throw Error("Basis::encode: occupation outside [0, n_max]");
    }
    index += static_cast<std::size_t>(n) * mode_strides_[r];
  }
  return index;
}

std::string Basis::describe() const {
  std::ostringstream out;
  out << "Basis(n_spins=" << n_spins_ << ", n_modes=" << n_modes_ << ", n_max=" << n_max_
      << ", dim=" << dim_ << ")";
  return out.str();
}

Basis build_basis(std::size_t n_spins, std::size_t n_modes, std::size_t n_max,
                  std::size_t max_dim) {
  return Basis(n_spins, n_modes, n_max, max_dim);
}

SparseOperator::SparseOperator(Basis basis, SparseMatrix matrix)
    : basis_(std::move(basis)), matrix_(std::move(matrix)) {
  const auto d = static_cast<std::ptrdiff_t>(basis_.dim());
  if (matrix_.rows() != d || matrix_.cols() != d) {
    throw Error("SparseOperator: matrix dimension does not match " + basis_.describe());
  }
  matrix_.makeCompressed();
}

SparseOperator SparseOperator::zero(const Basis& basis) {
  return SparseOperator(basis, from_triplets(basis.dim(), {}));
}

SparseOperator SparseOperator::identity(const Basis& basis) {
  std::vector<Triplet> t;
  t.reserve(basis.dim());
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    t.emplace_back(static_cast<std::ptrdiff_t>(i), static_cast<std::ptrdiff_t>(i), 1.0);
  }
  return SparseOperator(basis, from_triplets(basis.dim(), t));
}

SparseOperator SparseOperator::adjoint() const {
  return SparseOperator(basis_, canonical(SparseMatrix(matrix_.adjoint())));
}

SparseOperator SparseOperator::operator*(const SparseOperator& rhs) const {
  require_same_basis(basis_, rhs.basis_, "operator product");
  return SparseOperator(basis_, canonical(SparseMatrix(matrix_ * rhs.matrix_)));
}

SparseOperator SparseOperator::operator+(const SparseOperator& rhs) const {
  require_same_basis(basis_, rhs.basis_, "operator sum");
  return SparseOperator(basis_, canonical(SparseMatrix(matrix_ + rhs.matrix_)));
}

SparseOperator SparseOperator::operator-(const SparseOperator& rhs) const {
  require_same_basis(basis_, rhs.basis_, "operator difference");
  return SparseOperator(basis_, canonical(SparseMatrix(matrix_ - rhs.matrix_)));
}

SparseOperator SparseOperator::scaled(cplx factor) const {
  return SparseOperator(basis_, SparseMatrix(matrix_ * factor));
}

double SparseOperator::hermiticity_defect() const {
  const SparseMatrix diff = matrix_ - SparseMatrix(matrix_.adjoint());
  double worst = 0.0;
  for (std::ptrdiff_t r = 0; r < diff.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(diff, r); it; ++it) {
      worst = std::max(worst, std::abs(it.value()));
    }
  }
  return worst;
}

bool SparseOperator::is_real(double tol) const {
  const cplx* values = matrix_.valuePtr();
  for (std::ptrdiff_t k = 0; k < matrix_.nonZeros(); ++k) {
    if (std::abs(values[k].imag()) > tol) return false;
  }
  return true;
}

double SparseOperator::norm_bound() const {
  double worst = 0.0;
  for (std::ptrdiff_t r = 0; r < matrix_.outerSize(); ++r) {
    double row = 0.0;
    for (SparseMatrix::InnerIterator it(matrix_, r); it; ++it) row += std::abs(it.value());
    worst = std::max(worst, row);
  }
  return worst;
}

Eigen::SparseMatrix<double, Eigen::RowMajor, std::ptrdiff_t> SparseOperator::real_part()
    const {
  return matrix_.real();
}

SparseOperator pauli(const Basis& basis, Axis axis, std::size_t site) {
  if (site >= basis.n_spins()) {
    throw Error("pauli: site " + std::to_string(site) + " out of range for " +
                basis.describe());
  }
  const std::size_t mask = std::size_t{1} << site;
  std::vector<Triplet> t;
  t.reserve(basis.dim());
  for (std::size_t col = 0; col < basis.dim(); ++col) {
    const bool up = (col & mask) != 0;
    const auto c = static_cast<std::ptrdiff_t>(col);
    switch (axis) {
      case Axis::x:
        t.emplace_back(static_cast<std::ptrdiff_t>(col ^ mask), c, 1.0);
        break;
      case Axis::y:
        // sigma^y |down> = -i |up>,  sigma^y |up> = i |down>
        t.emplace_back(static_cast<std::ptrdiff_t>(col ^ mask), c,
                       up ? cplx(0.0, 1.0) : cplx(0.0, -1.0));
        break;
      case Axis::z:
        t.emplace_back(c, c, up ? 1.0 : -1.0);
        break;
    }
  }
  return SparseOperator(basis, from_triplets(basis.dim(), t));
}

SparseOperator boson(const Basis& basis, std::size_t mode, Ladder kind) {
  if (mode >= basis.n_modes()) {
    throw Error("boson: mode " + std::to_string(mode) + " out of range for " +
                basis.describe());
  }
  const std::size_t stride = basis.mode_stride(mode);
  const int n_max = static_cast<int>(basis.n_max());
  std::vector<Triplet> t;
  t.reserve(basis.dim());
  for (std::size_t col = 0; col < basis.dim(); ++col) {
    const int n = basis.occupation(col, mode);
    const auto c = static_cast<std::ptrdiff_t>(col);
    switch (kind) {
      case Ladder::annihilate:
        if (n > 0) {
          t.emplace_back(static_cast<std::ptrdiff_t>(col - stride), c, std::sqrt(double(n)));
        }
        break;
      case Ladder::create:
        // Hard cutoff: the top level is annihilated.
        if (n < n_max) {
          t.emplace_back(static_cast<std::ptrdiff_t>(col + stride), c,
                         std::sqrt(double(n + 1)));
        }
        break;
      case Ladder::number:
        if (n > 0) t.emplace_back(c, c, double(n));
        break;
    }
  }
  return SparseOperator(basis, from_triplets(basis.dim(), t));
}

SparseOperator combine(const Basis& basis, const std::vector<Term>& terms) {
  std::vector<Triplet> triplets;
  for (const Term& term : terms) {
    if (term.factors.empty()) {
      throw Error("combine: term without operator factors");
    }
    for (const auto& f : term.factors) require_same_basis(basis, f.basis(), "combine");
    SparseMatrix product = term.factors.front().matrix();
    for (std::size_t k = 1; k < term.factors.size(); ++k) {
      product = SparseMatrix(product * term.factors[k].matrix());
    }
    for (std::ptrdiff_t r = 0; r < product.outerSize(); ++r) {
      for (SparseMatrix::InnerIterator it(product, r); it; ++it) {
        triplets.emplace_back(it.row(), it.col(), term.coefficient * it.value());
      }
    }
  }
  return SparseOperator(basis, from_triplets(basis.dim(), triplets));
}

}  // namespace sbqa
