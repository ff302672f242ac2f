#pragma once

// Independent dense reference constructions: explicit Kronecker products of
// 2x2 and ladder matrices, ordered so that spin 0 is the fastest digit and
// the modes follow the spins.

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

// Local spin basis {down, up}.
inline Mat sx() {
  Mat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

inline Mat sz() {
  Mat m(2, 2);
  m << -1, 0, 0, 1;
  return m;
}

inline Mat annihilate(std::size_t n_max) {
  Mat m = Mat::Zero(n_max + 1, n_max + 1);
  for (std::size_t n = 1; n <= n_max; ++n) m(n - 1, n) = std::sqrt(double(n));
  return m;
}

struct Layout {
  std::size_t n_spins;
  std::size_t n_modes;
  std::size_t n_max;
};

// Embeds `local` on factor `slot`; slots 0..n_spins-1 are spins, then modes.
inline Mat embed(const Layout& l, std::size_t slot, const Mat& local) {
  const std::size_t total = l.n_spins + l.n_modes;
  Mat out = Mat::Identity(1, 1);
  for (std::size_t k = total; k-- > 0;) {
    const std::size_t d = k < l.n_spins ? 2 : l.n_max + 1;
    out = kron(out, k == slot ? local : Mat::Identity(d, d));
  }
  return out;
}

inline Mat ising(std::size_t n, double s) {
  const Layout l{n, 0, 0};
  const std::size_t dim = std::size_t{1} << n;
  Mat h = Mat::Zero(dim, dim);
  for (std::size_t i = 0; i < n; ++i) {
    h += s * embed(l, i, sx()) * embed(l, (i + 1) % n, sx());
    h += 0.5 * (1.0 - s) * embed(l, i, sz());
  }
  return h;
}

inline Mat spinboson(std::size_t n, double omega, double s, std::size_t n_max) {
  const Layout l{n, n, n_max};
  const Mat b = annihilate(n_max);
  const Mat x = b + b.adjoint();
  const Mat num = b.adjoint() * b;
  Mat h = embed(l, 0, Mat::Zero(2, 2));
  for (std::size_t i = 0; i < n; ++i) {
    const Mat spin = embed(l, i, sx());
    h += s * std::sqrt(omega) * spin * (embed(l, n + i, x) - embed(l, n + (i + 1) % n, x));
    h += 0.5 * (1.0 - s) * embed(l, i, sz());
    h += omega * embed(l, n + i, num);
  }
  return h;
}

inline Eigen::VectorXd eigenvalues(const Mat& h) {
  Eigen::SelfAdjointEigenSolver<Mat> eig(h);
  return eig.eigenvalues();
}

// Partial trace over everything after the first spin_dim digits.
inline Mat spin_density(const Eigen::VectorXcd& psi, std::size_t spin_dim) {
  const std::size_t rest = static_cast<std::size_t>(psi.size()) / spin_dim;
  Mat rho = Mat::Zero(spin_dim, spin_dim);
  for (std::size_t r = 0; r < rest; ++r) {
    for (std::size_t a = 0; a < spin_dim; ++a) {
      for (std::size_t c = 0; c < spin_dim; ++c) {
        rho(a, c) += psi(r * spin_dim + a) * std::conj(psi(r * spin_dim + c));
      }
    }
  }
  return rho;
}

}  // namespace oracle
