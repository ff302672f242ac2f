#include "sbqa/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace sbqa {

namespace {

void finish_slice(const SparseOperator& h, SpectrumSlice& slice) {
  const std::size_t k = slice.size();
  slice.residuals.resize(static_cast<Eigen::Index>(k));
  const Matrix hv = h.matrix() * slice.states;
  for (std::size_t i = 0; i < k; ++i) {
    const auto c = static_cast<Eigen::Index>(i);
    slice.residuals(c) = (hv.col(c) - slice.energies(c) * slice.states.col(c)).norm();
  }
  fix_phases(slice);
}

void check_residuals(const SpectrumSlice& slice, double tol, const char* method) {
  const double limit = tol * std::max(slice.norm_bound, 1.0);
  for (Eigen::Index i = 0; i < slice.residuals.size(); ++i) {
    if (!(slice.residuals(i) <= limit)) {
      std::ostringstream msg;
      msg << "eigen_lowest(" << method << "): eigenpair " << i << " not converged, residual "
          << slice.residuals(i) << " > " << limit;
      throw ConvergenceError(msg.str());
    }
  }
}

struct DensePairs {
  Eigen::VectorXd energies;
  Matrix vectors;
};

// Lowest k eigenpairs of the principal submatrix of h on `rows` (all rows
// when empty).
DensePairs dense_block(const SparseOperator& h, const std::vector<Eigen::Index>& rows,
                       std::size_t k) {
  const bool full = rows.empty();
  const auto n = static_cast<lapack_int>(full ? static_cast<Eigen::Index>(h.dim())
                                              : static_cast<Eigen::Index>(rows.size()));
  const auto kk = static_cast<lapack_int>(k);
  std::vector<Eigen::Index> local;
  if (!full) {
    local.assign(h.dim(), -1);
    for (std::size_t i = 0; i < rows.size(); ++i) local[rows[i]] = static_cast<Eigen::Index>(i);
  }
  const bool real = h.is_real();
  Eigen::MatrixXd ar;
  Matrix ac;
  if (real) {
    ar = Eigen::MatrixXd::Zero(n, n);
  } else {
    ac = Matrix::Zero(n, n);
  }
  const SparseMatrix& m = h.matrix();
  for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
    const Eigen::Index lr = full ? r : local[r];
    if (lr < 0) continue;
    for (SparseMatrix::InnerIterator it(m, r); it; ++it) {
      const Eigen::Index lc = full ? it.col() : local[it.col()];
      if (lc < 0) continue;
      if (real) {
        ar(lr, lc) = it.value().real();
      } else {
        ac(lr, lc) = it.value();
      }
    }
  }
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
  lapack_int found = 0;
  lapack_int info = 0;
  DensePairs out;
  Eigen::VectorXd w(n);
  if (real) {
    Eigen::MatrixXd z(n, kk);
    info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'U', n, ar.data(), n, 0.0, 0.0, 1, kk,
                          0.0, &found, w.data(), z.data(), n, support.data());
    out.vectors = z.leftCols(found).cast<cplx>();
  } else {
    Matrix z(n, kk);
    info = LAPACKE_zheevr(LAPACK_COL_MAJOR, 'V', 'I', 'U', n, ac.data(), n, 0.0, 0.0, 1, kk,
                          0.0, &found, w.data(), z.data(), n, support.data());
    out.vectors = z.leftCols(found);
  }
  if (info != 0 || found != kk) {
    throw ConvergenceError("eigen_lowest(dense): LAPACK returned info=" +
                           std::to_string(info) + ", found " + std::to_string(found) + " of " +
                           std::to_string(k) + " eigenpairs");
  }
  out.energies = w.head(kk);
  return out;
}

SpectrumSlice dense_lowest(const SparseOperator& h, std::size_t k) {
  DensePairs pairs = dense_block(h, {}, k);
  SpectrumSlice slice;
  slice.norm_bound = h.norm_bound();
  slice.energies = std::move(pairs.energies);
  slice.states = std::move(pairs.vectors);
  return slice;
}

SpectrumSlice parity_split_lowest(const SparseOperator& h, std::size_t k) {
  const std::vector<int> sign = parity_signs(h.basis());
  const SparseMatrix& m = h.matrix();
  for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(m, r); it; ++it) {
      if (sign[r] != sign[it.col()] && std::abs(it.value()) > 0.0) {
        throw Error("eigen_lowest: operator does not conserve parity");
      }
    }
  }
  std::vector<Eigen::Index> even, odd;
  for (std::size_t i = 0; i < sign.size(); ++i) {
    (sign[i] > 0 ? even : odd).push_back(static_cast<Eigen::Index>(i));
  }
  const std::vector<Eigen::Index>* blocks[2] = {&even, &odd};
  DensePairs part[2];
  for (int b = 0; b < 2; ++b) {
    const std::size_t kb = std::min(k, blocks[b]->size());
    if (kb > 0) part[b] = dense_block(h, *blocks[b], kb);
  }
  SpectrumSlice slice;
  slice.norm_bound = h.norm_bound();
  slice.energies.resize(static_cast<Eigen::Index>(k));
  slice.states = Matrix::Zero(static_cast<Eigen::Index>(h.dim()), static_cast<Eigen::Index>(k));
  Eigen::Index next[2] = {0, 0};
  for (Eigen::Index c = 0; c < static_cast<Eigen::Index>(k); ++c) {
    int pick = 0;
    if (next[0] >= part[0].energies.size()) {
      pick = 1;
    } else if (next[1] < part[1].energies.size() &&
               part[1].energies(next[1]) < part[0].energies(next[0])) {
      pick = 1;
    }
    const Eigen::Index j = next[pick]++;
    slice.energies(c) = part[pick].energies(j);
    const auto& rows = *blocks[pick];
    for (std::size_t i = 0; i < rows.size(); ++i) {
      slice.states(rows[i], c) = part[pick].vectors(static_cast<Eigen::Index>(i), j);
    }
  }
  return slice;
}

// Orthonormalize `block` against the first `cols` columns of q (two passes),
// then within itself.  Columns that vanish are replaced by random directions.
Matrix orthonormal_block(const Matrix& q, Eigen::Index cols, Matrix block, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  const Eigen::Index n = block.rows();
  for (int attempt = 0; attempt < 4; ++attempt) {
    for (int pass = 0; pass < 2; ++pass) {
      if (cols > 0) block -= q.leftCols(cols) * (q.leftCols(cols).adjoint() * block);
    }
    // Modified Gram-Schmidt within the block, recording degenerate columns.
    bool replaced = false;
    for (Eigen::Index j = 0; j < block.cols(); ++j) {
      const double before = block.col(j).norm();
      for (int pass = 0; pass < 2; ++pass) {
        for (Eigen::Index i = 0; i < j; ++i) {
          block.col(j) -= block.col(i).dot(block.col(j)) * block.col(i);
        }
      }
      const double after = block.col(j).norm();
      if (!(after > 1e-10 * std::max(before, 1e-300)) || after < 1e-290) {
        for (Eigen::Index r = 0; r < n; ++r) block(r, j) = cplx(normal(rng), normal(rng));
        replaced = true;
      } else {
        block.col(j) /= after;
      }
    }
    if (!replaced) return block;
  }
  throw ConvergenceError("eigen_lowest(iterative): cannot extend Krylov basis");
}

SpectrumSlice iterative_lowest(const SparseOperator& h, std::size_t k,
                               const EigenOptions& options) {
  const auto n = static_cast<Eigen::Index>(h.dim());
  const auto b = static_cast<Eigen::Index>(std::min<std::size_t>(h.dim(), k + options.guard_vectors));
  const Eigen::Index basis_cols =
      std::min<Eigen::Index>(n, std::max<Eigen::Index>(4 * b, b + 64));
  const Eigen::Index blocks = std::max<Eigen::Index>(1, basis_cols / b);
  const double norm = h.norm_bound();
  const double limit = options.residual_tol * std::max(norm, 1.0);

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal;
  Matrix x(n, b);
  for (Eigen::Index j = 0; j < b; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) x(i, j) = cplx(normal(rng), normal(rng));
  }
  Matrix q(n, blocks * b);
  Matrix hq(n, blocks * b);
  x = orthonormal_block(q, 0, x, rng);

  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t restart = 0; restart <= options.max_restarts; ++restart) {
    q.leftCols(b) = x;
    hq.leftCols(b) = h.matrix() * x;
    Eigen::Index cols = b;
    for (Eigen::Index j = 1; j < blocks && cols + b <= n; ++j) {
      Matrix next = orthonormal_block(q, cols, hq.middleCols(cols - b, b), rng);
      q.middleCols(cols, b) = next;
      hq.middleCols(cols, b) = h.matrix() * next;
      cols += b;
    }
    Matrix t = q.leftCols(cols).adjoint() * hq.leftCols(cols);
    t = 0.5 * (t + t.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> eig(t);
    const Matrix v = eig.eigenvectors().leftCols(b);
    Matrix y = q.leftCols(cols) * v;
    const Matrix hy = hq.leftCols(cols) * v;
    worst = 0.0;
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(k); ++i) {
      worst = std::max(worst, (hy.col(i) - eig.eigenvalues()(i) * y.col(i)).norm());
    }
    if (worst <= limit) {
      SpectrumSlice slice;
      slice.norm_bound = norm;
      slice.energies = eig.eigenvalues().head(static_cast<Eigen::Index>(k));
      slice.states = y.leftCols(static_cast<Eigen::Index>(k));
      return slice;
    }
    // Re-orthonormalize the Ritz block to stop drift across restarts.
    x = orthonormal_block(q, 0, y, rng);
  }
  std::ostringstream msg;
  msg << "eigen_lowest(iterative): no convergence after " << options.max_restarts
      << " restarts, worst residual " << worst << " > " << limit;
  throw ConvergenceError(msg.str());
}

Eigen::Map<const Matrix> as_spin_boson(const Vector& state, const Basis& basis) {
  if (static_cast<std::size_t>(state.size()) != basis.dim()) {
    throw Error("state of size " + std::to_string(state.size()) + " does not match " +
                basis.describe());
  }
  return {state.data(), static_cast<Eigen::Index>(basis.spin_dim()),
          static_cast<Eigen::Index>(basis.boson_dim())};
}

}  // namespace

std::string to_string(Label label) {
  switch (label) {
    case Label::solution:
      return "solution";
    case Label::excited_solution:
      return "excited_solution";
    case Label::spin_error:
      return "spin_error";
    case Label::other:
      return "other";
  }
  return "other";
}

SpectrumSlice eigen_lowest(const SparseOperator& h, std::size_t k, const EigenOptions& options) {
  if (k == 0 || k > h.dim()) {
    throw Error("eigen_lowest: k = " + std::to_string(k) + " must lie in [1, dim = " +
                std::to_string(h.dim()) + "]");
  }
  EigenMethod method = options.method;
  if (method == EigenMethod::automatic) {
    method = h.dim() <= options.dense_max_dim ? EigenMethod::dense : EigenMethod::iterative;
  }
  SpectrumSlice slice;
  if (method == EigenMethod::iterative) {
    slice = iterative_lowest(h, k, options);
  } else if (options.split_parity) {
    slice = parity_split_lowest(h, k);
  } else {
    slice = dense_lowest(h, k);
  }
  finish_slice(h, slice);
  check_residuals(slice, options.residual_tol,
                  method == EigenMethod::dense ? "dense" : "iterative");
  return slice;
}

std::vector<int> parity_signs(const Basis& basis) {
  std::vector<int> sign(basis.dim());
  for (std::size_t idx = 0; idx < basis.dim(); ++idx) {
    int count = 0;
    for (std::size_t i = 0; i < basis.n_spins(); ++i) count += basis.spin_bit(idx, i);
    for (std::size_t r = 0; r < basis.n_modes(); ++r) count += basis.occupation(idx, r);
    sign[idx] = count % 2 ? -1 : 1;
  }
  return sign;
}

void fix_phases(SpectrumSlice& slice) {
  for (Eigen::Index j = 0; j < slice.states.cols(); ++j) {
    Eigen::Index best = 0;
    slice.states.col(j).cwiseAbs().maxCoeff(&best);
    const cplx pivot = slice.states(best, j);
    if (std::abs(pivot) > 0.0) slice.states.col(j) *= std::conj(pivot) / std::abs(pivot);
  }
}

void track_continuity(const SpectrumSlice& prev, SpectrumSlice& cur) {
  if (prev.states.rows() != cur.states.rows()) {
    throw Error("track_continuity: slices live in different spaces");
  }
  const Matrix overlaps = prev.states.adjoint() * cur.states;
  struct Pair {
    double weight;
    Eigen::Index i, j;
  };
  std::vector<Pair> pairs;
  pairs.reserve(static_cast<std::size_t>(overlaps.size()));
  for (Eigen::Index i = 0; i < overlaps.rows(); ++i) {
    for (Eigen::Index j = 0; j < overlaps.cols(); ++j) {
      pairs.push_back({std::abs(overlaps(i, j)), i, j});
    }
  }
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const Pair& a, const Pair& b) { return a.weight > b.weight; });
  constexpr auto unmatched = std::numeric_limits<std::size_t>::max();
  cur.continuity.assign(static_cast<std::size_t>(overlaps.rows()), unmatched);
  std::vector<bool> taken(static_cast<std::size_t>(overlaps.cols()), false);
  for (const Pair& p : pairs) {
    auto& slot = cur.continuity[static_cast<std::size_t>(p.i)];
    if (slot != unmatched || taken[static_cast<std::size_t>(p.j)]) continue;
    slot = static_cast<std::size_t>(p.j);
    taken[static_cast<std::size_t>(p.j)] = true;
    const cplx ov = overlaps(p.i, p.j);
    if (std::abs(ov) > 1e-12) cur.states.col(p.j) *= std::conj(ov) / std::abs(ov);
  }
}

double relevant_gap_ising(const SpectrumSlice& slice, std::size_t n_spins) {
  const std::size_t target = 2 * n_spins;
  if (slice.size() <= target) {
    throw Error("relevant_gap_ising: slice holds " + std::to_string(slice.size()) +
                " states, need at least " + std::to_string(target + 1));
  }
  return slice.energies(static_cast<Eigen::Index>(target)) - slice.energies(0);
}

Matrix spin_reduced_density(const Vector& state, const Basis& basis) {
  const auto m = as_spin_boson(state, basis);
  return m * m.adjoint();
}

double mean_boson_number(const Vector& state, const Basis& basis) {
  if (static_cast<std::size_t>(state.size()) != basis.dim()) {
    throw Error("mean_boson_number: state does not match " + basis.describe());
  }
  if (basis.n_modes() == 0) return 0.0;
  double total = 0.0;
  for (std::size_t idx = 0; idx < basis.dim(); ++idx) {
    const double w = std::norm(state(static_cast<Eigen::Index>(idx)));
    if (w == 0.0) continue;
    int occ = 0;
    for (std::size_t r = 0; r < basis.n_modes(); ++r) occ += basis.occupation(idx, r);
    total += w * occ;
  }
  return total;
}

double correlator_O(const Vector& state, const Basis& basis, std::size_t n_spins) {
  return correlator_operator(basis, n_spins).expectation(state).real();
}

std::vector<double> target_overlaps(const SpectrumSlice& slice, const Matrix& target,
                                    const Basis& basis) {
  if (static_cast<std::size_t>(target.rows()) != basis.spin_dim()) {
    throw Error("target_overlaps: target must live in the spin sector");
  }
  std::vector<double> p(slice.size());
  for (std::size_t i = 0; i < slice.size(); ++i) {
    const Vector v = slice.states.col(static_cast<Eigen::Index>(i));
    p[i] = (target.adjoint() * as_spin_boson(v, basis)).squaredNorm();
  }
  return p;
}

TargetMatch match_target_state(const SpectrumSlice& slice, const Matrix& target,
                               const Basis& basis, const MatchOptions& options) {
  if (options.first_candidate >= slice.size()) {
    throw Error("match_target_state: slice holds no candidate states beyond index " +
                std::to_string(options.first_candidate));
  }
  const std::vector<double> p = target_overlaps(slice, target, basis);
  TargetMatch match;
  bool found = false;
  match.max_overlap = -1.0;
  for (std::size_t i = options.first_candidate; i < p.size(); ++i) {
    if (p[i] > match.max_overlap) {
      match.max_overlap = p[i];
      match.max_index = i;
    }
    if (!found && p[i] >= options.min_overlap) {
      match.index = i;
      match.overlap = p[i];
      found = true;
    }
  }
  if (!found) {
    match.index = match.max_index;
    match.overlap = match.max_overlap;
    match.ambiguous = true;
  }
  return match;
}

TargetMatch match_target_state(const SpectrumSlice& slice, const Vector& target,
                               const Basis& basis, const MatchOptions& options) {
  return match_target_state(slice, Matrix(target), basis, options);
}

double GroundManifold::population(const Vector& state) const {
  return (vectors.adjoint() * state).squaredNorm();
}

Matrix GroundManifold::spin_projector(const Basis& basis, double rank_tol) const {
  const auto sd = static_cast<Eigen::Index>(basis.spin_dim());
  Matrix sum = Matrix::Zero(sd, sd);
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
    sum += spin_reduced_density(vectors.col(c), basis);
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (sum + sum.adjoint()));
  const double top = eig.eigenvalues().maxCoeff();
  Matrix p = Matrix::Zero(sd, sd);
  for (Eigen::Index i = 0; i < sd; ++i) {
    if (eig.eigenvalues()(i) > rank_tol * top) {
      p += eig.eigenvectors().col(i) * eig.eigenvectors().col(i).adjoint();
    }
  }
  return p;
}

GroundManifold ground_manifold(const SpectrumSlice& slice, double tol) {
  if (slice.size() == 0) throw Error("ground_manifold: empty slice");
  GroundManifold m;
  for (std::size_t i = 0; i < slice.size(); ++i) {
    if (slice.energies(static_cast<Eigen::Index>(i)) - slice.energies(0) <= tol) {
      m.indices.push_back(i);
    }
  }
  m.vectors.resize(slice.states.rows(), static_cast<Eigen::Index>(m.indices.size()));
  for (std::size_t c = 0; c < m.indices.size(); ++c) {
    m.vectors.col(static_cast<Eigen::Index>(c)) =
        slice.states.col(static_cast<Eigen::Index>(m.indices[c]));
  }
  return m;
}

Label classify(double spin_fidelity, double boson_excess, const ClassifyOptions& options) {
  const bool spin_ok = spin_fidelity >= options.fidelity_threshold;
  const bool few_bosons = boson_excess < options.boson_threshold;
  if (spin_ok) return few_bosons ? Label::solution : Label::excited_solution;
  return few_bosons ? Label::spin_error : Label::other;
}

std::vector<StateProperties> classify_eigenstates(SpectrumSlice& slice,
                                                  const Matrix& spin_projector,
                                                  const Basis& basis,
                                                  const ClassifyOptions& options) {
  if (static_cast<std::size_t>(spin_projector.rows()) != basis.spin_dim()) {
    throw Error("classify_eigenstates: projector must act on the spin sector");
  }
  std::vector<StateProperties> props(slice.size());
  for (std::size_t i = 0; i < slice.size(); ++i) {
    const Vector v = slice.states.col(static_cast<Eigen::Index>(i));
    props[i].spin_fidelity = (spin_projector * spin_reduced_density(v, basis)).trace().real();
    props[i].mean_bosons = mean_boson_number(v, basis);
  }
  const double reference =
      options.boson_reference.value_or(props.empty() ? 0.0 : props.front().mean_bosons);
  slice.labels.resize(slice.size());
  for (std::size_t i = 0; i < slice.size(); ++i) {
    props[i].label = classify(props[i].spin_fidelity, props[i].mean_bosons - reference, options);
    slice.labels[i] = props[i].label;
  }
  return props;
}

double adiabatic_metric(const AffineHamiltonian& family, const SpectrumSlice& slice, double T,
                        double gap_tol) {
  if (!(T > 0.0)) throw Error("adiabatic_metric: T must be > 0");
  if (slice.size() < 2) throw Error("adiabatic_metric: slice needs two states");
  const double gap = slice.energies(1) - slice.energies(0);
  if (!(gap > gap_tol)) return std::numeric_limits<double>::infinity();
  const Vector v0 = slice.states.col(0);
  const Vector v1 = slice.states.col(1);
  const double m = std::abs(v1.dot(family.slope.matrix() * v0));
  return m / (T * gap * gap);
}

SymmetrySector SymmetrySector::ring(const Basis& basis, std::size_t reference_index) {
  const std::size_t n = basis.n_spins();
  const std::size_t nb = basis.n_modes();
  if (nb != 0 && nb != n) {
    throw Error("SymmetrySector::ring: needs no modes or one mode per spin");
  }
  if (reference_index >= basis.dim()) throw Error("SymmetrySector::ring: bad reference");

  struct Image {
    std::size_t index;
    double sign;
  };
  auto translate = [&](std::size_t idx) {
    BasisLabel l = basis.decode(idx);
    std::rotate(l.spins.rbegin(), l.spins.rbegin() + 1, l.spins.rend());
    if (nb) std::rotate(l.occupations.rbegin(), l.occupations.rbegin() + 1, l.occupations.rend());
    return Image{basis.encode(l), 1.0};
  };
  // Reflection i -> -i; mode r (between spins r-1 and r) -> mode 1-r with b -> -b.
  auto reflect = [&](std::size_t idx) {
    const BasisLabel l = basis.decode(idx);
    BasisLabel out = l;
    int total = 0;
    for (std::size_t i = 0; i < n; ++i) out.spins[i] = l.spins[(n - i) % n];
    for (std::size_t r = 0; r < nb; ++r) {
      out.occupations[r] = l.occupations[(n + 1 - r) % n];
      total += l.occupations[r];
    }
    return Image{basis.encode(out), total % 2 ? -1.0 : 1.0};
  };
  auto parity = [&](std::size_t idx) {
    const BasisLabel l = basis.decode(idx);
    int flips = 0;
    for (int s : l.spins) flips += s == 0 ? 1 : 0;
    for (int o : l.occupations) flips += o;
    return Image{idx, flips % 2 ? -1.0 : 1.0};
  };
  auto element = [&](std::size_t shifts, bool mirror, bool flip, std::size_t idx) {
    Image img{idx, 1.0};
    for (std::size_t t = 0; t < shifts; ++t) {
      const Image next = translate(img.index);
      img = {next.index, img.sign * next.sign};
    }
    if (mirror) {
      const Image next = reflect(img.index);
      img = {next.index, img.sign * next.sign};
    }
    if (flip) {
      const Image next = parity(img.index);
      img = {next.index, img.sign * next.sign};
    }
    return img;
  };

  struct Element {
    std::size_t shifts;
    bool mirror, flip;
    double character;
  };
  std::vector<Element> group;
  for (std::size_t t = 0; t < n; ++t) {
    for (int m = 0; m < 2; ++m) {
      for (int f = 0; f < 2; ++f) {
        const Image img = element(t, m != 0, f != 0, reference_index);
        if (img.index != reference_index) {
          throw Error("SymmetrySector::ring: reference state is not symmetric");
        }
        group.push_back({t, m != 0, f != 0, img.sign});
      }
    }
  }

  std::vector<Eigen::Triplet<double>> triplets;
  std::vector<bool> seen(basis.dim(), false);
  Eigen::Index column = 0;
  std::vector<std::pair<std::size_t, double>> accum;
  for (std::size_t x = 0; x < basis.dim(); ++x) {
    if (seen[x]) continue;
    accum.clear();
    for (const Element& g : group) {
      const Image img = element(g.shifts, g.mirror, g.flip, x);
      seen[img.index] = true;
      accum.emplace_back(img.index, g.character * img.sign);
    }
    std::sort(accum.begin(), accum.end());
    std::vector<std::pair<std::size_t, double>> merged;
    for (const auto& [idx, w] : accum) {
      if (!merged.empty() && merged.back().first == idx) {
        merged.back().second += w;
      } else {
        merged.emplace_back(idx, w);
      }
    }
    double norm2 = 0.0;
    for (const auto& [idx, w] : merged) norm2 += w * w;
    if (norm2 < 1e-12) continue;
    const double inv = 1.0 / std::sqrt(norm2);
    for (const auto& [idx, w] : merged) {
      if (w != 0.0) triplets.emplace_back(static_cast<Eigen::Index>(idx), column, w * inv);
    }
    ++column;
  }
  Eigen::SparseMatrix<double> q(static_cast<Eigen::Index>(basis.dim()), column);
  q.setFromTriplets(triplets.begin(), triplets.end());
  q.makeCompressed();
  return SymmetrySector(basis, std::move(q));
}

Matrix SymmetrySector::restrict(const SparseOperator& op) const {
  if (!(op.basis() == basis_)) throw Error("SymmetrySector::restrict: basis mismatch");
  const Eigen::SparseMatrix<cplx> qc = isometry_.cast<cplx>();
  const Eigen::SparseMatrix<cplx> hq = Eigen::SparseMatrix<cplx>(op.matrix()) * qc;
  return Matrix(Eigen::SparseMatrix<cplx>(qc.transpose()) * hq);
}

Vector SymmetrySector::lift(const Vector& coefficients) const {
  return isometry_.cast<cplx>() * coefficients;
}

Vector SymmetrySector::project(const Vector& state) const {
  return isometry_.transpose().cast<cplx>() * state;
}

SectorFamily::SectorFamily(const AffineHamiltonian& family, const SymmetrySector& sector)
    : family_(&family),
      sector_(sector),
      constant_(sector.restrict(family.constant)),
      slope_(sector.restrict(family.slope)) {}

SpectrumSlice SectorFamily::at(double s, double scale) const {
  Matrix h = scale * (constant_ + s * slope_);
  h = 0.5 * (h + h.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(h);
  SpectrumSlice slice;
  slice.s = s;
  slice.energies = eig.eigenvalues();
  slice.states = sector_.isometry().cast<cplx>() * eig.eigenvectors();
  slice.norm_bound =
      std::abs(scale) * (family_->constant.norm_bound() + std::abs(s) * family_->slope.norm_bound());
  slice.residuals.resize(slice.energies.size());
  const Matrix hv = scale * (family_->constant.matrix() * slice.states +
                             s * (family_->slope.matrix() * slice.states));
  for (Eigen::Index i = 0; i < slice.energies.size(); ++i) {
    slice.residuals(i) = (hv.col(i) - slice.energies(i) * slice.states.col(i)).norm();
  }
  fix_phases(slice);
  return slice;
}

SpectrumSlice sector_spectrum(const AffineHamiltonian& family, const SymmetrySector& sector,
                              double s, double scale) {
  return SectorFamily(family, sector).at(s, scale);
}

std::vector<BandSeparation> band_separation_scan(const AffineHamiltonian& family,
                                                 const SymmetrySector& sector,
                                                 const Matrix& spin_projector,
                                                 const std::vector<double>& grid,
                                                 const ClassifyOptions& options) {
  const SectorFamily restricted(family, sector);
  std::vector<BandSeparation> out;
  out.reserve(grid.size());
  for (double s : grid) {
    SpectrumSlice slice = restricted.at(s);
    classify_eigenstates(slice, spin_projector, sector.basis(), options);
    BandSeparation sep;
    sep.s = s;
    for (std::size_t i = 0; i < slice.size(); ++i) {
      if (slice.labels[i] != Label::excited_solution) continue;
      for (std::size_t j = 0; j < slice.size(); ++j) {
        if (slice.labels[j] != Label::spin_error) continue;
        sep.separation = std::min(sep.separation,
                                  std::abs(slice.energies(static_cast<Eigen::Index>(i)) -
                                           slice.energies(static_cast<Eigen::Index>(j))));
      }
    }
    out.push_back(sep);
  }
  return out;
}

namespace {

void hermitian_eigen_all(Matrix a, bool real, Eigen::VectorXd& w, Matrix& z) {
  const auto n = static_cast<lapack_int>(a.rows());
  w.resize(n);
  z.resize(n, n);
  if (n == 0) return;
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
  lapack_int found = 0;
  lapack_int info = 0;
  if (real) {
    Eigen::MatrixXd ar = a.real();
    Eigen::MatrixXd zr(n, n);
    info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'A', 'U', n, ar.data(), n, 0.0, 0.0, 0, 0, 0.0,
                          &found, w.data(), zr.data(), n, support.data());
    z = zr.cast<cplx>();
  } else {
    info = LAPACKE_zheevr(LAPACK_COL_MAJOR, 'V', 'A', 'U', n, a.data(), n, 0.0, 0.0, 0, 0, 0.0,
                          &found, w.data(), z.data(), n, support.data());
  }
  if (info != 0 || found != n) {
    throw ConvergenceError("RingBlocks: LAPACK zheevr returned info=" + std::to_string(info));
  }
}

// Index of the basis state translated by one site (spins and modes together).
std::size_t translate_index(const Basis& basis, std::size_t idx) {
  const std::size_t n = basis.n_spins();
  const std::size_t spins = idx % basis.spin_dim();
  std::size_t rest = idx / basis.spin_dim();
  const std::size_t top = (spins >> (n - 1)) & 1U;
  std::size_t out = ((spins << 1) & (basis.spin_dim() - 1)) | top;
  const std::size_t nb = basis.n_modes();
  if (nb == 0) return out;
  const std::size_t levels = basis.n_max() + 1;
  std::vector<std::size_t> occ(nb);
  for (std::size_t r = 0; r < nb; ++r) {
    occ[r] = rest % levels;
    rest /= levels;
  }
  std::size_t boson = 0;
  for (std::size_t r = nb; r-- > 0;) boson = boson * levels + occ[(r + nb - 1) % nb];
  return out + basis.spin_dim() * boson;
}

}  // namespace

double BlockSpectrum::energy(std::size_t i) const { return order_.at(i).energy; }

Vector BlockSpectrum::state(std::size_t i) const {
  const Entry& e = order_.at(i);
  Vector v = *isometries_[e.block] * vectors_[e.block].col(e.column);
  if (e.conjugate) v = v.conjugate().eval();
  Eigen::Index best = 0;
  v.cwiseAbs().maxCoeff(&best);
  const cplx pivot = v(best);
  if (std::abs(pivot) > 0.0) v *= std::conj(pivot) / std::abs(pivot);
  return v;
}

SpectrumSlice BlockSpectrum::lowest(std::size_t k) const {
  if (k > size()) throw Error("BlockSpectrum: requested more states than the space holds");
  SpectrumSlice slice;
  slice.s = s_;
  slice.energies.resize(static_cast<Eigen::Index>(k));
  const Eigen::Index rows = isometries_.empty() ? 0 : isometries_.front()->rows();
  slice.states.resize(rows, static_cast<Eigen::Index>(k));
  for (std::size_t i = 0; i < k; ++i) {
    slice.energies(static_cast<Eigen::Index>(i)) = order_[i].energy;
    slice.states.col(static_cast<Eigen::Index>(i)) = state(i);
  }
  return slice;
}

RingBlocks::RingBlocks(const AffineHamiltonian& family) : family_(&family) {
  const Basis& basis = family.basis();
  const std::size_t n = basis.n_spins();
  if (basis.n_modes() != 0 && basis.n_modes() != n) {
    throw Error("RingBlocks: needs no modes or one mode per spin");
  }
  const std::vector<int> sign = parity_signs(basis);
  std::vector<std::vector<std::size_t>> orbits;
  std::vector<bool> seen(basis.dim(), false);
  for (std::size_t x = 0; x < basis.dim(); ++x) {
    if (seen[x]) continue;
    std::vector<std::size_t> orbit{x};
    seen[x] = true;
    for (std::size_t y = translate_index(basis, x); y != x; y = translate_index(basis, y)) {
      orbit.push_back(y);
      seen[y] = true;
    }
    orbits.push_back(std::move(orbit));
  }
  const bool real = family.constant.is_real(0.0) && family.slope.is_real(0.0);
  const double pi = std::acos(-1.0);
  const Eigen::SparseMatrix<cplx> a(family.constant.matrix());
  const Eigen::SparseMatrix<cplx> b(family.slope.matrix());
  for (int parity : {1, -1}) {
    for (std::size_t k = 0; k < n; ++k) {
      const bool has_partner = (2 * k) % n != 0;
      if (real && has_partner && 2 * k > n) continue;  // conjugate of block n - k
      std::vector<Eigen::Triplet<cplx>> triplets;
      Eigen::Index column = 0;
      for (const auto& orbit : orbits) {
        if (sign[orbit.front()] != parity) continue;
        const std::size_t d = orbit.size();
        if ((k * d) % n != 0) continue;
        const double norm = 1.0 / std::sqrt(static_cast<double>(d));
        for (std::size_t j = 0; j < d; ++j) {
          const double phase = -2.0 * pi * static_cast<double>(j * k % n) / static_cast<double>(n);
          triplets.emplace_back(static_cast<Eigen::Index>(orbit[j]), column,
                                norm * cplx(std::cos(phase), std::sin(phase)));
        }
        ++column;
      }
      if (column == 0) continue;
      Eigen::SparseMatrix<cplx> q(static_cast<Eigen::Index>(basis.dim()), column);
      q.setFromTriplets(triplets.begin(), triplets.end());
      q.makeCompressed();
      const Eigen::SparseMatrix<cplx> qa = q.adjoint();
      constant_.push_back(Matrix(qa * (a * q)));
      slope_.push_back(Matrix(qa * (b * q)));
      isometries_.push_back(std::move(q));
      mirrored_.push_back(real && has_partner);
      real_.push_back(real && !has_partner);
    }
  }
}

std::size_t RingBlocks::dim() const {
  std::size_t total = 0;
  for (std::size_t b = 0; b < isometries_.size(); ++b) {
    total += static_cast<std::size_t>(isometries_[b].cols()) * (mirrored_[b] ? 2 : 1);
  }
  return total;
}

BlockSpectrum RingBlocks::at(double s, double scale) const {
  BlockSpectrum out;
  out.s_ = s;
  for (std::size_t b = 0; b < isometries_.size(); ++b) {
    Matrix h = scale * (constant_[b] + s * slope_[b]);
    h = 0.5 * (h + h.adjoint()).eval();
    Eigen::VectorXd w;
    Matrix z;
    hermitian_eigen_all(std::move(h), real_[b], w, z);
    out.isometries_.push_back(&isometries_[b]);
    out.vectors_.push_back(std::move(z));
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      out.order_.push_back({w(i), b, i, false});
      if (mirrored_[b]) out.order_.push_back({w(i), b, i, true});
    }
  }
  std::stable_sort(out.order_.begin(), out.order_.end(),
                   [](const BlockSpectrum::Entry& x, const BlockSpectrum::Entry& y) {
                     return x.energy < y.energy;
                   });
  return out;
}

SpectrumSlice RingBlocks::lowest(double s, std::size_t k, double scale) const {
  SpectrumSlice slice = at(s, scale).lowest(k);
  slice.norm_bound =
      std::abs(scale) * (family_->constant.norm_bound() + std::abs(s) * family_->slope.norm_bound());
  const Matrix hv = scale * (family_->constant.matrix() * slice.states +
                             s * (family_->slope.matrix() * slice.states));
  slice.residuals.resize(slice.energies.size());
  for (Eigen::Index i = 0; i < slice.energies.size(); ++i) {
    slice.residuals(i) = (hv.col(i) - slice.energies(i) * slice.states.col(i)).norm();
  }
  return slice;
}

TargetMatch match_target_state(const BlockSpectrum& spectrum, const Matrix& target,
                               const Basis& basis, const MatchOptions& options) {
  if (static_cast<std::size_t>(target.rows()) != basis.spin_dim()) {
    throw Error("match_target_state: target must live in the spin sector");
  }
  if (options.first_candidate >= spectrum.size()) {
    throw Error("match_target_state: spectrum holds no candidate states beyond index " +
                std::to_string(options.first_candidate));
  }
  TargetMatch match;
  match.max_overlap = -1.0;
  for (std::size_t i = options.first_candidate; i < spectrum.size(); ++i) {
    const Vector v = spectrum.state(i);
    const double p = (target.adjoint() * as_spin_boson(v, basis)).squaredNorm();
    if (p > match.max_overlap) {
      match.max_overlap = p;
      match.max_index = i;
    }
    if (p >= options.min_overlap) {
      match.index = i;
      match.overlap = p;
      return match;
    }
  }
  match.index = match.max_index;
  match.overlap = match.max_overlap;
  match.ambiguous = true;
  return match;
}

}  // namespace sbqa
