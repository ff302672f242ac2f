#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "sbqa/hilbert.hpp"
#include "sbqa/models.hpp"

namespace sbqa {

enum class EigenMethod { automatic, dense, iterative };

struct EigenOptions {
  EigenMethod method = EigenMethod::automatic;
  /// automatic: dense LAPACK for dim <= dense_max_dim, block Lanczos above.
  std::size_t dense_max_dim = 4096;
  /// Residual tolerance relative to the norm bound of H.
  double residual_tol = 1e-9;
  /// Extra block vectors beyond k for the iterative solver.
  std::size_t guard_vectors = 8;
  std::size_t max_restarts = 400;
  /// Dense path only: diagonalize the two blocks of the conserved parity
  /// prod(sz) * (-1)^(sum n) separately.  Throws if H does not conserve it.
  bool split_parity = false;
  std::uint64_t seed = 0x5b0a5eedULL;
};

enum class Label { solution, excited_solution, spin_error, other };

std::string to_string(Label label);

struct SpectrumSlice {
  double s = std::numeric_limits<double>::quiet_NaN();
  Eigen::VectorXd energies;  // ascending
  Matrix states;             // one eigenvector per column
  Eigen::VectorXd residuals; // ||H v - E v||
  double norm_bound = 0.0;
  std::vector<Label> labels;
  /// continuity[i] = index in this slice that continues state i of the
  /// previous slice (filled by track_continuity).
  std::vector<std::size_t> continuity;

  std::size_t size() const { return static_cast<std::size_t>(energies.size()); }
};

/// Lowest k eigenpairs of a Hermitian operator.  Throws ConvergenceError
/// (with residual diagnostics) rather than returning unconverged pairs.
SpectrumSlice eigen_lowest(const SparseOperator& h, std::size_t k,
                           const EigenOptions& options = {});

/// +1 or -1 per basis index: (-1)^(up spins + total bosons).
std::vector<int> parity_signs(const Basis& basis);

/// Make the largest-magnitude component of every eigenvector real positive.
void fix_phases(SpectrumSlice& slice);

/// Maximal-overlap assignment of cur's states to prev's states; rotates the
/// phase of each matched state so that <prev_i|cur_j> is real positive.
/// Energies stay sorted; the assignment is stored in cur.continuity.
void track_continuity(const SpectrumSlice& prev, SpectrumSlice& cur);

/// E_{2N} - E_0
double relevant_gap_ising(const SpectrumSlice& slice, std::size_t n_spins);

/// rho = tr_b |psi><psi|, a 2^N x 2^N matrix.
Matrix spin_reduced_density(const Vector& state, const Basis& basis);

/// Total mean occupation sum_r <n_r>.
double mean_boson_number(const Vector& state, const Basis& basis);

double correlator_O(const Vector& state, const Basis& basis, std::size_t n_spins);

struct MatchOptions {
  /// Candidates are states with index >= first_candidate (outside the
  /// ground manifold, normally 2N).
  std::size_t first_candidate = 0;
  /// Lowest-energy candidate with p_i >= min_overlap wins.
  double min_overlap = 0.5;
};

struct TargetMatch {
  std::size_t index = 0;
  double overlap = 0.0;
  std::size_t max_index = 0;
  double max_overlap = 0.0;
  bool ambiguous = false;  // no candidate reached min_overlap
};

/// p_i = tr(P_target rho_i) where P_target projects onto the span of the
/// columns of `target` (orthonormal spin-sector vectors).
std::vector<double> target_overlaps(const SpectrumSlice& slice, const Matrix& target,
                                    const Basis& basis);

TargetMatch match_target_state(const SpectrumSlice& slice, const Matrix& target,
                               const Basis& basis, const MatchOptions& options);
TargetMatch match_target_state(const SpectrumSlice& slice, const Vector& target,
                               const Basis& basis, const MatchOptions& options);

struct GroundManifold {
  std::vector<std::size_t> indices;
  Matrix vectors;  // columns span the manifold

  std::size_t size() const { return indices.size(); }
  Matrix projector() const { return vectors * vectors.adjoint(); }
  /// Population of `state` inside the manifold.
  double population(const Vector& state) const;
  /// Projector onto the spin-sector support of the manifold.
  Matrix spin_projector(const Basis& basis, double rank_tol = 1e-6) const;
};

GroundManifold ground_manifold(const SpectrumSlice& slice, double tol = 1e-8);

struct ClassifyOptions {
  double fidelity_threshold = 0.9;
  double boson_threshold = 0.5;
  /// Occupation subtracted before applying boson_threshold; defaults to the
  /// mean occupation of the slice's lowest state.
  std::optional<double> boson_reference;
};

struct StateProperties {
  Label label = Label::other;
  double spin_fidelity = 0.0;
  double mean_bosons = 0.0;
};

Label classify(double spin_fidelity, double boson_excess, const ClassifyOptions& options);

/// Labels every state of the slice (and stores them in slice.labels).
std::vector<StateProperties> classify_eigenstates(SpectrumSlice& slice,
                                                  const Matrix& spin_projector,
                                                  const Basis& basis,
                                                  const ClassifyOptions& options = {});

/// |<psi_1| dH/ds |psi_0>| / (T * (E_1 - E_0)^2); +inf when the gap closes.
double adiabatic_metric(const AffineHamiltonian& family, const SpectrumSlice& slice, double T,
                        double gap_tol = 1e-12);

/// Exact invariant subspace of the ring models generated by translation,
/// reflection and parity, in the symmetry sector of a reference basis state.
/// The isometry columns are symmetrized orbit vectors.
class SymmetrySector {
 public:
  static SymmetrySector ring(const Basis& basis, std::size_t reference_index = 0);

  const Basis& basis() const { return basis_; }
  std::size_t dim() const { return static_cast<std::size_t>(isometry_.cols()); }
  const Eigen::SparseMatrix<double>& isometry() const { return isometry_; }

  Matrix restrict(const SparseOperator& op) const;
  Vector lift(const Vector& coefficients) const;
  Vector project(const Vector& state) const;

 private:
  SymmetrySector(Basis basis, Eigen::SparseMatrix<double> isometry)
      : basis_(std::move(basis)), isometry_(std::move(isometry)) {}

  Basis basis_;
  Eigen::SparseMatrix<double> isometry_;
};

/// An affine family restricted once to a symmetry sector.
class SectorFamily {
 public:
  SectorFamily(const AffineHamiltonian& family, const SymmetrySector& sector);

  const SymmetrySector& sector() const { return sector_; }
  std::size_t dim() const { return sector_.dim(); }
  /// Full sector spectrum of scale * H(s), eigenvectors lifted to the full
  /// space, residuals measured against the full operator.
  SpectrumSlice at(double s, double scale = 1.0) const;

 private:
  const AffineHamiltonian* family_;
  SymmetrySector sector_;
  Matrix constant_;
  Matrix slope_;
};

/// Low-lying spectrum of family.at(s) restricted to a symmetry sector,
/// with eigenvectors lifted back to the full space.
SpectrumSlice sector_spectrum(const AffineHamiltonian& family, const SymmetrySector& sector,
                              double s, double scale = 1.0);

/// Complete spectrum of one H(s), stored per symmetry block.  States are
/// indexed in ascending energy and lifted to the full space on demand.
class BlockSpectrum {
 public:
  std::size_t size() const { return order_.size(); }
  double energy(std::size_t i) const;
  Vector state(std::size_t i) const;
  /// Lowest k states as a regular slice (residuals filled by the caller).
  SpectrumSlice lowest(std::size_t k) const;

 private:
  friend class RingBlocks;
  struct Entry {
    double energy;
    std::size_t block;
    Eigen::Index column;
    bool conjugate;
  };
  std::vector<const Eigen::SparseMatrix<cplx>*> isometries_;
  std::vector<Matrix> vectors_;
  std::vector<Entry> order_;
  double s_ = 0.0;
};

/// Exact block decomposition of a ring family by the conserved parity and
/// the lattice momentum of joint spin and mode translation.
class RingBlocks {
 public:
  explicit RingBlocks(const AffineHamiltonian& family);

  std::size_t block_count() const { return isometries_.size(); }
  std::size_t dim() const;
  /// Full spectrum of scale * H(s).
  BlockSpectrum at(double s, double scale = 1.0) const;
  /// Lowest k eigenpairs of scale * H(s) with residuals against the full operator.
  SpectrumSlice lowest(double s, std::size_t k, double scale = 1.0) const;

 private:
  const AffineHamiltonian* family_;
  std::vector<Eigen::SparseMatrix<cplx>> isometries_;
  std::vector<Matrix> constant_;
  std::vector<Matrix> slope_;
  /// Block k also stands for momentum -k: its eigenvectors are the complex
  /// conjugates (real Hamiltonians only).
  std::vector<bool> mirrored_;
  /// Block matrix is real symmetric (zero or half-turn momentum).
  std::vector<bool> real_;
};

/// match_target_state over a complete block spectrum; states are lifted only
/// until the first qualifying candidate, so max_index/max_overlap cover the
/// scanned states.
TargetMatch match_target_state(const BlockSpectrum& spectrum, const Matrix& target,
                               const Basis& basis, const MatchOptions& options);

struct BandSeparation {
  double s = std::numeric_limits<double>::quiet_NaN();
  double separation = std::numeric_limits<double>::infinity();
};

/// Scan of the minimum energy distance between excited_solution and
/// spin_error states of the dynamical sector along a grid of s.
std::vector<BandSeparation> band_separation_scan(const AffineHamiltonian& family,
                                                 const SymmetrySector& sector,
                                                 const Matrix& spin_projector,
                                                 const std::vector<double>& grid,
                                                 const ClassifyOptions& options = {});

}  // namespace sbqa
