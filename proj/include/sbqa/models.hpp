#pragma once

// Hamiltonians for the annealing comparison.  Energies are in units of the
// qubit gap omega_0 = 1.
//
//   H_I(s)  = s * sum_i sx_i sx_{i+1} + (1 - s)/2 * sum_i sz_i
//   H_SB(s) = s*sqrt(w) * sum_i sx_i (b_i - b_{i+1} + h.c.)
//             + (1 - s)/2 * sum_i sz_i + w * sum_r n_r
//
// Both use ring closure (site N+1 == site 1).

#include <cstddef>

#include "sbqa/hilbert.hpp"

namespace sbqa {

/// H(s) = constant + s * slope.  slope is also dH/ds.
struct AffineHamiltonian {
  SparseOperator constant;
  SparseOperator slope;

  SparseOperator at(double s) const;
  const Basis& basis() const { return constant.basis(); }
  /// (scale * H(s)) v without assembling H(s).
  Vector apply(double s, double scale, const Vector& v) const;
};

struct SpinBosonParams {
  std::size_t n_spins = 0;
  Matrix couplings;                 // g[i][r], n_spins x n_modes
  Eigen::VectorXd longitudinal;     // B_i
  double qubit_gap = 1.0;           // omega_0
  Eigen::VectorXd mode_frequencies; // omega_r

  std::size_t n_modes() const { return static_cast<std::size_t>(couplings.cols()); }
  void validate() const;
};

/// Ring coupling pattern of the spin-boson passage at coupling scale s:
/// g[i][i] = s*sqrt(w), g[i][i+1 mod N] = -s*sqrt(w), uniform mode frequency w.
/// Each mode couples two neighbouring spins with opposite signs.
SpinBosonParams ring_params(std::size_t n_spins, double omega, double scale = 1.0);

/// Frustrated antiferromagnet H_0 = sum_i sx_i sx_{i+1} on an odd ring.
SparseOperator target_afm(std::size_t n_spins, const Basis& basis);

/// sum_i sx_i sx_{i+1} / (N - 2)
SparseOperator correlator_operator(const Basis& basis, std::size_t n_spins);

SparseOperator ising_passage(std::size_t n_spins, double s, const Basis& basis);
SparseOperator spinboson_passage(std::size_t n_spins, double omega, double s,
                                 const Basis& basis);
SparseOperator generic_spinboson(const SpinBosonParams& p, const Basis& basis);

AffineHamiltonian ising_family(std::size_t n_spins, const Basis& basis);
AffineHamiltonian spinboson_family(std::size_t n_spins, double omega, const Basis& basis);

/// Polaron-frame couplings J_ij = -sum_r Re(g_ir conj(g_jr) / w_r), i != j.
/// The diagonal (a constant energy shift, since sx^2 = 1) is returned as zero.
Eigen::MatrixXd effective_coupling(const SpinBosonParams& p);

/// Scalar prefactor of the polaron-frame transverse field for the ring
/// passage, (1-s)/2 * exp(-2 sum_r |g_ir/w_r|^2) = (1-s)/2 * exp(-4 s^2 / w).
/// Diagnostic only; the operator-valued dressing factor is not evaluated.
double effective_field_prefactor(double s, double omega);

/// Analytic ground energy of H_0: -(N - 2).
double target_ground_energy(std::size_t n_spins);

}  // namespace sbqa
