#pragma once

// Time-dependent Schroedinger evolution along a passage schedule.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sbqa/passage.hpp"

namespace sbqa {

struct IntegratorConfig {
  std::size_t steps_per_unit_time = 200;
  bool norm_renormalize = true;
  /// Abort when |norm - 1| after a single step exceeds this.
  double max_step_drift = 1e-6;
};

struct PopulationSample {
  double t = 0.0;
  double solution = 0.0;
  double excited_solution = 0.0;
  double spin_error = 0.0;
  double other = 0.0;
};

struct EvolutionResult {
  double T = 0.0;
  Vector final_state;
  /// 1 - tr(P_spin rho_spin(T)), P_spin the spin support of the final manifold.
  double p_error = 0.0;
  /// 1 - population inside the final ground manifold itself.
  double p_manifold_error = 0.0;
  /// Largest single-step |norm - 1| before renormalization.
  double max_step_drift = 0.0;
  /// Sum of single-step |norm - 1| divided by T.
  double drift_per_unit_time = 0.0;
  std::size_t steps = 0;
  std::vector<PopulationSample> trace;
  std::vector<std::string> flags;
};

/// Everything a run needs that does not depend on T: basis, affine family,
/// initial state and final ground manifold.
class PassageSystem {
 public:
  explicit PassageSystem(PassageSpec spec, double degeneracy_tol = 1e-8);

  const PassageSpec& spec() const { return spec_; }
  const Basis& basis() const { return basis_; }
  const AffineHamiltonian& family() const { return family_; }
  const Vector& initial_state() const { return initial_; }
  double initial_energy() const { return initial_energy_; }
  const GroundManifold& final_manifold() const { return manifold_; }
  const Matrix& final_spin_projector() const { return spin_projector_; }

  /// dpsi/dt at time t of a run of total time T.
  Vector derivative(double t, double T, const Vector& psi) const;
  /// Hamiltonian c(lambda) * H(s(lambda)).
  SparseOperator hamiltonian(double lambda) const;

  double p_error(const Vector& psi) const;
  double p_manifold_error(const Vector& psi) const;
  /// Diagnostics gathered during construction (e.g. unexpected manifold size).
  const std::vector<std::string>& flags() const { return flags_; }

 private:
  PassageSpec spec_;
  Basis basis_;
  AffineHamiltonian family_;
  Vector initial_;
  double initial_energy_ = 0.0;
  GroundManifold manifold_;
  Matrix spin_projector_;
  std::vector<std::string> flags_;
};

/// Fock truncation used when none is given: 4 for omega >= 3, else 6.
std::size_t default_n_max(double omega);

Basis passage_basis(const PassageSpec& spec);
AffineHamiltonian passage_family(const PassageSpec& spec, const Basis& basis);

/// Ground state of H(lambda=0), checked against |all down> (x) |vacuum>.
Vector initial_state(const PassageSpec& spec, const Basis& basis);

struct TraceOptions {
  std::size_t samples = 101;
  ClassifyOptions classify;
};

/// Fixed-step RK4 from t=0 to T.  With `trace`, populations of the labeled
/// instantaneous eigenstate groups are recorded at evenly spaced samples.
EvolutionResult run_passage(const PassageSystem& system, double T, const IntegratorConfig& cfg,
                            const std::optional<TraceOptions>& trace = std::nullopt);

EvolutionResult run_passage(const PassageSpec& spec, double T, const IntegratorConfig& cfg);

std::vector<PopulationSample> population_trace(const PassageSystem& system, double T,
                                               const IntegratorConfig& cfg,
                                               const TraceOptions& options = {});

struct SweepRow {
  double omega = 0.0;
  double T = 0.0;
  double p_error = 0.0;
  double p_manifold_error = 0.0;
  std::size_t n_max = 0;
  std::size_t steps_per_unit = 0;
  std::vector<std::string> flags;
};

/// One row per T, ordered by (omega, T); failures are flagged per row.
std::vector<SweepRow> sweep(const PassageSystem& system, const std::vector<double>& T_list,
                            const IntegratorConfig& cfg, std::size_t threads = 0);

/// Orders rows by (omega, T), stable for repeated T.
void sort_rows(std::vector<SweepRow>& rows);

using DenseHamiltonian = std::function<Matrix(double t)>;

/// Reference evolution: product of exact exponentials of H at the midpoints
/// of n_slices equal time slices.  dim <= 1024.
Vector oracle_evolve(const DenseHamiltonian& hamiltonian, const Vector& psi0, double T,
                     std::size_t n_slices);

/// Richardson extrapolation of oracle_evolve over n, 2n and 4n slices.  The
/// midpoint product is time-symmetric, so its error is even in the slice
/// width and the combination is sixth order.
Vector oracle_evolve_extrapolated(const DenseHamiltonian& hamiltonian, const Vector& psi0,
                                  double T, std::size_t n_slices);

}  // namespace sbqa
