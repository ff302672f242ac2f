#pragma once

// Tabulated schedules along the linear passages and the fair
// reparameterization that equalizes ground-state correlations and relevant
// gaps between the Ising and spin-boson models.

#include <cstddef>
#include <string>
#include <vector>

#include "sbqa/spectrum.hpp"

namespace sbqa {

/// Piecewise-linear function on an ascending grid; queries are clamped.
class Curve {
 public:
  Curve() = default;
  Curve(std::vector<double> grid, std::vector<double> values);

  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return grid_.size(); }
  double operator()(double x) const;

 private:
  std::vector<double> grid_;
  std::vector<double> values_;
};

/// Uniform grid with n points on [0, 1], endpoints exact.
std::vector<double> uniform_grid(std::size_t n);

enum class PassageKind { ising_linear, spinboson_linear, ising_fair, spinboson_fair };

std::string to_string(PassageKind kind);
PassageKind passage_kind_from_string(const std::string& name);

struct Provenance {
  std::size_t grid_points = 0;
  double monotone_tol = 1e-6;
  double degeneracy_tol = 1e-8;
  double min_overlap = 0.5;
};

struct PassageSpec {
  static constexpr int kVersion = 1;

  PassageKind kind = PassageKind::ising_linear;
  std::size_t n_spins = 3;
  double omega = 1.0;
  std::size_t n_max = 0;
  Curve schedule;  // s(lambda)
  Curve scale;     // c(lambda)
  std::vector<std::string> flags;
  Provenance provenance;

  bool spinboson() const;
  /// Throws unless s(0)=0, s(1)=1, s nondecreasing and c > 0.
  void validate() const;

  std::string to_json() const;
  static PassageSpec from_json(const std::string& text);
};

/// s(lambda) = lambda, c = 1.
PassageSpec linear_spec(PassageKind kind, std::size_t n_spins, double omega, std::size_t n_max);

struct ScheduleValue {
  double s;
  double c;
};

ScheduleValue schedule_eval(const PassageSpec& spec, double lambda);

enum class ModelKind { ising, spinboson };
enum class Observable { correlator, relevant_gap };

struct TabulateParams {
  std::size_t n_spins = 3;
  double omega = 1.0;
  std::size_t n_max = 4;
  /// Worker threads over grid points; 0 = hardware concurrency.
  std::size_t threads = 0;
};

/// Observable on the instantaneous ground state (correlator) or spectrum
/// (relevant gap, Ising rule E_2N - E_0) of the linear passage.
Curve tabulate(ModelKind model, Observable observable, const std::vector<double>& grid,
               const TabulateParams& params);

/// Preimage of y under a monotone curve.  Violations below tol are
/// flattened; out-of-range y is clamped and a warning appended.
double invert_monotone(const Curve& curve, double y, std::vector<std::string>* warnings = nullptr,
                       double tol = 1e-6);

struct FairnessRow {
  double lambda = 0.0;
  double s_sb = 0.0;
  double c = 1.0;
  double O_sb = 0.0;
  double O_ising = 0.0;
  double gap_sb = 0.0;
  double gap_ising = 0.0;
  std::size_t target_index = 0;
  double target_overlap = 0.0;
  bool ambiguous = false;
};

struct FairPair {
  PassageSpec spinboson;
  PassageSpec ising;
  std::vector<FairnessRow> rows;
};

struct FairOptions {
  std::size_t grid_points = 201;
  double monotone_tol = 1e-6;
  double degeneracy_tol = 1e-8;
  double min_overlap = 0.5;
  std::size_t threads = 0;
};

FairPair build_fair_pair(std::size_t n_spins, double omega, std::size_t n_max,
                         const FairOptions& options = {});

/// Complete spectrum of the Ising passage Hamiltonian at s.
SpectrumSlice ising_spectrum(std::size_t n_spins, double s);

struct RelevantState {
  double ground_energy = 0.0;
  double correlator = 0.0;
  double gap = 0.0;
  TargetMatch match;
};

/// Lowest spin-boson state outside the ground manifold that carries the Ising
/// relevant state `target`, searched over a complete spectrum.
RelevantState spinboson_relevant(const BlockSpectrum& spectrum, const Basis& basis,
                                 std::size_t n_spins, const Matrix& target, double min_overlap);

/// Orthonormal columns spanning the Ising eigenspace that contains level E_2N.
Matrix ising_target_space(const SpectrumSlice& ising, std::size_t n_spins,
                          double degeneracy_tol = 1e-8);

}  // namespace sbqa
