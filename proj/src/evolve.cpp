#include "sbqa/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "parallel.hpp"

namespace sbqa {

namespace {

EigenOptions split_dense() {
  EigenOptions opts;
  opts.split_parity = true;
  return opts;
}

std::size_t step_count(double T, std::size_t steps_per_unit) {
  const double raw = T * static_cast<double>(steps_per_unit);
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(raw - 1e-9)));
}

double clamp_unit(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

std::size_t default_n_max(double omega) { return omega >= 3.0 ? 4 : 6; }

Basis passage_basis(const PassageSpec& spec) {
  if (spec.spinboson()) return build_basis(spec.n_spins, spec.n_spins, spec.n_max);
  return build_basis(spec.n_spins, 0, 0);
}

AffineHamiltonian passage_family(const PassageSpec& spec, const Basis& basis) {
  if (spec.spinboson()) return spinboson_family(spec.n_spins, spec.omega, basis);
  return ising_family(spec.n_spins, basis);
}

Vector initial_state(const PassageSpec& spec, const Basis& basis) {
  const AffineHamiltonian family = passage_family(spec, basis);
  const ScheduleValue v = schedule_eval(spec, 0.0);
  const SparseOperator h = family.at(v.s).scaled(v.c);
  SpectrumSlice slice = eigen_lowest(h, std::min<std::size_t>(2, basis.dim()), split_dense());
  if (slice.size() > 1 && !(slice.energies(1) - slice.energies(0) > 1e-8)) {
    throw Error("initial_state: ground state of H(0) is degenerate");
  }
  Vector psi = slice.states.col(0);
  const double overlap = std::norm(psi(0));
  if (!(overlap >= 1.0 - 1e-10)) {
    std::ostringstream msg;
    msg << "initial_state: diagonalized ground state differs from |down...down, vacuum> "
        << "(overlap " << overlap << ")";
    throw Error(msg.str());
  }
  return psi;
}

PassageSystem::PassageSystem(PassageSpec spec, double degeneracy_tol)
    : spec_(std::move(spec)),
      basis_(passage_basis(spec_)),
      family_(passage_family(spec_, basis_)) {
  spec_.validate();
  initial_ = sbqa::initial_state(spec_, basis_);
  initial_energy_ = family_.constant.expectation(initial_).real() * spec_.scale(0.0);
  const SparseOperator final_h = hamiltonian(1.0);
  const std::size_t k = std::min(basis_.dim(), 2 * spec_.n_spins + 4);
  const SpectrumSlice slice = eigen_lowest(final_h, k, split_dense());
  manifold_ = ground_manifold(slice, degeneracy_tol);
  if (manifold_.size() == k) {
    flags_.push_back("final manifold fills all computed levels");
  }
  if (manifold_.size() != 2 * spec_.n_spins) {
    flags_.push_back("final manifold size " + std::to_string(manifold_.size()) + " != 2N");
  }
  spin_projector_ = manifold_.spin_projector(basis_);
}

SparseOperator PassageSystem::hamiltonian(double lambda) const {
  const ScheduleValue v = schedule_eval(spec_, lambda);
  return family_.at(v.s).scaled(v.c);
}

Vector PassageSystem::derivative(double t, double T, const Vector& psi) const {
  const ScheduleValue v = schedule_eval(spec_, clamp_unit(t / T));
  return cplx(0.0, -1.0) * family_.apply(v.s, v.c, psi);
}

double PassageSystem::p_error(const Vector& psi) const {
  const Matrix rho = spin_reduced_density(psi, basis_);
  return clamp_unit(1.0 - (spin_projector_ * rho).trace().real() / psi.squaredNorm());
}

double PassageSystem::p_manifold_error(const Vector& psi) const {
  return clamp_unit(1.0 - manifold_.population(psi) / psi.squaredNorm());
}

EvolutionResult run_passage(const PassageSystem& system, double T, const IntegratorConfig& cfg,
                            const std::optional<TraceOptions>& trace) {
  if (!(T > 0.0) || !std::isfinite(T)) throw Error("run_passage: T must be > 0");
  if (cfg.steps_per_unit_time == 0) throw Error("run_passage: steps_per_unit_time must be > 0");
  EvolutionResult result;
  result.T = T;
  result.flags = system.flags();
  const std::size_t steps = step_count(T, cfg.steps_per_unit_time);
  const double h = T / static_cast<double>(steps);
  result.steps = steps;

  std::vector<std::size_t> sample_steps;
  std::optional<SectorFamily> sector;
  if (trace) {
    if (trace->samples < 2) throw Error("run_passage: need at least two trace samples");
    for (std::size_t j = 0; j < trace->samples; ++j) {
      sample_steps.push_back(static_cast<std::size_t>(std::llround(
          static_cast<double>(j) * static_cast<double>(steps) /
          static_cast<double>(trace->samples - 1))));
    }
    sector.emplace(system.family(), SymmetrySector::ring(system.basis()));
  }
  std::size_t next_sample = 0;
  auto record = [&](std::size_t step, const Vector& psi) {
    while (next_sample < sample_steps.size() && sample_steps[next_sample] == step) {
      const double t = static_cast<double>(step) * h;
      const double lambda = clamp_unit(t / T);
      const ScheduleValue v = schedule_eval(system.spec(), lambda);
      SpectrumSlice slice = sector->at(v.s, v.c);
      classify_eigenstates(slice, system.final_spin_projector(), system.basis(),
                           trace->classify);
      PopulationSample sample;
      sample.t = t;
      const Eigen::VectorXd pops = (slice.states.adjoint() * psi).cwiseAbs2();
      for (std::size_t i = 0; i < slice.size(); ++i) {
        const double p = pops(static_cast<Eigen::Index>(i));
        switch (slice.labels[i]) {
          case Label::solution:
            sample.solution += p;
            break;
          case Label::excited_solution:
            sample.excited_solution += p;
            break;
          case Label::spin_error:
            sample.spin_error += p;
            break;
          case Label::other:
            sample.other += p;
            break;
        }
      }
      result.trace.push_back(sample);
      ++next_sample;
    }
  };

  Vector psi = system.initial_state();
  if (trace) record(0, psi);
  double drift_sum = 0.0;
  for (std::size_t n = 0; n < steps; ++n) {
    const double t = static_cast<double>(n) * h;
    const Vector k1 = system.derivative(t, T, psi);
    const Vector k2 = system.derivative(t + 0.5 * h, T, psi + (0.5 * h) * k1);
    const Vector k3 = system.derivative(t + 0.5 * h, T, psi + (0.5 * h) * k2);
    const Vector k4 = system.derivative(t + h, T, psi + h * k3);
    psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double norm = psi.norm();
    const double drift = std::abs(norm - 1.0);
    drift_sum += drift;
    result.max_step_drift = std::max(result.max_step_drift, drift);
    if (!(drift <= cfg.max_step_drift)) {
      std::ostringstream msg;
      msg << "run_passage: norm drift " << drift << " > " << cfg.max_step_drift << " at t = "
          << t + h << " (T = " << T << ", step " << h << ")";
      throw ConvergenceError(msg.str());
    }
    if (cfg.norm_renormalize) psi /= norm;
    if (trace) record(n + 1, psi);
  }
  result.drift_per_unit_time = drift_sum / T;
  result.p_error = system.p_error(psi);
  result.p_manifold_error = system.p_manifold_error(psi);
  result.final_state = std::move(psi);
  return result;
}

EvolutionResult run_passage(const PassageSpec& spec, double T, const IntegratorConfig& cfg) {
  return run_passage(PassageSystem(spec), T, cfg);
}

std::vector<PopulationSample> population_trace(const PassageSystem& system, double T,
                                               const IntegratorConfig& cfg,
                                               const TraceOptions& options) {
  return run_passage(system, T, cfg, options).trace;
}

void sort_rows(std::vector<SweepRow>& rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    if (a.omega != b.omega) return a.omega < b.omega;
    return a.T < b.T;
  });
}

std::vector<SweepRow> sweep(const PassageSystem& system, const std::vector<double>& T_list,
                            const IntegratorConfig& cfg, std::size_t threads) {
  if (T_list.empty()) throw Error("sweep: empty T list");
  std::vector<SweepRow> rows(T_list.size());
  detail::parallel_for(T_list.size(), threads, [&](std::size_t i) {
    SweepRow& row = rows[i];
    row.omega = system.spec().spinboson() ? system.spec().omega : 0.0;
    row.T = T_list[i];
    row.n_max = system.spec().n_max;
    row.steps_per_unit = cfg.steps_per_unit_time;
    try {
      const EvolutionResult r = run_passage(system, T_list[i], cfg);
      row.p_error = r.p_error;
      row.p_manifold_error = r.p_manifold_error;
      row.flags = r.flags;
    } catch (const std::exception& e) {
      row.p_error = std::numeric_limits<double>::quiet_NaN();
      row.p_manifold_error = std::numeric_limits<double>::quiet_NaN();
      row.flags.push_back(std::string("error: ") + e.what());
    }
  });
  sort_rows(rows);
  return rows;
}

Vector oracle_evolve(const DenseHamiltonian& hamiltonian, const Vector& psi0, double T,
                     std::size_t n_slices) {
  if (psi0.size() > 1024) {
    throw Error("oracle_evolve: dimension too large for the dense oracle (" +
                std::to_string(psi0.size()) + " > 1024)");
  }
  if (n_slices == 0) throw Error("oracle_evolve: need at least one slice");
  const double dt = T / static_cast<double>(n_slices);
  Vector psi = psi0;
  for (std::size_t j = 0; j < n_slices; ++j) {
    const double t_mid = (static_cast<double>(j) + 0.5) * dt;
    Matrix h = hamiltonian(t_mid);
    if (h.rows() != psi.size() || h.cols() != psi.size()) {
      throw Error("oracle_evolve: Hamiltonian has the wrong shape");
    }
    h = 0.5 * (h + h.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> eig(h);
    Vector coeff = eig.eigenvectors().adjoint() * psi;
    for (Eigen::Index i = 0; i < coeff.size(); ++i) {
      coeff(i) *= std::exp(cplx(0.0, -eig.eigenvalues()(i) * dt));
    }
    psi = eig.eigenvectors() * coeff;
  }
  return psi;
}

Vector oracle_evolve_extrapolated(const DenseHamiltonian& hamiltonian, const Vector& psi0,
                                  double T, std::size_t n_slices) {
  const Vector a = oracle_evolve(hamiltonian, psi0, T, n_slices);
  const Vector b = oracle_evolve(hamiltonian, psi0, T, 2 * n_slices);
  const Vector c = oracle_evolve(hamiltonian, psi0, T, 4 * n_slices);
  const Vector out = (64.0 * c - 20.0 * b + a) / 45.0;
  return out / out.norm();
}

}  // namespace sbqa
