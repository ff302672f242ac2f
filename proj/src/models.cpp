#include "sbqa/models.hpp"

#include <cmath>
#include <string>

namespace sbqa {

namespace {

void require_spins(const Basis& basis, std::size_t n_spins, const char* what) {
  if (basis.n_spins() != n_spins) {
    throw Error(std::string(what) + ": basis holds " + std::to_string(basis.n_spins()) +
                " spins, expected " + std::to_string(n_spins));
  }
}

void require_unit_interval(double s, const char* what) {
  if (!(s >= 0.0 && s <= 1.0)) {
    throw Error(std::string(what) + ": s must lie in [0, 1]");
  }
}

std::vector<Term> bond_terms(const Basis& basis, std::size_t n_spins, cplx coefficient) {
  std::vector<Term> terms;
  for (std::size_t i = 0; i < n_spins; ++i) {
    const std::size_t j = (i + 1) % n_spins;
    terms.push_back({coefficient, {pauli(basis, Axis::x, i), pauli(basis, Axis::x, j)}});
  }
  return terms;
}

// Shared assembly for every spin-boson Hamiltonian so that the ring passage
// and the generic model produce bit-identical matrices for equal inputs.
SparseOperator assemble_spinboson(const Matrix& g, const Eigen::VectorXd& fields,
                                  double transverse, const Eigen::VectorXd& freqs,
                                  const Basis& basis) {
  const std::size_t n = basis.n_spins();
  const std::size_t nb = basis.n_modes();
  std::vector<Term> terms;
  for (std::size_t i = 0; i < n; ++i) {
    const SparseOperator sx = pauli(basis, Axis::x, i);
    for (std::size_t r = 0; r < nb; ++r) {
      const cplx gir = g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(r));
      if (gir == cplx(0.0)) continue;
      terms.push_back({gir, {sx, boson(basis, r, Ladder::create)}});
      terms.push_back({std::conj(gir), {sx, boson(basis, r, Ladder::annihilate)}});
    }
    const double b = fields.size() ? fields(static_cast<Eigen::Index>(i)) : 0.0;
    if (b != 0.0) terms.push_back({b, {sx}});
    if (transverse != 0.0) terms.push_back({0.5 * transverse, {pauli(basis, Axis::z, i)}});
  }
  if (freqs.size() != 0) {
    for (std::size_t r = 0; r < nb; ++r) {
      terms.push_back({freqs(static_cast<Eigen::Index>(r)), {boson(basis, r, Ladder::number)}});
    }
  }
  return combine(basis, terms);
}

}  // namespace

SparseOperator AffineHamiltonian::at(double s) const {
  return constant + slope.scaled(s);
}

Vector AffineHamiltonian::apply(double s, double scale, const Vector& v) const {
  Vector out = constant.matrix() * v;
  out.noalias() += s * (slope.matrix() * v);
  if (scale != 1.0) out *= scale;
  return out;
}

void SpinBosonParams::validate() const {
  if (n_spins < 1) throw Error("SpinBosonParams: n_spins must be >= 1");
  if (static_cast<std::size_t>(couplings.rows()) != n_spins) {
    throw Error("SpinBosonParams: couplings must have n_spins rows");
  }
  if (longitudinal.size() != 0 && static_cast<std::size_t>(longitudinal.size()) != n_spins) {
    throw Error("SpinBosonParams: longitudinal fields must have n_spins entries");
  }
  if (mode_frequencies.size() != couplings.cols()) {
    throw Error("SpinBosonParams: one frequency per mode required");
  }
  if (!(qubit_gap > 0.0)) throw Error("SpinBosonParams: qubit gap must be > 0");
  for (Eigen::Index r = 0; r < mode_frequencies.size(); ++r) {
    if (!(mode_frequencies(r) > 0.0)) {
      throw Error("SpinBosonParams: mode frequencies must be > 0");
    }
  }
}

SpinBosonParams ring_params(std::size_t n_spins, double omega, double scale) {
  if (n_spins < 2) throw Error("ring_params: a ring needs at least 2 spins");
  if (!(omega > 0.0)) throw Error("ring_params: omega must be > 0");
  SpinBosonParams p;
  p.n_spins = n_spins;
  const auto n = static_cast<Eigen::Index>(n_spins);
  p.couplings = Matrix::Zero(n, n);
  const double g = scale * std::sqrt(omega);
  for (Eigen::Index i = 0; i < n; ++i) {
    p.couplings(i, i) += g;
    p.couplings(i, (i + 1) % n) -= g;
  }
  p.longitudinal = Eigen::VectorXd::Zero(n);
  p.mode_frequencies = Eigen::VectorXd::Constant(n, omega);
  return p;
}

SparseOperator target_afm(std::size_t n_spins, const Basis& basis) {
  if (n_spins < 3 || n_spins % 2 == 0) {
    throw Error("target_afm: frustration requires an odd ring with n_spins >= 3 (got " +
                std::to_string(n_spins) + ")");
  }
  require_spins(basis, n_spins, "target_afm");
  return combine(basis, bond_terms(basis, n_spins, 1.0));
}

SparseOperator correlator_operator(const Basis& basis, std::size_t n_spins) {
  if (n_spins < 3) throw Error("correlator_operator: requires n_spins >= 3");
  require_spins(basis, n_spins, "correlator_operator");
  return combine(basis, bond_terms(basis, n_spins, 1.0 / double(n_spins - 2)));
}

SparseOperator ising_passage(std::size_t n_spins, double s, const Basis& basis) {
  require_unit_interval(s, "ising_passage");
  require_spins(basis, n_spins, "ising_passage");
  std::vector<Term> terms = bond_terms(basis, n_spins, s);
  for (std::size_t i = 0; i < n_spins; ++i) {
    terms.push_back({0.5 * (1.0 - s), {pauli(basis, Axis::z, i)}});
  }
  return combine(basis, terms);
}

SparseOperator spinboson_passage(std::size_t n_spins, double omega, double s,
                                 const Basis& basis) {
  require_unit_interval(s, "spinboson_passage");
  require_spins(basis, n_spins, "spinboson_passage");
  if (basis.n_modes() != n_spins) {
    throw Error("spinboson_passage: basis must hold one mode per spin");
  }
  const SpinBosonParams p = ring_params(n_spins, omega, s);
  return assemble_spinboson(p.couplings, p.longitudinal, 1.0 - s, p.mode_frequencies, basis);
}

SparseOperator generic_spinboson(const SpinBosonParams& p, const Basis& basis) {
  p.validate();
  require_spins(basis, p.n_spins, "generic_spinboson");
  if (basis.n_modes() != p.n_modes()) {
    throw Error("generic_spinboson: basis holds " + std::to_string(basis.n_modes()) +
                " modes, parameters " + std::to_string(p.n_modes()));
  }
  return assemble_spinboson(p.couplings, p.longitudinal, p.qubit_gap, p.mode_frequencies,
                            basis);
}

AffineHamiltonian ising_family(std::size_t n_spins, const Basis& basis) {
  require_spins(basis, n_spins, "ising_family");
  std::vector<Term> field;
  for (std::size_t i = 0; i < n_spins; ++i) field.push_back({0.5, {pauli(basis, Axis::z, i)}});
  std::vector<Term> slope = bond_terms(basis, n_spins, 1.0);
  for (std::size_t i = 0; i < n_spins; ++i) slope.push_back({-0.5, {pauli(basis, Axis::z, i)}});
  return {combine(basis, field), combine(basis, slope)};
}

AffineHamiltonian spinboson_family(std::size_t n_spins, double omega, const Basis& basis) {
  require_spins(basis, n_spins, "spinboson_family");
  if (basis.n_modes() != n_spins) {
    throw Error("spinboson_family: basis must hold one mode per spin");
  }
  if (!(omega > 0.0)) throw Error("spinboson_family: omega must be > 0");
  const SpinBosonParams p = ring_params(n_spins, omega, 1.0);
  const SparseOperator coupling =
      assemble_spinboson(p.couplings, p.longitudinal, 0.0, Eigen::VectorXd(), basis);
  std::vector<Term> constant;
  std::vector<Term> zfield;
  for (std::size_t i = 0; i < n_spins; ++i) {
    constant.push_back({0.5, {pauli(basis, Axis::z, i)}});
    zfield.push_back({-0.5, {pauli(basis, Axis::z, i)}});
  }
  for (std::size_t r = 0; r < n_spins; ++r) {
    constant.push_back({omega, {boson(basis, r, Ladder::number)}});
  }
  return {combine(basis, constant), coupling + combine(basis, zfield)};
}

Eigen::MatrixXd effective_coupling(const SpinBosonParams& p) {
  p.validate();
  const auto n = static_cast<Eigen::Index>(p.n_spins);
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      if (a == b) continue;
      double sum = 0.0;
      for (Eigen::Index r = 0; r < p.couplings.cols(); ++r) {
        sum += (p.couplings(a, r) * std::conj(p.couplings(b, r))).real() /
               p.mode_frequencies(r);
      }
      j(a, b) = -sum;
    }
  }
  return j;
}

double effective_field_prefactor(double s, double omega) {
  require_unit_interval(s, "effective_field_prefactor");
  if (!(omega > 0.0)) throw Error("effective_field_prefactor: omega must be > 0");
  // Two attached modes with |g| = s*sqrt(w): 2 * 2 * s^2 w / w^2 = 4 s^2 / w.
  return 0.5 * (1.0 - s) * std::exp(-4.0 * s * s / omega);
}

double target_ground_energy(std::size_t n_spins) {
  return -(static_cast<double>(n_spins) - 2.0);
}

}  // namespace sbqa
