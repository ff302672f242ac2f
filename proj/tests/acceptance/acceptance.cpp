// Acceptance gate: one PASS/FAIL line per criterion, exit code = number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "sbqa/evolve.hpp"
#include "sbqa/models.hpp"

using namespace sbqa;

namespace {

// Tolerances and grids.
constexpr double kSlopeTarget = -2.0;
constexpr double kSlopeTol = 0.15;
constexpr double kDegeneracyIsing = 1e-10;
constexpr double kDegeneracySpinBoson = 1e-6;
constexpr double kCoincidenceRel = 0.2;
constexpr double kCoincidenceFloor = 1e-3;
constexpr double kFairCorrelation = 1e-3;
constexpr double kFairGap = 1e-8;
constexpr double kCrossingCenter = 0.9;
constexpr double kCrossingTol = 0.05;
constexpr double kOracleFidelity = 1.0 - 1e-8;
constexpr double kStepHalving = 1e-4;
constexpr double kTruncation = 1e-3;
constexpr double kGridDoublingRel = 0.05;
constexpr double kCouplingTol = 1e-14;
constexpr std::size_t kGrid = 201;
constexpr std::size_t kSpins = 3;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x, int digits = 4) {
  std::ostringstream out;
  out.precision(digits);
  out << x;
  return out.str();
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(n - 1));
  }
  return out;
}

std::vector<double> range(double lo, double hi, double step) {
  std::vector<double> out;
  for (int i = 0;; ++i) {
    const double x = lo + step * i;
    if (x > hi + 1e-9) break;
    out.push_back(x);
  }
  return out;
}

const FairPair& fair_pair(double omega, std::size_t n_max, std::size_t grid = kGrid) {
  static std::map<std::tuple<double, std::size_t, std::size_t>, FairPair> cache;
  const auto key = std::make_tuple(omega, n_max, grid);
  auto it = cache.find(key);
  if (it == cache.end()) {
    FairOptions opts;
    opts.grid_points = grid;
    it = cache.emplace(key, build_fair_pair(kSpins, omega, n_max, opts)).first;
  }
  return it->second;
}

double p_error(const PassageSpec& spec, double T, std::size_t steps_per_unit = 200) {
  IntegratorConfig cfg;
  cfg.steps_per_unit_time = steps_per_unit;
  return run_passage(spec, T, cfg).p_error;
}

Outcome error_law() {
  const PassageSystem system(linear_spec(PassageKind::ising_linear, kSpins, 1.0, 0));
  // Unit spacing resolves the oscillation of P(T) around the power law.
  const std::vector<double> Ts = range(30.0, 100.0, 1.0);
  const std::vector<SweepRow> rows = sweep(system, Ts, IntegratorConfig{});
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(rows.size());
  for (const SweepRow& r : rows) {
    const double x = std::log(r.T);
    const double y = std::log(r.p_error);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return {std::abs(slope - kSlopeTarget) <= kSlopeTol,
          "slope " + fmt(slope, 5) + " over T = 30, 31, ..., 100"};
}

Outcome degeneracy() {
  std::string detail;
  bool pass = true;
  for (std::size_t n : {std::size_t{3}, std::size_t{5}}) {
    const Basis basis = build_basis(n, 0, 0);
    const SpectrumSlice slice = eigen_lowest(ising_passage(n, 1.0, basis), 2 * n);
    const double spread = slice.energies(static_cast<Eigen::Index>(2 * n - 1)) - slice.energies(0);
    pass = pass && spread <= kDegeneracyIsing;
    detail += "Ising N=" + std::to_string(n) + " spread " + fmt(spread, 3) + "; ";
  }
  const PassageSystem sb(linear_spec(PassageKind::spinboson_linear, kSpins, 10.0, 4),
                         kDegeneracySpinBoson);
  pass = pass && sb.final_manifold().size() == 2 * kSpins;
  detail += "SB manifold size " + std::to_string(sb.final_manifold().size());
  return {pass, detail};
}

Outcome coincidence() {
  const FairPair& pair = fair_pair(10.0, 4);
  const PassageSystem sb(pair.spinboson);
  const PassageSystem ising(pair.ising);
  const std::vector<double> Ts = log_grid(1.0, 100.0, 20);
  const auto rows_sb = sweep(sb, Ts, IntegratorConfig{});
  const auto rows_i = sweep(ising, Ts, IntegratorConfig{});
  double worst = 0.0;
  double worst_T = 0.0;
  for (std::size_t i = 0; i < Ts.size(); ++i) {
    const double rel = std::abs(rows_sb[i].p_error - rows_i[i].p_error) /
                       std::max(rows_i[i].p_error, kCoincidenceFloor);
    if (!(rel <= worst)) {
      worst = rel;
      worst_T = Ts[i];
    }
  }
  return {worst <= kCoincidenceRel,
          "worst relative difference " + fmt(worst) + " at T=" + fmt(worst_T)};
}

Outcome fairness() {
  bool pass = true;
  std::string detail;
  for (double omega : {1.0, 3.0, 10.0}) {
    const FairPair& pair = fair_pair(omega, default_n_max(omega));
    const PassageSpec ising = PassageSpec::from_json(pair.ising.to_json());
    double worst_o = 0.0;
    double worst_gap = 0.0;
    for (const FairnessRow& r : pair.rows) {
      const double gap_i = relevant_gap_ising(ising_spectrum(kSpins, r.lambda), kSpins);
      const double c = schedule_eval(ising, r.lambda).c;
      worst_o = std::max(worst_o, std::abs(r.O_sb - r.O_ising));
      worst_gap = std::max(worst_gap, std::abs(c * gap_i - r.gap_sb));
    }
    pass = pass && worst_o <= kFairCorrelation && worst_gap <= kFairGap;
    detail += "w=" + fmt(omega) + ": |dO| " + fmt(worst_o, 3) + ", |c gap_I - gap_SB| " +
              fmt(worst_gap, 3) + "; ";
  }
  return {pass, detail};
}

Outcome crossing() {
  const PassageSystem system(linear_spec(PassageKind::spinboson_linear, kSpins, 3.0, 4));
  const SymmetrySector sector = SymmetrySector::ring(system.basis());
  const std::vector<double> grid = range(0.5, 1.0, 0.005);
  const auto scan =
      band_separation_scan(system.family(), sector, system.final_spin_projector(), grid);
  const BandSeparation* best = nullptr;
  for (const BandSeparation& b : scan) {
    if (std::isfinite(b.separation) && (!best || b.separation < best->separation)) best = &b;
  }
  if (!best) return {false, "no s with both bands present"};
  return {std::abs(best->s - kCrossingCenter) <= kCrossingTol,
          "minimum separation " + fmt(best->separation) + " at s=" + fmt(best->s)};
}

Outcome improvement() {
  const FairPair& pair = fair_pair(1.0, 6);
  const PassageSystem sb(pair.spinboson);
  const PassageSystem ising(pair.ising);
  const std::vector<double> early = range(10.0, 60.0, 5.0);
  const std::vector<double> late = {90.0, 100.0};
  const auto e_sb = sweep(sb, early, IntegratorConfig{});
  const auto e_i = sweep(ising, early, IntegratorConfig{});
  const auto l_sb = sweep(sb, late, IntegratorConfig{});
  const auto l_i = sweep(ising, late, IntegratorConfig{});
  std::string wins;
  for (std::size_t i = 0; i < early.size(); ++i) {
    if (e_sb[i].p_error < e_i[i].p_error) wins += (wins.empty() ? "" : ",") + fmt(early[i]);
  }
  bool late_ok = true;
  std::string late_detail;
  for (std::size_t i = 0; i < late.size(); ++i) {
    late_ok = late_ok && l_sb[i].p_error > l_i[i].p_error;
    late_detail += " T=" + fmt(late[i]) + ": SB " + fmt(l_sb[i].p_error, 3) + " vs I " +
                   fmt(l_i[i].p_error, 3);
  }
  return {!wins.empty() && late_ok,
          "SB better at T={" + wins + "};" + late_detail};
}

Outcome oracle() {
  struct Toy {
    const char* name;
    PassageSpec spec;
    double T;
  };
  std::vector<Toy> toys;
  toys.push_back({"Ising N=2", linear_spec(PassageKind::ising_linear, 2, 1.0, 0), 5.0});
  toys.push_back({"Ising N=3", linear_spec(PassageKind::ising_linear, 3, 1.0, 0), 10.0});
  toys.push_back({"SB N=2 n_max=3", linear_spec(PassageKind::spinboson_linear, 2, 1.0, 3), 5.0});
  PassageSpec curved = linear_spec(PassageKind::spinboson_linear, 3, 1.0, 2);
  curved.schedule = Curve({0.0, 0.3, 0.7, 1.0}, {0.0, 0.5, 0.8, 1.0});
  curved.scale = Curve({0.0, 0.5, 1.0}, {1.0, 0.7, 1.6});
  toys.push_back({"SB N=3 n_max=2 curved", curved, 4.0});
  bool pass = true;
  std::string detail;
  for (const Toy& toy : toys) {
    const PassageSystem system(toy.spec);
    const EvolutionResult r = run_passage(system, toy.T, IntegratorConfig{});
    const Vector ref = oracle_evolve_extrapolated(
        [&](double t) { return system.hamiltonian(t / toy.T).dense(); }, system.initial_state(),
        toy.T, static_cast<std::size_t>(std::ceil(toy.T * 25.0)));
    const double fidelity = std::norm(ref.dot(r.final_state));
    pass = pass && fidelity >= kOracleFidelity;
    detail += std::string(toy.name) + " (dim " + std::to_string(system.basis().dim()) +
              "): 1-F " + fmt(1.0 - fidelity, 3) + "; ";
  }
  return {pass, detail};
}

Outcome convergence() {
  bool pass = true;
  std::string detail;
  constexpr double T = 50.0;

  const PassageSpec linear = linear_spec(PassageKind::ising_linear, kSpins, 1.0, 0);
  const FairPair& pair6 = fair_pair(1.0, 6);
  double worst_step = 0.0;
  for (const PassageSpec* spec : {&linear, &pair6.spinboson, &pair6.ising}) {
    worst_step = std::max(worst_step, std::abs(p_error(*spec, T, 400) - p_error(*spec, T, 200)));
  }
  pass = pass && worst_step <= kStepHalving;
  detail += "step halving |dP| " + fmt(worst_step, 3) + "; ";

  const FairPair& pair4 = fair_pair(1.0, 4);
  const double sb6 = p_error(pair6.spinboson, T);
  const double i6 = p_error(pair6.ising, T);
  const double d_sb = std::abs(p_error(pair4.spinboson, T) - sb6);
  const double d_i = std::abs(p_error(pair4.ising, T) - i6);
  pass = pass && d_sb <= kTruncation && d_i <= kTruncation;
  detail += "n_max 4->6 |dP| SB " + fmt(d_sb, 3) + " I " + fmt(d_i, 3) + "; ";

  const FairPair& fine = fair_pair(1.0, 6, 2 * kGrid - 1);
  const double r_sb = std::abs(p_error(fine.spinboson, T) - sb6) / sb6;
  const double r_i = std::abs(p_error(fine.ising, T) - i6) / i6;
  pass = pass && r_sb <= kGridDoublingRel && r_i <= kGridDoublingRel;
  detail += "grid doubling rel SB " + fmt(r_sb, 3) + " I " + fmt(r_i, 3);
  return {pass, detail};
}

Outcome coupling_identity() {
  double worst = 0.0;
  for (double s : {0.0, 0.3, 1.0}) {
    const Eigen::MatrixXd j = effective_coupling(ring_params(kSpins, 1.0, s));
    Eigen::MatrixXd ring = Eigen::MatrixXd::Zero(kSpins, kSpins);
    for (std::size_t i = 0; i < kSpins; ++i) {
      ring(i, (i + 1) % kSpins) = 1.0;
      ring((i + 1) % kSpins, i) = 1.0;
    }
    worst = std::max(worst, (j - s * s * ring).cwiseAbs().maxCoeff());
  }
  return {worst <= kCouplingTol, "max deviation " + fmt(worst, 3)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"error law slope", error_law},
      {"ground degeneracy", degeneracy},
      {"dispersive coincidence", coincidence},
      {"fairness construction", fairness},
      {"avoided crossing location", crossing},
      {"improvement window", improvement},
      {"oracle equivalence", oracle},
      {"convergence contracts", convergence},
      {"effective coupling identity", coupling_identity},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!out.pass) ++failures;
    std::printf("criterion %zu %s: %s  [%s] (%.1f s)\n", i + 1, out.pass ? "PASS" : "FAIL",
                criteria[i].first, out.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures;
}
