#include "sbqa/passage.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "parallel.hpp"

namespace sbqa {

namespace {

using json = nlohmann::json;

std::string format_lambda(double x) {
  std::ostringstream out;
  out.precision(6);
  out << x;
  return out.str();
}

Curve tabulate_spinboson(Observable observable, const std::vector<double>& grid,
                         const TabulateParams& params) {
  const Basis basis = build_basis(params.n_spins, params.n_spins, params.n_max);
  const AffineHamiltonian family = spinboson_family(params.n_spins, params.omega, basis);
  std::vector<double> values(grid.size());
  // The instantaneous ground state stays in the symmetry sector of the
  // initial product state, so the correlator only needs that block.
  std::optional<SectorFamily> restricted;
  std::optional<RingBlocks> blocks;
  if (observable == Observable::correlator) {
    restricted.emplace(family, SymmetrySector::ring(basis));
  } else {
    blocks.emplace(family);
  }
  detail::parallel_for(grid.size(), params.threads, [&](std::size_t i) {
    const double s = grid[i];
    try {
      if (observable == Observable::correlator) {
        const SpectrumSlice slice = restricted->at(s);
        values[i] = correlator_O(slice.states.col(0), basis, params.n_spins);
      } else {
        const SpectrumSlice ising = ising_spectrum(params.n_spins, s);
        const Matrix target = ising_target_space(ising, params.n_spins);
        values[i] = spinboson_relevant(blocks->at(s), basis, params.n_spins, target, 0.5).gap;
      }
    } catch (const Error& e) {
      throw Error("tabulate: failed at s = " + format_lambda(s) + ": " + e.what());
    }
  });
  return Curve(grid, values);
}

}  // namespace

SpectrumSlice ising_spectrum(std::size_t n_spins, double s) {
  const Basis basis = build_basis(n_spins, 0, 0);
  SpectrumSlice slice = eigen_lowest(ising_passage(n_spins, s, basis), basis.dim());
  slice.s = s;
  return slice;
}

RelevantState spinboson_relevant(const BlockSpectrum& spectrum, const Basis& basis,
                                 std::size_t n_spins, const Matrix& target, double min_overlap) {
  MatchOptions match_opts;
  match_opts.first_candidate = 2 * n_spins;
  match_opts.min_overlap = min_overlap;
  RelevantState out;
  out.match = match_target_state(spectrum, target, basis, match_opts);
  out.ground_energy = spectrum.energy(0);
  out.correlator = correlator_O(spectrum.state(0), basis, n_spins);
  out.gap = spectrum.energy(out.match.index) - out.ground_energy;
  return out;
}

Curve::Curve(std::vector<double> grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (grid_.size() < 2 || grid_.size() != values_.size()) {
    throw Error("Curve: need at least two points and one value per grid point");
  }
  for (std::size_t i = 1; i < grid_.size(); ++i) {
    if (!(grid_[i] > grid_[i - 1])) throw Error("Curve: grid must be strictly increasing");
  }
}

double Curve::operator()(double x) const {
  if (grid_.empty()) throw Error("Curve: empty");
  if (!(x > grid_.front())) return values_.front();
  if (!(x < grid_.back())) return values_.back();
  const auto it = std::upper_bound(grid_.begin(), grid_.end(), x);
  const std::size_t hi = static_cast<std::size_t>(it - grid_.begin());
  const std::size_t lo = hi - 1;
  if (x == grid_[lo]) return values_[lo];
  const double t = (x - grid_[lo]) / (grid_[hi] - grid_[lo]);
  return values_[lo] + t * (values_[hi] - values_[lo]);
}

std::vector<double> uniform_grid(std::size_t n) {
  if (n < 2) throw Error("uniform_grid: need at least two points");
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = static_cast<double>(i) / static_cast<double>(n - 1);
  g.front() = 0.0;
  g.back() = 1.0;
  return g;
}

std::string to_string(PassageKind kind) {
  switch (kind) {
    case PassageKind::ising_linear:
      return "ising_linear";
    case PassageKind::spinboson_linear:
      return "spinboson_linear";
    case PassageKind::ising_fair:
      return "ising_fair";
    case PassageKind::spinboson_fair:
      return "spinboson_fair";
  }
  return "ising_linear";
}

PassageKind passage_kind_from_string(const std::string& name) {
  for (PassageKind k : {PassageKind::ising_linear, PassageKind::spinboson_linear,
                        PassageKind::ising_fair, PassageKind::spinboson_fair}) {
    if (to_string(k) == name) return k;
  }
  throw Error("unknown passage kind '" + name + "'");
}

bool PassageSpec::spinboson() const {
  return kind == PassageKind::spinboson_linear || kind == PassageKind::spinboson_fair;
}

void PassageSpec::validate() const {
  if (schedule.size() < 2 || scale.size() < 2) throw Error("PassageSpec: missing curves");
  const auto& g = schedule.grid();
  if (g.front() != 0.0 || g.back() != 1.0) throw Error("PassageSpec: grid must span [0, 1]");
  const auto& s = schedule.values();
  if (s.front() != 0.0 || s.back() != 1.0) throw Error("PassageSpec: need s(0)=0 and s(1)=1");
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s[i] < s[i - 1]) throw Error("PassageSpec: schedule s(lambda) is not monotone");
  }
  for (double c : scale.values()) {
    if (!(c > 0.0)) throw Error("PassageSpec: scale c(lambda) must be > 0");
  }
  if (n_spins < 1) throw Error("PassageSpec: n_spins must be >= 1");
  if (spinboson() && !(omega > 0.0)) throw Error("PassageSpec: omega must be > 0");
}

std::string PassageSpec::to_json() const {
  json doc;
  doc["version"] = kVersion;
  doc["kind"] = to_string(kind);
  doc["n_spins"] = n_spins;
  doc["omega"] = omega;
  doc["n_max"] = n_max;
  doc["lambda_grid"] = schedule.grid();
  doc["s_values"] = schedule.values();
  doc["scale_grid"] = scale.grid();
  doc["c_values"] = scale.values();
  doc["flags"] = flags;
  doc["provenance"] = {{"grid_points", provenance.grid_points},
                       {"monotone_tol", provenance.monotone_tol},
                       {"degeneracy_tol", provenance.degeneracy_tol},
                       {"min_overlap", provenance.min_overlap}};
  return doc.dump(2) + "\n";
}

PassageSpec PassageSpec::from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(std::string("PassageSpec: invalid JSON: ") + e.what());
  }
  try {
    if (doc.at("version").get<int>() != kVersion) {
      throw Error("PassageSpec: unsupported version " + doc.at("version").dump());
    }
    PassageSpec spec;
    spec.kind = passage_kind_from_string(doc.at("kind").get<std::string>());
    spec.n_spins = doc.at("n_spins").get<std::size_t>();
    spec.omega = doc.at("omega").get<double>();
    spec.n_max = doc.at("n_max").get<std::size_t>();
    const auto grid = doc.at("lambda_grid").get<std::vector<double>>();
    spec.schedule = Curve(grid, doc.at("s_values").get<std::vector<double>>());
    const auto scale_grid =
        doc.contains("scale_grid") ? doc["scale_grid"].get<std::vector<double>>() : grid;
    spec.scale = Curve(scale_grid, doc.at("c_values").get<std::vector<double>>());
    spec.flags = doc.at("flags").get<std::vector<std::string>>();
    if (doc.contains("provenance")) {
      const json& p = doc["provenance"];
      spec.provenance.grid_points = p.value("grid_points", std::size_t{0});
      spec.provenance.monotone_tol = p.value("monotone_tol", 1e-6);
      spec.provenance.degeneracy_tol = p.value("degeneracy_tol", 1e-8);
      spec.provenance.min_overlap = p.value("min_overlap", 0.5);
    }
    spec.validate();
    return spec;
  } catch (const json::exception& e) {
    throw Error(std::string("PassageSpec: malformed document: ") + e.what());
  }
}

PassageSpec linear_spec(PassageKind kind, std::size_t n_spins, double omega, std::size_t n_max) {
  PassageSpec spec;
  spec.kind = kind;
  spec.n_spins = n_spins;
  spec.omega = omega;
  spec.n_max = spec.spinboson() ? n_max : 0;
  spec.schedule = Curve({0.0, 1.0}, {0.0, 1.0});
  spec.scale = Curve({0.0, 1.0}, {1.0, 1.0});
  spec.provenance.grid_points = 2;
  spec.validate();
  return spec;
}

ScheduleValue schedule_eval(const PassageSpec& spec, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw Error("schedule_eval: lambda outside [0, 1]");
  return {spec.schedule(lambda), spec.scale(lambda)};
}

Curve tabulate(ModelKind model, Observable observable, const std::vector<double>& grid,
               const TabulateParams& params) {
  for (double s : grid) {
    if (!(s >= 0.0 && s <= 1.0)) throw Error("tabulate: grid must lie within [0, 1]");
  }
  if (model == ModelKind::spinboson) return tabulate_spinboson(observable, grid, params);
  std::vector<double> values(grid.size());
  const Basis basis = build_basis(params.n_spins, 0, 0);
  detail::parallel_for(grid.size(), params.threads, [&](std::size_t i) {
    try {
      const SpectrumSlice slice = ising_spectrum(params.n_spins, grid[i]);
      values[i] = observable == Observable::correlator
                      ? correlator_O(slice.states.col(0), basis, params.n_spins)
                      : relevant_gap_ising(slice, params.n_spins);
    } catch (const Error& e) {
      throw Error("tabulate: failed at s = " + format_lambda(grid[i]) + ": " + e.what());
    }
  });
  return Curve(grid, values);
}

double invert_monotone(const Curve& curve, double y, std::vector<std::string>* warnings,
                       double tol) {
  const auto& g = curve.grid();
  std::vector<double> v = curve.values();
  const bool increasing = v.back() >= v.front();
  for (std::size_t i = 1; i < v.size(); ++i) {
    const double step = increasing ? v[i] - v[i - 1] : v[i - 1] - v[i];
    if (step < 0.0) {
      if (-step > tol) {
        std::ostringstream msg;
        msg << "invert_monotone: curve not monotone at x = " << g[i] << " (violation " << -step
            << " > " << tol << ")";
        throw Error(msg.str());
      }
      v[i] = v[i - 1];
    }
  }
  const double lo = std::min(v.front(), v.back());
  const double hi = std::max(v.front(), v.back());
  if (y < lo || y > hi) {
    if (warnings) {
      std::ostringstream msg;
      msg << "clamped: y = " << y << " outside [" << lo << ", " << hi << "]";
      warnings->push_back(msg.str());
    }
    y = std::clamp(y, lo, hi);
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == y) return g[i];
    if (i + 1 == v.size()) break;
    const bool inside = increasing ? (y > v[i] && y < v[i + 1]) : (y < v[i] && y > v[i + 1]);
    if (inside) return g[i] + (y - v[i]) / (v[i + 1] - v[i]) * (g[i + 1] - g[i]);
  }
  return increasing == (y >= v.back()) ? g.back() : g.front();
}

Matrix ising_target_space(const SpectrumSlice& ising, std::size_t n_spins,
                          double degeneracy_tol) {
  const auto level = static_cast<Eigen::Index>(2 * n_spins);
  if (ising.energies.size() <= level) {
    throw Error("ising_target_space: slice lacks level 2N");
  }
  const double e = ising.energies(level);
  std::vector<Eigen::Index> cols;
  for (Eigen::Index i = 0; i < ising.energies.size(); ++i) {
    if (std::abs(ising.energies(i) - e) <= degeneracy_tol) cols.push_back(i);
  }
  Matrix out(ising.states.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) {
    out.col(static_cast<Eigen::Index>(c)) = ising.states.col(cols[c]);
  }
  return out;
}

FairPair build_fair_pair(std::size_t n_spins, double omega, std::size_t n_max,
                         const FairOptions& options) {
  if (options.grid_points < 101) {
    throw Error("build_fair_pair: grid_points must be >= 101 (got " +
                std::to_string(options.grid_points) + ")");
  }
  const std::vector<double> grid = uniform_grid(options.grid_points);
  TabulateParams tab;
  tab.n_spins = n_spins;
  tab.omega = omega;
  tab.n_max = n_max;
  tab.threads = options.threads;
  const Curve o_ising = tabulate(ModelKind::ising, Observable::correlator, grid, tab);
  const Curve o_sb = tabulate(ModelKind::spinboson, Observable::correlator, grid, tab);

  std::vector<std::string> flags;
  std::vector<double> s_sb(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::vector<std::string> warnings;
    s_sb[i] = invert_monotone(o_sb, o_ising.values()[i], &warnings, options.monotone_tol);
    for (const auto& w : warnings) {
      if (i != 0 && i + 1 != grid.size()) flags.push_back(w + " at lambda=" + format_lambda(grid[i]));
    }
  }
  s_sb.front() = 0.0;
  s_sb.back() = 1.0;
  for (std::size_t i = 1; i < s_sb.size(); ++i) s_sb[i] = std::max(s_sb[i], s_sb[i - 1]);

  const Basis basis = build_basis(n_spins, n_spins, n_max);
  const AffineHamiltonian family = spinboson_family(n_spins, omega, basis);
  const Basis spin_basis = build_basis(n_spins, 0, 0);
  const RingBlocks blocks(family);
  std::vector<FairnessRow> rows(grid.size());
  detail::parallel_for(grid.size(), options.threads, [&](std::size_t i) {
    FairnessRow& row = rows[i];
    row.lambda = grid[i];
    row.s_sb = s_sb[i];
    try {
      const SpectrumSlice ising = ising_spectrum(n_spins, grid[i]);
      const Matrix target = ising_target_space(ising, n_spins, options.degeneracy_tol);
      const RelevantState sb =
          spinboson_relevant(blocks.at(s_sb[i]), basis, n_spins, target, options.min_overlap);
      row.O_ising = correlator_O(ising.states.col(0), spin_basis, n_spins);
      row.O_sb = sb.correlator;
      row.gap_ising = relevant_gap_ising(ising, n_spins);
      row.gap_sb = sb.gap;
      row.c = row.gap_sb / row.gap_ising;
      row.target_index = sb.match.index;
      row.target_overlap = sb.match.overlap;
      row.ambiguous = sb.match.ambiguous;
    } catch (const Error& e) {
      throw Error("build_fair_pair: failed at lambda = " + format_lambda(grid[i]) + ": " +
                  e.what());
    }
  });

  std::vector<double> c(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    c[i] = rows[i].c;
    if (rows[i].ambiguous) {
      std::ostringstream msg;
      msg << "ambiguous_target at lambda=" << format_lambda(grid[i]) << " (max p "
          << rows[i].target_overlap << ")";
      flags.push_back(msg.str());
    }
  }

  Provenance prov;
  prov.grid_points = options.grid_points;
  prov.monotone_tol = options.monotone_tol;
  prov.degeneracy_tol = options.degeneracy_tol;
  prov.min_overlap = options.min_overlap;

  FairPair pair;
  pair.spinboson.kind = PassageKind::spinboson_fair;
  pair.spinboson.n_spins = n_spins;
  pair.spinboson.omega = omega;
  pair.spinboson.n_max = n_max;
  pair.spinboson.schedule = Curve(grid, s_sb);
  pair.spinboson.scale = Curve(grid, std::vector<double>(grid.size(), 1.0));
  pair.spinboson.flags = flags;
  pair.spinboson.provenance = prov;

  pair.ising.kind = PassageKind::ising_fair;
  pair.ising.n_spins = n_spins;
  pair.ising.omega = omega;
  pair.ising.n_max = n_max;
  pair.ising.schedule = Curve(grid, grid);
  pair.ising.scale = Curve(grid, c);
  pair.ising.flags = flags;
  pair.ising.provenance = prov;

  pair.spinboson.validate();
  pair.ising.validate();
  pair.rows = std::move(rows);
  return pair;
}

}  // namespace sbqa
