#include "sbqa/cli.hpp"

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "parallel.hpp"

namespace sbqa {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

constexpr int kExitConfig = 2;
constexpr int kExitFailed = 3;
constexpr int kExitInternal = 1;

class Checker {
 public:
  explicit Checker(std::string where) : where_(std::move(where)) {}

  void fail(const std::string& key, const std::string& what) {
    errors_.push_back(where_ + key + ": " + what);
  }

  std::optional<std::size_t> count(const json& j, const std::string& key, std::size_t min) {
    if (!j.is_number_integer() || j.get<long long>() < 0) {
      fail(key, "expected a non-negative integer");
      return std::nullopt;
    }
    const auto v = j.get<std::size_t>();
    if (v < min) {
      fail(key, "must be >= " + std::to_string(min));
      return std::nullopt;
    }
    return v;
  }

  std::optional<double> number(const json& j, const std::string& key) {
    if (!j.is_number()) {
      fail(key, "expected a number");
      return std::nullopt;
    }
    const double v = j.get<double>();
    if (!std::isfinite(v)) {
      fail(key, "must be finite");
      return std::nullopt;
    }
    return v;
  }

  std::optional<double> positive(const json& j, const std::string& key) {
    auto v = number(j, key);
    if (v && !(*v > 0.0)) {
      fail(key, "must be > 0");
      return std::nullopt;
    }
    return v;
  }

  std::vector<double> positive_list(const json& j, const std::string& key) {
    std::vector<double> out;
    if (!j.is_array()) {
      fail(key, "expected an array of numbers");
      return out;
    }
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (auto v = positive(j[i], key + "[" + std::to_string(i) + "]")) out.push_back(*v);
    }
    return out;
  }

  void unknown_keys(const json& obj, const std::set<std::string>& allowed) {
    for (const auto& [key, value] : obj.items()) {
      (void)value;
      if (!allowed.count(key)) fail(key, "unknown key");
    }
  }

  std::vector<std::string>& errors() { return errors_; }

 private:
  std::string where_;
  std::vector<std::string> errors_;
};

std::string join_errors(const std::vector<std::string>& errors) {
  std::string out = "invalid config";
  for (const auto& e : errors) out += "\n  " + e;
  return out;
}

std::string csv_flags(const std::vector<std::string>& flags) {
  std::string out;
  for (std::size_t i = 0; i < flags.size(); ++i) {
    if (i) out += ';';
    for (char ch : flags[i]) {
      out += (ch == ',' || ch == ';' || ch == '\n' || ch == '\r' || ch == '"') ? ' ' : ch;
    }
  }
  return out;
}

std::size_t default_levels(const RunConfig& config) {
  return config.n_levels.value_or(config.model == ModelKind::ising ? 2 * config.n_spins + 2
                                                                   : 4 * config.n_spins + 4);
}

std::vector<double> grid_for(const RunConfig& config) { return uniform_grid(config.grid_points); }

PassageKind linear_kind(ModelKind model) {
  return model == ModelKind::ising ? PassageKind::ising_linear : PassageKind::spinboson_linear;
}

std::size_t spec_n_max(const RunConfig& config) {
  return config.model == ModelKind::ising ? 0 : config.resolved_n_max();
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string file_label(double T) {
  std::string s = format_number(T);
  for (char& ch : s) {
    if (ch == '+' || ch == '-') ch = ch == '-' ? 'm' : 'p';
  }
  return s;
}

}  // namespace

std::size_t RunConfig::resolved_n_max() const { return n_max.value_or(default_n_max(omega)); }

void RunConfig::validate() const {
  std::vector<std::string> errors;
  if (n_spins < 2) errors.push_back("n_spins: must be >= 2");
  if (omega0 != 1.0) errors.push_back("omega0: must equal 1.0 (energies are in units of omega0)");
  if (!(omega > 0.0) || !std::isfinite(omega)) errors.push_back("omega: must be > 0");
  if (grid_points < 2) errors.push_back("grid_points: must be >= 2");
  if (integrator.steps_per_unit_time == 0) errors.push_back("integrator.steps_per_unit_time: must be > 0");
  if (!(integrator.max_step_drift > 0.0)) errors.push_back("integrator.max_step_drift: must be > 0");
  if (trace_samples < 2) errors.push_back("trace_samples: must be >= 2");
  if (!(degeneracy_tol > 0.0)) errors.push_back("degeneracy_tol: must be > 0");
  if (!(min_overlap > 0.0 && min_overlap <= 1.0)) errors.push_back("min_overlap: must lie in (0, 1]");
  if (n_levels && *n_levels == 0) errors.push_back("n_levels: must be > 0");
  for (double T : T_list) {
    if (!(T > 0.0) || !std::isfinite(T)) errors.push_back("T_list: entries must be > 0");
  }
  for (double s : classify_s) {
    if (!(s >= 0.0 && s <= 1.0)) errors.push_back("classify_s: entries must lie in [0, 1]");
  }
  if (output_dir.empty()) errors.push_back("output_dir: must not be empty");
  if (!errors.empty()) throw ConfigError(join_errors(errors));
}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid config: not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("invalid config: top level must be an object");

  RunConfig cfg;
  Checker check("");
  check.unknown_keys(j, {"n_spins", "omega0", "omega", "n_max", "model", "passage", "grid_points",
                         "T_list", "integrator", "output_dir", "seedless", "n_levels",
                         "classify_s", "trace_T", "trace_samples", "degeneracy_tol",
                         "min_overlap", "classify", "threads"});
  if (j.contains("n_spins")) {
    if (auto v = check.count(j["n_spins"], "n_spins", 2)) cfg.n_spins = *v;
  }
  if (j.contains("omega0")) {
    if (auto v = check.number(j["omega0"], "omega0")) cfg.omega0 = *v;
  }
  if (j.contains("omega")) {
    if (auto v = check.positive(j["omega"], "omega")) cfg.omega = *v;
  }
  if (j.contains("n_max") && !j["n_max"].is_null()) {
    if (auto v = check.count(j["n_max"], "n_max", 0)) cfg.n_max = *v;
  }
  if (j.contains("model")) {
    const json& m = j["model"];
    if (m == "ising") {
      cfg.model = ModelKind::ising;
    } else if (m == "spinboson") {
      cfg.model = ModelKind::spinboson;
    } else {
      check.fail("model", "expected \"ising\" or \"spinboson\"");
    }
  }
  if (j.contains("passage")) {
    const json& p = j["passage"];
    if (p == "linear") {
      cfg.passage = PassageMode::linear;
    } else if (p == "fair") {
      cfg.passage = PassageMode::fair;
    } else {
      check.fail("passage", "expected \"linear\" or \"fair\"");
    }
  }
  if (j.contains("grid_points")) {
    if (auto v = check.count(j["grid_points"], "grid_points", 2)) cfg.grid_points = *v;
  }
  if (j.contains("T_list")) cfg.T_list = check.positive_list(j["T_list"], "T_list");
  if (j.contains("trace_T")) cfg.trace_T = check.positive_list(j["trace_T"], "trace_T");
  if (j.contains("integrator")) {
    const json& in = j["integrator"];
    Checker sub("integrator.");
    if (!in.is_object()) {
      check.fail("integrator", "expected an object");
    } else {
      sub.unknown_keys(in, {"steps_per_unit_time", "norm_renormalize", "max_step_drift"});
      if (in.contains("steps_per_unit_time")) {
        if (auto v = sub.count(in["steps_per_unit_time"], "steps_per_unit_time", 1)) {
          cfg.integrator.steps_per_unit_time = *v;
        }
      }
      if (in.contains("norm_renormalize")) {
        if (in["norm_renormalize"].is_boolean()) {
          cfg.integrator.norm_renormalize = in["norm_renormalize"].get<bool>();
        } else {
          sub.fail("norm_renormalize", "expected a boolean");
        }
      }
      if (in.contains("max_step_drift")) {
        if (auto v = sub.positive(in["max_step_drift"], "max_step_drift")) {
          cfg.integrator.max_step_drift = *v;
        }
      }
    }
    for (auto& e : sub.errors()) check.errors().push_back(e);
  }
  if (j.contains("output_dir")) {
    if (j["output_dir"].is_string()) {
      cfg.output_dir = j["output_dir"].get<std::string>();
    } else {
      check.fail("output_dir", "expected a string");
    }
  }
  if (j.contains("seedless") && j["seedless"] != true) {
    check.fail("seedless", "runs are always deterministic; only true is accepted");
  }
  if (j.contains("n_levels")) {
    if (auto v = check.count(j["n_levels"], "n_levels", 1)) cfg.n_levels = *v;
  }
  if (j.contains("classify_s")) {
    const json& arr = j["classify_s"];
    if (!arr.is_array()) {
      check.fail("classify_s", "expected an array of numbers");
    } else {
      for (std::size_t i = 0; i < arr.size(); ++i) {
        if (auto v = check.number(arr[i], "classify_s[" + std::to_string(i) + "]")) {
          cfg.classify_s.push_back(*v);
        }
      }
    }
  }
  if (j.contains("trace_samples")) {
    if (auto v = check.count(j["trace_samples"], "trace_samples", 2)) cfg.trace_samples = *v;
  }
  if (j.contains("degeneracy_tol")) {
    if (auto v = check.positive(j["degeneracy_tol"], "degeneracy_tol")) cfg.degeneracy_tol = *v;
  }
  if (j.contains("min_overlap")) {
    if (auto v = check.positive(j["min_overlap"], "min_overlap")) cfg.min_overlap = *v;
  }
  if (j.contains("classify")) {
    const json& c = j["classify"];
    Checker sub("classify.");
    if (!c.is_object()) {
      check.fail("classify", "expected an object");
    } else {
      sub.unknown_keys(c, {"fidelity_threshold", "boson_threshold"});
      if (c.contains("fidelity_threshold")) {
        if (auto v = sub.positive(c["fidelity_threshold"], "fidelity_threshold")) {
          cfg.classify.fidelity_threshold = *v;
        }
      }
      if (c.contains("boson_threshold")) {
        if (auto v = sub.positive(c["boson_threshold"], "boson_threshold")) {
          cfg.classify.boson_threshold = *v;
        }
      }
    }
    for (auto& e : sub.errors()) check.errors().push_back(e);
  }
  if (j.contains("threads")) {
    if (auto v = check.count(j["threads"], "threads", 0)) cfg.threads = *v;
  }
  if (!check.errors().empty()) throw ConfigError(join_errors(check.errors()));
  cfg.validate();
  return cfg;
}

RunConfig load_config(const fs::path& path) { return parse_config(read_file(path)); }

fs::path resolve_output_dir(const RunConfig& config, const std::optional<std::string>& cli_out) {
  if (cli_out && !cli_out->empty()) return *cli_out;
  if (const char* env = std::getenv("SBQA_OUTPUT_DIR"); env && *env) return env;
  return config.output_dir;
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      out.close();
      fs::remove(tmp);
      throw Error("failed writing " + tmp.string());
    }
  }
  fs::rename(tmp, path);
}

CommandReport cmd_spectrum(const RunConfig& config, const fs::path& out) {
  CommandReport report;
  const std::vector<double> grid = grid_for(config);
  const std::size_t n = config.n_spins;
  const bool sb = config.model == ModelKind::spinboson;
  const Basis basis = sb ? build_basis(n, n, config.resolved_n_max()) : build_basis(n, 0, 0);
  const std::size_t levels = std::min(default_levels(config), basis.dim());
  std::optional<AffineHamiltonian> family;
  std::optional<RingBlocks> blocks;
  if (sb) {
    family.emplace(spinboson_family(n, config.omega, basis));
    blocks.emplace(*family);
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::vector<double>> rows(grid.size(), std::vector<double>(levels + 2, nan));
  std::vector<std::string> failures(grid.size());
  detail::parallel_for(grid.size(), config.threads, [&](std::size_t i) {
    const double s = grid[i];
    std::vector<double>& row = rows[i];
    try {
      const SpectrumSlice ising = ising_spectrum(n, s);
      if (sb) {
        const BlockSpectrum spectrum = blocks->at(s);
        for (std::size_t k = 0; k < levels; ++k) row[k] = spectrum.energy(k);
        const Matrix target = ising_target_space(ising, n, config.degeneracy_tol);
        const RelevantState rel = spinboson_relevant(spectrum, basis, n, target, config.min_overlap);
        row[levels] = rel.gap;
        row[levels + 1] = rel.correlator;
      } else {
        for (std::size_t k = 0; k < levels; ++k) {
          row[k] = ising.energies(static_cast<Eigen::Index>(k));
        }
        row[levels] = relevant_gap_ising(ising, n);
        row[levels + 1] = correlator_O(ising.states.col(0), basis, n);
      }
    } catch (const std::exception& e) {
      failures[i] = "s=" + format_number(s) + ": " + e.what();
    }
  });
  for (const auto& f : failures) {
    if (!f.empty()) report.errors.push_back(f);
  }

  std::string csv = "s";
  for (std::size_t k = 0; k < levels; ++k) csv += ",E" + std::to_string(k);
  csv += ",relevant_gap,O\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    csv += format_number(grid[i]);
    for (double v : rows[i]) csv += "," + format_number(v);
    csv += '\n';
  }
  const fs::path file = out / "spectrum.csv";
  write_atomic(file, csv);
  report.files.push_back(file.string());
  return report;
}

CommandReport cmd_passage(const RunConfig& config, const fs::path& out) {
  if (config.passage != PassageMode::fair) {
    throw ConfigError("invalid config\n  passage: the passage command needs \"fair\"");
  }
  CommandReport report;
  FairOptions opts;
  opts.grid_points = config.grid_points;
  opts.degeneracy_tol = config.degeneracy_tol;
  opts.min_overlap = config.min_overlap;
  opts.threads = config.threads;
  const FairPair pair = build_fair_pair(config.n_spins, config.omega, config.resolved_n_max(), opts);

  std::string csv = "lambda,s_sb,c,O_sb,O_ising,gap_sb,gap_ising\n";
  for (const FairnessRow& r : pair.rows) {
    csv += format_number(r.lambda) + "," + format_number(r.s_sb) + "," + format_number(r.c) + "," +
           format_number(r.O_sb) + "," + format_number(r.O_ising) + "," + format_number(r.gap_sb) +
           "," + format_number(r.gap_ising) + "\n";
    if (!(std::abs(r.O_sb - r.O_ising) <= 1e-3)) {
      report.errors.push_back("correlation mismatch " + format_number(r.O_sb - r.O_ising) +
                              " at lambda=" + format_number(r.lambda));
    }
  }
  const fs::path sb_file = out / "spec_sb.json";
  const fs::path ising_file = out / "spec_ising.json";
  const fs::path csv_file = out / "fairness.csv";
  write_atomic(sb_file, pair.spinboson.to_json());
  write_atomic(ising_file, pair.ising.to_json());
  write_atomic(csv_file, csv);
  report.files = {sb_file.string(), ising_file.string(), csv_file.string()};
  return report;
}

namespace {

const char* model_tag(bool spinboson) { return spinboson ? "sb" : "ising"; }

PassageSpec load_fair_spec(const RunConfig& config, const fs::path& out, bool spinboson) {
  const fs::path src = out / (spinboson ? "spec_sb.json" : "spec_ising.json");
  if (!fs::exists(src)) {
    throw ConfigError("invalid config\n  passage: fair sweep needs " + src.string() +
                      " (run the passage command first)");
  }
  PassageSpec spec = PassageSpec::from_json(read_file(src));
  if (spec.n_spins != config.n_spins || spec.omega != config.omega ||
      spec.n_max != config.resolved_n_max() || spec.spinboson() != spinboson) {
    throw ConfigError("invalid config\n  " + src.string() +
                      " was built for different n_spins/omega/n_max");
  }
  return spec;
}

}  // namespace

CommandReport cmd_sweep(const RunConfig& config, const fs::path& out) {
  if (config.T_list.empty()) throw ConfigError("invalid config\n  T_list: sweep needs at least one T");
  CommandReport report;
  std::vector<PassageSpec> specs;
  if (config.passage == PassageMode::linear) {
    specs.push_back(
        linear_spec(linear_kind(config.model), config.n_spins, config.omega, spec_n_max(config)));
  } else {
    specs.push_back(load_fair_spec(config, out, true));
    specs.push_back(load_fair_spec(config, out, false));
  }
  std::vector<PassageSystem> systems;
  for (const PassageSpec& spec : specs) systems.emplace_back(spec, config.degeneracy_tol);

  std::vector<SweepRow> rows;
  for (const PassageSystem& system : systems) {
    std::vector<SweepRow> part = sweep(system, config.T_list, config.integrator, config.threads);
    for (SweepRow& r : part) {
      if (!std::isfinite(r.p_error)) {
        report.errors.push_back(std::string(model_tag(system.spec().spinboson())) +
                                " T=" + format_number(r.T) + ": " + csv_flags(r.flags));
      }
      rows.push_back(std::move(r));
    }
  }
  sort_rows(rows);

  std::string csv = "omega,T,p_error,n_max,steps_per_unit,flags\n";
  for (const SweepRow& r : rows) {
    csv += format_number(r.omega) + "," + format_number(r.T) + "," + format_number(r.p_error) + "," +
           std::to_string(r.n_max) + "," + std::to_string(r.steps_per_unit) + "," +
           csv_flags(r.flags) + "\n";
  }
  const fs::path file = out / "sweep.csv";
  write_atomic(file, csv);
  report.files.push_back(file.string());

  TraceOptions trace;
  trace.samples = config.trace_samples;
  trace.classify = config.classify;
  for (const PassageSystem& system : systems) {
    const char* tag = model_tag(system.spec().spinboson());
    for (double T : config.trace_T) {
      const fs::path trace_file = out / ("trace_" + std::string(tag) + "_T" + file_label(T) + ".csv");
      try {
        const EvolutionResult r = run_passage(system, T, config.integrator, trace);
        std::string t_csv = "t,solution,excited_solution,spin_error,other\n";
        for (const PopulationSample& p : r.trace) {
          t_csv += format_number(p.t) + "," + format_number(p.solution) + "," +
                   format_number(p.excited_solution) + "," + format_number(p.spin_error) + "," +
                   format_number(p.other) + "\n";
        }
        write_atomic(trace_file, t_csv);
        report.files.push_back(trace_file.string());
      } catch (const Error& e) {
        report.errors.push_back(std::string("trace ") + tag + " T=" + format_number(T) + ": " +
                                e.what());
      }
    }
  }
  return report;
}

CommandReport cmd_classify(const RunConfig& config, const fs::path& out) {
  CommandReport report;
  const std::vector<double> grid = config.classify_s.empty() ? grid_for(config) : config.classify_s;
  const PassageSpec spec =
      linear_spec(linear_kind(config.model), config.n_spins, config.omega, spec_n_max(config));
  const PassageSystem system(spec, config.degeneracy_tol);
  const Basis& basis = system.basis();
  const std::size_t levels = std::min(default_levels(config), basis.dim());
  const bool sb = config.model == ModelKind::spinboson;
  std::optional<RingBlocks> blocks;
  if (sb) blocks.emplace(system.family());

  std::vector<std::vector<StateProperties>> props(grid.size());
  std::vector<Eigen::VectorXd> energies(grid.size());
  std::vector<std::string> failures(grid.size());
  detail::parallel_for(grid.size(), config.threads, [&](std::size_t i) {
    try {
      SpectrumSlice slice = sb ? blocks->lowest(grid[i], levels)
                               : eigen_lowest(system.family().at(grid[i]), levels);
      props[i] = classify_eigenstates(slice, system.final_spin_projector(), basis, config.classify);
      energies[i] = slice.energies;
    } catch (const std::exception& e) {
      failures[i] = "s=" + format_number(grid[i]) + ": " + e.what();
    }
  });
  for (const auto& f : failures) {
    if (!f.empty()) report.errors.push_back(f);
  }

  std::string csv = "s,index,energy,label,spin_fidelity,mean_bosons\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t k = 0; k < props[i].size(); ++k) {
      const StateProperties& p = props[i][k];
      csv += format_number(grid[i]) + "," + std::to_string(k) + "," +
             format_number(energies[i](static_cast<Eigen::Index>(k))) + "," + to_string(p.label) +
             "," + format_number(p.spin_fidelity) + "," + format_number(p.mean_bosons) + "\n";
    }
  }
  const fs::path file = out / "levels.csv";
  write_atomic(file, csv);
  report.files.push_back(file.string());

  if (sb) {
    const std::vector<BandSeparation> scan = band_separation_scan(
        system.family(), SymmetrySector::ring(basis), system.final_spin_projector(), grid,
        config.classify);
    std::string bands = "s,separation\n";
    for (const BandSeparation& b : scan) {
      bands += format_number(b.s) + "," + format_number(b.separation) + "\n";
    }
    const fs::path band_file = out / "band_separation.csv";
    write_atomic(band_file, bands);
    report.files.push_back(band_file.string());
  }
  return report;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Quantum annealing passages of Ising and spin-boson rings"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir;
  std::size_t threads = 0;
  bool threads_set = false;

  struct Command {
    const char* name;
    const char* help;
    CommandReport (*run)(const RunConfig&, const fs::path&);
  };
  const Command commands[] = {
      {"spectrum", "Low-lying spectrum, relevant gap and correlation along s", cmd_spectrum},
      {"passage", "Fair spin-boson and Ising passages with their fairness table", cmd_passage},
      {"sweep", "Error probability after passages of total time T", cmd_sweep},
      {"classify", "Labeled low-lying eigenstates along s", cmd_classify},
  };
  for (const Command& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--out", out_dir, "Output directory (overrides $SBQA_OUTPUT_DIR and config)");
    sub->add_option("--threads", threads, "Worker threads (0 = all cores)")
        ->each([&](const std::string&) { threads_set = true; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  const Command* chosen = nullptr;
  for (const Command& c : commands) {
    if (app.got_subcommand(c.name)) chosen = &c;
  }
  auto summary = [&](const char* status, int code, const std::vector<std::string>& errors,
                     const std::vector<std::string>& files) {
    json j;
    j["status"] = status;
    j["command"] = chosen->name;
    j["exit_code"] = code;
    j["errors"] = errors;
    j["files"] = files;
    (code == 0 ? std::cout : std::cerr) << j.dump() << '\n';
    return code;
  };

  try {
    RunConfig config = load_config(config_path);
    if (threads_set) config.threads = threads;
    const fs::path out = resolve_output_dir(config, out_dir.empty() ? std::nullopt
                                                                    : std::optional(out_dir));
    const CommandReport report = chosen->run(config, out);
    return summary(report.ok() ? "ok" : "failed", report.ok() ? 0 : kExitFailed, report.errors,
                   report.files);
  } catch (const ConfigError& e) {
    return summary("invalid_config", kExitConfig, {e.what()}, {});
  } catch (const Error& e) {
    return summary("failed", kExitFailed, {e.what()}, {});
  } catch (const std::exception& e) {
    return summary("internal_error", kExitInternal, {e.what()}, {});
  }
}

}  // namespace sbqa
