#pragma once

// Config ingestion and the four experiment commands behind the `sbqa` tool.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sbqa/evolve.hpp"

namespace sbqa {

enum class PassageMode { linear, fair };

struct RunConfig {
  std::size_t n_spins = 3;
  double omega0 = 1.0;
  double omega = 1.0;
  /// Unset: default_n_max(omega).
  std::optional<std::size_t> n_max;
  ModelKind model = ModelKind::ising;
  PassageMode passage = PassageMode::linear;
  std::size_t grid_points = 201;
  std::vector<double> T_list;
  IntegratorConfig integrator;
  std::string output_dir = "out";
  /// Energies per row of spectrum.csv and states per s in levels.csv.
  std::optional<std::size_t> n_levels;
  /// s values for classify; unset: uniform grid of grid_points.
  std::vector<double> classify_s;
  /// T values for which sweep also writes a population trace.
  std::vector<double> trace_T;
  std::size_t trace_samples = 101;
  double degeneracy_tol = 1e-8;
  double min_overlap = 0.5;
  ClassifyOptions classify;
  std::size_t threads = 0;

  std::size_t resolved_n_max() const;
  /// Throws ConfigError listing every violation.
  void validate() const;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Parses and validates a JSON config; unknown keys are rejected.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Precedence: --out, then $SBQA_OUTPUT_DIR, then config output_dir.
std::filesystem::path resolve_output_dir(const RunConfig& config,
                                         const std::optional<std::string>& cli_out);

/// Shortest-safe round-trip formatting with 17 significant digits.
std::string format_number(double x);

/// Writes via a temporary file in the same directory, then renames.
void write_atomic(const std::filesystem::path& path, const std::string& content);

struct CommandReport {
  std::vector<std::string> files;
  std::vector<std::string> errors;
  bool ok() const { return errors.empty(); }
};

CommandReport cmd_spectrum(const RunConfig& config, const std::filesystem::path& out);
CommandReport cmd_passage(const RunConfig& config, const std::filesystem::path& out);
CommandReport cmd_sweep(const RunConfig& config, const std::filesystem::path& out);
CommandReport cmd_classify(const RunConfig& config, const std::filesystem::path& out);

/// Entry point of the command-line tool; returns the process exit code.
int run_cli(int argc, char** argv);

}  // namespace sbqa
