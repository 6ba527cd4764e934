#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "orlicz_gauge/convergence.hpp"
#include "orlicz_gauge/young_modular.hpp"

namespace orlicz::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitIndeterminate = 2;
inline constexpr int kExitValidation = 3;
inline constexpr int kExitViolation = 4;

const std::vector<std::string>& commands();

/// A fully validated experiment. Built from the JSON config first, then
/// command-line overrides.
struct ExperimentConfig {
  std::string command;
  std::optional<VectorFunctionSpec> function;
  std::optional<SequenceSpec> sequence;
  std::optional<FamilyTemplate> family;
  YoungFunctionSpec theta = YoungFunctionSpec::power(2.0);
  WeightedMeasure measure{Interval{0.0, 1.0}};
  QuadratureConfig quadrature;
  std::optional<std::vector<double>> k_grid;
  std::uint64_t seed = 0;
  int jobs = 1;
  int budget = 64;
  int grid_size = 64;
  double scale = 1.0;
  std::size_t dimension = 2;
  NormBackend backend = NormBackend::kHenstockKurzweil;
  IntegrationSense sense = IntegrationSense::kHenstockKurzweil;
  ClassifierConfig classifier;
  std::string json_out;
  std::string csv_out;
  std::string svg_out;
};

/// Raw pieces the command line can override; empty fields keep the config.
struct Overrides {
  std::string command;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::optional<double> tol;
  std::optional<std::size_t> max_cells;
  std::optional<int> budget;
  std::string function_json;
  std::string theta_json;
  std::string json_out;
  std::string csv_out;
  std::string svg_out;
};

/// Validates `config` (may be null for flag-only runs) and applies the
/// overrides. The seed falls back to ORLICZ_GAUGE_SEED, then 0. Throws
/// Error(kValidation) with a path on any problem.
ExperimentConfig build_config(const nlohmann::json& config, const Overrides& overrides);

/// Runs one experiment: the enveloped report goes to `out`, artifacts to
/// the configured paths. Returns the exit code.
int execute(const ExperimentConfig& config, std::ostream& out);

/// Full front end: argument parsing, config loading, structured errors on
/// `err`. argv[0] is the program name.
int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

/// Static SVG 1.1 line chart of the per-n distances on a log axis.
std::string render_svg(const ConvergenceReport& report, const std::string& title);

/// Writes through a temporary sibling and renames it into place.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace orlicz::cli
