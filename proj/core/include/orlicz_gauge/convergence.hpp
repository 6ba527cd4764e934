#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "orlicz_gauge/function_catalog.hpp"
#include "orlicz_gauge/hk_integral.hpp"
#include "orlicz_gauge/partition.hpp"
#include "orlicz_gauge/young_modular.hpp"

namespace orlicz {

enum class Verdict { kConverges, kDoesNotConverge, kIndeterminate };

std::string_view to_string(Verdict verdict);

/// Finite-horizon "tends to zero" decision for a nonnegative sequence.
///
/// Values are judged against scale = max(finite values) and an absolute
/// noise floor. Over the last half of the indices the sequence converges
/// when the least-squares slope of log v is <= 0 and either the tail max is
/// <= epsilon * scale or a fitted model L + C n^s / L + C e^{-lambda n}
/// with a good residual has |L| <= epsilon * scale. It does not converge
/// when the tail min exceeds lower_factor * epsilon * scale and the tail
/// either rises or is flat to within epsilon. A fitted positive limit is
/// never taken as a certificate, since slow decay such as 1/ln n fits one
/// on any finite horizon. Anything else is Indeterminate.
struct ClassifierConfig {
  double epsilon = 1e-3;
  double lower_factor = 10.0;
};

struct Classification {
  Verdict verdict = Verdict::kIndeterminate;
  double scale = 0.0;
  double noise_floor = 0.0;
  double tail_max = 0.0;
  double tail_min = 0.0;
  double log_slope = 0.0;
  std::optional<double> fitted_limit;
  std::string fitted_model;
  double fit_residual = 0.0;
  std::string reason;
};

/// `values[i]` belongs to n = i + 1; NaN marks an indeterminate entry and
/// +inf an infinite one.
Classification classify_sequence(std::span<const double> values,
                                 const ClassifierConfig& cfg, double noise_floor);

struct AnalysisOptions {
  ClassifierConfig classifier;
  int jobs = 1;
};

struct ModularConvergence {
  IntegrationSense sense = IntegrationSense::kHenstockKurzweil;
  std::vector<double> k_grid;
  /// values[k index][n - 1] = rho(k (f_n - f)).
  std::vector<std::vector<ModularValue>> values;
  std::vector<Classification> per_k;
  Verdict verdict = Verdict::kIndeterminate;
  std::optional<double> best_k;
};

/// Converges when some k converges; DoesNotConverge when every k does not;
/// best_k prefers k = 1, then the smallest converging k.
ModularConvergence modular_convergence(const SequenceSpec& seq,
                                       const YoungFunctionSpec& th,
                                       const WeightedMeasure& m,
                                       std::span<const double> k_grid,
                                       const QuadratureConfig& cfg,
                                       IntegrationSense sense,
                                       const AnalysisOptions& opts = {});

struct NormConvergence {
  NormBackend backend = NormBackend::kHenstockKurzweil;
  std::vector<NormValue> norms;  // [n - 1]
  Classification classification;
  Verdict verdict = Verdict::kIndeterminate;
};

/// Indeterminate when any ||f_n - f|| is NotInSpace.
NormConvergence norm_convergence(const SequenceSpec& seq,
                                 const YoungFunctionSpec& th,
                                 const WeightedMeasure& m,
                                 const QuadratureConfig& cfg, NormBackend backend,
                                 const AnalysisOptions& opts = {});

struct ConvergenceReport {
  int n_max = 0;
  ModularConvergence modular_l;
  ModularConvergence modular_h;
  NormConvergence norm_l;
  NormConvergence norm_h;
  std::vector<std::string> trace;
};

/// Default k grid for sequence analysis: 2^i, i = -4..4.
std::vector<double> default_convergence_grid();

ConvergenceReport analyze_sequence(const SequenceSpec& seq, const YoungFunctionSpec& th,
                                   const WeightedMeasure& m,
                                   std::span<const double> k_grid,
                                   const QuadratureConfig& cfg,
                                   const AnalysisOptions& opts = {});

/// One row per (n, k): n, k, modular_L, modular_H, norm_L, norm_H with
/// %.17g numbers.
std::string report_csv(const ConvergenceReport& report);

struct Implication {
  std::string name;
  std::string antecedent;
  std::string consequent;
  Verdict antecedent_verdict = Verdict::kIndeterminate;
  Verdict consequent_verdict = Verdict::kIndeterminate;
  bool violation = false;
};

struct ImplicationTable {
  ConvergenceReport report;
  std::vector<Implication> rows;

  bool any_violation() const noexcept;
};

/// modular_L => modular_H, norm_L => norm_H, modular_L => norm_H,
/// norm_L => modular_H, and the classical norm_L => modular_L. A row is a
/// violation when its antecedent converges and its consequent does not.
ImplicationTable implication_check(const SequenceSpec& seq, const YoungFunctionSpec& th,
                                   const WeightedMeasure& m,
                                   std::span<const double> k_grid,
                                   const QuadratureConfig& cfg,
                                   const AnalysisOptions& opts = {});

/// Parametric sequence family: a generator for each parameter assignment.
struct FamilyTemplate {
  using Parameters = std::map<std::string, double>;

  std::string name;
  std::function<SequenceSpec(const Parameters&)> instantiate;
  std::vector<Parameters> sweep;
};

enum class CandidateKind {
  kHModularNotLModular,  // modular_H converges, modular_L does not / unknown
  kModularNotNorm,       // modular converges, norm does not (same sense)
};

std::string_view to_string(CandidateKind kind);

struct Candidate {
  CandidateKind kind = CandidateKind::kModularNotNorm;
  FamilyTemplate::Parameters parameters;
  ConvergenceReport report;
};

std::vector<Candidate> counterexample_search(const YoungFunctionSpec& th,
                                             const FamilyTemplate& family,
                                             const WeightedMeasure& m,
                                             std::span<const double> k_grid,
                                             const QuadratureConfig& cfg,
                                             const AnalysisOptions& opts = {});

/// Runs task(i) for i in [0, count) on up to `jobs` threads. Exceptions are
/// rethrown on the caller after all workers finish.
void parallel_for(std::size_t count, int jobs,
                  const std::function<void(std::size_t)>& task);

}  // namespace orlicz
