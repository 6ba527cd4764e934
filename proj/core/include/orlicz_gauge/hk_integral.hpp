#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "orlicz_gauge/function_catalog.hpp"
#include "orlicz_gauge/partition.hpp"

namespace orlicz {

enum class IntegralStatus { kConverged, kDiverged, kBudgetExhausted };

std::string_view to_string(IntegralStatus status);

/// Which integrability notion the integrator certifies. The Lebesgue sense
/// additionally requires the norm of the integrand to have a finite
/// integral, so conditionally convergent improper limits are rejected.
enum class IntegrationSense { kHenstockKurzweil, kLebesgue };

struct QuadratureConfig {
  /// Absolute tolerance on the norm of the error.
  double tol = 1e-10;
  /// Optional relative tolerance; the effective tolerance is
  /// max(tol, rel_tol * |coarse estimate|).
  double rel_tol = 0.0;
  /// Cell budget. Once spent, cells still pending on the bisection stack
  /// (at most one per level) are evaluated once and accepted unsplit.
  std::size_t max_cells = std::size_t{1} << 22;
  /// Maximum accepted cell width; defaults to the whole interval.
  std::optional<double> h_max;
  /// Geometric ratio for cells shrinking toward a declared singular point.
  double singular_shrink_ratio = 0.5;
  /// Gauge at declared exception points in raw mode: a cell whose interior
  /// holds an exception point is split until its width is at most this.
  /// Defaults to h_max.
  std::optional<double> point_gauge;
  /// Partial sums beyond this magnitude near a singular point are divergent.
  double divergence_threshold = 1e12;
  EvalMode mode = EvalMode::kRepresentative;
  IntegrationSense sense = IntegrationSense::kHenstockKurzweil;

  /// Throws InvalidSpec when a field is out of range for `interval`.
  void validate(Interval interval) const;
};

struct IntegralResult {
  std::vector<double> value;
  double error_estimate = 0.0;
  IntegralStatus status = IntegralStatus::kConverged;
  std::size_t cells_used = 0;

  bool converged() const noexcept { return status == IntegralStatus::kConverged; }
};

/// Black-box vector integrand with the structural metadata the integrator
/// needs: singular points (approached geometrically), breakpoints (jumps,
/// never straddled by a cell) and exception points (gauged in raw mode).
struct Integrand {
  std::size_t dimension = 1;
  std::function<void(double t, std::span<double> out)> evaluate;
  std::vector<double> singular_points;
  std::vector<double> breakpoints;
  std::vector<double> exception_points;
  NormSpec norm{2.0};

  static Integrand from(const VectorFunctionSpec& f, EvalMode mode);
};

/// Adaptive gauge-style integration of `g` d(mu) over `over`.
///
/// Each cell carries the nested G30/K61 pair; a cell is bisected when the
/// norm of their discrepancy exceeds its width-proportional share of the
/// tolerance, or when it is wider than h_max. Panels abutting a singular
/// point are covered by cells shrinking geometrically toward the point, and
/// the improper limit is accepted once the extrapolated tail is below its
/// share of the tolerance. Accepted cells are summed in ascending position.
IntegralResult integrate(const Integrand& g, const WeightedMeasure& m,
                         Interval over, const QuadratureConfig& cfg);

IntegralResult hk_integrate(const VectorFunctionSpec& f,
                            const WeightedMeasure& m,
                            const QuadratureConfig& cfg);
IntegralResult hk_integrate(const VectorFunctionSpec& f,
                            const WeightedMeasure& m, Interval over,
                            const QuadratureConfig& cfg);

struct SupNormEstimate {
  /// Best ||S(f, P)|| found; a lower bound of the supremum.
  double value = 0.0;
  std::size_t partitions_examined = 0;
  int budget = 0;
  std::uint64_t seed = 0;
};

/// Lower-bound estimate of sup ||S(f, P)|| over tagged sub-partitions P.
///
/// For every base partition the family searched includes its own tags and
/// all choices of per-cell tags from a fixed candidate set (cell ends,
/// midpoint, quarter and eighth points) together with every sub-selection of
/// cells. For scalar f the maximum over this family is computed exactly
/// (sign-aligned selection of per-cell extremal tags); for vector f it is
/// approached by dual-direction alignment.
SupNormEstimate sup_riemann_norm(const VectorFunctionSpec& f,
                                 const WeightedMeasure& m, int budget,
                                 std::uint64_t seed);
/// Same estimator over an explicit, shared partition stream.
SupNormEstimate sup_riemann_norm(const VectorFunctionSpec& f,
                                 const WeightedMeasure& m,
                                 std::span<const TaggedPartition> stream);

struct AlexiewiczResult {
  double value = 0.0;
  IntegralStatus status = IntegralStatus::kConverged;
};

/// max over x in the uniform grid a + j(b-a)/grid_size, j = 1..grid_size, of
/// ||integral of f over [a, x]||.
AlexiewiczResult alexiewicz_norm(const VectorFunctionSpec& f,
                                 const WeightedMeasure& m, int grid_size,
                                 const QuadratureConfig& cfg);

/// Richardson-extrapolated limit of midpoint Riemann sums on the nested
/// dyadic chain of 2, 4, ..., 2^depth cells. Independent of `integrate`.
std::vector<double> refinement_oracle(const VectorFunctionSpec& f,
                                      const WeightedMeasure& m, int depth);

}  // namespace orlicz
