#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "orlicz_gauge/function_catalog.hpp"
#include "orlicz_gauge/hk_integral.hpp"
#include "orlicz_gauge/partition.hpp"

namespace orlicz {

/// Optional witness functions for the growth conditions: (e) ||x|| >=
/// lambda(t) implies theta(t, x) >= alpha(t); (f) ||x|| <= rho(t) implies
/// theta(t, x) <= rho0(t).
struct AxiomWitnesses {
  std::optional<FunctionSpec> alpha;
  std::optional<FunctionSpec> lambda;
  std::optional<FunctionSpec> rho;
  std::optional<FunctionSpec> rho0;

  bool has_lower() const noexcept { return alpha && lambda; }
  bool has_upper() const noexcept { return rho && rho0; }
};

/// Generalized Young function theta(t, x) = phi(t, ||x||).
class YoungFunctionSpec {
 public:
  enum class Family {
    kPower,             // r^p, p >= 1
    kVariableExponent,  // r^p(t), 1 <= p(t) bounded
    kExponential,       // e^r - r - 1
    kPowerScaled,       // r^p / p
    kPiecewise,         // r^p for r <= threshold, +inf beyond
    kPowerUnchecked,    // r^p for any p > 0; deliberately not validated
  };

  static YoungFunctionSpec power(double p);
  /// `exponent` must be free of singular points; its range is checked
  /// against [1, inf) on a domain by validate().
  static YoungFunctionSpec variable_exponent(FunctionSpec exponent);
  static YoungFunctionSpec exponential();
  static YoungFunctionSpec power_scaled(double p);
  static YoungFunctionSpec piecewise(double p, double threshold);
  /// Test-only family that may violate convexity (e.g. p = 0.5).
  static YoungFunctionSpec power_unchecked(double p);

  Family family() const noexcept { return family_; }
  double p() const noexcept { return p_; }
  double threshold() const noexcept { return threshold_; }
  const std::optional<FunctionSpec>& exponent() const noexcept { return exponent_; }
  const AxiomWitnesses& witnesses() const noexcept { return witnesses_; }
  YoungFunctionSpec with_witnesses(AxiomWitnesses w) const;

  /// Throws InvalidSpec when a variable exponent drops below 1 on `domain`.
  void validate(Interval domain) const;

  /// phi(t, r) for r = ||x|| >= 0; may be +inf.
  double phi(double t, double r) const noexcept;

 private:
  YoungFunctionSpec() = default;

  Family family_ = Family::kPower;
  double p_ = 2.0;
  double threshold_ = 0.0;
  std::optional<FunctionSpec> exponent_;
  AxiomWitnesses witnesses_;
};

std::string_view to_string(YoungFunctionSpec::Family family);

double theta_eval(const YoungFunctionSpec& th, double t,
                  std::span<const double> x, const NormSpec& norm = NormSpec{2.0});

enum class AxiomVerdict { kPass, kFail, kAssumed, kNotChecked };

std::string_view to_string(AxiomVerdict verdict);

struct AxiomCheck {
  char condition = 'a';
  AxiomVerdict verdict = AxiomVerdict::kNotChecked;
  std::string detail;
  /// Sampled counterexample as (t, x..., x'..., lambda) when failed.
  std::vector<double> witness;
  std::size_t samples = 0;
};

struct AxiomReport {
  std::vector<AxiomCheck> checks;  // conditions a..f in order
  int budget = 0;
  std::uint64_t seed = 0;

  const AxiomCheck& at(char condition) const;
  bool any_failure() const noexcept;
};

/// Sampled refutation of the N-function conditions over t in `domain` and
/// x in R^dimension under `norm`. A pass is absence of a sampled violation.
AxiomReport check_nfunction_axioms(const YoungFunctionSpec& th, Interval domain,
                                   int budget, std::uint64_t seed,
                                   std::size_t dimension = 2,
                                   const NormSpec& norm = NormSpec{2.0});

enum class ModularStatus { kFinite, kInfinite, kIndeterminate };

std::string_view to_string(ModularStatus status);

struct ModularValue {
  double value = 0.0;  // +inf when kInfinite, NaN when kIndeterminate
  ModularStatus status = ModularStatus::kFinite;
  std::size_t cells_used = 0;

  bool finite() const noexcept { return status == ModularStatus::kFinite; }
};

/// rho(f) = integral of theta(t, f(t)) d(mu). Divergence maps to +inf and
/// budget exhaustion to Indeterminate.
ModularValue modular(const VectorFunctionSpec& f, const YoungFunctionSpec& th,
                     const WeightedMeasure& m, const QuadratureConfig& cfg);
/// rho(scale * f) without building a scaled spec.
ModularValue modular_scaled(const VectorFunctionSpec& f, double scale,
                            const YoungFunctionSpec& th,
                            const WeightedMeasure& m,
                            const QuadratureConfig& cfg);

enum class NormBackend { kHenstockKurzweil, kLebesgueStyle };
enum class NormStatus { kFinite, kNotInSpace, kIndeterminate };

std::string_view to_string(NormBackend backend);
std::string_view to_string(NormStatus status);

struct NormValue {
  double value = 0.0;  // +inf when NotInSpace, NaN when Indeterminate
  NormStatus status = NormStatus::kFinite;
  int modular_evaluations = 0;

  bool finite() const noexcept { return status == NormStatus::kFinite; }
};

/// inf{k > 0 : rho(f / k) <= 1} by bracketing within [2^-64, 2^64] and
/// bisection to relative 1e-9. Returns the upper end of the final bracket.
NormValue luxemburg_norm(const VectorFunctionSpec& f, const YoungFunctionSpec& th,
                         const WeightedMeasure& m, const QuadratureConfig& cfg,
                         NormBackend backend = NormBackend::kHenstockKurzweil);

enum class MembershipVerdict { kMemberAllK, kMemberSomeK, kNotMember, kIndeterminate };

std::string_view to_string(MembershipVerdict verdict);

struct MembershipReport {
  std::vector<double> k_grid;
  std::vector<ModularValue> modulars;
  MembershipVerdict verdict = MembershipVerdict::kIndeterminate;
  /// rho(k f) nondecreasing in k up to 2 tol on every adjacent pair.
  bool monotone = true;
  /// The small-k quarter of the grid is finite and decays toward 0.
  bool vanishes_as_k_to_zero = false;
};

/// {2^i : i = lo..hi}.
std::vector<double> log2_grid(int lo = -20, int hi = 20);

MembershipReport h_orlicz_membership(const VectorFunctionSpec& f,
                                     const YoungFunctionSpec& th,
                                     const WeightedMeasure& m,
                                     std::span<const double> k_grid,
                                     const QuadratureConfig& cfg);

struct ConvexityVerdict {
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs + 4 tol - lhs
  bool pass = false;
  bool indeterminate = false;
};

/// rho(alpha f + beta g) <= alpha rho(f) + beta rho(g) up to 4 tol.
ConvexityVerdict modular_convexity_check(const VectorFunctionSpec& f,
                                         const VectorFunctionSpec& g,
                                         double alpha, double beta,
                                         const YoungFunctionSpec& th,
                                         const WeightedMeasure& m,
                                         const QuadratureConfig& cfg);

struct EmbeddingReport {
  NormValue lux_hk;
  NormValue lux_lebesgue;
  double l1_norm = 0.0;
  IntegralStatus l1_status = IntegralStatus::kConverged;
  SupNormEstimate sup_riemann;
  /// lux_hk <= lux_lebesgue + 4 tol (true when either is not finite).
  bool norm_inequality = true;
  /// When lux_hk is finite, l1_norm and sup_riemann are finite.
  bool finite_when_member = true;
};

EmbeddingReport embedding_report(const VectorFunctionSpec& f,
                                 const YoungFunctionSpec& th,
                                 const WeightedMeasure& m,
                                 const QuadratureConfig& cfg,
                                 int sup_budget = 64, std::uint64_t seed = 0);

}  // namespace orlicz
