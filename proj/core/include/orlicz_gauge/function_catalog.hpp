#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace orlicz {

/// Closed interval [lo, hi] with lo < hi.
struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  double length() const noexcept { return hi - lo; }
  bool contains(double t) const noexcept { return lo <= t && t <= hi; }
  bool operator==(const Interval&) const = default;
};

/// Which representative of an a.e.-class a function evaluation returns.
enum class EvalMode {
  kRepresentative,  // exception-set spikes are invisible
  kRaw,             // spikes included
};

struct Spike {
  double at = 0.0;
  double height = 0.0;
};

struct Term;

/// Immutable description of a real function from the closed catalog.
///
/// Every spec knows its singular points (evaluation undefined or unbounded),
/// its exception set (points where the raw value differs from the a.e.
/// representative), its jump breakpoints, and, where available, a
/// closed-form antiderivative used as an independent oracle.
class FunctionSpec {
 public:
  enum class Kind {
    kConstant,
    kMonomial,
    kTrig,
    kIndicator,
    kHkPathological,
    kSpikes,
    kCombination,
  };

  /// f(t) = c.
  static FunctionSpec constant(double c);
  /// f(t) = t^alpha, alpha > -1. Non-integer alpha requires t >= 0.
  static FunctionSpec monomial(double alpha);
  /// f(t) = amplitude * sin(frequency * t + phase).
  static FunctionSpec trig(double amplitude, double frequency, double phase);
  /// Indicator of the closed interval [lo, hi].
  static FunctionSpec indicator(double lo, double hi);
  /// Derivative of F(t) = t^beta sin(t^-gamma), F(0) = 0, with beta >= gamma > 0.
  /// Defined for t > 0; t = 0 is singular.
  static FunctionSpec hk_pathological(double beta, double gamma);
  /// Zero a.e.; raw evaluation returns the summed heights at each spike.
  static FunctionSpec spikes(std::vector<Spike> spikes);
  /// Finite linear combination sum_i coefficient_i * spec_i.
  static FunctionSpec combination(std::vector<Term> terms);

  Kind kind() const noexcept;
  /// Kind-specific scalar parameters: constant {c}, monomial {alpha},
  /// trig {amplitude, frequency, phase}, indicator {lo, hi},
  /// hk_pathological {beta, gamma}; empty for spikes and combinations.
  const std::vector<double>& parameters() const noexcept;
  const std::vector<Spike>& spike_list() const noexcept;
  const std::vector<Term>& terms() const noexcept;

  /// A.e. representative value. Throws SingularPoint at a singular point and
  /// OutOfDomain where the family is undefined (e.g. t < 0 for t^0.5).
  double value(double t) const;
  /// Value including exception-set spikes.
  double raw_value(double t) const;
  /// Unchecked evaluation for quadrature loops; callers guarantee t is valid.
  double value_unchecked(double t) const noexcept;
  double raw_value_unchecked(double t) const noexcept;

  const std::vector<double>& singular_points() const noexcept;
  const std::vector<double>& exception_points() const noexcept;
  const std::vector<double>& breakpoints() const noexcept;

  bool has_antiderivative() const noexcept;
  /// Closed-form antiderivative F with F' = f away from singular points.
  std::optional<double> antiderivative(double t) const;

  struct Node;

 private:
  explicit FunctionSpec(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

struct Term {
  double coefficient = 1.0;
  FunctionSpec spec;
};

/// l^q norm on coordinate vectors, q in [1, inf].
class NormSpec {
 public:
  explicit NormSpec(double q = 2.0);
  static NormSpec infinity();

  double q() const noexcept { return q_; }
  bool is_infinity() const noexcept;
  double operator()(std::span<const double> x) const noexcept;
  /// A unit-dual-norm functional g with <g, x> = ||x||.
  std::vector<double> dual_direction(std::span<const double> x) const;

 private:
  double q_;
};

/// Vector-valued function t -> (f_1(t), ..., f_d(t)) on a common domain.
class VectorFunctionSpec {
 public:
  VectorFunctionSpec(std::vector<FunctionSpec> components, NormSpec norm,
                     Interval domain);
  static VectorFunctionSpec scalar(FunctionSpec f, Interval domain = {});

  std::size_t dimension() const noexcept { return components_.size(); }
  const std::vector<FunctionSpec>& components() const noexcept {
    return components_;
  }
  const NormSpec& target_norm() const noexcept { return norm_; }
  const Interval& domain() const noexcept { return domain_; }

  /// A.e. representative. Throws SingularPoint / OutOfDomain.
  std::vector<double> evaluate(double t) const;
  /// Includes spikes. Throws SingularPoint / OutOfDomain.
  std::vector<double> evaluate_raw(double t) const;
  void evaluate_into(double t, std::span<double> out,
                     EvalMode mode) const noexcept;

  std::vector<double> singular_points() const;
  std::vector<double> exception_points() const;
  std::vector<double> breakpoints() const;
  bool is_singular(double t) const;

  VectorFunctionSpec scaled(double factor) const;
  /// Componentwise a*this + b*other; zero coefficients are dropped.
  VectorFunctionSpec linear_combination(double a, double b,
                                        const VectorFunctionSpec& other) const;

 private:
  std::vector<FunctionSpec> components_;
  NormSpec norm_;
  Interval domain_;
};

/// Exact integral over `over` from declared antiderivatives, componentwise;
/// nullopt when any component lacks one.
std::optional<std::vector<double>> oracle_integral(const VectorFunctionSpec& f,
                                                   Interval over);

/// Parametric sequence n -> f_n with a limit f, n = 1..n_max.
class SequenceSpec {
 public:
  using Generator = std::function<VectorFunctionSpec(int n)>;

  SequenceSpec(Generator generator, VectorFunctionSpec limit, int n_max);

  int n_max() const noexcept { return n_max_; }
  const VectorFunctionSpec& limit() const noexcept { return limit_; }
  /// f_n, validated against the limit's domain and dimension.
  VectorFunctionSpec term(int n) const;
  /// f_n - f.
  VectorFunctionSpec difference(int n) const;

 private:
  Generator generator_;
  VectorFunctionSpec limit_;
  int n_max_;
};

}  // namespace orlicz
