#include "orlicz_gauge/young_modular.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "orlicz_gauge/errors.hpp"

namespace orlicz {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double power_of(double r, double p) {
  if (p == 1.0) return r;
  if (p == 2.0) return r * r;
  return std::pow(r, p);
}

void require_exponent(double p, double min, const char* what) {
  if (!(std::isfinite(p) && p >= min)) {
    fail(ErrorCode::kInvalidSpec, std::string(what) + " exponent out of range");
  }
}

}  // namespace

YoungFunctionSpec YoungFunctionSpec::power(double p) {
  require_exponent(p, 1.0, "power");
  YoungFunctionSpec th;
  th.family_ = Family::kPower;
  th.p_ = p;
  return th;
}

YoungFunctionSpec YoungFunctionSpec::variable_exponent(FunctionSpec exponent) {
  if (!exponent.singular_points().empty()) {
    fail(ErrorCode::kInvalidSpec, "variable exponent must be bounded");
  }
  YoungFunctionSpec th;
  th.family_ = Family::kVariableExponent;
  th.p_ = kNaN;
  th.exponent_ = std::move(exponent);
  return th;
}

YoungFunctionSpec YoungFunctionSpec::exponential() {
  YoungFunctionSpec th;
  th.family_ = Family::kExponential;
  th.p_ = kNaN;
  return th;
}

YoungFunctionSpec YoungFunctionSpec::power_scaled(double p) {
  require_exponent(p, 1.0, "power_scaled");
  YoungFunctionSpec th;
  th.family_ = Family::kPowerScaled;
  th.p_ = p;
  return th;
}

YoungFunctionSpec YoungFunctionSpec::piecewise(double p, double threshold) {
  require_exponent(p, 1.0, "piecewise");
  if (!(threshold > 0.0 && std::isfinite(threshold))) {
    fail(ErrorCode::kInvalidSpec, "piecewise threshold must be positive");
  }
  YoungFunctionSpec th;
  th.family_ = Family::kPiecewise;
  th.p_ = p;
  th.threshold_ = threshold;
  return th;
}

YoungFunctionSpec YoungFunctionSpec::power_unchecked(double p) {
  require_exponent(p, std::numeric_limits<double>::min(), "power_unchecked");
  YoungFunctionSpec th;
  th.family_ = Family::kPowerUnchecked;
  th.p_ = p;
  return th;
}

YoungFunctionSpec YoungFunctionSpec::with_witnesses(AxiomWitnesses w) const {
  YoungFunctionSpec th = *this;
  th.witnesses_ = std::move(w);
  return th;
}

void YoungFunctionSpec::validate(Interval domain) const {
  if (family_ != Family::kVariableExponent) return;
  constexpr int kProbes = 257;
  for (int i = 0; i < kProbes; ++i) {
    const double t = domain.lo + domain.length() * i / (kProbes - 1);
    const double p = exponent_->value(t);
    if (!(p >= 1.0 && std::isfinite(p))) {
      fail(ErrorCode::kInvalidSpec, "variable exponent must satisfy p(t) >= 1");
    }
  }
}

double YoungFunctionSpec::phi(double t, double r) const noexcept {
  switch (family_) {
    case Family::kPower:
    case Family::kPowerUnchecked:
      return power_of(r, p_);
    case Family::kVariableExponent:
      return power_of(r, exponent_->value_unchecked(t));
    case Family::kExponential:
      if (r < 1e-5) return r * r * (0.5 + r / 6.0);
      return std::expm1(r) - r;
    case Family::kPowerScaled:
      return power_of(r, p_) / p_;
    case Family::kPiecewise:
      return r <= threshold_ ? power_of(r, p_) : kInf;
  }
  return kNaN;
}

std::string_view to_string(YoungFunctionSpec::Family family) {
  using F = YoungFunctionSpec::Family;
  switch (family) {
    case F::kPower:
      return "power";
    case F::kVariableExponent:
      return "variable_exponent";
    case F::kExponential:
      return "exponential";
    case F::kPowerScaled:
      return "power_scaled";
    case F::kPiecewise:
      return "piecewise";
    case F::kPowerUnchecked:
      return "power_unchecked";
  }
  return "unknown";
}

double theta_eval(const YoungFunctionSpec& th, double t,
                  std::span<const double> x, const NormSpec& norm) {
  return th.phi(t, norm(x));
}

// ---------------------------------------------------------------------------
// Axiom sampling

std::string_view to_string(AxiomVerdict verdict) {
  switch (verdict) {
    case AxiomVerdict::kPass:
      return "pass";
    case AxiomVerdict::kFail:
      return "fail";
    case AxiomVerdict::kAssumed:
      return "assumed";
    case AxiomVerdict::kNotChecked:
      return "not_checked";
  }
  return "unknown";
}

const AxiomCheck& AxiomReport::at(char condition) const {
  for (const AxiomCheck& c : checks) {
    if (c.condition == condition) return c;
  }
  fail(ErrorCode::kValidation, std::string("no axiom check for condition ") + condition);
}

bool AxiomReport::any_failure() const noexcept {
  return std::any_of(checks.begin(), checks.end(),
                     [](const AxiomCheck& c) { return c.verdict == AxiomVerdict::kFail; });
}

namespace {

class AxiomSampler {
 public:
  AxiomSampler(const YoungFunctionSpec& th, Interval domain, std::uint64_t seed,
               std::size_t dim, const NormSpec& norm)
      : th_(th), domain_(domain), rng_(seed), dim_(dim), norm_(norm) {}

  double sample_t() {
    return std::uniform_real_distribution<double>(domain_.lo, domain_.hi)(rng_);
  }

  // Random direction scaled to norm r.
  std::vector<double> sample_with_norm(double r) {
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    std::vector<double> x(dim_);
    double n = 0.0;
    while (n == 0.0) {
      for (double& c : x) c = coord(rng_);
      n = norm_(x);
    }
    for (double& c : x) c *= r / n;
    // Rounding may leave ||x|| an ulp above r; probes at a cap need <= r.
    while (norm_(x) > r) {
      for (double& c : x) c = std::nextafter(c, 0.0);
    }
    return x;
  }

  std::vector<double> sample_x() {
    const double exponent = std::uniform_real_distribution<double>(-3.0, 2.0)(rng_);
    return sample_with_norm(std::pow(10.0, exponent));
  }

  double unit() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_); }

  double theta(double t, std::span<const double> x) const {
    return theta_eval(th_, t, x, norm_);
  }

  std::size_t dim() const { return dim_; }

 private:
  const YoungFunctionSpec& th_;
  Interval domain_;
  std::mt19937_64 rng_;
  std::size_t dim_;
  NormSpec norm_;
};

std::vector<double> pack(double t, std::span<const double> x,
                         std::span<const double> y, double lambda) {
  std::vector<double> w{t};
  w.insert(w.end(), x.begin(), x.end());
  w.insert(w.end(), y.begin(), y.end());
  w.push_back(lambda);
  return w;
}

void record_failure(AxiomCheck& check, std::string detail, std::vector<double> witness) {
  if (check.verdict == AxiomVerdict::kFail) return;
  check.verdict = AxiomVerdict::kFail;
  check.detail = std::move(detail);
  check.witness = std::move(witness);
}

bool exceeds(double lhs, double rhs) {
  if (std::isnan(lhs) || std::isnan(rhs)) return true;
  if (std::isinf(rhs)) return false;
  if (std::isinf(lhs)) return true;
  return lhs > rhs + 1e-10 * std::max(1.0, std::fabs(rhs));
}

}  // namespace

AxiomReport check_nfunction_axioms(const YoungFunctionSpec& th, Interval domain,
                                   int budget, std::uint64_t seed,
                                   std::size_t dimension, const NormSpec& norm) {
  if (budget < 1) fail(ErrorCode::kInvalidSpec, "axiom sample budget must be >= 1");
  if (dimension < 1) fail(ErrorCode::kInvalidSpec, "dimension must be >= 1");
  th.validate(domain);
  AxiomSampler s(th, domain, seed, dimension, norm);

  AxiomReport report;
  report.budget = budget;
  report.seed = seed;
  AxiomCheck a{'a', AxiomVerdict::kAssumed,
               "joint measurability is not checkable for black-box specs", {}, 0};
  AxiomCheck b{'b', AxiomVerdict::kPass, "", {}, 0};
  AxiomCheck c{'c', AxiomVerdict::kPass, "", {}, 0};
  AxiomCheck d{'d', AxiomVerdict::kPass, "", {}, 0};
  AxiomCheck e{'e', AxiomVerdict::kNotChecked, "no witnesses declared", {}, 0};
  AxiomCheck f{'f', AxiomVerdict::kNotChecked, "no witnesses declared", {}, 0};
  const std::vector<double> zero(dimension, 0.0);

  // (c) convexity; the first triple is the canonical midpoint probe.
  for (int i = 0; i < budget; ++i) {
    const double t = s.sample_t();
    std::vector<double> x, y;
    double lambda;
    if (i == 0) {
      x = zero;
      y = zero;
      y[0] = 1.0;
      lambda = 0.5;
    } else {
      x = s.sample_x();
      y = s.sample_x();
      lambda = s.unit();
    }
    std::vector<double> z(dimension);
    for (std::size_t j = 0; j < dimension; ++j) z[j] = lambda * x[j] + (1.0 - lambda) * y[j];
    const double lhs = s.theta(t, z);
    const double rhs = lambda * s.theta(t, x) + (1.0 - lambda) * s.theta(t, y);
    ++c.samples;
    if (exceeds(lhs, rhs)) {
      record_failure(c, "theta(t, l x + (1-l) x') > l theta(t, x) + (1-l) theta(t, x')",
                     pack(t, x, y, lambda));
    }
  }

  // (b) lower semicontinuity along x_k -> x from both sides.
  for (int i = 0; i < budget; ++i) {
    const double t = s.sample_t();
    std::vector<double> x = s.sample_x();
    if (i == 0 && th.family() == YoungFunctionSpec::Family::kPiecewise) {
      x = s.sample_with_norm(th.threshold());
    }
    const double at = s.theta(t, x);
    for (double sign : {1.0, -1.0}) {
      double liminf = kInf;
      std::vector<double> xk(dimension);
      for (int k = 40; k <= 52; ++k) {
        for (std::size_t j = 0; j < dimension; ++j) {
          xk[j] = x[j] * (1.0 + sign * std::ldexp(1.0, -k));
        }
        liminf = std::min(liminf, s.theta(t, xk));
      }
      ++b.samples;
      if (at > liminf + 1e-8 * std::max(1.0, std::fabs(liminf)) || std::isnan(at)) {
        record_failure(b, "theta(t, x) > liminf theta(t, x_k)", pack(t, x, xk, sign));
      }
    }
  }

  // (d) theta(t, 0) = 0, evenness and nonnegativity.
  for (int i = 0; i < budget; ++i) {
    const double t = s.sample_t();
    std::vector<double> x = s.sample_x();
    std::vector<double> neg(dimension);
    for (std::size_t j = 0; j < dimension; ++j) neg[j] = -x[j];
    const double v0 = s.theta(t, zero);
    const double vx = s.theta(t, x);
    const double vn = s.theta(t, neg);
    ++d.samples;
    if (v0 != 0.0) record_failure(d, "theta(t, 0) != 0", pack(t, zero, zero, 0.0));
    if (!(vx >= 0.0)) record_failure(d, "theta(t, x) < 0", pack(t, x, x, 0.0));
    if (vx != vn) record_failure(d, "theta(t, x) != theta(t, -x)", pack(t, x, neg, 0.0));
  }

  const AxiomWitnesses& w = th.witnesses();
  if (w.has_lower()) {
    e.verdict = AxiomVerdict::kPass;
    e.detail.clear();
    for (int i = 0; i < budget; ++i) {
      const double t = s.sample_t();
      const double alpha = w.alpha->value(t), lambda = w.lambda->value(t);
      ++e.samples;
      if (!(alpha > 0.0 && lambda > 0.0)) {
        record_failure(e, "witness alpha or lambda not positive", {t, alpha, lambda});
        continue;
      }
      const std::vector<double> x = s.sample_with_norm(lambda * (1.0 + 10.0 * s.unit()));
      if (exceeds(alpha, s.theta(t, x))) {
        record_failure(e, "||x|| >= lambda(t) but theta(t, x) < alpha(t)",
                       pack(t, x, {}, lambda));
      }
    }
  }
  if (w.has_upper()) {
    f.verdict = AxiomVerdict::kPass;
    f.detail.clear();
    for (int i = 0; i < budget; ++i) {
      const double t = s.sample_t();
      const double rho = w.rho->value(t), rho0 = w.rho0->value(t);
      ++f.samples;
      if (!(rho > 0.0 && rho0 > 0.0)) {
        record_failure(f, "witness rho or rho0 not positive", {t, rho, rho0});
        continue;
      }
      const std::vector<double> x = s.sample_with_norm(rho * s.unit());
      if (exceeds(s.theta(t, x), rho0)) {
        record_failure(f, "||x|| <= rho(t) but theta(t, x) > rho0(t)",
                       pack(t, x, {}, rho));
      }
    }
  }

  report.checks = {a, b, c, d, e, f};
  return report;
}

// ---------------------------------------------------------------------------
// Modular and norm

std::string_view to_string(ModularStatus status) {
  switch (status) {
    case ModularStatus::kFinite:
      return "Finite";
    case ModularStatus::kInfinite:
      return "Infinite";
    case ModularStatus::kIndeterminate:
      return "Indeterminate";
  }
  return "Unknown";
}

std::string_view to_string(NormBackend backend) {
  return backend == NormBackend::kHenstockKurzweil ? "HK" : "LebesgueStyle";
}

std::string_view to_string(NormStatus status) {
  switch (status) {
    case NormStatus::kFinite:
      return "Finite";
    case NormStatus::kNotInSpace:
      return "NotInSpace";
    case NormStatus::kIndeterminate:
      return "Indeterminate";
  }
  return "Unknown";
}

std::string_view to_string(MembershipVerdict verdict) {
  switch (verdict) {
    case MembershipVerdict::kMemberAllK:
      return "MemberAllK";
    case MembershipVerdict::kMemberSomeK:
      return "MemberSomeK";
    case MembershipVerdict::kNotMember:
      return "NotMember";
    case MembershipVerdict::kIndeterminate:
      return "Indeterminate";
  }
  return "Unknown";
}

namespace {

Integrand composed(const VectorFunctionSpec& f, double scale,
                   const YoungFunctionSpec& th, EvalMode mode) {
  Integrand g;
  g.dimension = 1;
  const std::size_t d = f.dimension();
  g.evaluate = [f, scale, th, mode, d](double t, std::span<double> out) {
    double buffer[8];
    std::vector<double> heap;
    std::span<double> x;
    if (d <= 8) {
      x = std::span<double>(buffer, d);
    } else {
      heap.resize(d);
      x = heap;
    }
    f.evaluate_into(t, x, mode);
    for (double& c : x) c *= scale;
    out[0] = th.phi(t, f.target_norm()(x));
  };
  g.singular_points = f.singular_points();
  g.breakpoints = f.breakpoints();
  if (th.exponent()) {
    const auto& extra = th.exponent()->breakpoints();
    g.breakpoints.insert(g.breakpoints.end(), extra.begin(), extra.end());
  }
  g.exception_points = f.exception_points();
  g.norm = NormSpec{2.0};
  return g;
}

ModularValue to_modular(const IntegralResult& r) {
  ModularValue v;
  v.cells_used = r.cells_used;
  switch (r.status) {
    case IntegralStatus::kConverged:
      v.value = r.value[0];
      v.status = ModularStatus::kFinite;
      break;
    case IntegralStatus::kDiverged:
      v.value = kInf;
      v.status = ModularStatus::kInfinite;
      break;
    case IntegralStatus::kBudgetExhausted:
      v.value = kNaN;
      v.status = ModularStatus::kIndeterminate;
      break;
  }
  return v;
}

}  // namespace

ModularValue modular_scaled(const VectorFunctionSpec& f, double scale,
                            const YoungFunctionSpec& th, const WeightedMeasure& m,
                            const QuadratureConfig& cfg) {
  if (!(f.domain().lo <= m.interval().lo && m.interval().hi <= f.domain().hi)) {
    fail(ErrorCode::kOutOfDomain, "measure interval exceeds the function domain");
  }
  if (!std::isfinite(scale)) fail(ErrorCode::kInvalidSpec, "modular scale must be finite");
  th.validate(m.interval());
  if (scale == 0.0) return ModularValue{};
  return to_modular(integrate(composed(f, scale, th, cfg.mode), m, m.interval(), cfg));
}

ModularValue modular(const VectorFunctionSpec& f, const YoungFunctionSpec& th,
                     const WeightedMeasure& m, const QuadratureConfig& cfg) {
  return modular_scaled(f, 1.0, th, m, cfg);
}

NormValue luxemburg_norm(const VectorFunctionSpec& f, const YoungFunctionSpec& th,
                         const WeightedMeasure& m, const QuadratureConfig& cfg,
                         NormBackend backend) {
  constexpr int kMaxExponent = 64;
  constexpr double kRelTol = 1e-9;
  QuadratureConfig c = cfg;
  c.sense = backend == NormBackend::kLebesgueStyle ? IntegrationSense::kLebesgue
                                                   : IntegrationSense::kHenstockKurzweil;
  NormValue out;
  bool indeterminate = false;
  // True when rho(f / k) > 1 (infinite counts as > 1).
  const auto above = [&](double k) {
    ++out.modular_evaluations;
    const ModularValue v = modular_scaled(f, 1.0 / k, th, m, c);
    if (v.status == ModularStatus::kIndeterminate) indeterminate = true;
    return v.status == ModularStatus::kInfinite || v.value > 1.0;
  };
  const auto give_up = [&]() {
    out.value = kNaN;
    out.status = NormStatus::kIndeterminate;
    return out;
  };

  int lo_e, hi_e;  // rho(f / 2^lo_e) > 1 >= rho(f / 2^hi_e)
  if (above(1.0)) {
    if (indeterminate) return give_up();
    lo_e = 0;
    hi_e = 0;
    for (int step = 1;; step *= 2) {
      if (step > kMaxExponent) {
        out.value = kInf;
        out.status = NormStatus::kNotInSpace;
        return out;
      }
      const bool over = above(std::ldexp(1.0, step));
      if (indeterminate) return give_up();
      if (!over) {
        hi_e = step;
        break;
      }
      lo_e = step;
    }
  } else {
    if (indeterminate) return give_up();
    hi_e = 0;
    lo_e = 0;
    for (int step = 1;; step *= 2) {
      if (step > kMaxExponent) {
        out.value = 0.0;
        return out;
      }
      const bool over = above(std::ldexp(1.0, -step));
      if (indeterminate) return give_up();
      if (over) {
        lo_e = -step;
        break;
      }
      hi_e = -step;
    }
  }
  while (hi_e - lo_e > 1) {
    const int mid = lo_e + (hi_e - lo_e) / 2;
    const bool over = above(std::ldexp(1.0, mid));
    if (indeterminate) return give_up();
    (over ? lo_e : hi_e) = mid;
  }
  double k_lo = std::ldexp(1.0, lo_e), k_hi = std::ldexp(1.0, hi_e);
  while (k_hi - k_lo > kRelTol * k_hi) {
    const double mid = 0.5 * (k_lo + k_hi);
    const bool over = above(mid);
    if (indeterminate) return give_up();
    (over ? k_lo : k_hi) = mid;
  }
  out.value = k_hi;
  return out;
}

std::vector<double> log2_grid(int lo, int hi) {
  if (lo > hi) fail(ErrorCode::kInvalidSpec, "empty k grid");
  std::vector<double> grid;
  for (int i = lo; i <= hi; ++i) grid.push_back(std::ldexp(1.0, i));
  return grid;
}

MembershipReport h_orlicz_membership(const VectorFunctionSpec& f,
                                     const YoungFunctionSpec& th,
                                     const WeightedMeasure& m,
                                     std::span<const double> k_grid,
                                     const QuadratureConfig& cfg) {
  if (k_grid.empty()) fail(ErrorCode::kInvalidSpec, "empty k grid");
  MembershipReport report;
  report.k_grid.assign(k_grid.begin(), k_grid.end());
  std::sort(report.k_grid.begin(), report.k_grid.end());
  for (double k : report.k_grid) {
    if (!(k > 0.0 && std::isfinite(k))) fail(ErrorCode::kInvalidSpec, "k grid must be positive");
    report.modulars.push_back(modular_scaled(f, k, th, m, cfg));
  }
  const auto& v = report.modulars;
  const auto count = [&](ModularStatus s) {
    return std::count_if(v.begin(), v.end(), [s](const ModularValue& x) { return x.status == s; });
  };
  const auto finite = count(ModularStatus::kFinite);
  const auto infinite = count(ModularStatus::kInfinite);
  const auto n = static_cast<long>(v.size());
  if (finite == n) {
    report.verdict = MembershipVerdict::kMemberAllK;
  } else if (finite > 0) {
    report.verdict = MembershipVerdict::kMemberSomeK;
  } else if (infinite == n) {
    report.verdict = MembershipVerdict::kNotMember;
  } else {
    report.verdict = MembershipVerdict::kIndeterminate;
  }

  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    const ModularValue& a = v[i];
    const ModularValue& b = v[i + 1];
    if (a.status == ModularStatus::kIndeterminate || b.status == ModularStatus::kIndeterminate) {
      continue;
    }
    if (b.status == ModularStatus::kInfinite) continue;
    if (a.status == ModularStatus::kInfinite || a.value > b.value + 2.0 * cfg.tol) {
      report.monotone = false;
    }
  }

  const std::size_t quarter = std::max<std::size_t>(2, (v.size() + 3) / 4);
  if (v.size() >= quarter) {
    bool ok = true;
    for (std::size_t i = 0; i < quarter; ++i) ok = ok && v[i].finite();
    if (ok) {
      const double first = v[0].value, last = v[quarter - 1].value;
      ok = first <= 4.0 * cfg.tol || first <= 0.01 * last;
    }
    report.vanishes_as_k_to_zero = ok;
  }
  return report;
}

ConvexityVerdict modular_convexity_check(const VectorFunctionSpec& f,
                                         const VectorFunctionSpec& g,
                                         double alpha, double beta,
                                         const YoungFunctionSpec& th,
                                         const WeightedMeasure& m,
                                         const QuadratureConfig& cfg) {
  if (!(alpha >= 0.0 && beta >= 0.0 && std::fabs(alpha + beta - 1.0) <= 1e-12)) {
    fail(ErrorCode::kInvalidSpec, "convexity check needs alpha, beta >= 0 with alpha + beta = 1");
  }
  ConvexityVerdict out;
  ModularValue lhs;
  if (beta == 0.0) {
    lhs = modular(f, th, m, cfg);
  } else if (alpha == 0.0) {
    lhs = modular(g, th, m, cfg);
  } else {
    lhs = modular(f.linear_combination(alpha, beta, g), th, m, cfg);
  }
  double rhs = 0.0;
  bool indeterminate = lhs.status == ModularStatus::kIndeterminate;
  for (const auto& [w, spec] : {std::pair{alpha, &f}, std::pair{beta, &g}}) {
    if (w == 0.0) continue;
    const ModularValue term = modular(*spec, th, m, cfg);
    if (term.status == ModularStatus::kIndeterminate) indeterminate = true;
    rhs += w * term.value;
  }
  out.lhs = lhs.value;
  out.rhs = rhs;
  out.indeterminate = indeterminate;
  if (indeterminate) return out;
  const double bound = rhs + 4.0 * cfg.tol;
  out.slack = bound - out.lhs;
  out.pass = std::isinf(rhs) || out.lhs <= bound;
  return out;
}

EmbeddingReport embedding_report(const VectorFunctionSpec& f,
                                 const YoungFunctionSpec& th,
                                 const WeightedMeasure& m,
                                 const QuadratureConfig& cfg, int sup_budget,
                                 std::uint64_t seed) {
  EmbeddingReport r;
  r.lux_hk = luxemburg_norm(f, th, m, cfg, NormBackend::kHenstockKurzweil);
  r.lux_lebesgue = luxemburg_norm(f, th, m, cfg, NormBackend::kLebesgueStyle);

  Integrand size;
  size.dimension = 1;
  size.evaluate = [f](double t, std::span<double> out) {
    std::vector<double> x(f.dimension());
    f.evaluate_into(t, x, EvalMode::kRepresentative);
    out[0] = f.target_norm()(x);
  };
  size.singular_points = f.singular_points();
  size.breakpoints = f.breakpoints();
  QuadratureConfig l1_cfg = cfg;
  l1_cfg.sense = IntegrationSense::kLebesgue;
  l1_cfg.mode = EvalMode::kRepresentative;
  const IntegralResult l1 = integrate(size, m, m.interval(), l1_cfg);
  r.l1_status = l1.status;
  r.l1_norm = l1.status == IntegralStatus::kConverged ? l1.value[0]
              : l1.status == IntegralStatus::kDiverged ? kInf
                                                       : kNaN;
  r.sup_riemann = sup_riemann_norm(f, m, sup_budget, seed);

  if (r.lux_hk.finite() && r.lux_lebesgue.finite()) {
    r.norm_inequality = r.lux_hk.value <= r.lux_lebesgue.value + 4.0 * cfg.tol;
  }
  if (r.lux_hk.finite()) {
    r.finite_when_member = std::isfinite(r.l1_norm) && std::isfinite(r.sup_riemann.value);
  }
  return r;
}

}  // namespace orlicz
