#include "orlicz_gauge/function_catalog.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "orlicz_gauge/errors.hpp"

namespace orlicz {

struct FunctionSpec::Node {
  Kind kind = Kind::kConstant;
  std::vector<double> params;
  std::vector<Spike> spikes;
  std::vector<Term> terms;
  std::vector<double> singular;
  std::vector<double> exceptions;
  std::vector<double> breaks;
  bool has_antiderivative = true;
};

namespace {

void sort_unique(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) {
    fail(ErrorCode::kInvalidSpec, std::string(what) + " must be finite");
  }
}

bool is_integer(double x) { return std::floor(x) == x; }

double monomial_value(double alpha, double t) {
  if (alpha == 1.0) return t;
  if (alpha == 2.0) return t * t;
  return std::pow(t, alpha);
}

double hk_value(double beta, double gamma, double t) {
  // d/dt [t^b sin(t^-g)] = t^(b-1) (b sin(u) - g u cos(u)),  u = t^-g.
  const double u = std::pow(t, -gamma);
  const double scale = std::pow(t, beta - 1.0);
  return scale * (beta * std::sin(u) - gamma * u * std::cos(u));
}

}  // namespace

FunctionSpec::FunctionSpec(std::shared_ptr<const Node> node)
    : node_(std::move(node)) {}

FunctionSpec FunctionSpec::constant(double c) {
  require_finite(c, "constant value");
  auto node = std::make_shared<Node>();
  node->kind = Kind::kConstant;
  node->params = {c};
  return FunctionSpec(node);
}

FunctionSpec FunctionSpec::monomial(double alpha) {
  require_finite(alpha, "monomial exponent");
  if (!(alpha > -1.0)) {
    fail(ErrorCode::kInvalidSpec, "monomial exponent must exceed -1");
  }
  auto node = std::make_shared<Node>();
  node->kind = Kind::kMonomial;
  node->params = {alpha};
  if (alpha < 0.0) node->singular = {0.0};
  return FunctionSpec(node);
}

FunctionSpec FunctionSpec::trig(double amplitude, double frequency,
                                double phase) {
  require_finite(amplitude, "trig amplitude");
  require_finite(frequency, "trig frequency");
  require_finite(phase, "trig phase");
  auto node = std::make_shared<Node>();
  node->kind = Kind::kTrig;
  node->params = {amplitude, frequency, phase};
  return FunctionSpec(node);
}

FunctionSpec FunctionSpec::indicator(double lo, double hi) {
  require_finite(lo, "indicator bound");
  require_finite(hi, "indicator bound");
  if (!(lo < hi)) {
    fail(ErrorCode::kInvalidSpec, "indicator requires lo < hi");
  }
  auto node = std::make_shared<Node>();
  node->kind = Kind::kIndicator;
  node->params = {lo, hi};
  node->breaks = {lo, hi};
  return FunctionSpec(node);
}

FunctionSpec FunctionSpec::hk_pathological(double beta, double gamma) {
  require_finite(beta, "hk_pathological beta");
  require_finite(gamma, "hk_pathological gamma");
  if (!(beta >= gamma && gamma > 0.0)) {
    fail(ErrorCode::kInvalidSpec, "hk_pathological requires beta >= gamma > 0");
  }
  auto node = std::make_shared<Node>();
  node->kind = Kind::kHkPathological;
  node->params = {beta, gamma};
  node->singular = {0.0};
  return FunctionSpec(node);
}

FunctionSpec FunctionSpec::spikes(std::vector<Spike> spikes) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::kSpikes;
  for (const Spike& s : spikes) {
    require_finite(s.at, "spike location");
    require_finite(s.height, "spike height");
    node->exceptions.push_back(s.at);
  }
  sort_unique(node->exceptions);
  node->spikes = std::move(spikes);
  return FunctionSpec(node);
}

FunctionSpec FunctionSpec::combination(std::vector<Term> terms) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::kCombination;
  for (const Term& term : terms) {
    require_finite(term.coefficient, "combination coefficient");
    const Node& child = *term.spec.node_;
    node->singular.insert(node->singular.end(), child.singular.begin(),
                          child.singular.end());
    node->exceptions.insert(node->exceptions.end(), child.exceptions.begin(),
                            child.exceptions.end());
    node->breaks.insert(node->breaks.end(), child.breaks.begin(),
                        child.breaks.end());
    node->has_antiderivative =
        node->has_antiderivative && child.has_antiderivative;
  }
  sort_unique(node->singular);
  sort_unique(node->exceptions);
  sort_unique(node->breaks);
  node->terms = std::move(terms);
  return FunctionSpec(node);
}

FunctionSpec::Kind FunctionSpec::kind() const noexcept { return node_->kind; }

const std::vector<double>& FunctionSpec::parameters() const noexcept {
  return node_->params;
}

const std::vector<Spike>& FunctionSpec::spike_list() const noexcept {
  return node_->spikes;
}

const std::vector<Term>& FunctionSpec::terms() const noexcept {
  return node_->terms;
}

const std::vector<double>& FunctionSpec::singular_points() const noexcept {
  return node_->singular;
}

const std::vector<double>& FunctionSpec::exception_points() const noexcept {
  return node_->exceptions;
}

const std::vector<double>& FunctionSpec::breakpoints() const noexcept {
  return node_->breaks;
}

bool FunctionSpec::has_antiderivative() const noexcept {
  return node_->has_antiderivative;
}

namespace {

void check_point(const FunctionSpec& f, double t) {
  if (!std::isfinite(t)) {
    fail(ErrorCode::kOutOfDomain, "evaluation point must be finite");
  }
  const auto& singular = f.singular_points();
  if (std::binary_search(singular.begin(), singular.end(), t)) {
    std::ostringstream os;
    os << "evaluation at singular point t=" << t;
    fail(ErrorCode::kSingularPoint, os.str());
  }
  switch (f.kind()) {
    case FunctionSpec::Kind::kMonomial:
      if (t < 0.0 && !is_integer(f.parameters()[0])) {
        fail(ErrorCode::kOutOfDomain,
             "non-integer monomial evaluated at negative t");
      }
      break;
    case FunctionSpec::Kind::kHkPathological:
      if (t < 0.0) {
        fail(ErrorCode::kOutOfDomain, "hk_pathological requires t > 0");
      }
      break;
    case FunctionSpec::Kind::kCombination:
      for (const Term& term : f.terms()) check_point(term.spec, t);
      break;
    default:
      break;
  }
}

}  // namespace

double FunctionSpec::value(double t) const {
  check_point(*this, t);
  return value_unchecked(t);
}

double FunctionSpec::raw_value(double t) const {
  check_point(*this, t);
  return raw_value_unchecked(t);
}

double FunctionSpec::value_unchecked(double t) const noexcept {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::kConstant:
      return n.params[0];
    case Kind::kMonomial:
      return monomial_value(n.params[0], t);
    case Kind::kTrig:
      return n.params[0] * std::sin(n.params[1] * t + n.params[2]);
    case Kind::kIndicator:
      return (n.params[0] <= t && t <= n.params[1]) ? 1.0 : 0.0;
    case Kind::kHkPathological:
      return hk_value(n.params[0], n.params[1], t);
    case Kind::kSpikes:
      return 0.0;
    case Kind::kCombination: {
      double sum = 0.0;
      for (const Term& term : n.terms) {
        sum += term.coefficient * term.spec.value_unchecked(t);
      }
      return sum;
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double FunctionSpec::raw_value_unchecked(double t) const noexcept {
  const Node& n = *node_;
  if (n.kind == Kind::kSpikes) {
    double sum = 0.0;
    for (const Spike& s : n.spikes) {
      if (s.at == t) sum += s.height;
    }
    return sum;
  }
  if (n.kind == Kind::kCombination) {
    double sum = 0.0;
    for (const Term& term : n.terms) {
      sum += term.coefficient * term.spec.raw_value_unchecked(t);
    }
    return sum;
  }
  return value_unchecked(t);
}

std::optional<double> FunctionSpec::antiderivative(double t) const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::kConstant:
      return n.params[0] * t;
    case Kind::kMonomial: {
      const double alpha = n.params[0];
      if (t < 0.0 && !is_integer(alpha)) return std::nullopt;
      return std::pow(t, alpha + 1.0) / (alpha + 1.0);
    }
    case Kind::kTrig: {
      const double a = n.params[0], w = n.params[1], phi = n.params[2];
      if (w == 0.0) return a * std::sin(phi) * t;
      return -a * std::cos(w * t + phi) / w;
    }
    case Kind::kIndicator:
      return std::clamp(t, n.params[0], n.params[1]) - n.params[0];
    case Kind::kHkPathological: {
      if (t < 0.0) return std::nullopt;
      if (t == 0.0) return 0.0;
      return std::pow(t, n.params[0]) * std::sin(std::pow(t, -n.params[1]));
    }
    case Kind::kSpikes:
      return 0.0;
    case Kind::kCombination: {
      double sum = 0.0;
      for (const Term& term : n.terms) {
        const auto part = term.spec.antiderivative(t);
        if (!part) return std::nullopt;
        sum += term.coefficient * *part;
      }
      return sum;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

NormSpec::NormSpec(double q) : q_(q) {
  if (!(q >= 1.0)) {
    fail(ErrorCode::kInvalidSpec, "norm exponent q must lie in [1, inf]");
  }
}

NormSpec NormSpec::infinity() {
  return NormSpec(std::numeric_limits<double>::infinity());
}

bool NormSpec::is_infinity() const noexcept { return std::isinf(q_); }

double NormSpec::operator()(std::span<const double> x) const noexcept {
  if (x.size() == 1) return std::fabs(x[0]);
  double largest = 0.0;
  for (double v : x) largest = std::fmax(largest, std::fabs(v));
  if (is_infinity() || largest == 0.0 || !std::isfinite(largest)) {
    return largest;
  }
  if (q_ == 1.0) {
    double sum = 0.0;
    for (double v : x) sum += std::fabs(v);
    return sum;
  }
  double sum = 0.0;
  if (q_ == 2.0) {
    for (double v : x) sum += (v / largest) * (v / largest);
    return largest * std::sqrt(sum);
  }
  for (double v : x) sum += std::pow(std::fabs(v) / largest, q_);
  return largest * std::pow(sum, 1.0 / q_);
}

std::vector<double> NormSpec::dual_direction(std::span<const double> x) const {
  std::vector<double> g(x.size(), 0.0);
  const double norm = (*this)(x);
  if (norm == 0.0) return g;
  const auto sign = [](double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); };
  if (is_infinity()) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < x.size(); ++i) {
      if (std::fabs(x[i]) > std::fabs(x[best])) best = i;
    }
    g[best] = sign(x[best]);
    return g;
  }
  if (q_ == 1.0) {
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = sign(x[i]);
    return g;
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    g[i] = sign(x[i]) * std::pow(std::fabs(x[i]) / norm, q_ - 1.0);
  }
  return g;
}

// ---------------------------------------------------------------------------

VectorFunctionSpec::VectorFunctionSpec(std::vector<FunctionSpec> components,
                                       NormSpec norm, Interval domain)
    : components_(std::move(components)), norm_(norm), domain_(domain) {
  if (components_.empty()) {
    fail(ErrorCode::kInvalidSpec, "vector function needs at least one component");
  }
  if (!(std::isfinite(domain_.lo) && std::isfinite(domain_.hi) &&
        domain_.lo < domain_.hi)) {
    fail(ErrorCode::kInvalidSpec, "domain must be a finite interval with lo < hi");
  }
}

VectorFunctionSpec VectorFunctionSpec::scalar(FunctionSpec f, Interval domain) {
  return VectorFunctionSpec({std::move(f)}, NormSpec(2.0), domain);
}

std::vector<double> VectorFunctionSpec::evaluate(double t) const {
  if (!domain_.contains(t)) {
    fail(ErrorCode::kOutOfDomain, "evaluation point outside the domain");
  }
  std::vector<double> out;
  out.reserve(components_.size());
  for (const FunctionSpec& f : components_) out.push_back(f.value(t));
  return out;
}

std::vector<double> VectorFunctionSpec::evaluate_raw(double t) const {
  if (!domain_.contains(t)) {
    fail(ErrorCode::kOutOfDomain, "evaluation point outside the domain");
  }
  std::vector<double> out;
  out.reserve(components_.size());
  for (const FunctionSpec& f : components_) out.push_back(f.raw_value(t));
  return out;
}

void VectorFunctionSpec::evaluate_into(double t, std::span<double> out,
                                       EvalMode mode) const noexcept {
  if (mode == EvalMode::kRaw) {
    for (std::size_t i = 0; i < components_.size(); ++i) {
      out[i] = components_[i].raw_value_unchecked(t);
    }
  } else {
    for (std::size_t i = 0; i < components_.size(); ++i) {
      out[i] = components_[i].value_unchecked(t);
    }
  }
}

namespace {

template <class Getter>
std::vector<double> union_of(const std::vector<FunctionSpec>& components,
                             Getter get) {
  std::vector<double> out;
  for (const FunctionSpec& f : components) {
    const auto& pts = get(f);
    out.insert(out.end(), pts.begin(), pts.end());
  }
  sort_unique(out);
  return out;
}

}  // namespace

std::vector<double> VectorFunctionSpec::singular_points() const {
  return union_of(components_,
                  [](const FunctionSpec& f) -> const auto& { return f.singular_points(); });
}

std::vector<double> VectorFunctionSpec::exception_points() const {
  return union_of(components_,
                  [](const FunctionSpec& f) -> const auto& { return f.exception_points(); });
}

std::vector<double> VectorFunctionSpec::breakpoints() const {
  return union_of(components_,
                  [](const FunctionSpec& f) -> const auto& { return f.breakpoints(); });
}

bool VectorFunctionSpec::is_singular(double t) const {
  for (const FunctionSpec& f : components_) {
    const auto& s = f.singular_points();
    if (std::binary_search(s.begin(), s.end(), t)) return true;
  }
  return false;
}

VectorFunctionSpec VectorFunctionSpec::scaled(double factor) const {
  std::vector<FunctionSpec> comps;
  comps.reserve(components_.size());
  for (const FunctionSpec& f : components_) {
    comps.push_back(FunctionSpec::combination({{factor, f}}));
  }
  return VectorFunctionSpec(std::move(comps), norm_, domain_);
}

VectorFunctionSpec VectorFunctionSpec::linear_combination(
    double a, double b, const VectorFunctionSpec& other) const {
  if (other.dimension() != dimension() || !(other.domain() == domain_)) {
    fail(ErrorCode::kInvalidSpec,
         "linear combination needs matching dimension and domain");
  }
  std::vector<FunctionSpec> comps;
  comps.reserve(components_.size());
  for (std::size_t i = 0; i < components_.size(); ++i) {
    std::vector<Term> terms;
    if (a != 0.0) terms.push_back({a, components_[i]});
    if (b != 0.0) terms.push_back({b, other.components_[i]});
    comps.push_back(FunctionSpec::combination(std::move(terms)));
  }
  return VectorFunctionSpec(std::move(comps), norm_, domain_);
}

std::optional<std::vector<double>> oracle_integral(const VectorFunctionSpec& f,
                                                   Interval over) {
  std::vector<double> out;
  out.reserve(f.dimension());
  for (const FunctionSpec& c : f.components()) {
    const auto hi = c.antiderivative(over.hi);
    const auto lo = c.antiderivative(over.lo);
    if (!hi || !lo) return std::nullopt;
    out.push_back(*hi - *lo);
  }
  return out;
}

// ---------------------------------------------------------------------------

SequenceSpec::SequenceSpec(Generator generator, VectorFunctionSpec limit,
                           int n_max)
    : generator_(std::move(generator)), limit_(std::move(limit)), n_max_(n_max) {
  if (!generator_) fail(ErrorCode::kInvalidSpec, "sequence needs a generator");
  if (n_max_ < 1) fail(ErrorCode::kInvalidSpec, "sequence needs n_max >= 1");
}

VectorFunctionSpec SequenceSpec::term(int n) const {
  if (n < 1 || n > n_max_) {
    fail(ErrorCode::kInvalidSpec, "sequence index out of range");
  }
  VectorFunctionSpec f = generator_(n);
  if (f.dimension() != limit_.dimension() || !(f.domain() == limit_.domain())) {
    fail(ErrorCode::kInvalidSpec,
         "sequence term " + std::to_string(n) +
             " does not match the limit's dimension and domain");
  }
  return f;
}

VectorFunctionSpec SequenceSpec::difference(int n) const {
  return term(n).linear_combination(1.0, -1.0, limit_);
}

}  // namespace orlicz
