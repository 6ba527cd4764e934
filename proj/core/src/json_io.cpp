#include "orlicz_gauge/json_io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>

#include "orlicz_gauge/errors.hpp"
#include "orlicz_gauge/expression.hpp"

namespace orlicz::json_io {

namespace {

[[noreturn]] void invalid(const std::string& path, const std::string& what) {
  fail(ErrorCode::kValidation, (path.empty() ? std::string("/") : path) + ": " + what);
}

// Object reader that rejects unknown keys.
class Reader {
 public:
  Reader(const json& j, std::string path, std::set<std::string> allowed)
      : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) invalid(path_, "expected an object");
    for (const auto& [key, value] : j_.items()) {
      if (!allowed.count(key)) invalid(path_ + "/" + key, "unknown field");
    }
  }

  bool has(const std::string& key) const { return j_.contains(key); }
  const json& at(const std::string& key) const {
    if (!j_.contains(key)) invalid(path_ + "/" + key, "missing required field");
    return j_.at(key);
  }
  std::string path(const std::string& key) const { return path_ + "/" + key; }

  double number(const std::string& key) const {
    const json& v = at(key);
    if (!v.is_number()) invalid(path(key), "expected a number");
    return v.get<double>();
  }
  double number_or(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
  }
  std::string string(const std::string& key) const {
    const json& v = at(key);
    if (!v.is_string()) invalid(path(key), "expected a string");
    return v.get<std::string>();
  }

 private:
  const json& j_;
  std::string path_;
};

std::string substitute(const std::string& source, const Bindings& b, const std::string& path) {
  std::string out;
  for (std::size_t i = 0; i < source.size();) {
    if (source[i] != '$') {
      out += source[i++];
      continue;
    }
    std::size_t j = i + 1;
    while (j < source.size() && (std::isalnum(static_cast<unsigned char>(source[j])) || source[j] == '_')) ++j;
    const std::string name = source.substr(i + 1, j - i - 1);
    const auto it = b.parameters.find(name);
    if (name.empty() || it == b.parameters.end()) {
      invalid(path, "unbound placeholder $" + name);
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "(%.17g)", it->second);
    out += buf;
    i = j;
  }
  return out;
}

double param_value(const json& v, const Bindings& b, const std::string& path) {
  if (v.is_number()) return v.get<double>();
  if (!v.is_string()) invalid(path, "expected a number or an expression string");
  const std::string source = substitute(v.get<std::string>(), b, path);
  double value;
  try {
    value = ParamExpression(source).evaluate(
        b.n.value_or(std::numeric_limits<double>::quiet_NaN()));
  } catch (const Error& e) {
    invalid(path, e.what());
  }
  if (!std::isfinite(value)) {
    invalid(path, b.n ? "expression is not finite" : "expression needs a sequence index n");
  }
  return value;
}

std::vector<double> param_list(const json& v, const Bindings& b, const std::string& path) {
  if (!v.is_array()) invalid(path, "expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(param_value(v[i], b, path + "/" + std::to_string(i)));
  }
  return out;
}

Interval interval_from(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    invalid(path, "expected [lo, hi]");
  }
  const Interval i{v[0].get<double>(), v[1].get<double>()};
  if (!(i.lo < i.hi) || !std::isfinite(i.lo) || !std::isfinite(i.hi)) {
    invalid(path, "interval needs finite lo < hi");
  }
  return i;
}

// Library constructors report InvalidSpec; at the configuration boundary
// these are validation failures with a path.
template <class F>
auto guarded(const std::string& path, F&& make) {
  try {
    return make();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kValidation) throw;
    invalid(path, e.what());
  }
}

FunctionSpec function_at(const json& j, const Bindings& b, const std::string& path) {
  Reader r(j, path, {"kind", "params", "children"});
  const std::string kind = r.string("kind");
  const json empty = json::object();
  const json& params = r.has("params") ? r.at("params") : empty;
  const std::string ppath = r.path("params");
  const auto expect_params = [&](std::set<std::string> names) {
    Reader p(params, ppath, names);
    for (const auto& n : names) p.at(n);
  };
  const auto get = [&](const char* key) {
    return param_value(params.at(key), b, ppath + "/" + key);
  };
  if (kind != "combination" && r.has("children")) {
    invalid(r.path("children"), "only combinations have children");
  }
  return guarded(path, [&]() -> FunctionSpec {
    if (kind == "constant") {
      expect_params({"c"});
      return FunctionSpec::constant(get("c"));
    }
    if (kind == "monomial") {
      expect_params({"alpha"});
      return FunctionSpec::monomial(get("alpha"));
    }
    if (kind == "trig") {
      expect_params({"amplitude", "frequency", "phase"});
      return FunctionSpec::trig(get("amplitude"), get("frequency"), get("phase"));
    }
    if (kind == "indicator") {
      expect_params({"lo", "hi"});
      return FunctionSpec::indicator(get("lo"), get("hi"));
    }
    if (kind == "hk_pathological") {
      expect_params({"beta", "gamma"});
      return FunctionSpec::hk_pathological(get("beta"), get("gamma"));
    }
    if (kind == "spikes") {
      expect_params({"points", "heights"});
      const auto pts = param_list(params.at("points"), b, ppath + "/points");
      const auto hts = param_list(params.at("heights"), b, ppath + "/heights");
      if (pts.size() != hts.size()) invalid(ppath, "points and heights differ in length");
      std::vector<Spike> spikes;
      for (std::size_t i = 0; i < pts.size(); ++i) spikes.push_back({pts[i], hts[i]});
      return FunctionSpec::spikes(std::move(spikes));
    }
    if (kind == "combination") {
      expect_params({"coefficients"});
      const auto coeffs = param_list(params.at("coefficients"), b, ppath + "/coefficients");
      const json& children = r.at("children");
      if (!children.is_array() || children.size() != coeffs.size()) {
        invalid(r.path("children"), "expected one child per coefficient");
      }
      std::vector<Term> terms;
      for (std::size_t i = 0; i < coeffs.size(); ++i) {
        terms.push_back({coeffs[i], function_at(children[i], b,
                                                r.path("children") + "/" + std::to_string(i))});
      }
      return FunctionSpec::combination(std::move(terms));
    }
    invalid(r.path("kind"), "unknown function kind '" + kind + "'");
  });
}

std::string_view kind_name(FunctionSpec::Kind k) {
  using K = FunctionSpec::Kind;
  switch (k) {
    case K::kConstant:
      return "constant";
    case K::kMonomial:
      return "monomial";
    case K::kTrig:
      return "trig";
    case K::kIndicator:
      return "indicator";
    case K::kHkPathological:
      return "hk_pathological";
    case K::kSpikes:
      return "spikes";
    case K::kCombination:
      return "combination";
  }
  return "unknown";
}

NormSpec norm_from(const json& v, const std::string& path) {
  if (v.is_string() && v.get<std::string>() == "inf") return NormSpec::infinity();
  if (!v.is_number()) invalid(path, "expected q >= 1 or \"inf\"");
  return guarded(path, [&] { return NormSpec(v.get<double>()); });
}

VectorFunctionSpec vector_at(const json& j, Interval default_domain, const Bindings& b,
                             const std::string& path) {
  if (j.is_object() && j.contains("kind")) {
    return VectorFunctionSpec::scalar(function_at(j, b, path), default_domain);
  }
  Reader r(j, path, {"components", "norm", "domain"});
  const json& comps = r.at("components");
  if (!comps.is_array() || comps.empty()) invalid(r.path("components"), "expected a nonempty array");
  std::vector<FunctionSpec> fs;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    fs.push_back(function_at(comps[i], b, r.path("components") + "/" + std::to_string(i)));
  }
  const NormSpec norm = r.has("norm") ? norm_from(r.at("norm"), r.path("norm")) : NormSpec{2.0};
  const Interval domain =
      r.has("domain") ? interval_from(r.at("domain"), r.path("domain")) : default_domain;
  return guarded(path, [&] { return VectorFunctionSpec(std::move(fs), norm, domain); });
}

}  // namespace

FunctionSpec function_from_json(const json& j, const Bindings& b) {
  return function_at(j, b, "");
}

json to_json(const FunctionSpec& f) {
  json j;
  j["kind"] = kind_name(f.kind());
  const auto& p = f.parameters();
  switch (f.kind()) {
    case FunctionSpec::Kind::kConstant:
      j["params"] = {{"c", p[0]}};
      break;
    case FunctionSpec::Kind::kMonomial:
      j["params"] = {{"alpha", p[0]}};
      break;
    case FunctionSpec::Kind::kTrig:
      j["params"] = {{"amplitude", p[0]}, {"frequency", p[1]}, {"phase", p[2]}};
      break;
    case FunctionSpec::Kind::kIndicator:
      j["params"] = {{"lo", p[0]}, {"hi", p[1]}};
      break;
    case FunctionSpec::Kind::kHkPathological:
      j["params"] = {{"beta", p[0]}, {"gamma", p[1]}};
      break;
    case FunctionSpec::Kind::kSpikes: {
      json pts = json::array(), hts = json::array();
      for (const Spike& s : f.spike_list()) {
        pts.push_back(s.at);
        hts.push_back(s.height);
      }
      j["params"] = {{"points", pts}, {"heights", hts}};
      break;
    }
    case FunctionSpec::Kind::kCombination: {
      json coeffs = json::array(), children = json::array();
      for (const Term& t : f.terms()) {
        coeffs.push_back(t.coefficient);
        children.push_back(to_json(t.spec));
      }
      j["params"] = {{"coefficients", coeffs}};
      j["children"] = children;
      break;
    }
  }
  return j;
}

VectorFunctionSpec vector_from_json(const json& j, Interval default_domain, const Bindings& b) {
  return vector_at(j, default_domain, b, "");
}

json to_json(const VectorFunctionSpec& f) {
  json comps = json::array();
  for (const FunctionSpec& c : f.components()) comps.push_back(to_json(c));
  json norm = f.target_norm().is_infinity() ? json("inf") : json(f.target_norm().q());
  return {{"components", comps}, {"norm", norm}, {"domain", {f.domain().lo, f.domain().hi}}};
}

YoungFunctionSpec young_from_json(const json& j) {
  Reader r(j, "", {"family", "params", "witnesses"});
  const std::string family = r.string("family");
  const json empty = json::object();
  const json& params = r.has("params") ? r.at("params") : empty;
  const auto expect = [&](std::set<std::string> names) {
    Reader p(params, "/params", names);
    for (const auto& n : names) p.at(n);
    return p;
  };
  YoungFunctionSpec th = guarded("/family", [&]() -> YoungFunctionSpec {
    if (family == "power") return YoungFunctionSpec::power(expect({"p"}).number("p"));
    if (family == "power_scaled") return YoungFunctionSpec::power_scaled(expect({"p"}).number("p"));
    if (family == "exponential") {
      expect({});
      return YoungFunctionSpec::exponential();
    }
    if (family == "piecewise") {
      const Reader p = expect({"p", "threshold"});
      return YoungFunctionSpec::piecewise(p.number("p"), p.number("threshold"));
    }
    if (family == "variable_exponent") {
      expect({"exponent"});
      return YoungFunctionSpec::variable_exponent(
          function_at(params.at("exponent"), {}, "/params/exponent"));
    }
    invalid("/family", "unknown Young family '" + family + "'");
  });
  if (r.has("witnesses")) {
    const json& wj = r.at("witnesses");
    Reader w(wj, "/witnesses", {"alpha", "lambda", "rho", "rho0"});
    AxiomWitnesses ws;
    const auto read = [&](const char* key, std::optional<FunctionSpec>& slot) {
      if (w.has(key)) slot = function_at(wj.at(key), {}, w.path(key));
    };
    read("alpha", ws.alpha);
    read("lambda", ws.lambda);
    read("rho", ws.rho);
    read("rho0", ws.rho0);
    if (ws.alpha.has_value() != ws.lambda.has_value() || ws.rho.has_value() != ws.rho0.has_value()) {
      invalid("/witnesses", "witnesses come in pairs (alpha, lambda) and (rho, rho0)");
    }
    th = th.with_witnesses(std::move(ws));
  }
  return th;
}

json to_json(const YoungFunctionSpec& th) {
  json j{{"family", to_string(th.family())}};
  using F = YoungFunctionSpec::Family;
  switch (th.family()) {
    case F::kPower:
    case F::kPowerScaled:
    case F::kPowerUnchecked:
      j["params"] = {{"p", th.p()}};
      break;
    case F::kPiecewise:
      j["params"] = {{"p", th.p()}, {"threshold", th.threshold()}};
      break;
    case F::kVariableExponent:
      j["params"] = {{"exponent", to_json(*th.exponent())}};
      break;
    case F::kExponential:
      j["params"] = json::object();
      break;
  }
  const AxiomWitnesses& w = th.witnesses();
  if (w.has_lower() || w.has_upper()) {
    json wj = json::object();
    if (w.has_lower()) {
      wj["alpha"] = to_json(*w.alpha);
      wj["lambda"] = to_json(*w.lambda);
    }
    if (w.has_upper()) {
      wj["rho"] = to_json(*w.rho);
      wj["rho0"] = to_json(*w.rho0);
    }
    j["witnesses"] = wj;
  }
  return j;
}

WeightedMeasure measure_from_json(const json& j) {
  Reader r(j, "", {"interval", "weight"});
  const Interval i = interval_from(r.at("interval"), "/interval");
  if (!r.has("weight")) return WeightedMeasure(i);
  const FunctionSpec w = function_at(r.at("weight"), {}, "/weight");
  return guarded("/weight", [&] { return WeightedMeasure(i, w); });
}

json to_json(const WeightedMeasure& m) {
  json j{{"interval", {m.interval().lo, m.interval().hi}}};
  if (m.weight()) j["weight"] = to_json(*m.weight());
  return j;
}

QuadratureConfig quadrature_from_json(const json& j, QuadratureConfig cfg) {
  Reader r(j, "", {"tol", "rel_tol", "max_cells", "h_max", "singular_shrink_ratio",
                   "point_gauge", "divergence_threshold", "mode"});
  cfg.tol = r.number_or("tol", cfg.tol);
  cfg.rel_tol = r.number_or("rel_tol", cfg.rel_tol);
  if (r.has("max_cells")) {
    const json& v = r.at("max_cells");
    if (!v.is_number_integer() || v.get<long long>() < 0) {
      invalid("/max_cells", "expected a nonnegative integer");
    }
    cfg.max_cells = v.get<std::size_t>();
  }
  if (r.has("h_max")) cfg.h_max = r.number("h_max");
  cfg.singular_shrink_ratio = r.number_or("singular_shrink_ratio", cfg.singular_shrink_ratio);
  if (r.has("point_gauge")) cfg.point_gauge = r.number("point_gauge");
  cfg.divergence_threshold = r.number_or("divergence_threshold", cfg.divergence_threshold);
  if (r.has("mode")) {
    const std::string mode = r.string("mode");
    if (mode == "representative") {
      cfg.mode = EvalMode::kRepresentative;
    } else if (mode == "raw") {
      cfg.mode = EvalMode::kRaw;
    } else {
      invalid("/mode", "expected \"representative\" or \"raw\"");
    }
  }
  return cfg;
}

json to_json(const QuadratureConfig& cfg) {
  json j{{"tol", cfg.tol},
         {"rel_tol", cfg.rel_tol},
         {"max_cells", cfg.max_cells},
         {"singular_shrink_ratio", cfg.singular_shrink_ratio},
         {"divergence_threshold", cfg.divergence_threshold},
         {"mode", cfg.mode == EvalMode::kRaw ? "raw" : "representative"}};
  if (cfg.h_max) j["h_max"] = *cfg.h_max;
  if (cfg.point_gauge) j["point_gauge"] = *cfg.point_gauge;
  return j;
}

TaggedPartition partition_from_json(const json& j) {
  if (!j.is_array()) invalid("", "expected an array of tagged cells");
  std::vector<TaggedCell> cells;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string path = "/" + std::to_string(i);
    Reader r(j[i], path, {"cell", "tag"});
    const Interval c = interval_from(r.at("cell"), r.path("cell"));
    cells.push_back({c.lo, c.hi, r.number("tag")});
  }
  return guarded("", [&] { return TaggedPartition(std::move(cells)); });
}

json to_json(const TaggedPartition& p) {
  json j = json::array();
  for (const TaggedCell& c : p.cells()) j.push_back({{"cell", {c.lo, c.hi}}, {"tag", c.tag}});
  return j;
}

SequenceSpec sequence_from_json(const json& j, Interval default_domain,
                                const std::map<std::string, double>& parameters) {
  Reader r(j, "", {"template", "limit", "n_max"});
  const json& n_max_j = r.at("n_max");
  if (!n_max_j.is_number_integer() || n_max_j.get<int>() < 1) {
    invalid("/n_max", "expected a positive integer");
  }
  const int n_max = n_max_j.get<int>();
  Bindings fixed;
  fixed.parameters = parameters;
  const VectorFunctionSpec limit = vector_at(r.at("limit"), default_domain, fixed, "/limit");
  const json tmpl = r.at("template");
  // Validate every term eagerly so configuration errors surface before
  // any computation.
  std::vector<VectorFunctionSpec> terms;
  for (int n = 1; n <= n_max; ++n) {
    Bindings b = fixed;
    b.n = n;
    terms.push_back(vector_at(tmpl, default_domain, b, "/template"));
  }
  SequenceSpec seq([terms](int n) { return terms.at(static_cast<std::size_t>(n - 1)); }, limit,
                   n_max);
  for (int n = 1; n <= n_max; ++n) guarded("/template", [&] { return seq.term(n); });
  return seq;
}

FamilyTemplate family_from_json(const json& j, Interval default_domain) {
  Reader r(j, "", {"name", "sequence", "sweep"});
  FamilyTemplate family;
  family.name = r.has("name") ? r.string("name") : std::string("family");
  const json& sweep = r.at("sweep");
  if (!sweep.is_array()) invalid("/sweep", "expected an array of parameter objects");
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    const std::string path = "/sweep/" + std::to_string(i);
    if (!sweep[i].is_object()) invalid(path, "expected an object");
    FamilyTemplate::Parameters p;
    for (const auto& [k, v] : sweep[i].items()) {
      if (!v.is_number()) invalid(path + "/" + k, "expected a number");
      p[k] = v.get<double>();
    }
    family.sweep.push_back(std::move(p));
  }
  const json seq = r.at("sequence");
  // Instantiate once per sweep entry up front to surface errors early.
  for (std::size_t i = 0; i < family.sweep.size(); ++i) {
    try {
      sequence_from_json(seq, default_domain, family.sweep[i]);
    } catch (const Error& e) {
      invalid("/sweep/" + std::to_string(i), std::string("sequence") + e.what());
    }
  }
  family.instantiate = [seq, default_domain](const FamilyTemplate::Parameters& p) {
    return sequence_from_json(seq, default_domain, p);
  };
  return family;
}

// ---------------------------------------------------------------------------
// Reports

json number(double x) {
  if (std::isnan(x)) return nullptr;
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double number_from_json(const json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    invalid("", "expected a number");
  }
  if (!j.is_number()) invalid("", "expected a number");
  return j.get<double>();
}

namespace {

json numbers(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

}  // namespace

json to_json(const IntegralResult& r) {
  return {{"value", r.value.size() == 1 ? number(r.value[0]) : numbers(r.value)},
          {"error_estimate", number(r.error_estimate)},
          {"status", to_string(r.status)},
          {"cells_used", r.cells_used}};
}

json to_json(const SupNormEstimate& r) {
  return {{"value", number(r.value)},
          {"lower_bound", true},
          {"partitions_examined", r.partitions_examined},
          {"budget", r.budget},
          {"seed", r.seed}};
}

json to_json(const AlexiewiczResult& r) {
  return {{"value", number(r.value)}, {"status", to_string(r.status)}};
}

json to_json(const ModularValue& v) {
  return {{"value", number(v.value)}, {"status", to_string(v.status)}, {"cells_used", v.cells_used}};
}

json to_json(const NormValue& v) {
  return {{"value", number(v.value)},
          {"status", to_string(v.status)},
          {"modular_evaluations", v.modular_evaluations}};
}

json to_json(const AxiomReport& r) {
  json checks = json::array();
  for (const AxiomCheck& c : r.checks) {
    checks.push_back({{"condition", std::string(1, c.condition)},
                      {"verdict", to_string(c.verdict)},
                      {"detail", c.detail},
                      {"witness", numbers(c.witness)},
                      {"samples", c.samples}});
  }
  return {{"checks", checks}, {"budget", r.budget}, {"seed", r.seed}};
}

json to_json(const MembershipReport& r) {
  json mods = json::array();
  for (const ModularValue& v : r.modulars) mods.push_back(to_json(v));
  return {{"k_grid", numbers(r.k_grid)},
          {"modulars", mods},
          {"verdict", to_string(r.verdict)},
          {"monotone", r.monotone},
          {"vanishes_as_k_to_zero", r.vanishes_as_k_to_zero}};
}

json to_json(const ConvexityVerdict& r) {
  return {{"lhs", number(r.lhs)},
          {"rhs", number(r.rhs)},
          {"slack", number(r.slack)},
          {"pass", r.pass},
          {"indeterminate", r.indeterminate}};
}

json to_json(const EmbeddingReport& r) {
  return {{"lux_hk", to_json(r.lux_hk)},
          {"lux_lebesgue", to_json(r.lux_lebesgue)},
          {"l1_norm", number(r.l1_norm)},
          {"l1_status", to_string(r.l1_status)},
          {"sup_riemann", to_json(r.sup_riemann)},
          {"norm_inequality", r.norm_inequality},
          {"finite_when_member", r.finite_when_member}};
}

json to_json(const Classification& c) {
  json j{{"verdict", to_string(c.verdict)},
         {"scale", number(c.scale)},
         {"noise_floor", number(c.noise_floor)},
         {"tail_max", number(c.tail_max)},
         {"tail_min", number(c.tail_min)},
         {"log_slope", number(c.log_slope)},
         {"fit_residual", number(c.fit_residual)},
         {"reason", c.reason}};
  j["fitted_limit"] = c.fitted_limit ? number(*c.fitted_limit) : json(nullptr);
  j["fitted_model"] = c.fitted_model;
  return j;
}

namespace {

json modular_json(const ModularConvergence& mc) {
  json per_k = json::array();
  for (std::size_t i = 0; i < mc.k_grid.size(); ++i) {
    json c = to_json(mc.per_k[i]);
    c["k"] = number(mc.k_grid[i]);
    per_k.push_back(c);
  }
  return {{"verdict", to_string(mc.verdict)},
          {"best_k", mc.best_k ? number(*mc.best_k) : json(nullptr)},
          {"per_k", per_k}};
}

json norm_json(const NormConvergence& nc) {
  json norms = json::array();
  for (const NormValue& v : nc.norms) norms.push_back(to_json(v));
  return {{"verdict", to_string(nc.verdict)},
          {"backend", to_string(nc.backend)},
          {"classification", to_json(nc.classification)},
          {"norms", norms}};
}

}  // namespace

json to_json(const ConvergenceReport& r) {
  json table = json::array();
  const auto& grid = r.modular_l.k_grid;
  for (int n = 1; n <= r.n_max; ++n) {
    const auto ni = static_cast<std::size_t>(n - 1);
    for (std::size_t ki = 0; ki < grid.size(); ++ki) {
      table.push_back({{"n", n},
                       {"k", number(grid[ki])},
                       {"modular_L", number(r.modular_l.values[ki][ni].value)},
                       {"modular_H", number(r.modular_h.values[ki][ni].value)},
                       {"norm_L", number(r.norm_l.norms[ni].value)},
                       {"norm_H", number(r.norm_h.norms[ni].value)}});
    }
  }
  return {{"n_max", r.n_max},
          {"k_grid", numbers(grid)},
          {"verdicts",
           {{"modular_L", to_string(r.modular_l.verdict)},
            {"modular_H", to_string(r.modular_h.verdict)},
            {"norm_L", to_string(r.norm_l.verdict)},
            {"norm_H", to_string(r.norm_h.verdict)}}},
          {"modular_L", modular_json(r.modular_l)},
          {"modular_H", modular_json(r.modular_h)},
          {"norm_L", norm_json(r.norm_l)},
          {"norm_H", norm_json(r.norm_h)},
          {"table", table},
          {"trace", r.trace}};
}

json to_json(const ImplicationTable& t) {
  json rows = json::array();
  for (const Implication& i : t.rows) {
    rows.push_back({{"name", i.name},
                    {"antecedent", i.antecedent},
                    {"consequent", i.consequent},
                    {"antecedent_verdict", to_string(i.antecedent_verdict)},
                    {"consequent_verdict", to_string(i.consequent_verdict)},
                    {"violation", i.violation}});
  }
  return {{"implications", rows}, {"any_violation", t.any_violation()}, {"analysis", to_json(t.report)}};
}

json to_json(const Candidate& c) {
  json params = json::object();
  for (const auto& [k, v] : c.parameters) params[k] = number(v);
  return {{"kind", to_string(c.kind)}, {"parameters", params}, {"report", to_json(c.report)}};
}

json envelope(const std::string& kind, json body) {
  json j{{"report", kind}, {"schema_version", kSchemaVersion}};
  for (auto& [k, v] : body.items()) j[k] = v;
  return j;
}

// ---------------------------------------------------------------------------
// Report schemas

namespace {

enum class T { kNumber, kString, kBool, kInteger, kArray, kObject, kNumberOrNull };

struct Field {
  const char* name;
  T type;
};

bool matches(const json& v, T t) {
  switch (t) {
    case T::kNumber:
    case T::kNumberOrNull:
      return v.is_number() || v.is_null() ||
             (v.is_string() && (v == "inf" || v == "-inf"));
    case T::kString:
      return v.is_string();
    case T::kBool:
      return v.is_boolean();
    case T::kInteger:
      return v.is_number_integer();
    case T::kArray:
      return v.is_array();
    case T::kObject:
      return v.is_object();
  }
  return false;
}

std::string check_fields(const json& j, const std::string& path, std::initializer_list<Field> fields) {
  if (!j.is_object()) return path + ": expected an object";
  for (const Field& f : fields) {
    if (!j.contains(f.name)) return path + "/" + f.name + ": missing";
    if (!matches(j.at(f.name), f.type)) return path + "/" + f.name + ": wrong type";
  }
  return {};
}

std::string check_status(const json& j, const std::string& path,
                         std::initializer_list<const char*> allowed) {
  const std::string s = j.get<std::string>();
  for (const char* a : allowed) {
    if (s == a) return {};
  }
  return path + ": unexpected value '" + s + "'";
}

#define ORLICZ_CHECK(expr)            \
  do {                                \
    std::string problem_ = (expr);    \
    if (!problem_.empty()) return problem_; \
  } while (0)

std::string check_integral(const json& j, const std::string& p) {
  ORLICZ_CHECK(check_fields(j, p, {{"error_estimate", T::kNumber}, {"status", T::kString},
                                   {"cells_used", T::kInteger}}));
  if (!j.contains("value") || !(j["value"].is_array() || matches(j["value"], T::kNumber))) {
    return p + "/value: expected a number or an array";
  }
  return check_status(j["status"], p + "/status", {"Converged", "Diverged", "BudgetExhausted"});
}

std::string check_norm(const json& j, const std::string& p) {
  ORLICZ_CHECK(check_fields(j, p, {{"value", T::kNumberOrNull}, {"status", T::kString},
                                   {"modular_evaluations", T::kInteger}}));
  return check_status(j["status"], p + "/status", {"Finite", "NotInSpace", "Indeterminate"});
}

std::string check_modular(const json& j, const std::string& p) {
  ORLICZ_CHECK(check_fields(j, p, {{"value", T::kNumberOrNull}, {"status", T::kString},
                                   {"cells_used", T::kInteger}}));
  return check_status(j["status"], p + "/status", {"Finite", "Infinite", "Indeterminate"});
}

std::string check_sup(const json& j, const std::string& p) {
  return check_fields(j, p, {{"value", T::kNumber}, {"lower_bound", T::kBool},
                             {"partitions_examined", T::kInteger}, {"budget", T::kInteger},
                             {"seed", T::kInteger}});
}

std::string check_verdict(const json& j, const std::string& p) {
  if (!j.is_string()) return p + ": expected a verdict string";
  return check_status(j, p, {"Converges", "DoesNotConverge", "Indeterminate"});
}

std::string check_convergence(const json& j, const std::string& p) {
  ORLICZ_CHECK(check_fields(j, p, {{"n_max", T::kInteger}, {"k_grid", T::kArray},
                                   {"verdicts", T::kObject}, {"modular_L", T::kObject},
                                   {"modular_H", T::kObject}, {"norm_L", T::kObject},
                                   {"norm_H", T::kObject}, {"table", T::kArray},
                                   {"trace", T::kArray}}));
  for (const char* v : {"modular_L", "modular_H", "norm_L", "norm_H"}) {
    if (!j["verdicts"].contains(v)) return p + "/verdicts/" + v + ": missing";
    ORLICZ_CHECK(check_verdict(j["verdicts"][v], p + "/verdicts/" + v));
  }
  const auto rows = j["n_max"].get<long long>() * static_cast<long long>(j["k_grid"].size());
  if (static_cast<long long>(j["table"].size()) != rows) return p + "/table: wrong row count";
  for (std::size_t i = 0; i < j["table"].size(); ++i) {
    ORLICZ_CHECK(check_fields(j["table"][i], p + "/table/" + std::to_string(i),
                              {{"n", T::kInteger}, {"k", T::kNumber},
                               {"modular_L", T::kNumberOrNull}, {"modular_H", T::kNumberOrNull},
                               {"norm_L", T::kNumberOrNull}, {"norm_H", T::kNumberOrNull}}));
  }
  for (const char* s : {"norm_L", "norm_H"}) {
    const json& nc = j[s];
    ORLICZ_CHECK(check_fields(nc, p + "/" + s, {{"verdict", T::kString}, {"norms", T::kArray},
                                                {"classification", T::kObject}}));
    if (static_cast<long long>(nc["norms"].size()) != j["n_max"].get<long long>()) {
      return p + "/" + s + "/norms: wrong length";
    }
    for (std::size_t i = 0; i < nc["norms"].size(); ++i) {
      ORLICZ_CHECK(check_norm(nc["norms"][i], p + "/" + s + "/norms/" + std::to_string(i)));
    }
  }
  for (const char* s : {"modular_L", "modular_H"}) {
    ORLICZ_CHECK(check_fields(j[s], p + "/" + s, {{"verdict", T::kString},
                                                  {"best_k", T::kNumberOrNull},
                                                  {"per_k", T::kArray}}));
  }
  return {};
}

std::string check_implications(const json& j, const std::string& p) {
  ORLICZ_CHECK(check_fields(j, p, {{"implications", T::kArray}, {"any_violation", T::kBool},
                                   {"analysis", T::kObject}}));
  for (std::size_t i = 0; i < j["implications"].size(); ++i) {
    const std::string q = p + "/implications/" + std::to_string(i);
    const json& row = j["implications"][i];
    ORLICZ_CHECK(check_fields(row, q, {{"name", T::kString}, {"antecedent_verdict", T::kString},
                                       {"consequent_verdict", T::kString},
                                       {"violation", T::kBool}}));
    ORLICZ_CHECK(check_verdict(row["antecedent_verdict"], q + "/antecedent_verdict"));
    ORLICZ_CHECK(check_verdict(row["consequent_verdict"], q + "/consequent_verdict"));
  }
  return check_convergence(j["analysis"], p + "/analysis");
}

}  // namespace

std::string validate_report(const json& r) {
  ORLICZ_CHECK(check_fields(r, "", {{"report", T::kString}, {"schema_version", T::kInteger}}));
  if (r["schema_version"] != kSchemaVersion) return "/schema_version: unsupported";
  const std::string kind = r["report"];
  if (kind == "integrate") return check_integral(r, "");
  if (kind == "hk-norm") return check_sup(r, "");
  if (kind == "alexiewicz") {
    ORLICZ_CHECK(check_fields(r, "", {{"value", T::kNumber}, {"status", T::kString}}));
    return check_status(r["status"], "/status", {"Converged", "Diverged", "BudgetExhausted"});
  }
  if (kind == "modular") return check_modular(r, "");
  if (kind == "lux-norm") return check_norm(r, "");
  if (kind == "axioms") {
    ORLICZ_CHECK(check_fields(r, "", {{"checks", T::kArray}, {"budget", T::kInteger},
                                      {"seed", T::kInteger}}));
    if (r["checks"].size() != 6) return "/checks: expected conditions a..f";
    for (std::size_t i = 0; i < 6; ++i) {
      const std::string q = "/checks/" + std::to_string(i);
      ORLICZ_CHECK(check_fields(r["checks"][i], q, {{"condition", T::kString},
                                                    {"verdict", T::kString},
                                                    {"witness", T::kArray},
                                                    {"samples", T::kInteger}}));
      ORLICZ_CHECK(check_status(r["checks"][i]["verdict"], q + "/verdict",
                                {"pass", "fail", "assumed", "not_checked"}));
    }
    return {};
  }
  if (kind == "membership") {
    ORLICZ_CHECK(check_fields(r, "", {{"k_grid", T::kArray}, {"modulars", T::kArray},
                                      {"verdict", T::kString}, {"monotone", T::kBool},
                                      {"vanishes_as_k_to_zero", T::kBool}}));
    if (r["k_grid"].size() != r["modulars"].size()) return "/modulars: wrong length";
    for (std::size_t i = 0; i < r["modulars"].size(); ++i) {
      ORLICZ_CHECK(check_modular(r["modulars"][i], "/modulars/" + std::to_string(i)));
    }
    return check_status(r["verdict"], "/verdict",
                        {"MemberAllK", "MemberSomeK", "NotMember", "Indeterminate"});
  }
  if (kind == "convexity") {
    return check_fields(r, "", {{"lhs", T::kNumberOrNull}, {"rhs", T::kNumberOrNull},
                                {"pass", T::kBool}, {"indeterminate", T::kBool}});
  }
  if (kind == "embedding") {
    ORLICZ_CHECK(check_fields(r, "", {{"lux_hk", T::kObject}, {"lux_lebesgue", T::kObject},
                                      {"l1_norm", T::kNumberOrNull}, {"sup_riemann", T::kObject},
                                      {"norm_inequality", T::kBool},
                                      {"finite_when_member", T::kBool}}));
    ORLICZ_CHECK(check_norm(r["lux_hk"], "/lux_hk"));
    ORLICZ_CHECK(check_norm(r["lux_lebesgue"], "/lux_lebesgue"));
    return check_sup(r["sup_riemann"], "/sup_riemann");
  }
  if (kind == "converge") return check_convergence(r, "");
  if (kind == "implications") return check_implications(r, "");
  if (kind == "counterexample") {
    ORLICZ_CHECK(check_fields(r, "", {{"family", T::kString}, {"candidates", T::kArray},
                                      {"sweep_size", T::kInteger}}));
    for (std::size_t i = 0; i < r["candidates"].size(); ++i) {
      const std::string q = "/candidates/" + std::to_string(i);
      const json& c = r["candidates"][i];
      ORLICZ_CHECK(check_fields(c, q, {{"kind", T::kString}, {"parameters", T::kObject},
                                       {"report", T::kObject}}));
      ORLICZ_CHECK(check_status(c["kind"], q + "/kind",
                                {"h_modular_not_l_modular", "modular_not_norm"}));
      ORLICZ_CHECK(check_convergence(c["report"], q + "/report"));
    }
    return {};
  }
  if (kind == "bench") {
    ORLICZ_CHECK(check_fields(r, "", {{"cases", T::kArray}}));
    for (std::size_t i = 0; i < r["cases"].size(); ++i) {
      ORLICZ_CHECK(check_fields(r["cases"][i], "/cases/" + std::to_string(i),
                                {{"name", T::kString}, {"wall_seconds", T::kNumber},
                                 {"cells_used", T::kInteger}}));
    }
    return {};
  }
  return "/report: unknown report kind '" + kind + "'";
}

#undef ORLICZ_CHECK

}  // namespace orlicz::json_io
