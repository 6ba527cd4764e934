#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "orlicz_gauge/errors.hpp"
#include "orlicz_gauge/json_io.hpp"

namespace orlicz::cli {

using nlohmann::json;
namespace jio = orlicz::json_io;

namespace {

[[noreturn]] void invalid(const std::string& path, const std::string& what) {
  fail(ErrorCode::kValidation, path + ": " + what);
}

// Rewraps library errors raised while reading a config subtree so the
// diagnostic names the subtree.
template <class F>
auto at_path(const std::string& prefix, F&& read) {
  try {
    return read();
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kValidation && e.code() != ErrorCode::kInvalidSpec) throw;
    const std::string msg = e.what();
    if (msg.rfind("/:", 0) == 0) fail(ErrorCode::kValidation, prefix + msg.substr(1));
    if (msg.rfind("/", 0) == 0) fail(ErrorCode::kValidation, prefix + msg);
    fail(ErrorCode::kValidation, prefix + ": " + msg);
  }
}

int positive_int(const json& v, const std::string& path) {
  if (!v.is_number_integer() || v.get<long long>() < 1 || v.get<long long>() > 1'000'000'000) {
    invalid(path, "expected a positive integer");
  }
  return v.get<int>();
}

std::uint64_t seed_from(const json& v, const std::string& path) {
  if (!v.is_number_unsigned()) invalid(path, "expected a nonnegative integer");
  return v.get<std::uint64_t>();
}

std::vector<double> k_grid_from(const json& v) {
  if (v.is_object()) {
    if (v.size() != 1 || !v.contains("log2")) invalid("/k_grid", "expected {\"log2\": [lo, hi]}");
    const json& r = v["log2"];
    if (!r.is_array() || r.size() != 2 || !r[0].is_number_integer() || !r[1].is_number_integer() ||
        r[0].get<int>() > r[1].get<int>() || r[0].get<int>() < -64 || r[1].get<int>() > 64) {
      invalid("/k_grid/log2", "expected integers -64 <= lo <= hi <= 64");
    }
    return log2_grid(r[0].get<int>(), r[1].get<int>());
  }
  if (!v.is_array() || v.empty()) invalid("/k_grid", "expected a nonempty array");
  std::vector<double> grid;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number() || !(v[i].get<double>() > 0.0) || !std::isfinite(v[i].get<double>())) {
      invalid("/k_grid/" + std::to_string(i), "expected a positive number");
    }
    grid.push_back(v[i].get<double>());
  }
  return grid;
}

json parse_inline(const std::string& text, const std::string& flag) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    invalid(flag, std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

const std::vector<std::string>& commands() {
  static const std::vector<std::string> names{
      "integrate",  "hk-norm",  "alexiewicz",   "modular",        "lux-norm", "axioms",
      "membership", "converge", "implications", "counterexample", "bench"};
  return names;
}

ExperimentConfig build_config(const json& config, const Overrides& o) {
  static const std::set<std::string> allowed{
      "schema_version", "command", "function", "sequence", "family",    "theta",
      "measure",        "quadrature", "k_grid", "seed",     "jobs",      "budget",
      "grid_size",      "scale",    "dimension", "backend", "sense",     "epsilon",
      "outputs"};
  const json j = config.is_null() ? json::object() : config;
  if (!j.is_object()) invalid("/", "config must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) invalid("/" + key, "unknown field");
  }
  if (!config.is_null()) {
    if (!j.contains("schema_version")) invalid("/schema_version", "missing required field");
    if (j["schema_version"] != jio::kSchemaVersion) {
      invalid("/schema_version", "unsupported version (expected 1)");
    }
  }

  ExperimentConfig c;
  if (j.contains("command")) {
    if (!j["command"].is_string()) invalid("/command", "expected a string");
    c.command = j["command"].get<std::string>();
  }
  if (!o.command.empty()) c.command = o.command;
  if (c.command.empty()) invalid("/command", "no command given");
  const auto& names = commands();
  if (std::find(names.begin(), names.end(), c.command) == names.end()) {
    invalid("/command", "unknown command '" + c.command + "'");
  }

  if (j.contains("measure")) {
    c.measure = at_path("/measure", [&] { return jio::measure_from_json(j["measure"]); });
  }
  const Interval domain = c.measure.interval();

  json theta_j = j.contains("theta") ? j["theta"] : json();
  if (!o.theta_json.empty()) theta_j = parse_inline(o.theta_json, "--theta");
  if (!theta_j.is_null()) {
    c.theta = at_path("/theta", [&] {
      YoungFunctionSpec th = jio::young_from_json(theta_j);
      th.validate(domain);
      return th;
    });
  }

  json function_j = j.contains("function") ? j["function"] : json();
  if (!o.function_json.empty()) function_j = parse_inline(o.function_json, "--function");
  if (!function_j.is_null()) {
    c.function = at_path("/function", [&] { return jio::vector_from_json(function_j, domain); });
  }
  if (j.contains("sequence")) {
    c.sequence = at_path("/sequence", [&] { return jio::sequence_from_json(j["sequence"], domain); });
  }
  if (j.contains("family")) {
    c.family = at_path("/family", [&] { return jio::family_from_json(j["family"], domain); });
  }

  if (j.contains("quadrature")) {
    c.quadrature = at_path("/quadrature", [&] { return jio::quadrature_from_json(j["quadrature"]); });
  }
  if (o.tol) c.quadrature.tol = *o.tol;
  if (o.max_cells) c.quadrature.max_cells = *o.max_cells;
  at_path("/quadrature", [&] {
    c.quadrature.validate(domain);
    return 0;
  });

  if (j.contains("k_grid")) c.k_grid = k_grid_from(j["k_grid"]);

  if (o.seed) {
    c.seed = *o.seed;
  } else if (j.contains("seed")) {
    c.seed = seed_from(j["seed"], "/seed");
  } else if (const char* env = std::getenv("ORLICZ_GAUGE_SEED"); env && *env) {
    try {
      std::size_t used = 0;
      c.seed = std::stoull(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      invalid("ORLICZ_GAUGE_SEED", "expected a nonnegative integer");
    }
  }

  if (j.contains("jobs")) c.jobs = positive_int(j["jobs"], "/jobs");
  if (o.jobs) c.jobs = *o.jobs;
  if (c.jobs < 1) invalid("--jobs", "expected a positive integer");
  if (j.contains("budget")) c.budget = positive_int(j["budget"], "/budget");
  if (o.budget) c.budget = *o.budget;
  if (c.budget < 1) invalid("--budget", "expected a positive integer");
  if (j.contains("grid_size")) c.grid_size = positive_int(j["grid_size"], "/grid_size");
  if (j.contains("dimension")) {
    c.dimension = static_cast<std::size_t>(positive_int(j["dimension"], "/dimension"));
  }
  if (j.contains("scale")) {
    if (!j["scale"].is_number() || !std::isfinite(j["scale"].get<double>())) {
      invalid("/scale", "expected a finite number");
    }
    c.scale = j["scale"].get<double>();
  }
  if (j.contains("epsilon")) {
    if (!j["epsilon"].is_number() || !(j["epsilon"].get<double>() > 0.0)) {
      invalid("/epsilon", "expected a positive number");
    }
    c.classifier.epsilon = j["epsilon"].get<double>();
  }
  if (j.contains("backend")) {
    const json& b = j["backend"];
    if (b == "hk") {
      c.backend = NormBackend::kHenstockKurzweil;
    } else if (b == "lebesgue") {
      c.backend = NormBackend::kLebesgueStyle;
    } else {
      invalid("/backend", "expected \"hk\" or \"lebesgue\"");
    }
  }
  if (j.contains("sense")) {
    const json& s = j["sense"];
    if (s == "hk") {
      c.sense = IntegrationSense::kHenstockKurzweil;
    } else if (s == "lebesgue") {
      c.sense = IntegrationSense::kLebesgue;
    } else {
      invalid("/sense", "expected \"hk\" or \"lebesgue\"");
    }
  }
  if (j.contains("outputs")) {
    const json& out = j["outputs"];
    if (!out.is_object()) invalid("/outputs", "expected an object");
    for (const auto& [key, value] : out.items()) {
      if (key != "json" && key != "csv" && key != "svg") invalid("/outputs/" + key, "unknown field");
      if (!value.is_string() || value.get<std::string>().empty()) {
        invalid("/outputs/" + key, "expected a nonempty path");
      }
    }
    c.json_out = out.value("json", "");
    c.csv_out = out.value("csv", "");
    c.svg_out = out.value("svg", "");
  }
  if (!o.json_out.empty()) c.json_out = o.json_out;
  if (!o.csv_out.empty()) c.csv_out = o.csv_out;
  if (!o.svg_out.empty()) c.svg_out = o.svg_out;

  const std::string& cmd = c.command;
  const bool needs_function = cmd == "integrate" || cmd == "hk-norm" || cmd == "alexiewicz" ||
                              cmd == "modular" || cmd == "lux-norm" || cmd == "membership";
  if (needs_function && !c.function) invalid("/function", "required by '" + cmd + "'");
  if ((cmd == "converge" || cmd == "implications") && !c.sequence) {
    invalid("/sequence", "required by '" + cmd + "'");
  }
  if (cmd == "counterexample" && !c.family) invalid("/family", "required by 'counterexample'");
  return c;
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    f << content;
    f.flush();
    if (!f) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot rename into " + path + ": " + ec.message());
  }
}

namespace {

struct Outcome {
  json report;
  std::string csv;
  std::optional<ConvergenceReport> plot;
  int exit_code = kExitOk;
};

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

bool any_indeterminate(const ConvergenceReport& r) {
  for (Verdict v : {r.modular_l.verdict, r.modular_h.verdict, r.norm_l.verdict, r.norm_h.verdict}) {
    if (v == Verdict::kIndeterminate) return true;
  }
  return false;
}

AnalysisOptions analysis_options(const ExperimentConfig& c) {
  AnalysisOptions opts;
  opts.classifier = c.classifier;
  opts.jobs = c.jobs;
  return opts;
}

Outcome run_bench(const ExperimentConfig& c) {
  struct Case {
    std::string name;
    std::function<std::size_t()> body;
  };
  QuadratureConfig q = c.quadrature;
  std::vector<Case> cases;
  const WeightedMeasure unit(Interval{0.0, 1.0});
  cases.push_back({"integrate/hk_pathological", [&] {
                     QuadratureConfig qq = q;
                     qq.tol = std::max(q.tol, 1e-6);
                     auto f = VectorFunctionSpec::scalar(FunctionSpec::hk_pathological(2, 2), {0, 1});
                     return hk_integrate(f, unit, qq).cells_used;
                   }});
  cases.push_back({"integrate/monomial_-0.9", [&] {
                     auto f = VectorFunctionSpec::scalar(FunctionSpec::monomial(-0.9), {0, 1});
                     return hk_integrate(f, unit, q).cells_used;
                   }});
  cases.push_back({"modular/exponential_indicator", [&] {
                     const double n = 6;
                     const double a = 1.0 / (n * (std::exp(n) - n - 1));
                     auto f = VectorFunctionSpec::scalar(
                         FunctionSpec::combination({{n, FunctionSpec::indicator(0, a)}}), {0, 2});
                     return modular(f, YoungFunctionSpec::exponential(), WeightedMeasure({0, 2}), q)
                         .cells_used;
                   }});
  if (c.function) {
    cases.push_back({"integrate/configured", [&] {
                       return hk_integrate(*c.function, c.measure, q).cells_used;
                     }});
  }
  json rows = json::array();
  std::string csv = "name,wall_seconds,cells_used\n";
  for (const Case& k : cases) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t cells = k.body();
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rows.push_back({{"name", k.name}, {"wall_seconds", wall}, {"cells_used", cells}});
    csv += k.name + "," + fmt(wall) + "," + std::to_string(cells) + "\n";
  }
  return {jio::envelope("bench", {{"cases", rows}}), csv, std::nullopt, kExitOk};
}

Outcome dispatch(const ExperimentConfig& c) {
  const std::string& cmd = c.command;
  QuadratureConfig q = c.quadrature;
  if (cmd == "integrate") {
    q.sense = c.sense;
    const IntegralResult r = hk_integrate(*c.function, c.measure, q);
    json body = jio::to_json(r);
    body["sense"] = c.sense == IntegrationSense::kLebesgue ? "lebesgue" : "hk";
    return {jio::envelope(cmd, body), "", std::nullopt,
            r.status == IntegralStatus::kBudgetExhausted ? kExitIndeterminate : kExitOk};
  }
  if (cmd == "hk-norm") {
    const SupNormEstimate r = sup_riemann_norm(*c.function, c.measure, c.budget, c.seed);
    return {jio::envelope(cmd, jio::to_json(r)), "", std::nullopt, kExitOk};
  }
  if (cmd == "alexiewicz") {
    const AlexiewiczResult r = alexiewicz_norm(*c.function, c.measure, c.grid_size, q);
    json body = jio::to_json(r);
    body["grid_size"] = c.grid_size;
    return {jio::envelope(cmd, body), "", std::nullopt,
            r.status == IntegralStatus::kBudgetExhausted ? kExitIndeterminate : kExitOk};
  }
  if (cmd == "modular") {
    q.sense = c.sense;
    const ModularValue r = modular_scaled(*c.function, c.scale, c.theta, c.measure, q);
    json body = jio::to_json(r);
    body["scale"] = c.scale;
    return {jio::envelope(cmd, body), "", std::nullopt,
            r.status == ModularStatus::kIndeterminate ? kExitIndeterminate : kExitOk};
  }
  if (cmd == "lux-norm") {
    const NormValue r = luxemburg_norm(*c.function, c.theta, c.measure, q, c.backend);
    json body = jio::to_json(r);
    body["backend"] = to_string(c.backend);
    return {jio::envelope(cmd, body), "", std::nullopt,
            r.status == NormStatus::kIndeterminate ? kExitIndeterminate : kExitOk};
  }
  if (cmd == "axioms") {
    const AxiomReport r =
        check_nfunction_axioms(c.theta, c.measure.interval(), c.budget, c.seed, c.dimension);
    std::string csv = "condition,verdict,samples\n";
    for (const AxiomCheck& a : r.checks) {
      csv += std::string(1, a.condition) + "," + std::string(to_string(a.verdict)) + "," +
             std::to_string(a.samples) + "\n";
    }
    return {jio::envelope(cmd, jio::to_json(r)), csv, std::nullopt, kExitOk};
  }
  if (cmd == "membership") {
    q.sense = c.sense;
    const std::vector<double> grid = c.k_grid.value_or(log2_grid());
    const MembershipReport r = h_orlicz_membership(*c.function, c.theta, c.measure, grid, q);
    std::string csv = "k,modular,status\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
      csv += fmt(grid[i]) + "," + fmt(r.modulars[i].value) + "," +
             std::string(to_string(r.modulars[i].status)) + "\n";
    }
    return {jio::envelope(cmd, jio::to_json(r)), csv, std::nullopt,
            r.verdict == MembershipVerdict::kIndeterminate ? kExitIndeterminate : kExitOk};
  }
  if (cmd == "converge") {
    const std::vector<double> grid = c.k_grid.value_or(default_convergence_grid());
    ConvergenceReport r =
        analyze_sequence(*c.sequence, c.theta, c.measure, grid, q, analysis_options(c));
    const int code = any_indeterminate(r) ? kExitIndeterminate : kExitOk;
    std::string csv = report_csv(r);
    return {jio::envelope(cmd, jio::to_json(r)), std::move(csv), std::move(r), code};
  }
  if (cmd == "implications") {
    const std::vector<double> grid = c.k_grid.value_or(default_convergence_grid());
    ImplicationTable t =
        implication_check(*c.sequence, c.theta, c.measure, grid, q, analysis_options(c));
    const int code = t.any_violation()         ? kExitViolation
                     : any_indeterminate(t.report) ? kExitIndeterminate
                                                   : kExitOk;
    std::string csv = report_csv(t.report);
    return {jio::envelope(cmd, jio::to_json(t)), std::move(csv), std::move(t.report), code};
  }
  if (cmd == "counterexample") {
    const std::vector<double> grid = c.k_grid.value_or(default_convergence_grid());
    const std::vector<Candidate> found =
        counterexample_search(c.theta, *c.family, c.measure, grid, q, analysis_options(c));
    json list = json::array();
    std::string csv = "candidate,kind,parameters,n,k,modular_L,modular_H,norm_L,norm_H\n";
    for (std::size_t i = 0; i < found.size(); ++i) {
      list.push_back(jio::to_json(found[i]));
      std::string params;
      for (const auto& [k, v] : found[i].parameters) {
        params += (params.empty() ? "" : ";") + k + "=" + fmt(v);
      }
      std::istringstream rows(report_csv(found[i].report));
      std::string line;
      std::getline(rows, line);  // header
      while (std::getline(rows, line)) {
        csv += std::to_string(i) + "," + std::string(to_string(found[i].kind)) + "," + params +
               "," + line + "\n";
      }
    }
    json body{{"family", c.family->name},
              {"sweep_size", c.family->sweep.size()},
              {"candidates", list}};
    return {jio::envelope(cmd, body), csv, std::nullopt, kExitOk};
  }
  return run_bench(c);
}

}  // namespace

int execute(const ExperimentConfig& config, std::ostream& out) {
  Outcome o = dispatch(config);
  o.report["seed"] = config.seed;
  const std::string problem = jio::validate_report(o.report);
  if (!problem.empty()) throw std::logic_error("emitted report fails its schema: " + problem);
  const std::string text = o.report.dump(2) + "\n";
  if (!config.json_out.empty()) write_atomic(config.json_out, text);
  if (!config.csv_out.empty()) {
    if (o.csv.empty()) invalid("/outputs/csv", "'" + config.command + "' has no tabular output");
    write_atomic(config.csv_out, o.csv);
  }
  if (!config.svg_out.empty()) {
    if (!o.plot) invalid("/outputs/svg", "'" + config.command + "' has no per-n table to plot");
    write_atomic(config.svg_out, render_svg(*o.plot, config.command));
  }
  out << text;
  return o.exit_code;
}

namespace {

void emit_error(std::ostream& err, const std::string& kind, const std::string& message,
                int exit_code) {
  json e{{"error", {{"kind", kind}, {"message", message}, {"exit_code", exit_code}}}};
  err << e.dump() << "\n";
}

}  // namespace

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gauge integrals, H-Orlicz modulars and convergence analysis"};
  app.set_version_flag("--version", "orlicz-gauge 0.1.0");
  Overrides o;
  std::string config_path;
  std::uint64_t seed = 0;
  int jobs = 0, budget = 0;
  double tol = 0.0;
  std::size_t max_cells = 0;
  app.add_option("command", o.command, "Subcommand")->check(CLI::IsMember(commands()));
  app.add_option("-c,--config", config_path, "JSON experiment config")->check(CLI::ExistingFile);
  auto* seed_opt = app.add_option("--seed", seed, "RNG seed (falls back to ORLICZ_GAUGE_SEED)");
  auto* jobs_opt = app.add_option("-j,--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  auto* tol_opt = app.add_option("--tol", tol, "Absolute quadrature tolerance")
                      ->check(CLI::PositiveNumber);
  auto* cells_opt = app.add_option("--max-cells", max_cells, "Quadrature cell budget")
                        ->check(CLI::PositiveNumber);
  auto* budget_opt = app.add_option("--budget", budget, "Sampling budget (hk-norm, axioms)")
                         ->check(CLI::PositiveNumber);
  app.add_option("--function", o.function_json, "Function spec as inline JSON");
  app.add_option("--theta", o.theta_json, "Young function spec as inline JSON");
  app.add_option("--json-out", o.json_out, "Write the JSON report here");
  app.add_option("--csv-out", o.csv_out, "Write the CSV table here");
  app.add_option("--svg-out", o.svg_out, "Write an SVG plot here (converge, implications)");

  std::vector<std::string> args(argv.begin() + (argv.empty() ? 0 : 1), argv.end());
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << "orlicz-gauge 0.1.0\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    emit_error(err, "usage", e.what(), kExitValidation);
    return kExitValidation;
  }
  if (*seed_opt) o.seed = seed;
  if (*jobs_opt) o.jobs = jobs;
  if (*tol_opt) o.tol = tol;
  if (*cells_opt) o.max_cells = max_cells;
  if (*budget_opt) o.budget = budget;

  try {
    json config;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      try {
        config = json::parse(in);
      } catch (const json::parse_error& e) {
        invalid("/", std::string("malformed JSON config: ") + e.what());
      }
    }
    const ExperimentConfig c = build_config(config, o);
    return execute(c, out);
  } catch (const Error& e) {
    const bool validation = e.code() == ErrorCode::kValidation ||
                            e.code() == ErrorCode::kInvalidSpec ||
                            e.code() == ErrorCode::kOutOfDomain;
    const int code = validation ? kExitValidation : kExitFailure;
    emit_error(err, validation ? "validation" : std::string(to_string(e.code())), e.what(), code);
    return code;
  } catch (const std::exception& e) {
    emit_error(err, "internal", e.what(), kExitFailure);
    return kExitFailure;
  }
}

}  // namespace orlicz::cli
