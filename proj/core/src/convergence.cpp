#include "orlicz_gauge/convergence.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "orlicz_gauge/errors.hpp"

namespace orlicz {

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::kConverges:
      return "Converges";
    case Verdict::kDoesNotConverge:
      return "DoesNotConverge";
    case Verdict::kIndeterminate:
      return "Indeterminate";
  }
  return "Unknown";
}

std::string_view to_string(CandidateKind kind) {
  return kind == CandidateKind::kHModularNotLModular ? "h_modular_not_l_modular"
                                                     : "modular_not_norm";
}

void parallel_for(std::size_t count, int jobs,
                  const std::function<void(std::size_t)>& task) {
  const std::size_t workers =
      std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, jobs)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          task(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

// ---------------------------------------------------------------------------
// Classification

namespace {

struct Fit {
  double limit = 0.0;
  double coefficient = 0.0;
  double rss = std::numeric_limits<double>::infinity();
  double parameter = 0.0;
};

// Least squares for v ~ L + C b over the given points.
Fit linear_fit(std::span<const double> b, std::span<const double> v) {
  const double m = static_cast<double>(b.size());
  double sb = 0, sv = 0, sbb = 0, sbv = 0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    sb += b[i];
    sv += v[i];
    sbb += b[i] * b[i];
    sbv += b[i] * v[i];
  }
  Fit fit;
  const double det = m * sbb - sb * sb;
  if (!(std::fabs(det) > 1e-14 * std::max(1.0, m * sbb))) return fit;
  fit.coefficient = (m * sbv - sb * sv) / det;
  fit.limit = (sv - fit.coefficient * sb) / m;
  fit.rss = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const double r = v[i] - fit.limit - fit.coefficient * b[i];
    fit.rss += r * r;
  }
  return fit;
}

template <class Basis>
Fit fit_family(std::span<const double> ns, std::span<const double> v, double lo,
               double hi, Basis basis) {
  std::vector<double> b(ns.size());
  const auto at = [&](double param) {
    for (std::size_t i = 0; i < ns.size(); ++i) b[i] = basis(ns[i], param);
    Fit f = linear_fit(b, v);
    f.parameter = param;
    return f;
  };
  constexpr int kGrid = 64;
  Fit best;
  int best_i = 0;
  for (int i = 0; i <= kGrid; ++i) {
    const Fit f = at(lo + (hi - lo) * i / kGrid);
    if (f.rss < best.rss) {
      best = f;
      best_i = i;
    }
  }
  // Golden-section refinement on the neighbouring grid cells.
  double a = lo + (hi - lo) * std::max(0, best_i - 1) / kGrid;
  double c = lo + (hi - lo) * std::min(kGrid, best_i + 1) / kGrid;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = c - g * (c - a), x2 = a + g * (c - a);
  Fit f1 = at(x1), f2 = at(x2);
  for (int it = 0; it < 60; ++it) {
    if (f1.rss < f2.rss) {
      c = x2;
      x2 = x1;
      f2 = f1;
      x1 = c - g * (c - a);
      f1 = at(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (c - a);
      f2 = at(x2);
    }
  }
  for (const Fit& f : {f1, f2}) {
    if (f.rss < best.rss) best = f;
  }
  return best;
}

}  // namespace

Classification classify_sequence(std::span<const double> values,
                                 const ClassifierConfig& cfg, double noise_floor) {
  Classification c;
  c.noise_floor = noise_floor;
  const std::size_t n = values.size();
  if (n < 2) {
    c.reason = "fewer than two terms";
    return c;
  }
  const std::size_t start = n / 2;
  std::vector<double> ns, tail;
  for (std::size_t i = start; i < n; ++i) {
    ns.push_back(static_cast<double>(i + 1));
    tail.push_back(values[i]);
  }
  if (std::any_of(tail.begin(), tail.end(), [](double v) { return std::isnan(v); })) {
    c.reason = "indeterminate entry in the tail";
    return c;
  }
  if (std::any_of(tail.begin(), tail.end(), [](double v) { return std::isinf(v); })) {
    c.verdict = Verdict::kDoesNotConverge;
    c.tail_max = c.tail_min = std::numeric_limits<double>::infinity();
    c.reason = "infinite entry in the tail";
    return c;
  }
  for (double v : values) {
    if (std::isfinite(v)) c.scale = std::max(c.scale, std::fabs(v));
  }
  c.tail_max = *std::max_element(tail.begin(), tail.end());
  c.tail_min = *std::min_element(tail.begin(), tail.end());
  if (c.tail_max <= noise_floor) {
    c.verdict = Verdict::kConverges;
    c.reason = "tail within the noise floor";
    return c;
  }

  {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < tail.size(); ++i) {
      if (tail[i] > 0.0) {
        xs.push_back(ns[i]);
        ys.push_back(std::log(tail[i]));
      }
    }
    if (xs.size() >= 2) {
      const Fit f = linear_fit(xs, ys);
      c.log_slope = std::isfinite(f.rss) ? f.coefficient : 0.0;
    }
  }

  const double n0 = ns.front();
  const Fit power = fit_family(ns, tail, -6.0, -0.02,
                               [n0](double x, double s) { return std::pow(x / n0, s); });
  const Fit expo = fit_family(ns, tail, 0.01, 5.0,
                              [n0](double x, double l) { return std::exp(-l * (x - n0)); });
  const bool use_power = power.rss <= expo.rss;
  const Fit& best = use_power ? power : expo;
  const double rms = std::sqrt(best.rss / static_cast<double>(tail.size()));
  c.fit_residual = rms;
  const bool good_fit =
      std::isfinite(rms) && rms <= 0.05 * (c.tail_max - c.tail_min) + 1e-12 * c.scale;
  if (good_fit) {
    c.fitted_limit = best.limit;
    c.fitted_model = use_power ? "L + C n^s" : "L + C exp(-lambda n)";
  }

  const double level = std::max(cfg.epsilon * c.scale, noise_floor);
  const double lower = cfg.lower_factor * level;
  constexpr double kFlatSlope = 1e-9;
  if (c.log_slope <= kFlatSlope) {
    if (c.tail_max <= level) {
      c.verdict = Verdict::kConverges;
      c.reason = "tail max below epsilon * scale with nonincreasing trend";
      return c;
    }
    if (good_fit && best.coefficient >= 0.0 && std::fabs(best.limit) <= level) {
      c.verdict = Verdict::kConverges;
      c.reason = "nonincreasing tail fits a limit within epsilon * scale";
      return c;
    }
  }
  if (c.tail_min > lower) {
    if (c.log_slope > kFlatSlope) {
      c.verdict = Verdict::kDoesNotConverge;
      c.reason = "tail bounded away from zero and rising";
      return c;
    }
    if (c.tail_max - c.tail_min <= cfg.epsilon * c.tail_max) {
      c.verdict = Verdict::kDoesNotConverge;
      c.reason = "tail bounded away from zero and flat";
      return c;
    }
  }
  c.reason = "no certificate either way";
  return c;
}

// ---------------------------------------------------------------------------
// Sequence analyses

namespace {

double as_number(const ModularValue& v) {
  switch (v.status) {
    case ModularStatus::kFinite:
      return v.value;
    case ModularStatus::kInfinite:
      return std::numeric_limits<double>::infinity();
    case ModularStatus::kIndeterminate:
      break;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double as_number(const NormValue& v) {
  switch (v.status) {
    case NormStatus::kFinite:
      return v.value;
    case NormStatus::kNotInSpace:
      return std::numeric_limits<double>::infinity();
    case NormStatus::kIndeterminate:
      break;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

std::vector<VectorFunctionSpec> differences(const SequenceSpec& seq) {
  if (seq.n_max() < 8) fail(ErrorCode::kInvalidSpec, "sequence analysis needs n_max >= 8");
  std::vector<VectorFunctionSpec> out;
  out.reserve(static_cast<std::size_t>(seq.n_max()));
  for (int n = 1; n <= seq.n_max(); ++n) out.push_back(seq.difference(n));
  return out;
}

ModularConvergence modular_convergence_of(const std::vector<VectorFunctionSpec>& diffs,
                                          const YoungFunctionSpec& th,
                                          const WeightedMeasure& m,
                                          std::span<const double> k_grid,
                                          const QuadratureConfig& cfg,
                                          IntegrationSense sense,
                                          const AnalysisOptions& opts) {
  if (k_grid.empty()) fail(ErrorCode::kInvalidSpec, "empty k grid");
  for (double k : k_grid) {
    if (!(k > 0.0 && std::isfinite(k))) fail(ErrorCode::kInvalidSpec, "k grid entries must be finite and > 0");
  }
  ModularConvergence out;
  out.sense = sense;
  out.k_grid.assign(k_grid.begin(), k_grid.end());
  const std::size_t nk = out.k_grid.size(), nn = diffs.size();
  out.values.assign(nk, std::vector<ModularValue>(nn));
  QuadratureConfig c = cfg;
  c.sense = sense;
  parallel_for(nk * nn, opts.jobs, [&](std::size_t idx) {
    const std::size_t ki = idx / nn, ni = idx % nn;
    out.values[ki][ni] = modular_scaled(diffs[ni], out.k_grid[ki], th, m, c);
  });

  bool all_fail = true;
  for (std::size_t ki = 0; ki < nk; ++ki) {
    std::vector<double> v(nn);
    for (std::size_t ni = 0; ni < nn; ++ni) v[ni] = as_number(out.values[ki][ni]);
    out.per_k.push_back(classify_sequence(v, opts.classifier, 4.0 * cfg.tol));
    const Verdict verdict = out.per_k.back().verdict;
    if (verdict != Verdict::kDoesNotConverge) all_fail = false;
    if (verdict == Verdict::kConverges) {
      const double k = out.k_grid[ki];
      if (!out.best_k || k == 1.0 || (*out.best_k != 1.0 && k < *out.best_k)) out.best_k = k;
    }
  }
  out.verdict = out.best_k ? Verdict::kConverges
                : all_fail ? Verdict::kDoesNotConverge
                           : Verdict::kIndeterminate;
  return out;
}

NormConvergence norm_convergence_of(const std::vector<VectorFunctionSpec>& diffs,
                                    const YoungFunctionSpec& th, const WeightedMeasure& m,
                                    const QuadratureConfig& cfg, NormBackend backend,
                                    const AnalysisOptions& opts) {
  NormConvergence out;
  out.backend = backend;
  out.norms.resize(diffs.size());
  parallel_for(diffs.size(), opts.jobs, [&](std::size_t i) {
    out.norms[i] = luxemburg_norm(diffs[i], th, m, cfg, backend);
  });
  std::vector<double> v(diffs.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = as_number(out.norms[i]);
  out.classification = classify_sequence(v, opts.classifier, 4.0 * cfg.tol);
  const bool not_in_space =
      std::any_of(out.norms.begin(), out.norms.end(),
                  [](const NormValue& x) { return x.status == NormStatus::kNotInSpace; });
  if (not_in_space) {
    out.verdict = Verdict::kIndeterminate;
    out.classification.reason = "some f_n - f is not in the space";
  } else {
    out.verdict = out.classification.verdict;
  }
  return out;
}

std::string describe(const char* label, const Classification& c, Verdict v) {
  char buf[320];
  std::snprintf(buf, sizeof buf, "%s: %s (%s; tail max %.6g, tail min %.6g, scale %.6g, slope %.4g)",
                label, std::string(to_string(v)).c_str(), c.reason.c_str(), c.tail_max,
                c.tail_min, c.scale, c.log_slope);
  return buf;
}

std::string describe_modular(const char* label, const ModularConvergence& mc) {
  std::string s = std::string(label) + ": " + std::string(to_string(mc.verdict));
  if (mc.best_k) {
    char buf[64];
    std::snprintf(buf, sizeof buf, " (best k %.17g)", *mc.best_k);
    s += buf;
  }
  return s;
}

}  // namespace

ModularConvergence modular_convergence(const SequenceSpec& seq, const YoungFunctionSpec& th,
                                       const WeightedMeasure& m,
                                       std::span<const double> k_grid,
                                       const QuadratureConfig& cfg, IntegrationSense sense,
                                       const AnalysisOptions& opts) {
  return modular_convergence_of(differences(seq), th, m, k_grid, cfg, sense, opts);
}

NormConvergence norm_convergence(const SequenceSpec& seq, const YoungFunctionSpec& th,
                                 const WeightedMeasure& m, const QuadratureConfig& cfg,
                                 NormBackend backend, const AnalysisOptions& opts) {
  return norm_convergence_of(differences(seq), th, m, cfg, backend, opts);
}

std::vector<double> default_convergence_grid() { return log2_grid(-4, 4); }

ConvergenceReport analyze_sequence(const SequenceSpec& seq, const YoungFunctionSpec& th,
                                   const WeightedMeasure& m,
                                   std::span<const double> k_grid,
                                   const QuadratureConfig& cfg,
                                   const AnalysisOptions& opts) {
  const auto diffs = differences(seq);
  ConvergenceReport r;
  r.n_max = seq.n_max();
  r.modular_l = modular_convergence_of(diffs, th, m, k_grid, cfg,
                                       IntegrationSense::kLebesgue, opts);
  r.modular_h = modular_convergence_of(diffs, th, m, k_grid, cfg,
                                       IntegrationSense::kHenstockKurzweil, opts);
  r.norm_l = norm_convergence_of(diffs, th, m, cfg, NormBackend::kLebesgueStyle, opts);
  r.norm_h = norm_convergence_of(diffs, th, m, cfg, NormBackend::kHenstockKurzweil, opts);

  for (const auto* mc : {&r.modular_l, &r.modular_h}) {
    const char* label = mc == &r.modular_l ? "modular_L" : "modular_H";
    r.trace.push_back(describe_modular(label, *mc));
    for (std::size_t ki = 0; ki < mc->k_grid.size(); ++ki) {
      char head[64];
      std::snprintf(head, sizeof head, "  %s k=%.17g", label, mc->k_grid[ki]);
      r.trace.push_back(describe(head, mc->per_k[ki], mc->per_k[ki].verdict));
    }
  }
  r.trace.push_back(describe("norm_L", r.norm_l.classification, r.norm_l.verdict));
  r.trace.push_back(describe("norm_H", r.norm_h.classification, r.norm_h.verdict));
  return r;
}

std::string report_csv(const ConvergenceReport& report) {
  std::string out = "n,k,modular_L,modular_H,norm_L,norm_H\n";
  char buf[256];
  const auto& grid = report.modular_l.k_grid;
  for (int n = 1; n <= report.n_max; ++n) {
    const auto ni = static_cast<std::size_t>(n - 1);
    for (std::size_t ki = 0; ki < grid.size(); ++ki) {
      std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%.17g\n", n, grid[ki],
                    as_number(report.modular_l.values[ki][ni]),
                    as_number(report.modular_h.values[ki][ni]),
                    as_number(report.norm_l.norms[ni]), as_number(report.norm_h.norms[ni]));
      out += buf;
    }
  }
  return out;
}

bool ImplicationTable::any_violation() const noexcept {
  return std::any_of(rows.begin(), rows.end(), [](const Implication& r) { return r.violation; });
}

ImplicationTable implication_check(const SequenceSpec& seq, const YoungFunctionSpec& th,
                                   const WeightedMeasure& m,
                                   std::span<const double> k_grid,
                                   const QuadratureConfig& cfg,
                                   const AnalysisOptions& opts) {
  ImplicationTable table;
  table.report = analyze_sequence(seq, th, m, k_grid, cfg, opts);
  const ConvergenceReport& r = table.report;
  const auto row = [&](std::string name, std::string a, Verdict va, std::string c, Verdict vc) {
    Implication imp{std::move(name), std::move(a), std::move(c), va, vc,
                    va == Verdict::kConverges && vc == Verdict::kDoesNotConverge};
    table.rows.push_back(std::move(imp));
  };
  row("modular_L => modular_H", "modular_L", r.modular_l.verdict, "modular_H", r.modular_h.verdict);
  row("norm_L => norm_H", "norm_L", r.norm_l.verdict, "norm_H", r.norm_h.verdict);
  row("modular_L => norm_H", "modular_L", r.modular_l.verdict, "norm_H", r.norm_h.verdict);
  row("norm_L => modular_H", "norm_L", r.norm_l.verdict, "modular_H", r.modular_h.verdict);
  row("norm_L => modular_L", "norm_L", r.norm_l.verdict, "modular_L", r.modular_l.verdict);
  return table;
}

std::vector<Candidate> counterexample_search(const YoungFunctionSpec& th,
                                             const FamilyTemplate& family,
                                             const WeightedMeasure& m,
                                             std::span<const double> k_grid,
                                             const QuadratureConfig& cfg,
                                             const AnalysisOptions& opts) {
  std::vector<Candidate> out;
  for (const auto& params : family.sweep) {
    const SequenceSpec seq = family.instantiate(params);
    ConvergenceReport report = analyze_sequence(seq, th, m, k_grid, cfg, opts);
    if (report.modular_h.verdict == Verdict::kConverges &&
        report.modular_l.verdict != Verdict::kConverges) {
      out.push_back({CandidateKind::kHModularNotLModular, params, report});
    }
    const bool l_gap = report.modular_l.verdict == Verdict::kConverges &&
                       report.norm_l.verdict == Verdict::kDoesNotConverge;
    const bool h_gap = report.modular_h.verdict == Verdict::kConverges &&
                       report.norm_h.verdict == Verdict::kDoesNotConverge;
    if (l_gap || h_gap) out.push_back({CandidateKind::kModularNotNorm, params, std::move(report)});
  }
  return out;
}

}  // namespace orlicz
