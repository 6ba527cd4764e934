#include "orlicz_gauge/hk_integral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "orlicz_gauge/errors.hpp"
#include "orlicz_gauge/quadrature_rule.hpp"

namespace orlicz {

std::string_view to_string(IntegralStatus status) {
  switch (status) {
    case IntegralStatus::kConverged:
      return "Converged";
    case IntegralStatus::kDiverged:
      return "Diverged";
    case IntegralStatus::kBudgetExhausted:
      return "BudgetExhausted";
  }
  return "Unknown";
}

void QuadratureConfig::validate(Interval interval) const {
  if (!(tol > 0.0 && std::isfinite(tol))) {
    fail(ErrorCode::kInvalidSpec, "tol must be positive");
  }
  if (!(rel_tol >= 0.0 && std::isfinite(rel_tol))) {
    fail(ErrorCode::kInvalidSpec, "rel_tol must be non-negative");
  }
  if (max_cells < 4) fail(ErrorCode::kInvalidSpec, "max_cells must be >= 4");
  if (h_max && !(*h_max > 0.0 && *h_max <= interval.length())) {
    fail(ErrorCode::kInvalidSpec, "h_max must lie in (0, b - a]");
  }
  if (!(singular_shrink_ratio > 0.0 && singular_shrink_ratio < 1.0)) {
    fail(ErrorCode::kInvalidSpec, "singular_shrink_ratio must lie in (0, 1)");
  }
  if (point_gauge && !(*point_gauge > 0.0)) {
    fail(ErrorCode::kInvalidSpec, "point_gauge must be positive");
  }
  if (!(divergence_threshold > 0.0)) {
    fail(ErrorCode::kInvalidSpec, "divergence_threshold must be positive");
  }
}

Integrand Integrand::from(const VectorFunctionSpec& f, EvalMode mode) {
  Integrand g;
  g.dimension = f.dimension();
  g.evaluate = [f, mode](double t, std::span<double> out) {
    f.evaluate_into(t, out, mode);
  };
  g.singular_points = f.singular_points();
  g.breakpoints = f.breakpoints();
  g.exception_points = f.exception_points();
  g.norm = f.target_norm();
  return g;
}

namespace {

// Envelope window (in geometric cells) for the tail ratio estimate, and the
// number of consecutive non-decreasing windows that certify divergence.
constexpr int kTailWindow = 2;
constexpr int kDivergenceStreak = 3;
constexpr int kQuietDivergenceStreak = 8;
constexpr double kRoundoffFactor = 50.0;

class Engine {
 public:
  Engine(const Integrand& g, const WeightedMeasure& m, Interval over,
         const QuadratureConfig& cfg, double tol)
      : g_(g), m_(m), over_(over), cfg_(cfg), tol_(tol),
        lebesgue_(cfg.sense == IntegrationSense::kLebesgue),
        dim_(g.dimension), width_(g.dimension + (lebesgue_ ? 1 : 0)),
        h_max_(cfg.h_max.value_or(over.length())),
        point_gauge_(cfg.point_gauge.value_or(h_max_)),
        sample_(dim_), kronrod_(width_), gauss_(width_), diff_(width_),
        sum_(width_, 0.0) {
    for (double e : g_.exception_points) {
      if (over_.lo < e && e < over_.hi) exceptions_.push_back(e);
    }
    std::sort(exceptions_.begin(), exceptions_.end());
  }

  IntegralResult run() {
    std::vector<double> cuts = {over_.lo, over_.hi};
    std::vector<double> singular;
    for (double s : g_.singular_points) {
      if (over_.contains(s)) singular.push_back(s);
      if (over_.lo < s && s < over_.hi) cuts.push_back(s);
    }
    for (double b : g_.breakpoints) {
      if (over_.lo < b && b < over_.hi) cuts.push_back(b);
    }
    if (m_.weight()) {
      for (double b : m_.weight()->breakpoints()) {
        if (over_.lo < b && b < over_.hi) cuts.push_back(b);
      }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::sort(singular.begin(), singular.end());
    const auto is_singular = [&](double x) {
      return std::binary_search(singular.begin(), singular.end(), x);
    };

    struct Panel {
      double lo, hi;
      int singular_end;  // 0 none, -1 left, +1 right
    };
    std::vector<Panel> panels;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double u = cuts[i], v = cuts[i + 1];
      const bool left = is_singular(u), right = is_singular(v);
      if (left && right) {
        const double mid = 0.5 * (u + v);
        panels.push_back({u, mid, -1});
        panels.push_back({mid, v, +1});
      } else {
        panels.push_back({u, v, left ? -1 : (right ? +1 : 0)});
      }
    }
    const auto tails = std::count_if(panels.begin(), panels.end(),
                                     [](const Panel& p) { return p.singular_end != 0; });
    const double cell_tol = tails > 0 ? 0.5 * tol_ : tol_;
    tail_tol_ = tails > 0 ? 0.5 * tol_ / static_cast<double>(tails) : 0.0;
    share_density_ = cell_tol / over_.length();

    for (const Panel& p : panels) {
      if (p.singular_end == 0) {
        if (!adaptive(p.lo, p.hi, sum_)) break;
      } else {
        if (!geometric(p.lo, p.hi, p.singular_end < 0)) break;
      }
      if (status_ == IntegralStatus::kDiverged) break;
    }

    IntegralResult result;
    result.value.assign(sum_.begin(), sum_.begin() + static_cast<long>(dim_));
    result.error_estimate = error_;
    result.cells_used = cells_;
    result.status = status_;
    // A tolerance below the roundoff level of the accepted cells is raised
    // to that level.
    if (status_ == IntegralStatus::kConverged && !(error_ <= tol_ + roundoff_total_)) {
      result.status = IntegralStatus::kBudgetExhausted;
    }
    return result;
  }

 private:
  // One sweep of the nested rule on [lo, hi]; fills kronrod_ and returns the
  // discrepancy norm.
  double apply_rule(double lo, double hi) {
    const KronrodRule& rule = KronrodRule::g30k61();
    const double centre = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    std::fill(kronrod_.begin(), kronrod_.end(), 0.0);
    std::fill(gauss_.begin(), gauss_.end(), 0.0);
    double magnitude = 0.0;
    for (std::size_t i = 0; i < KronrodRule::kPoints; ++i) {
      const double t = centre + half * rule.nodes[i];
      g_.evaluate(t, sample_);
      const double w = m_.density(t);
      for (std::size_t c = 0; c < dim_; ++c) {
        const double y = sample_[c] * w;
        kronrod_[c] += rule.kronrod_weights[i] * y;
        gauss_[c] += rule.gauss_weights[i] * y;
      }
      const double size = g_.norm(sample_) * w;
      magnitude += rule.kronrod_weights[i] * size;
      if (lebesgue_) {
        const double y = size;
        kronrod_[dim_] += rule.kronrod_weights[i] * y;
        gauss_[dim_] += rule.gauss_weights[i] * y;
      }
    }
    for (std::size_t c = 0; c < width_; ++c) {
      kronrod_[c] *= half;
      gauss_[c] *= half;
      diff_[c] = kronrod_[c] - gauss_[c];
    }
    double disc = g_.norm(std::span<const double>(diff_.data(), dim_));
    if (lebesgue_) disc = std::max(disc, std::fabs(diff_[dim_]));
    roundoff_ = kRoundoffFactor * std::numeric_limits<double>::epsilon() * magnitude * half;
    return disc;
  }

  bool holds_exception(double lo, double hi) const {
    if (cfg_.mode != EvalMode::kRaw || exceptions_.empty()) return false;
    auto it = std::upper_bound(exceptions_.begin(), exceptions_.end(), lo);
    return it != exceptions_.end() && *it < hi;
  }

  // Depth-first bisection of [lo, hi], accepting cells left to right into
  // `acc`. Once the budget is spent every pending cell is accepted as is.
  // Returns false on divergence.
  bool adaptive(double lo, double hi, std::vector<double>& acc) {
    stack_.clear();
    stack_.push_back({lo, hi});
    while (!stack_.empty()) {
      const auto [a, b] = stack_.back();
      stack_.pop_back();
      const double w = b - a;
      const double mid = a + 0.5 * w;
      const bool degenerate = !(a < mid && mid < b);
      const bool forced = w > h_max_ || (w > point_gauge_ && holds_exception(a, b));
      if (forced && !degenerate && !exhausted_) {
        stack_.push_back({mid, b});
        stack_.push_back({a, mid});
        continue;
      }
      const double disc = apply_rule(a, b);
      ++cells_;
      for (std::size_t c = 0; c < width_; ++c) {
        if (!std::isfinite(kronrod_[c])) {
          status_ = IntegralStatus::kDiverged;
          return false;
        }
      }
      if (cells_ >= cfg_.max_cells && !exhausted_) {
        exhausted_ = true;
        status_ = IntegralStatus::kBudgetExhausted;
      }
      // Below the roundoff floor further bisection cannot reduce the error.
      if (disc <= share_density_ * w || disc <= roundoff_ || degenerate || exhausted_) {
        for (std::size_t c = 0; c < width_; ++c) acc[c] += kronrod_[c];
        error_ += disc;
        roundoff_total_ += roundoff_;
      } else {
        stack_.push_back({mid, b});
        stack_.push_back({a, mid});
      }
    }
    return true;
  }

  // Improper limit toward the singular end of [u, v].
  bool geometric(double u, double v, bool toward_left) {
    const double length = v - u;
    const double ratio = cfg_.singular_shrink_ratio;
    std::vector<double> envelope;
    std::vector<double> partial(width_, 0.0);
    std::vector<double> piece(width_, 0.0);
    double scale = 1.0;
    double last_tail = std::numeric_limits<double>::infinity();
    int streak = 0;
    for (;;) {
      const double next = scale * ratio;
      const double lo = toward_left ? u + length * next : v - length * scale;
      const double hi = toward_left ? u + length * scale : v - length * next;
      if (!(lo < hi) || length * next < std::numeric_limits<double>::min()) {
        // Cells cannot shrink further without leaving the normal range.
        if (last_tail <= tail_tol_) {
          error_ += last_tail;
        } else if (status_ == IntegralStatus::kConverged) {
          status_ = IntegralStatus::kBudgetExhausted;
          error_ += std::isfinite(last_tail) ? last_tail : 0.0;
        }
        return true;
      }
      std::fill(piece.begin(), piece.end(), 0.0);
      const bool ok = adaptive(lo, hi, piece);
      for (std::size_t c = 0; c < width_; ++c) {
        partial[c] += piece[c];
        sum_[c] += piece[c];
      }
      if (status_ == IntegralStatus::kDiverged) return false;
      const double partial_norm =
          lebesgue_ ? std::fabs(partial[dim_])
                    : g_.norm(std::span<const double>(partial.data(), dim_));
      if (!std::isfinite(partial_norm) || partial_norm > cfg_.divergence_threshold) {
        status_ = IntegralStatus::kDiverged;
        return false;
      }
      if (!ok) return false;
      if (exhausted_) return true;
      envelope.push_back(lebesgue_ ? std::fabs(piece[dim_])
                                   : g_.norm(std::span<const double>(piece.data(), dim_)));
      const std::size_t k = envelope.size();
      if (k >= 2 * kTailWindow) {
        const auto now_begin = envelope.end() - kTailWindow;
        const double e_now = *std::max_element(now_begin, envelope.end());
        const double e_prev = *std::max_element(now_begin - kTailWindow, now_begin);
        if (e_now == 0.0 && e_prev == 0.0) return true;
        if (e_prev > 0.0 && e_now < e_prev) {
          streak = 0;
          const double q = std::pow(e_now / e_prev, 1.0 / kTailWindow);
          last_tail = e_now * q / (1.0 - q);
          if (last_tail <= tail_tol_) {
            error_ += last_tail;
            return true;
          }
        } else {
          last_tail = std::numeric_limits<double>::infinity();
          // A flat envelope above the roundoff level of the partial sum
          // never sums to a finite tail; small contributions need a longer
          // streak before that is believed.
          const double noise = 1e3 * std::numeric_limits<double>::epsilon() * partial_norm +
                               std::numeric_limits<double>::min();
          const int needed = e_now > tail_tol_ ? kDivergenceStreak : kQuietDivergenceStreak;
          if (e_now > noise && ++streak >= needed) {
            status_ = IntegralStatus::kDiverged;
            return false;
          }
        }
      }
      scale = next;
    }
  }

  const Integrand& g_;
  const WeightedMeasure& m_;
  Interval over_;
  const QuadratureConfig& cfg_;
  double tol_;
  bool lebesgue_;
  std::size_t dim_;
  std::size_t width_;
  double h_max_;
  double point_gauge_;
  double share_density_ = 0.0;
  double roundoff_ = 0.0;
  double tail_tol_ = 0.0;

  std::vector<double> exceptions_;
  std::vector<double> sample_;
  std::vector<double> kronrod_;
  std::vector<double> gauss_;
  std::vector<double> diff_;
  std::vector<double> sum_;
  std::vector<std::pair<double, double>> stack_;

  double error_ = 0.0;
  double roundoff_total_ = 0.0;
  std::size_t cells_ = 0;
  bool exhausted_ = false;
  IntegralStatus status_ = IntegralStatus::kConverged;
};

constexpr std::size_t kCoarseBudget = 512;

}  // namespace

IntegralResult integrate(const Integrand& g, const WeightedMeasure& m,
                         Interval over, const QuadratureConfig& cfg) {
  cfg.validate(over);
  if (!(m.interval().lo <= over.lo && over.hi <= m.interval().hi && over.lo < over.hi)) {
    fail(ErrorCode::kInvalidSpec, "integration range must lie inside the measure interval");
  }
  if (!g.evaluate || g.dimension == 0) {
    fail(ErrorCode::kInvalidSpec, "integrand must have dimension >= 1");
  }
  double tol = cfg.tol;
  std::size_t coarse_cells = 0;
  if (cfg.rel_tol > 0.0) {
    QuadratureConfig coarse = cfg;
    coarse.rel_tol = 0.0;
    coarse.max_cells = std::min(cfg.max_cells, kCoarseBudget);
    const IntegralResult first = Engine(g, m, over, coarse, cfg.tol).run();
    if (first.status == IntegralStatus::kDiverged) return first;
    coarse_cells = first.cells_used;
    tol = std::max(cfg.tol, cfg.rel_tol * g.norm(first.value));
  }
  IntegralResult result = Engine(g, m, over, cfg, tol).run();
  result.cells_used += coarse_cells;
  return result;
}

IntegralResult hk_integrate(const VectorFunctionSpec& f,
                            const WeightedMeasure& m,
                            const QuadratureConfig& cfg) {
  return hk_integrate(f, m, m.interval(), cfg);
}

IntegralResult hk_integrate(const VectorFunctionSpec& f,
                            const WeightedMeasure& m, Interval over,
                            const QuadratureConfig& cfg) {
  if (!(f.domain().lo <= over.lo && over.hi <= f.domain().hi)) {
    fail(ErrorCode::kOutOfDomain, "integration range exceeds the function domain");
  }
  return integrate(Integrand::from(f, cfg.mode), m, over, cfg);
}

// ---------------------------------------------------------------------------

namespace {

constexpr double kCandidateFractions[] = {0.0, 1.0, 0.5, 0.25, 0.75, 0.125, 0.875};
constexpr int kAlignmentRounds = 4;

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

class SupEstimator {
 public:
  SupEstimator(const VectorFunctionSpec& f, const WeightedMeasure& m)
      : f_(f), m_(m), dim_(f.dimension()) {}

  void examine(const TaggedPartition& p) {
    ++examined_;
    const auto& cells = p.cells();
    const std::size_t n = cells.size();
    if (n == 0) return;
    std::vector<double> mu(n);
    for (std::size_t i = 0; i < n; ++i) mu[i] = m_.measure(cells[i].lo, cells[i].hi);

    std::vector<double> value(dim_);
    std::vector<double> own(dim_, 0.0);
    bool own_valid = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (!usable(cells[i].tag)) {
        own_valid = false;
        break;
      }
      f_.evaluate_into(cells[i].tag, value, EvalMode::kRepresentative);
      for (std::size_t c = 0; c < dim_; ++c) own[c] += value[c] * mu[i];
    }
    if (own_valid) consider(own);

    // Candidate contributions f(d) mu(cell) per cell.
    std::vector<std::vector<std::vector<double>>> cand(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (double frac : kCandidateFractions) {
        const double t =
            std::clamp(cells[i].lo + frac * (cells[i].hi - cells[i].lo), cells[i].lo,
                       cells[i].hi);
        if (!usable(t)) continue;
        f_.evaluate_into(t, value, EvalMode::kRepresentative);
        std::vector<double> contribution(dim_);
        for (std::size_t c = 0; c < dim_; ++c) contribution[c] = value[c] * mu[i];
        cand[i].push_back(std::move(contribution));
      }
    }

    if (dim_ == 1) {
      for (double sign : {1.0, -1.0}) {
        double total = 0.0;
        for (const auto& options : cand) {
          double best = 0.0;
          for (const auto& v : options) best = std::max(best, sign * v[0]);
          total += best;
        }
        consider(std::vector<double>{total});
      }
      return;
    }

    std::vector<std::vector<double>> starts;
    if (own_valid) starts.push_back(f_.target_norm().dual_direction(own));
    for (std::size_t c = 0; c < dim_; ++c) {
      for (double sign : {1.0, -1.0}) {
        std::vector<double> e(dim_, 0.0);
        e[c] = sign;
        starts.push_back(std::move(e));
      }
    }
    for (std::vector<double> direction : starts) {
      for (int round = 0; round < kAlignmentRounds; ++round) {
        std::vector<double> total(dim_, 0.0);
        for (const auto& options : cand) {
          const std::vector<double>* pick = nullptr;
          double best = 0.0;
          for (const auto& v : options) {
            const double score = dot(v, direction);
            if (score > best) {
              best = score;
              pick = &v;
            }
          }
          if (pick) {
            for (std::size_t c = 0; c < dim_; ++c) total[c] += (*pick)[c];
          }
        }
        consider(total);
        std::vector<double> next = f_.target_norm().dual_direction(total);
        if (next == direction) break;
        direction = std::move(next);
      }
    }
  }

  SupNormEstimate result() const {
    SupNormEstimate out;
    out.value = best_;
    out.partitions_examined = examined_;
    return out;
  }

 private:
  bool usable(double t) const {
    return f_.domain().contains(t) && !f_.is_singular(t);
  }

  void consider(std::span<const double> s) {
    const double v = f_.target_norm()(s);
    if (std::isfinite(v) && v > best_) best_ = v;
  }

  const VectorFunctionSpec& f_;
  const WeightedMeasure& m_;
  std::size_t dim_;
  double best_ = 0.0;
  std::size_t examined_ = 0;
};

}  // namespace

SupNormEstimate sup_riemann_norm(const VectorFunctionSpec& f,
                                 const WeightedMeasure& m,
                                 std::span<const TaggedPartition> stream) {
  SupEstimator estimator(f, m);
  // The single-cell partition of the whole interval always belongs to the
  // searched family.
  const Interval j = m.interval();
  estimator.examine(TaggedPartition({{j.lo, j.hi, 0.5 * (j.lo + j.hi)}}));
  for (const TaggedPartition& p : stream) estimator.examine(p);
  return estimator.result();
}

SupNormEstimate sup_riemann_norm(const VectorFunctionSpec& f,
                                 const WeightedMeasure& m, int budget,
                                 std::uint64_t seed) {
  PartitionStrategy strategy;
  strategy.kind = PartitionStrategy::Kind::kMixed;
  strategy.singular_points = f.singular_points();
  const auto stream = generate_partitions(m.interval(), strategy, budget, seed);
  SupNormEstimate out = sup_riemann_norm(f, m, stream);
  out.budget = budget;
  out.seed = seed;
  return out;
}

AlexiewiczResult alexiewicz_norm(const VectorFunctionSpec& f,
                                 const WeightedMeasure& m, int grid_size,
                                 const QuadratureConfig& cfg) {
  if (grid_size < 1) fail(ErrorCode::kInvalidSpec, "grid_size must be >= 1");
  const Interval j = m.interval();
  QuadratureConfig piece_cfg = cfg;
  piece_cfg.tol = cfg.tol / grid_size;
  piece_cfg.h_max.reset();
  std::vector<double> running(f.dimension(), 0.0);
  AlexiewiczResult out;
  double lo = j.lo;
  for (int k = 1; k <= grid_size; ++k) {
    const double hi = k == grid_size ? j.hi : j.lo + j.length() * k / grid_size;
    if (cfg.h_max) piece_cfg.h_max = std::min(*cfg.h_max, hi - lo);
    const IntegralResult piece = hk_integrate(f, m, {lo, hi}, piece_cfg);
    if (piece.status != IntegralStatus::kConverged &&
        out.status != IntegralStatus::kDiverged) {
      out.status = piece.status;
    }
    for (std::size_t c = 0; c < running.size(); ++c) running[c] += piece.value[c];
    out.value = std::max(out.value, f.target_norm()(running));
    lo = hi;
  }
  return out;
}

std::vector<double> refinement_oracle(const VectorFunctionSpec& f,
                                      const WeightedMeasure& m, int depth) {
  if (depth < 1 || depth > 16) {
    fail(ErrorCode::kInvalidSpec, "refinement depth must lie in [1, 16]");
  }
  const std::size_t d = f.dimension();
  // table[i] holds the current Richardson row.
  std::vector<std::vector<double>> previous;
  for (int level = 1; level <= depth; ++level) {
    const TaggedPartition p = TaggedPartition::uniform(m.interval(), 1 << level, 0.5);
    std::vector<std::vector<double>> row;
    row.push_back(riemann_sum(f, p, m));
    double factor = 1.0;
    for (std::size_t i = 1; i < static_cast<std::size_t>(level); ++i) {
      factor *= 4.0;
      std::vector<double> next(d);
      for (std::size_t c = 0; c < d; ++c) {
        next[c] = row[i - 1][c] + (row[i - 1][c] - previous[i - 1][c]) / (factor - 1.0);
      }
      row.push_back(std::move(next));
    }
    previous = std::move(row);
  }
  return previous.back();
}

}  // namespace orlicz
