#include "orlicz_gauge/partition.hpp"

#include <algorithm>
#include <cmath>

#include "orlicz_gauge/errors.hpp"
#include "orlicz_gauge/quadrature_rule.hpp"

namespace orlicz {

namespace {

constexpr int kDensityProbes = 257;
constexpr int kMaxUniformLevel = 10;

// Adaptive G30/K61 for the (smooth between breakpoints) weight density.
double integrate_density(const FunctionSpec& w, double u, double v, double tol,
                         int depth) {
  const KronrodRule& rule = KronrodRule::g30k61();
  const double centre = 0.5 * (u + v);
  const double half = 0.5 * (v - u);
  double kronrod = 0.0;
  double gauss = 0.0;
  for (std::size_t i = 0; i < KronrodRule::kPoints; ++i) {
    const double y = w.value_unchecked(centre + half * rule.nodes[i]);
    kronrod += rule.kronrod_weights[i] * y;
    gauss += rule.gauss_weights[i] * y;
  }
  kronrod *= half;
  gauss *= half;
  if (std::fabs(kronrod - gauss) <= tol || depth >= 48) return kronrod;
  return integrate_density(w, u, centre, 0.5 * tol, depth + 1) +
         integrate_density(w, centre, v, 0.5 * tol, depth + 1);
}

}  // namespace

WeightedMeasure::WeightedMeasure(Interval interval,
                                 std::optional<FunctionSpec> weight)
    : interval_(interval), weight_(std::move(weight)) {
  if (!(std::isfinite(interval_.lo) && std::isfinite(interval_.hi) &&
        interval_.lo < interval_.hi)) {
    fail(ErrorCode::kInvalidSpec, "measure interval must satisfy a < b");
  }
  if (weight_) {
    for (double s : weight_->singular_points()) {
      if (interval_.contains(s)) {
        fail(ErrorCode::kInvalidSpec, "weight density must be bounded");
      }
    }
    for (int i = 0; i < kDensityProbes; ++i) {
      const double t = interval_.lo + interval_.length() * i / (kDensityProbes - 1);
      const double w = weight_->value(t);
      if (!(std::isfinite(w) && w > 0.0)) {
        fail(ErrorCode::kInvalidSpec,
             "weight density must be finite and strictly positive");
      }
    }
  }
  total_ = measure(interval_.lo, interval_.hi);
}

double WeightedMeasure::density(double t) const noexcept {
  return weight_ ? weight_->value_unchecked(t) : 1.0;
}

double WeightedMeasure::measure(double u, double v) const {
  if (!(u <= v)) fail(ErrorCode::kInvalidSpec, "cell must satisfy u <= v");
  if (!weight_) return v - u;
  if (u == v) return 0.0;
  std::vector<double> cuts = {u};
  for (double b : weight_->breakpoints()) {
    if (u < b && b < v) cuts.push_back(b);
  }
  cuts.push_back(v);
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double width = cuts[i + 1] - cuts[i];
    sum += integrate_density(*weight_, cuts[i], cuts[i + 1],
                             1e-15 * width * (1.0 + std::fabs(weight_->value_unchecked(cuts[i]))),
                             0);
  }
  return sum;
}

double WeightedMeasure::total() const { return total_; }

// ---------------------------------------------------------------------------

TaggedPartition::TaggedPartition(std::vector<TaggedCell> cells)
    : cells_(std::move(cells)) {
  std::sort(cells_.begin(), cells_.end(),
            [](const TaggedCell& a, const TaggedCell& b) { return a.lo < b.lo; });
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    const TaggedCell& c = cells_[i];
    if (!(c.lo < c.hi)) fail(ErrorCode::kInvalidSpec, "cell must satisfy u < v");
    if (!(c.lo <= c.tag && c.tag <= c.hi)) {
      fail(ErrorCode::kInvalidSpec, "tag must lie inside its cell");
    }
    if (i > 0 && cells_[i - 1].hi > c.lo) {
      fail(ErrorCode::kInvalidSpec, "cell interiors must be disjoint");
    }
  }
}

bool TaggedPartition::covers(Interval interval) const noexcept {
  if (cells_.empty()) return false;
  if (cells_.front().lo > interval.lo || cells_.back().hi < interval.hi) {
    return false;
  }
  for (std::size_t i = 1; i < cells_.size(); ++i) {
    if (cells_[i - 1].hi != cells_[i].lo) return false;
  }
  return true;
}

TaggedPartition TaggedPartition::uniform(Interval interval, int cells,
                                         double tag_fraction) {
  if (cells < 1) fail(ErrorCode::kInvalidSpec, "uniform partition needs cells >= 1");
  std::vector<TaggedCell> out;
  out.reserve(static_cast<std::size_t>(cells));
  const double width = interval.length();
  for (int i = 0; i < cells; ++i) {
    const double lo = i == 0 ? interval.lo : interval.lo + width * i / cells;
    const double hi =
        i + 1 == cells ? interval.hi : interval.lo + width * (i + 1) / cells;
    const double tag = std::clamp(lo + tag_fraction * (hi - lo), lo, hi);
    out.push_back({lo, hi, tag});
  }
  return TaggedPartition(std::move(out));
}

double mesh_norm(const TaggedPartition& p, const WeightedMeasure& m) {
  double largest = 0.0;
  for (const TaggedCell& c : p.cells()) {
    largest = std::max(largest, m.measure(c.lo, c.hi));
  }
  return largest;
}

TaggedPartition common_refinement(const TaggedPartition& p1,
                                  const TaggedPartition& p2) {
  std::vector<TaggedCell> out;
  for (const TaggedCell& a : p1.cells()) {
    for (const TaggedCell& b : p2.cells()) {
      const double lo = std::max(a.lo, b.lo);
      const double hi = std::min(a.hi, b.hi);
      if (lo < hi) out.push_back({lo, hi, std::clamp(a.tag, lo, hi)});
    }
  }
  return TaggedPartition(std::move(out));
}

bool refines(const TaggedPartition& fine, const TaggedPartition& coarse) {
  const auto& f = fine.cells();
  const auto& c = coarse.cells();
  for (const TaggedCell& cell : f) {
    const bool inside = std::any_of(c.begin(), c.end(), [&](const TaggedCell& big) {
      return big.lo <= cell.lo && cell.hi <= big.hi;
    });
    if (!inside) return false;
  }
  for (const TaggedCell& big : c) {
    double cursor = big.lo;
    for (const TaggedCell& cell : f) {
      if (cell.lo >= big.lo && cell.hi <= big.hi) {
        if (cell.lo != cursor) return false;
        cursor = cell.hi;
      }
    }
    if (cursor != big.hi) return false;
  }
  return true;
}

std::vector<double> riemann_sum(const VectorFunctionSpec& f,
                                const TaggedPartition& p,
                                const WeightedMeasure& m, EvalMode mode) {
  std::vector<double> sum(f.dimension(), 0.0);
  for (const TaggedCell& c : p.cells()) {
    if (f.is_singular(c.tag)) {
      fail(ErrorCode::kSingularTag,
           "Riemann sum tag at singular point t=" + std::to_string(c.tag));
    }
    const std::vector<double> value =
        mode == EvalMode::kRaw ? f.evaluate_raw(c.tag) : f.evaluate(c.tag);
    const double mu = m.measure(c.lo, c.hi);
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += value[i] * mu;
  }
  return sum;
}

// ---------------------------------------------------------------------------

namespace {

double tag_fraction(int index) {
  switch (index % 3) {
    case 0:
      return 0.5;
    case 1:
      return 0.0;
    default:
      return 1.0;
  }
}

// Cells shrinking by `ratio` toward `toward` (either u or v), plus the tail
// cell touching it.
void append_geometric(double u, double v, bool toward_left, int cells,
                      double ratio, double fraction,
                      std::vector<TaggedCell>& out) {
  const double length = v - u;
  double scale = 1.0;
  for (int k = 0; k < cells; ++k) {
    const double next = scale * ratio;
    double lo, hi;
    if (toward_left) {
      lo = u + length * next;
      hi = u + length * scale;
    } else {
      lo = v - length * scale;
      hi = v - length * next;
    }
    if (!(lo < hi)) break;
    out.push_back({lo, hi, std::clamp(lo + fraction * (hi - lo), lo, hi)});
    scale = next;
  }
  const double lo = toward_left ? u : v - length * scale;
  const double hi = toward_left ? u + length * scale : v;
  if (lo < hi) out.push_back({lo, hi, std::clamp(lo + fraction * (hi - lo), lo, hi)});
}

}  // namespace

PartitionStream::PartitionStream(Interval interval, PartitionStrategy strategy,
                                 int budget, std::uint64_t seed)
    : interval_(interval), strategy_(std::move(strategy)), budget_(budget),
      rng_(seed) {
  if (budget_ < 1) fail(ErrorCode::kInvalidSpec, "partition budget must be >= 1");
  if (strategy_.cells < 1) fail(ErrorCode::kInvalidSpec, "strategy needs cells >= 1");
  if (!(strategy_.ratio > 0.0 && strategy_.ratio < 1.0)) {
    fail(ErrorCode::kInvalidSpec, "geometric ratio must lie in (0, 1)");
  }
}

std::optional<TaggedPartition> PartitionStream::next() {
  if (emitted_ >= budget_) return std::nullopt;
  const int index = emitted_++;
  using Kind = PartitionStrategy::Kind;
  Kind kind = strategy_.kind;
  if (kind == Kind::kMixed) {
    kind = index % 3 == 0 ? Kind::kUniform
                          : (index % 3 == 1 ? Kind::kGeometric : Kind::kRandom);
  }
  switch (kind) {
    case Kind::kUniform:
      return uniform_at(uniform_count_++);
    case Kind::kGeometric:
      return geometric_at(geometric_count_++);
    default:
      return random_next();
  }
}

TaggedPartition PartitionStream::uniform_at(int index) const {
  const int level = (index / 3) % (kMaxUniformLevel + 1);
  return TaggedPartition::uniform(interval_, strategy_.cells << level,
                                  tag_fraction(index));
}

TaggedPartition PartitionStream::geometric_at(int index) const {
  const int cells = strategy_.cells + index / 3;
  const double fraction = tag_fraction(index);
  std::vector<double> targets;
  for (double s : strategy_.singular_points) {
    if (interval_.contains(s)) targets.push_back(s);
  }
  if (targets.empty()) targets.push_back(interval_.lo);
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());

  std::vector<double> cuts = {interval_.lo};
  for (double s : targets) {
    if (s > interval_.lo && s < interval_.hi) cuts.push_back(s);
  }
  cuts.push_back(interval_.hi);
  const auto is_target = [&](double x) {
    return std::binary_search(targets.begin(), targets.end(), x);
  };

  std::vector<TaggedCell> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double u = cuts[i], v = cuts[i + 1];
    const bool left = is_target(u), right = is_target(v);
    if (left && right) {
      const double mid = 0.5 * (u + v);
      append_geometric(u, mid, true, cells, strategy_.ratio, fraction, out);
      append_geometric(mid, v, false, cells, strategy_.ratio, fraction, out);
    } else if (right) {
      append_geometric(u, v, false, cells, strategy_.ratio, fraction, out);
    } else {
      append_geometric(u, v, true, cells, strategy_.ratio, fraction, out);
    }
  }
  return TaggedPartition(std::move(out));
}

TaggedPartition PartitionStream::random_next() {
  std::uniform_int_distribution<int> count_dist(1, 2 * strategy_.cells);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int count = count_dist(rng_);
  std::vector<double> cuts = {interval_.lo, interval_.hi};
  for (int i = 1; i < count; ++i) {
    cuts.push_back(interval_.lo + interval_.length() * unit(rng_));
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<TaggedCell> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i], hi = cuts[i + 1];
    const double tag = std::clamp(lo + unit(rng_) * (hi - lo), lo, hi);
    const bool keep = unit(rng_) >= 0.25;
    if (keep) out.push_back({lo, hi, tag});
  }
  return TaggedPartition(std::move(out));
}

std::vector<TaggedPartition> generate_partitions(Interval interval,
                                                 const PartitionStrategy& strategy,
                                                 int budget, std::uint64_t seed) {
  PartitionStream stream(interval, strategy, budget, seed);
  std::vector<TaggedPartition> out;
  while (auto p = stream.next()) out.push_back(std::move(*p));
  return out;
}

}  // namespace orlicz
