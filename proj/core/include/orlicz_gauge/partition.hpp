#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "orlicz_gauge/function_catalog.hpp"

namespace orlicz {

/// Measure with a bounded, strictly positive catalog density on [a, b]
/// (Lebesgue measure when no density is given).
class WeightedMeasure {
 public:
  explicit WeightedMeasure(Interval interval,
                           std::optional<FunctionSpec> weight = std::nullopt);

  const Interval& interval() const noexcept { return interval_; }
  const std::optional<FunctionSpec>& weight() const noexcept { return weight_; }
  bool is_lebesgue() const noexcept { return !weight_.has_value(); }

  double density(double t) const noexcept;
  /// Measure of the cell [u, v]; exact for Lebesgue measure.
  double measure(double u, double v) const;
  double total() const;

 private:
  Interval interval_;
  std::optional<FunctionSpec> weight_;
  double total_ = 0.0;
};

struct TaggedCell {
  double lo = 0.0;
  double hi = 0.0;
  double tag = 0.0;

  bool operator==(const TaggedCell&) const = default;
};

/// Finite list of tagged cells with pairwise disjoint interiors, sorted by
/// position. Need not cover the interval (a sub-partition).
class TaggedPartition {
 public:
  TaggedPartition() = default;
  /// Sorts the cells; throws InvalidSpec when a cell is degenerate, a tag
  /// lies outside its cell, or interiors overlap.
  explicit TaggedPartition(std::vector<TaggedCell> cells);

  const std::vector<TaggedCell>& cells() const noexcept { return cells_; }
  std::size_t size() const noexcept { return cells_.size(); }
  bool empty() const noexcept { return cells_.empty(); }
  bool covers(Interval interval) const noexcept;

  static TaggedPartition uniform(Interval interval, int cells,
                                 double tag_fraction = 0.5);

 private:
  std::vector<TaggedCell> cells_;
};

/// sup of the cell measures; 0 for the empty sub-partition.
double mesh_norm(const TaggedPartition& p, const WeightedMeasure& m);

/// Nonempty pairwise intersections of the cells of p1 and p2. Tags come from
/// the p1 cell containing each piece, clamped into the piece.
TaggedPartition common_refinement(const TaggedPartition& p1,
                                  const TaggedPartition& p2);

/// True when every cell of `fine` lies inside a cell of `coarse` and every
/// cell of `coarse` is the union of the `fine` cells it contains.
bool refines(const TaggedPartition& fine, const TaggedPartition& coarse);

/// S(f, p) = sum_i f(tag_i) mu(cell_i), summed in cell order. Throws
/// SingularTag when a tag is a singular point of f.
std::vector<double> riemann_sum(const VectorFunctionSpec& f,
                                const TaggedPartition& p,
                                const WeightedMeasure& m,
                                EvalMode mode = EvalMode::kRepresentative);

enum class TagRule { kLeft, kMidpoint, kRight };

struct PartitionStrategy {
  enum class Kind { kUniform, kGeometric, kRandom, kMixed };

  Kind kind = Kind::kMixed;
  int cells = 4;
  double ratio = 0.5;
  /// Clustering targets for geometric meshes; the left end is used if empty.
  std::vector<double> singular_points;
};

/// Deterministic stream of tagged (sub-)partitions of an interval.
///
/// Uniform: n, 2n, 4n, ... cells cycling midpoint, left and right tags.
/// Geometric: cells shrinking by `ratio` toward each singular point, plus
/// the tail cell touching the point. Random: seeded breakpoints and tags,
/// with some cells dropped to form proper sub-partitions. Mixed interleaves
/// the three.
class PartitionStream {
 public:
  PartitionStream(Interval interval, PartitionStrategy strategy, int budget,
                  std::uint64_t seed);

  std::optional<TaggedPartition> next();

 private:
  TaggedPartition uniform_at(int index) const;
  TaggedPartition geometric_at(int index) const;
  TaggedPartition random_next();

  Interval interval_;
  PartitionStrategy strategy_;
  int budget_;
  int emitted_ = 0;
  int uniform_count_ = 0;
  int geometric_count_ = 0;
  std::mt19937_64 rng_;
};

std::vector<TaggedPartition> generate_partitions(Interval interval,
                                                 const PartitionStrategy& strategy,
                                                 int budget, std::uint64_t seed);

}  // namespace orlicz
