#include <doctest.h>

#include <cmath>
#include <random>

#include "orlicz_gauge/errors.hpp"
#include "orlicz_gauge/partition.hpp"
#include "support/corpus.hpp"

using namespace orlicz;
using orlicz::testing::scalar;

namespace {

const WeightedMeasure kUnit(Interval{0, 1});

TaggedPartition cells(std::initializer_list<std::pair<double, double>> bounds) {
  std::vector<TaggedCell> out;
  for (auto [u, v] : bounds) out.push_back({u, v, 0.5 * (u + v)});
  return TaggedPartition(std::move(out));
}

std::vector<std::pair<double, double>> bounds_of(const TaggedPartition& p) {
  std::vector<std::pair<double, double>> out;
  for (const auto& c : p.cells()) out.emplace_back(c.lo, c.hi);
  return out;
}

}  // namespace

TEST_CASE("mesh_norm examples") {
  CHECK(mesh_norm(TaggedPartition::uniform({0, 1}, 4), kUnit) == 0.25);
  CHECK(mesh_norm(cells({{0, 0.1}, {0.1, 1}}), kUnit) == doctest::Approx(0.9));
  CHECK(mesh_norm(TaggedPartition{}, kUnit) == 0.0);
}

TEST_CASE("weighted measure") {
  const WeightedMeasure m(Interval{0, 1}, FunctionSpec::combination({{1, FunctionSpec::constant(1)},
                                                                     {1, FunctionSpec::monomial(1)}}));
  CHECK(m.total() == doctest::Approx(1.5).epsilon(1e-13));
  CHECK(m.measure(0.0, 0.5) == doctest::Approx(0.625).epsilon(1e-13));
  // Additivity over disjoint cells.
  CHECK(m.measure(0.0, 0.3) + m.measure(0.3, 1.0) == doctest::Approx(m.total()).epsilon(1e-13));
  CHECK_THROWS_AS(WeightedMeasure(Interval{0, 1}, FunctionSpec::monomial(1)), Error);  // not > 0
  CHECK_THROWS_AS(WeightedMeasure(Interval{1, 0}), Error);
}

TEST_CASE("tagged partition validation") {
  CHECK_THROWS_AS(TaggedPartition({{0, 0.5, 0.7}}), Error);          // tag outside
  CHECK_THROWS_AS(TaggedPartition({{0.5, 0.5, 0.5}}), Error);        // degenerate
  CHECK_THROWS_AS(TaggedPartition({{0, 0.6, 0.1}, {0.5, 1, 0.7}}), Error);  // overlap
  const TaggedPartition p({{0.5, 1, 0.7}, {0, 0.5, 0.1}});
  CHECK(p.cells().front().lo == 0.0);  // sorted
  CHECK(p.covers({0, 1}));
  CHECK_FALSE(TaggedPartition({{0, 0.4, 0.1}}).covers({0, 1}));
}

TEST_CASE("common refinement examples") {
  const auto a = cells({{0, 0.5}, {0.5, 1}});
  const auto b = cells({{0, 0.25}, {0.25, 1}});
  using B = std::vector<std::pair<double, double>>;
  CHECK(bounds_of(common_refinement(a, b)) == B{{0, 0.25}, {0.25, 0.5}, {0.5, 1}});
  CHECK(common_refinement(a, a).cells() == a.cells());
  CHECK(bounds_of(common_refinement(cells({{0, 1}}), a)) == B{{0, 0.5}, {0.5, 1}});
  // Tags come from the first operand, clamped into the piece.
  const auto r = common_refinement(TaggedPartition({{0, 1, 0.9}}), a);
  CHECK(r.cells()[0].tag == 0.5);
  CHECK(r.cells()[1].tag == 0.9);
}

TEST_CASE("riemann_sum examples") {
  const auto two = scalar(FunctionSpec::constant(2));
  CHECK(riemann_sum(two, TaggedPartition({{0, 0.3, 0.0}, {0.3, 1, 1.0}}), kUnit)[0] ==
        doctest::Approx(2.0));
  const TaggedPartition p({{0, 0.5, 0.0}, {0.5, 1, 0.5}});
  CHECK(riemann_sum(scalar(FunctionSpec::monomial(1)), p, kUnit)[0] == 0.25);
  const VectorFunctionSpec v({FunctionSpec::constant(1), FunctionSpec::monomial(1)}, NormSpec{2.0},
                             Interval{0, 1});
  CHECK(riemann_sum(v, p, kUnit) == std::vector<double>{1.0, 0.25});
  CHECK(riemann_sum(two, TaggedPartition{}, kUnit)[0] == 0.0);
  try {
    riemann_sum(scalar(FunctionSpec::monomial(-0.5)), TaggedPartition({{0, 1, 0}}), kUnit);
    FAIL("expected SingularTag");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kSingularTag);
  }
  const auto spike = scalar(FunctionSpec::spikes({{0.5, 10}}));
  const TaggedPartition at_spike({{0, 1, 0.5}});
  CHECK(riemann_sum(spike, at_spike, kUnit)[0] == 0.0);
  CHECK(riemann_sum(spike, at_spike, kUnit, EvalMode::kRaw)[0] == 10.0);
}

TEST_CASE("partition streams") {
  PartitionStrategy uniform{PartitionStrategy::Kind::kUniform, 4};
  const auto u = generate_partitions({0, 1}, uniform, 1, 0);
  REQUIRE(u.size() == 1);
  CHECK(u[0].cells() == TaggedPartition::uniform({0, 1}, 4).cells());

  PartitionStrategy random{PartitionStrategy::Kind::kRandom, 6};
  const auto r1 = generate_partitions({0, 1}, random, 20, 7);
  const auto r2 = generate_partitions({0, 1}, random, 20, 7);
  REQUIRE(r1.size() == r2.size());
  for (std::size_t i = 0; i < r1.size(); ++i) CHECK(r1[i].cells() == r2[i].cells());
  bool proper_sub = false;
  for (const auto& p : r1) proper_sub = proper_sub || !p.covers({0, 1});
  CHECK(proper_sub);

  PartitionStrategy geometric{PartitionStrategy::Kind::kGeometric, 3, 0.5, {0.0}};
  const auto g = generate_partitions({0, 1}, geometric, 1, 0);
  REQUIRE(g.size() == 1);
  using B = std::vector<std::pair<double, double>>;
  CHECK(bounds_of(g[0]) == B{{0, 0.125}, {0.125, 0.25}, {0.25, 0.5}, {0.5, 1}});

  PartitionStrategy mixed;
  CHECK(generate_partitions({0, 1}, mixed, 50, 3).size() == 50);
}

TEST_CASE("refinement properties on random partitions") {
  PartitionStrategy random{PartitionStrategy::Kind::kRandom, 5};
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const auto sub = generate_partitions({0, 1}, random, 1, rng())[0];
    const auto full1 = TaggedPartition::uniform({0, 1}, 1 + static_cast<int>(rng() % 7), 0.3);
    const auto full2 = TaggedPartition::uniform({0, 1}, 1 + static_cast<int>(rng() % 5), 0.8);
    const auto r = common_refinement(full1, full2);
    CHECK(refines(r, full1));
    CHECK(refines(r, full2));
    CHECK(mesh_norm(r, kUnit) <= std::min(mesh_norm(full1, kUnit), mesh_norm(full2, kUnit)) + 1e-15);
    // Additivity: a constant integrates exactly over any refinement.
    const double c = 1.75;
    double cells_total = 0;
    for (const auto& cell : r.cells()) cells_total += kUnit.measure(cell.lo, cell.hi);
    CHECK(riemann_sum(scalar(FunctionSpec::constant(c)), r, kUnit)[0] ==
          doctest::Approx(c * cells_total).epsilon(1e-15));
    CHECK(cells_total == doctest::Approx(1.0).epsilon(1e-14));
    // Sub-partitions refine too; the result stays inside the first operand.
    const auto rs = common_refinement(sub, full1);
    CHECK(refines(rs, sub));
    CHECK(mesh_norm(rs, kUnit) <= mesh_norm(sub, kUnit));
  }
}

TEST_CASE("midpoint Riemann sums converge for oracle entries") {
  for (const auto& e : orlicz::testing::smooth_oracle_entries()) {
    const auto oracle = *oracle_integral(e.f, {0, 1});
    const auto coarse = riemann_sum(e.f, TaggedPartition::uniform({0, 1}, 8), kUnit);
    const auto fine = riemann_sum(e.f, TaggedPartition::uniform({0, 1}, 1024), kUnit);
    for (std::size_t i = 0; i < oracle.size(); ++i) {
      CHECK(std::abs(fine[i] - oracle[i]) <= std::abs(coarse[i] - oracle[i]) + 1e-15);
      CHECK(std::abs(fine[i] - oracle[i]) < 1e-5);
    }
  }
}
