#include <doctest.h>

#include <cmath>
#include <random>

#include "orlicz_gauge/errors.hpp"
#include "orlicz_gauge/expression.hpp"
#include "orlicz_gauge/function_catalog.hpp"
#include "orlicz_gauge/partition.hpp"
#include "support/corpus.hpp"

using namespace orlicz;
using orlicz::testing::scalar;

namespace {

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an orlicz::Error");
  return ErrorCode::kValidation;
}

}  // namespace

TEST_CASE("evaluate returns the a.e. representative") {
  CHECK(FunctionSpec::constant(2).value(0.3) == 2.0);
  CHECK(FunctionSpec::monomial(1).value(0.25) == 0.25);
  const double expect = 2 * std::sin(1.0) - 2 * std::cos(1.0);
  CHECK(FunctionSpec::hk_pathological(2, 2).value(1.0) == doctest::Approx(expect).epsilon(1e-15));
  // Spikes are invisible to the representative.
  CHECK(FunctionSpec::spikes({{0.5, 1e6}}).value(0.5) == 0.0);
}

TEST_CASE("evaluate_raw includes spikes") {
  const auto s = FunctionSpec::spikes({{0.5, 1e6}});
  CHECK(s.raw_value(0.5) == 1e6);
  CHECK(s.raw_value(0.4) == 0.0);
  const auto c = FunctionSpec::combination({{1, FunctionSpec::constant(1)},
                                            {1, FunctionSpec::spikes({{0.5, 3}})}});
  CHECK(c.raw_value(0.5) == 4.0);
  CHECK(c.value(0.5) == 1.0);
}

TEST_CASE("singular and out-of-domain evaluation") {
  CHECK(code_of([] { FunctionSpec::hk_pathological(2, 2).value(0.0); }) == ErrorCode::kSingularPoint);
  CHECK(code_of([] { FunctionSpec::monomial(-0.5).value(0.0); }) == ErrorCode::kSingularPoint);
  CHECK(code_of([] { FunctionSpec::monomial(0.5).value(-1.0); }) == ErrorCode::kOutOfDomain);
  const auto v = scalar(FunctionSpec::monomial(1));
  CHECK(code_of([&] { v.evaluate(1.5); }) == ErrorCode::kOutOfDomain);
  CHECK(scalar(FunctionSpec::monomial(-0.5)).is_singular(0.0));
}

TEST_CASE("constructor validation") {
  CHECK(code_of([] { FunctionSpec::monomial(-1.0); }) == ErrorCode::kInvalidSpec);
  CHECK(code_of([] { FunctionSpec::hk_pathological(1, 2); }) == ErrorCode::kInvalidSpec);
  CHECK(code_of([] { FunctionSpec::hk_pathological(1, 0); }) == ErrorCode::kInvalidSpec);
  CHECK(code_of([] { FunctionSpec::indicator(0.5, 0.2); }) == ErrorCode::kInvalidSpec);
  CHECK(code_of([] { FunctionSpec::constant(NAN); }) == ErrorCode::kInvalidSpec);
  CHECK(code_of([] { NormSpec(0.5); }) == ErrorCode::kInvalidSpec);
  CHECK(code_of([] {
          VectorFunctionSpec({}, NormSpec{2.0}, Interval{0, 1});
        }) == ErrorCode::kInvalidSpec);
}

TEST_CASE("metadata: singular points, breakpoints, exception points") {
  const auto f = FunctionSpec::combination({{1, FunctionSpec::indicator(0.25, 0.75)},
                                            {2, FunctionSpec::hk_pathological(2, 2)},
                                            {1, FunctionSpec::spikes({{0.1, 5}})}});
  CHECK(f.singular_points() == std::vector<double>{0.0});
  CHECK(f.breakpoints() == std::vector<double>{0.25, 0.75});
  CHECK(f.exception_points() == std::vector<double>{0.1});
  // Spikes are zero a.e., so the combination keeps a closed-form oracle.
  REQUIRE(f.has_antiderivative());
  CHECK(oracle_integral(scalar(f), {0, 1})->at(0) ==
        doctest::Approx(0.5 + 2 * std::sin(1.0)).epsilon(1e-14));
}

TEST_CASE("oracle_integral closed forms") {
  CHECK(oracle_integral(scalar(FunctionSpec::monomial(1)), {0, 1})->at(0) == doctest::Approx(0.5));
  CHECK(oracle_integral(scalar(FunctionSpec::hk_pathological(2, 2)), {0, 1})->at(0) ==
        doctest::Approx(0.8414709848078965).epsilon(1e-14));
  CHECK(oracle_integral(scalar(FunctionSpec::constant(0)), {0, 1})->at(0) == 0.0);
  CHECK(oracle_integral(scalar(FunctionSpec::indicator(0.2, 0.6)), {0, 1})->at(0) ==
        doctest::Approx(0.4));
  const VectorFunctionSpec v({FunctionSpec::constant(1), FunctionSpec::monomial(2)}, NormSpec{2.0},
                             Interval{0, 1});
  const auto o = oracle_integral(v, {0, 1});
  REQUIRE(o);
  CHECK(o->at(0) == doctest::Approx(1.0));
  CHECK(o->at(1) == doctest::Approx(1.0 / 3));
}

TEST_CASE("evaluation is pure") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(1e-6, 1.0);
  for (const auto& e : orlicz::testing::smooth_oracle_entries()) {
    for (int i = 0; i < 20; ++i) {
      const double t = u(rng);
      CHECK(e.f.evaluate(t) == e.f.evaluate(t));
    }
  }
  const auto p = FunctionSpec::hk_pathological(2, 2);
  for (int i = 0; i < 20; ++i) {
    const double t = u(rng);
    CHECK(p.value(t) == p.value(t));
  }
}

TEST_CASE("evaluate and evaluate_raw agree off the exception set") {
  const auto f = scalar(FunctionSpec::combination({{1, FunctionSpec::trig(1, 3, 0)},
                                                   {1, FunctionSpec::spikes({{0.5, 7}, {0.9, -2}})}}));
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double t = u(rng);
    CHECK(f.evaluate(t) == f.evaluate_raw(t));
  }
  CHECK(f.evaluate_raw(0.5)[0] == doctest::Approx(f.evaluate(0.5)[0] + 7));
}

TEST_CASE("midpoint Riemann sums approach the oracle as the mesh shrinks") {
  const WeightedMeasure m(Interval{0, 1});
  for (const auto& e : orlicz::testing::smooth_oracle_entries()) {
    CAPTURE(e.name);
    const auto oracle = *oracle_integral(e.f, {0, 1});
    double previous = INFINITY;
    for (int k = 4; k <= 12; k += 2) {
      const auto s = riemann_sum(e.f, TaggedPartition::uniform({0, 1}, 1 << k), m);
      double err = 0;
      for (std::size_t i = 0; i < s.size(); ++i) err = std::max(err, std::abs(s[i] - oracle[i]));
      CHECK(err <= previous + 1e-15);
      previous = err;
    }
    CHECK(previous < 1e-3);
  }
}

TEST_CASE("NormSpec satisfies the norm axioms on random vectors") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (double q : {1.0, 1.5, 2.0, 3.0, double(INFINITY)}) {
    const NormSpec n = std::isinf(q) ? NormSpec::infinity() : NormSpec(q);
    for (int i = 0; i < 100; ++i) {
      std::vector<double> x(3), y(3), s(3);
      for (int j = 0; j < 3; ++j) {
        x[j] = g(rng);
        y[j] = g(rng);
        s[j] = x[j] + y[j];
      }
      CHECK(n(s) <= n(x) + n(y) + 1e-12);
      std::vector<double> ax = x;
      for (double& v : ax) v *= -2.5;
      CHECK(n(ax) == doctest::Approx(2.5 * n(x)).epsilon(1e-14));
      const auto d = n.dual_direction(x);
      double dot = 0;
      for (int j = 0; j < 3; ++j) dot += d[j] * x[j];
      CHECK(dot == doctest::Approx(n(x)).epsilon(1e-12));
    }
    CHECK(n(std::vector<double>{0, 0, 0}) == 0.0);
  }
}

TEST_CASE("vector specs and linear combinations") {
  const VectorFunctionSpec v({FunctionSpec::constant(1), FunctionSpec::monomial(1)}, NormSpec{2.0},
                             Interval{0, 1});
  CHECK(v.evaluate(0.5) == std::vector<double>{1.0, 0.5});
  const auto w = v.linear_combination(2, -1, v.scaled(3));
  CHECK(w.evaluate(0.5)[0] == doctest::Approx(-1.0));
  CHECK(w.evaluate(0.5)[1] == doctest::Approx(-0.5));
  CHECK(code_of([&] {
          v.linear_combination(1, 1, scalar(FunctionSpec::constant(1)));
        }) == ErrorCode::kInvalidSpec);
}

TEST_CASE("sequences generate terms and differences") {
  const SequenceSpec seq([](int n) { return scalar(orlicz::testing::scaled(1.0 / n, FunctionSpec::monomial(1))); },
                         scalar(FunctionSpec::monomial(1)), 8);
  CHECK(seq.n_max() == 8);
  CHECK(seq.term(4).evaluate(1.0)[0] == doctest::Approx(0.25));
  CHECK(seq.difference(4).evaluate(1.0)[0] == doctest::Approx(-0.75));
  CHECK_THROWS_AS(seq.term(9), Error);
  const SequenceSpec bad([](int) { return scalar(FunctionSpec::constant(1), {0, 2}); },
                         scalar(FunctionSpec::constant(0)), 3);
  CHECK(code_of([&] { bad.term(1); }) == ErrorCode::kInvalidSpec);
}

TEST_CASE("parameter expressions") {
  CHECK(ParamExpression("n").evaluate(3) == 3.0);
  CHECK(ParamExpression("2^3^2").evaluate(0) == 512.0);
  CHECK(ParamExpression("1 + 2 * 3").evaluate(0) == 7.0);
  CHECK(ParamExpression("1/(n*(exp(n)-n-1))").evaluate(1) ==
        doctest::Approx(1 / (std::exp(1.0) - 2)).epsilon(1e-15));
  CHECK(ParamExpression("max(pi, e) + min(1, 2) + sqrt(4) + abs(-1)").evaluate(0) ==
        doctest::Approx(3.14159265358979 + 1 + 2 + 1));
  CHECK(ParamExpression("pow(n, 2) - log(e)").evaluate(3) == doctest::Approx(8));
  CHECK(code_of([] { ParamExpression("1 +"); }) == ErrorCode::kValidation);
  CHECK(code_of([] { ParamExpression("foo(1)"); }) == ErrorCode::kValidation);
  CHECK(code_of([] { ParamExpression("(1"); }) == ErrorCode::kValidation);
}
