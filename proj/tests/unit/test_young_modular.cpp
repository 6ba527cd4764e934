#include <doctest.h>

#include <cmath>
#include <vector>

#include "orlicz_gauge/errors.hpp"
#include "orlicz_gauge/young_modular.hpp"
#include "support/corpus.hpp"

using namespace orlicz;
using orlicz::testing::scalar;
using orlicz::testing::scaled;

namespace {

const WeightedMeasure kUnit(Interval{0, 1});

QuadratureConfig with_tol(double tol) {
  QuadratureConfig c;
  c.tol = tol;
  return c;
}

double theta1(const YoungFunctionSpec& th, double x) {
  const std::vector<double> v{x};
  return theta_eval(th, 0.5, v);
}

}  // namespace

TEST_CASE("theta_eval examples") {
  CHECK(theta1(YoungFunctionSpec::power(2), 3.0) == doctest::Approx(9.0));
  CHECK(theta1(YoungFunctionSpec::power(2), -3.0) == doctest::Approx(9.0));
  CHECK(theta1(YoungFunctionSpec::power(3), 0.0) == 0.0);
  CHECK(theta1(YoungFunctionSpec::exponential(), 1.0) ==
        doctest::Approx(std::exp(1.0) - 2).epsilon(1e-15));
  CHECK(theta1(YoungFunctionSpec::power_scaled(2), 2.0) == doctest::Approx(2.0));
  CHECK(theta1(YoungFunctionSpec::piecewise(2, 1), 0.5) == doctest::Approx(0.25));
  CHECK(std::isinf(theta1(YoungFunctionSpec::piecewise(2, 1), 1.5)));
  // Vector argument goes through the norm.
  const std::vector<double> v{3, 4};
  CHECK(theta_eval(YoungFunctionSpec::power(1), 0.2, v) == doctest::Approx(5.0));
  CHECK(theta_eval(YoungFunctionSpec::power(1), 0.2, v, NormSpec{1.0}) == doctest::Approx(7.0));
  // Variable exponent 1 + t at t = 1 squares.
  const auto var = YoungFunctionSpec::variable_exponent(
      FunctionSpec::combination({{1, FunctionSpec::constant(1)}, {1, FunctionSpec::monomial(1)}}));
  const std::vector<double> three{3};
  CHECK(theta_eval(var, 1.0, three) == doctest::Approx(9.0));
}

TEST_CASE("Young function validation") {
  CHECK_THROWS_AS(YoungFunctionSpec::power(0.5), Error);
  CHECK_THROWS_AS(YoungFunctionSpec::piecewise(2, 0), Error);
  const auto low = YoungFunctionSpec::variable_exponent(FunctionSpec::monomial(1));
  CHECK_THROWS_AS(low.validate({0, 1}), Error);
  CHECK_NOTHROW(YoungFunctionSpec::power_unchecked(0.5));
}

TEST_CASE("axiom checks") {
  const AxiomReport bad = check_nfunction_axioms(YoungFunctionSpec::power_unchecked(0.5), {0, 1}, 64, 1);
  CHECK(bad.at('c').verdict == AxiomVerdict::kFail);
  CHECK_FALSE(bad.at('c').witness.empty());
  CHECK(bad.any_failure());

  for (const auto& th : {YoungFunctionSpec::power(2), YoungFunctionSpec::exponential(),
                         YoungFunctionSpec::piecewise(2, 1), YoungFunctionSpec::power_scaled(3)}) {
    const AxiomReport r = check_nfunction_axioms(th, {0, 1}, 64, 5);
    CAPTURE(to_string(th.family()));
    CHECK_FALSE(r.any_failure());
    CHECK(r.checks.size() == 6);
    CHECK(r.at('a').verdict == AxiomVerdict::kAssumed);
    for (char cond : {'b', 'c', 'd'}) CHECK(r.at(cond).verdict == AxiomVerdict::kPass);
    CHECK(r.at('e').verdict == AxiomVerdict::kNotChecked);
    CHECK(r.at('f').verdict == AxiomVerdict::kNotChecked);
  }

  AxiomWitnesses w;
  w.alpha = FunctionSpec::constant(1);
  w.lambda = FunctionSpec::constant(1);
  w.rho = FunctionSpec::constant(0.5);
  w.rho0 = FunctionSpec::constant(0.25);
  const AxiomReport wr = check_nfunction_axioms(YoungFunctionSpec::power(2).with_witnesses(w), {0, 1}, 64, 2);
  CHECK(wr.at('e').verdict == AxiomVerdict::kPass);
  CHECK(wr.at('f').verdict == AxiomVerdict::kPass);

  // Too small an upper witness: |x| <= 1 does not give x^2 <= 0.5.
  w.rho = FunctionSpec::constant(1);
  w.rho0 = FunctionSpec::constant(0.5);
  const AxiomReport wf = check_nfunction_axioms(YoungFunctionSpec::power(2).with_witnesses(w), {0, 1}, 64, 2);
  CHECK(wf.at('f').verdict == AxiomVerdict::kFail);

  // Same seed, same report.
  const AxiomReport again = check_nfunction_axioms(YoungFunctionSpec::power_unchecked(0.5), {0, 1}, 64, 1);
  CHECK(again.at('c').witness == bad.at('c').witness);
}

TEST_CASE("modular examples") {
  const QuadratureConfig c = with_tol(1e-10);
  CHECK(modular(scalar(FunctionSpec::monomial(1)), YoungFunctionSpec::power(2), kUnit, c).value ==
        doctest::Approx(1.0 / 3).epsilon(1e-10));
  CHECK(modular(scalar(FunctionSpec::constant(0)), YoungFunctionSpec::exponential(), kUnit, c).value == 0.0);
  CHECK(modular(scalar(FunctionSpec::indicator(0, 0.5)), YoungFunctionSpec::exponential(), kUnit, c).value ==
        doctest::Approx((std::exp(1.0) - 2) / 2).epsilon(1e-10));
  CHECK(modular_scaled(scalar(FunctionSpec::monomial(1)), 3, YoungFunctionSpec::power(2), kUnit, c).value ==
        doctest::Approx(3.0).epsilon(1e-10));

  const ModularValue inf = modular(scalar(FunctionSpec::monomial(-0.5)), YoungFunctionSpec::power(2), kUnit, c);
  CHECK(inf.status == ModularStatus::kInfinite);
  CHECK(std::isinf(inf.value));
  const ModularValue cap =
      modular(scalar(FunctionSpec::constant(2)), YoungFunctionSpec::piecewise(2, 1), kUnit, c);
  CHECK(cap.status == ModularStatus::kInfinite);
}

TEST_CASE("Luxemburg norm") {
  const QuadratureConfig c = with_tol(1e-10);
  const auto x2 = YoungFunctionSpec::power(2);
  for (double v : {1.0, 2.5, -4.0}) {
    CHECK(luxemburg_norm(scalar(FunctionSpec::constant(v)), x2, kUnit, c).value ==
          doctest::Approx(std::abs(v)).epsilon(1e-8));
  }
  const auto t = scalar(FunctionSpec::monomial(1));
  const NormValue nt = luxemburg_norm(t, x2, kUnit, c);
  CHECK(nt.finite());
  CHECK(nt.value == doctest::Approx(1 / std::sqrt(3.0)).epsilon(1e-8));
  CHECK(luxemburg_norm(scalar(FunctionSpec::constant(0)), x2, kUnit, c).value == 0.0);

  for (const auto& e : orlicz::testing::smooth_oracle_entries()) {
    CAPTURE(e.name);
    for (const auto& th : {x2, YoungFunctionSpec::exponential(), YoungFunctionSpec::power(3)}) {
      const NormValue n = luxemburg_norm(e.f, th, kUnit, c);
      REQUIRE(n.finite());
      CHECK(modular_scaled(e.f, 1.0 / n.value, th, kUnit, c).value <= 1 + 1e-6);
      const NormValue s = luxemburg_norm(e.f.scaled(-3), th, kUnit, c);
      CHECK(s.value == doctest::Approx(3 * n.value).epsilon(1e-8));
    }
  }

  const NormValue out = luxemburg_norm(scalar(FunctionSpec::monomial(-0.5)), x2, kUnit, c);
  CHECK(out.status == NormStatus::kNotInSpace);
}

TEST_CASE("norm backends agree on absolutely integrable functions") {
  const QuadratureConfig c = with_tol(1e-10);
  for (const auto& e : orlicz::testing::smooth_oracle_entries()) {
    CAPTURE(e.name);
    const double hk = luxemburg_norm(e.f, YoungFunctionSpec::power(2), kUnit, c).value;
    const double leb = luxemburg_norm(e.f, YoungFunctionSpec::power(2), kUnit, c,
                                      NormBackend::kLebesgueStyle).value;
    CHECK(hk == doctest::Approx(leb).epsilon(1e-8));
  }
}

TEST_CASE("membership") {
  const QuadratureConfig c = with_tol(1e-9);
  const auto grid = log2_grid(-6, 6);
  CHECK(grid.size() == 13);
  CHECK(grid.front() == 1.0 / 64);

  const auto f = scalar(FunctionSpec::monomial(-0.5));
  const MembershipReport all = h_orlicz_membership(f, YoungFunctionSpec::power(1), kUnit, grid, c);
  CHECK(all.verdict == MembershipVerdict::kMemberAllK);
  CHECK(all.monotone);
  CHECK(h_orlicz_membership(f, YoungFunctionSpec::power(1), kUnit, log2_grid(), c).vanishes_as_k_to_zero);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(all.modulars[i].value == doctest::Approx(2 * grid[i]).epsilon(1e-8));
  }

  const MembershipReport none = h_orlicz_membership(f, YoungFunctionSpec::power(2), kUnit, grid, c);
  CHECK(none.verdict == MembershipVerdict::kNotMember);

  const MembershipReport zero =
      h_orlicz_membership(scalar(FunctionSpec::constant(0)), YoungFunctionSpec::exponential(), kUnit, grid, c);
  CHECK(zero.verdict == MembershipVerdict::kMemberAllK);

  // Capped Young function: only small multiples of 1 stay finite.
  const MembershipReport some = h_orlicz_membership(scalar(FunctionSpec::constant(1)),
                                                    YoungFunctionSpec::piecewise(2, 1), kUnit, grid, c);
  CHECK(some.verdict == MembershipVerdict::kMemberSomeK);
  CHECK(some.monotone);
}

TEST_CASE("modular convexity") {
  const QuadratureConfig c = with_tol(1e-10);
  const auto x2 = YoungFunctionSpec::power(2);
  const auto t = scalar(FunctionSpec::monomial(1));
  const auto zero = scalar(FunctionSpec::constant(0));
  const ConvexityVerdict v = modular_convexity_check(t, zero, 0.5, 0.5, x2, kUnit, c);
  CHECK(v.pass);
  CHECK(v.lhs == doctest::Approx(0.25 / 3).epsilon(1e-9));
  CHECK(v.rhs == doctest::Approx(1.0 / 6).epsilon(1e-9));
  const ConvexityVerdict id = modular_convexity_check(t, zero, 1, 0, x2, kUnit, c);
  CHECK(id.pass);
  CHECK(id.lhs == doctest::Approx(id.rhs).epsilon(1e-12));

  const auto pool = orlicz::testing::smooth_oracle_entries();
  for (std::size_t i = 0; i + 1 < pool.size(); ++i) {
    if (pool[i].f.dimension() != pool[i + 1].f.dimension()) continue;
    CHECK(modular_convexity_check(pool[i].f, pool[i + 1].f, 0.3, 0.7,
                                  YoungFunctionSpec::exponential(), kUnit, c).pass);
  }
}

TEST_CASE("embedding report") {
  const QuadratureConfig c = with_tol(1e-9);
  const EmbeddingReport r =
      embedding_report(scalar(FunctionSpec::monomial(1)), YoungFunctionSpec::power(2), kUnit, c, 32, 3);
  CHECK(r.lux_hk.value == doctest::Approx(1 / std::sqrt(3.0)).epsilon(1e-8));
  CHECK(r.lux_lebesgue.value == doctest::Approx(r.lux_hk.value).epsilon(1e-8));
  CHECK(r.l1_norm == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(r.norm_inequality);
  CHECK(r.finite_when_member);
  CHECK(r.sup_riemann.seed == 3);
}
